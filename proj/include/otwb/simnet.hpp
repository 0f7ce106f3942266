/*
 * Copyright 2026 The otwb Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#pragma once

// Deterministic discrete-event harness. A schedule is a list of steps, each
// either a client generating an operation or the head of one FIFO channel
// being delivered. Running a schedule yields a trace and replica snapshots.

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "otwb/css_space.hpp"
#include "otwb/list_op.hpp"
#include "otwb/oid.hpp"
#include "otwb/space_2d.hpp"

namespace otwb {

enum class Protocol { kCJupiter, kJupiter, kDJupiter };

std::string to_string(Protocol p);
std::optional<Protocol> protocol_from_string(const std::string& s);

/// What the user asked for. Positions are taken as given and clamped by the
/// generating replica.
struct OpSpec {
  OpKind kind = OpKind::kRead;
  char glyph = '?';
  std::size_t pos = 0;

  ListOp request() const;

  /// Compares only the fields the kind uses: the glyph of a Del or Read is
  /// never serialized.
  friend bool operator==(const OpSpec& a, const OpSpec& b) {
    if (a.kind != b.kind) return false;
    if (a.kind == OpKind::kRead || a.kind == OpKind::kNop) return true;
    return a.pos == b.pos && (a.kind != OpKind::kIns || a.glyph == b.glyph);
  }
};

struct GenerateStep {
  ReplicaId cid = 1;
  OpSpec op;

  friend bool operator==(const GenerateStep&, const GenerateStep&) = default;
};

struct DeliverStep {
  ReplicaId to = kServerId;
  ReplicaId from = 1;

  friend bool operator==(const DeliverStep&, const DeliverStep&) = default;
};

using Step = std::variant<GenerateStep, DeliverStep>;

struct RngInfo {
  std::string name;
  std::uint64_t seed = 0;

  friend bool operator==(const RngInfo&, const RngInfo&) = default;
};

struct Schedule {
  int n_clients = 1;
  std::vector<Step> steps;
  PriorityRule priority_rule = PriorityRule::kSmallerWins;
  std::optional<RngInfo> rng;

  friend bool operator==(const Schedule&, const Schedule&) = default;
};

/// Rejects, with ScheduleError, client ids out of range, server updates,
/// client-to-client deliveries and deliveries on an empty channel.
void validate(const Schedule& schedule);

/// The three-client schedule in which the final list is "ba" everywhere
/// while the returned lists "ax", "xb" and "ba" disagree pairwise.
Schedule podc16_schedule();

struct RandomScheduleOptions {
  double read_probability = 0.1;
  bool final_reads = true;
};

inline constexpr const char* kRngName = "mt19937_64/v1";

/// Seeded random schedule with `n_updates` updates spread over `n_clients`
/// clients. Positions stay within the generating client's current list,
/// deliveries interleave freely, and everything is delivered before the
/// closing Read at every client.
Schedule random_schedule(int n_clients, int n_updates, std::uint64_t seed,
                         const RandomScheduleOptions& options = {});

/// The parameters the fuzz corpus uses for `seed`.
Schedule corpus_schedule(std::uint64_t seed);

// Trace -------------------------------------------------------------------

enum class EventType { kDo, kSend, kReceive };

std::string to_string(EventType t);

inline constexpr ReplicaId kBroadcast = -1;

struct TraceEvent {
  EventType type = EventType::kDo;
  ReplicaId replica = kServerId;
  ListOp op;                 // do: generated op; send/receive: message payload
  std::optional<Oid> oid;    // absent for Read
  std::optional<int> msg;    // send/receive
  ReplicaId peer = kServerId;  // send: destination, receive: source
  ListState list;            // do: returned list; receive: list afterwards
  std::vector<int> clock;    // indexed by replica id

  friend bool operator==(const TraceEvent&, const TraceEvent&) = default;
};

struct Trace {
  Protocol protocol = Protocol::kCJupiter;
  Schedule schedule;
  PriorityRule rule = PriorityRule::kSmallerWins;
  std::vector<TraceEvent> events;
};

/// e1 happened before e2 (vector-clock order; irreflexive).
bool happens_before(const TraceEvent& e1, const TraceEvent& e2);

/// The full relation as a matrix over trace indices.
std::vector<std::vector<bool>> happens_before(const Trace& trace);

// Running -----------------------------------------------------------------

struct RunConfig {
  Protocol protocol = Protocol::kCJupiter;
  std::optional<PriorityRule> priority_override;
  bool capture_steps = false;
};

struct ServerTransform {
  Oid oid;
  std::vector<Oid> against;
};

struct RunResult {
  Trace trace;
  std::map<ReplicaId, ListState> lists;
  /// CJupiter and DJupiter spaces by replica.
  std::map<ReplicaId, CssSpace> css;
  /// Jupiter client spaces, and the server's space kept for each client.
  std::map<ReplicaId, StateSpace2D> jupiter_clients;
  std::map<ReplicaId, StateSpace2D> jupiter_server;
  /// Server (or broadcast) order.
  std::vector<Oid> server_arrivals;
  std::vector<ServerTransform> server_transforms;
  /// With capture_steps: the space of each replica initially and after each
  /// operation it processed.
  std::map<ReplicaId, std::vector<CssSpace>> css_steps;
  std::map<ReplicaId, std::vector<StateSpace2D>> jupiter_steps;
};

RunResult run(const Schedule& schedule, const RunConfig& config = {});

}  // namespace otwb
