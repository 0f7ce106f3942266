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

// Replica state machines. Every replica owns its list and its state space;
// messages are plain values, copied at the send boundary.

#include <optional>
#include <vector>

#include "otwb/css_space.hpp"
#include "otwb/list_op.hpp"
#include "otwb/oid.hpp"
#include "otwb/space_2d.hpp"

namespace otwb {

/// Turns a user request into the operation a client actually generates on
/// `state`: positions are clamped into range, a Del records the element it
/// removes, a Del on an empty list degrades to Nop, and the priority comes
/// from the generating client. Ins elements take their identity from `oid`.
/// Read and Nop requests are rejected with std::invalid_argument.
ListOp make_local_op(const ListState& state, const ListOp& request, const Oid& oid);

/// Applies an operation received from elsewhere. Throws IntegrityError when
/// the position is out of range or a Del would remove a different element
/// than the one recorded at generation time.
void apply_remote(ListState& state, const ListOp& op);

template <typename Op>
struct Outgoing {
  ReplicaId to = kServerId;
  Op op;
};

class CJClient {
 public:
  CJClient(ReplicaId cid, PriorityRule rule = PriorityRule::kSmallerWins);

  ReplicaId cid() const { return cid_; }
  /// Generates, applies and records a local update; the result is the
  /// message for the server.
  ProtoOp local_do(const ListOp& request);
  /// Transforms and applies an operation forwarded by the server; returns
  /// the transformed form.
  ProtoOp receive(const ProtoOp& op);

  const ListState& read() const { return state_; }
  const CssSpace& space() const { return space_; }

 private:
  ReplicaId cid_;
  int seq_ = 0;
  ListState state_;
  CssSpace space_;
};

struct CJServerReceipt {
  ProtoOp transformed;
  std::vector<ProtoOp> against;
  std::vector<Outgoing<ProtoOp>> fanout;  // the sctx-stamped original
};

class CJServer {
 public:
  CJServer(int n_clients, PriorityRule rule = PriorityRule::kSmallerWins);

  CJServerReceipt receive(ProtoOp op);

  const ListState& read() const { return state_; }
  const CssSpace& space() const { return space_; }
  const OidSet& soids() const { return soids_; }

 private:
  int n_clients_;
  ListState state_;
  OidSet soids_;
  CssSpace space_;
};

class JClient {
 public:
  JClient(ReplicaId cid, PriorityRule rule = PriorityRule::kSmallerWins);

  ReplicaId cid() const { return cid_; }
  ProtoOp2D local_do(const ListOp& request);
  ProtoOp2D receive(const ProtoOp2D& op);

  const ListState& read() const { return state_; }
  const StateSpace2D& space() const { return space_; }

 private:
  ReplicaId cid_;
  int seq_ = 0;
  ListState state_;
  StateSpace2D space_;
};

struct JServerReceipt {
  ProtoOp2D transformed;
  std::vector<Outgoing<ProtoOp2D>> fanout;  // the transformed op
};

class JServer {
 public:
  JServer(int n_clients, PriorityRule rule = PriorityRule::kSmallerWins);

  JServerReceipt receive(const ProtoOp2D& op);

  const ListState& read() const { return state_; }
  /// The server-side 2D space kept for client `cid` (1-based).
  const StateSpace2D& space_for(ReplicaId cid) const;
  int n_clients() const { return static_cast<int>(spaces_.size()); }

 private:
  StateSpace2D& mutable_space(ReplicaId cid);

  ListState state_;
  std::vector<StateSpace2D> spaces_;
};

/// A DJupiter replica. There is no server: every replica behaves as a
/// CJupiter client whose operations come back through a causal atomic
/// broadcast. sctx is stamped from the replica's mirror of the broadcast
/// prefix it has seen.
class DJReplica {
 public:
  DJReplica(ReplicaId rid, PriorityRule rule = PriorityRule::kSmallerWins);

  ReplicaId rid() const { return rid_; }
  ProtoOp generate(const ListOp& request);
  /// Processes the next broadcast delivery. Own operations only advance the
  /// prefix mirror and yield nullopt; others yield the transformed form.
  std::optional<ProtoOp> deliver(const ProtoOp& op);

  const ListState& read() const { return state_; }
  const CssSpace& space() const { return space_; }
  const OidSet& delivered() const { return delivered_; }

 private:
  ReplicaId rid_;
  int seq_ = 0;
  ListState state_;
  OidSet delivered_;
  CssSpace space_;
};

}  // namespace otwb
