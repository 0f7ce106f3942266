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

// Specification and state-space checkers. Every check returns a Verdict; a failed
// verdict carries a witness small enough to read.

#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"

#include "otwb/css_space.hpp"
#include "otwb/list_op.hpp"
#include "otwb/simnet.hpp"
#include "otwb/space_2d.hpp"

namespace otwb {

struct Verdict {
  std::string check;
  bool satisfied = true;
  std::string detail;
  nlohmann::json witness;  // null when satisfied
};

bool all_satisfied(const std::vector<Verdict>& verdicts);

struct DoEvent {
  std::size_t trace_index = 0;
  ReplicaId replica = kServerId;
  ListOp op;
  std::optional<Oid> oid;
  ListState list;
};

/// H is the do events in trace order; vis[i][j] means H[i] is visible to
/// H[j] (happens-before restricted to H).
struct AbstractExecution {
  std::vector<DoEvent> history;
  std::vector<std::vector<bool>> vis;
};

AbstractExecution build_abstract_execution(const Trace& trace);

/// Union over returned lists of "a precedes b", keyed by element identity.
using ListOrder = std::set<std::pair<Oid, Oid>>;

ListOrder build_list_order(const std::vector<ListState>& lists);
ListOrder build_list_order(const AbstractExecution& a);

Verdict check_convergence(const AbstractExecution& a);
Verdict check_weak_spec(const AbstractExecution& a);
Verdict check_strong_spec(const AbstractExecution& a);
Verdict check_pairwise_compatibility(const std::vector<ListState>& states);

/// Same schedule under CJupiter and Jupiter: every replica's sequence of
/// (event, oid, list) over do and receive events must match. Throws
/// std::invalid_argument when the traces replay different schedules.
Verdict check_equivalence(const Trace& cjupiter, const Trace& jupiter);

/// Same schedule under CJupiter and DJupiter: every client's do events match.
Verdict check_simulation(const Trace& cjupiter, const Trace& djupiter);

// Structural checks on state spaces ----------------------------------------

Verdict check_out_degree(const CssSpace& s, int n_clients);
Verdict check_simple_paths(const CssSpace& s);
Verdict check_square_closure(const CssSpace& s);
Verdict check_square_closure(const StateSpace2D& s);
Verdict check_unique_lca(const CssSpace& s);
Verdict check_disjoint_paths(const CssSpace& s);
Verdict check_vertex_compatibility(const CssSpace& s);

/// First-edge path from every vertex equals the arrivals not in the vertex,
/// in arrival order.
Verdict check_first_paths(const CssSpace& server, const std::vector<Oid>& arrivals);

/// Each server transform ran against exactly the earlier arrivals concurrent
/// with the incoming operation, in arrival order.
Verdict check_server_transforms(const RunResult& cjupiter);

/// Vertex oids, edge labels (signature, oid, ctx, target oids) and edge
/// order agree; sctx is replica-local and ignored.
Verdict check_compactness(const std::vector<const CssSpace*>& spaces);

/// Union of the server's per-client 2D spaces equals the server's n-ary space.
Verdict check_server_union(const CssSpace& server, const std::vector<const StateSpace2D*>& per_client);

/// Every vertex and edge of the 2D space appears in the n-ary space.
Verdict check_client_subgraph(const StateSpace2D& jupiter, const CssSpace& cjupiter);

/// Bundle over a CJupiter run captured with capture_steps: per-space properties
/// for the server and every final client space, plus the step-wise
/// first-path characterization at the server.
std::vector<Verdict> check_structural(const RunResult& cjupiter);

/// Bundle over a CJupiter and a Jupiter run of the same schedule, both with
/// capture_steps: server union and per-step client subgraph.
std::vector<Verdict> check_jupiter_relation(const RunResult& cjupiter, const RunResult& jupiter);

}  // namespace otwb
