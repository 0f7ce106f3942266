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

// n-ary ordered state space used by CJupiter (and DJupiter).
//
// Vertices are states identified by the set of oids executed to reach them.
// Every edge leaving a vertex carries an operation whose ctx equals the
// vertex's oids; edges leaving one vertex are kept sorted by the server order
// as it can be decided locally (compare_ops). xform walks the *first* edges
// from the operation's context vertex to `cur`, completing one OT square per
// step and keeping every by-product vertex.

#include <cstddef>
#include <map>
#include <optional>
#include <utility>
#include <vector>

#include "otwb/list_op.hpp"
#include "otwb/oid.hpp"

namespace otwb {

/// Protocol-level operation: signature, identity, causal context and the
/// server context (oids executed before it at the server, as far as it knows).
struct ProtoOp {
  ListOp o;
  Oid oid;
  OidSet ctx;
  OidSet sctx;

  friend bool operator==(const ProtoOp&, const ProtoOp&) = default;
};

/// OT lifted to protocol operations: returns (op transformed by other,
/// other transformed by op). Contexts grow by the other oid; sctx is kept.
std::pair<ProtoOp, ProtoOp> transform_pair(const ProtoOp& op, const ProtoOp& other, PriorityRule rule);

enum class EdgeOrder { kLeft = -1, kRight = 1 };

/// Decides op vs op2 in the server order as visible at replica `rid`.
/// Throws IntegrityError on the branches a FIFO run can never reach
/// (server fallback, or two remote/two local operations with silent sctx).
EdgeOrder compare_ops(const ProtoOp& op, const ProtoOp& op2, ReplicaId rid);

using VertexId = std::size_t;

struct CssEdge {
  ProtoOp op;
  VertexId target = 0;
};

struct CssVertex {
  OidSet oids;
  std::vector<CssEdge> edges;  // sorted under compare_ops
};

/// Result of xform plus the operations (by their first-edge form) the
/// incoming operation was transformed against, in walk order.
struct XformResult {
  ProtoOp op;
  std::vector<ProtoOp> against;
};

class CssSpace {
 public:
  explicit CssSpace(ReplicaId rid = kServerId, PriorityRule rule = PriorityRule::kSmallerWins);

  ReplicaId rid() const { return rid_; }
  PriorityRule rule() const { return rule_; }

  static constexpr VertexId root() { return 0; }
  VertexId cur() const { return cur_; }
  std::size_t size() const { return vertices_.size(); }
  const CssVertex& vertex(VertexId id) const { return vertices_.at(id); }
  const std::vector<CssVertex>& vertices() const { return vertices_; }

  std::optional<VertexId> find(const OidSet& oids) const;

  /// The vertex whose oids equal op.ctx. Absence means the FIFO discipline
  /// was broken and raises IntegrityError.
  VertexId locate(const ProtoOp& op) const;

  /// Inserts edge (op, v) into u's ordered edges. Re-linking an oid already
  /// present is a no-op.
  void link(VertexId u, VertexId v, ProtoOp op);

  /// Minimum edge of `u` under compare_ops, or nullptr at a leaf.
  const CssEdge* first_edge(VertexId u) const;

  /// Local generation: new vertex cur ∪ {op.oid}, linked from cur, becomes cur.
  /// op.ctx must equal cur's oids.
  VertexId append(const ProtoOp& op);

  ProtoOp xform(const ProtoOp& op) { return xform_traced(op).op; }
  XformResult xform_traced(ProtoOp op);

  /// Operation labels along repeated first edges from v to cur.
  std::vector<ProtoOp> first_path_ops(VertexId v) const;

 private:
  VertexId add_vertex(OidSet oids);

  ReplicaId rid_;
  PriorityRule rule_;
  std::vector<CssVertex> vertices_;
  std::map<OidSet, VertexId> index_;
  VertexId cur_ = 0;
};

/// List state of every vertex, indexed by VertexId, by replaying one incoming
/// edge per vertex in creation order (vertices are created after their parents).
std::vector<ListState> materialize(const CssSpace& space);

}  // namespace otwb
