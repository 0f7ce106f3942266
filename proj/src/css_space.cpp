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

#include "otwb/css_space.hpp"

#include "otwb/errors.hpp"

namespace otwb {

std::pair<ProtoOp, ProtoOp> transform_pair(const ProtoOp& op, const ProtoOp& other, PriorityRule rule) {
  ProtoOp op_t{transform(op.o, other.o, rule), op.oid, op.ctx.with(other.oid), op.sctx};
  ProtoOp other_t{transform(other.o, op.o, rule), other.oid, other.ctx.with(op.oid), other.sctx};
  return {std::move(op_t), std::move(other_t)};
}

EdgeOrder compare_ops(const ProtoOp& op, const ProtoOp& op2, ReplicaId rid) {
  if (op.oid == op2.oid) {
    throw IntegrityError("compare_ops on two edges with the same oid " + to_string(op.oid));
  }
  if (op2.sctx.contains(op.oid)) return EdgeOrder::kLeft;
  if (op.sctx.contains(op2.oid)) return EdgeOrder::kRight;
  if (rid == kServerId) {
    throw IntegrityError("server cannot order " + to_string(op.oid) + " and " + to_string(op2.oid) +
                         ": neither sctx mentions the other");
  }
  const bool op_local = op.oid.cid == rid;
  const bool op2_local = op2.oid.cid == rid;
  if (op_local == op2_local) {
    throw IntegrityError("replica " + replica_name(rid) + " cannot order " + to_string(op.oid) +
                         " and " + to_string(op2.oid));
  }
  // The one not generated here was redirected by the server first.
  return op_local ? EdgeOrder::kRight : EdgeOrder::kLeft;
}

CssSpace::CssSpace(ReplicaId rid, PriorityRule rule) : rid_(rid), rule_(rule) {
  add_vertex(OidSet{});
}

VertexId CssSpace::add_vertex(OidSet oids) {
  if (index_.count(oids) != 0) {
    throw IntegrityError("vertex " + to_string(oids) + " already exists");
  }
  VertexId id = vertices_.size();
  index_.emplace(oids, id);
  vertices_.push_back(CssVertex{std::move(oids), {}});
  return id;
}

std::optional<VertexId> CssSpace::find(const OidSet& oids) const {
  auto it = index_.find(oids);
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

VertexId CssSpace::locate(const ProtoOp& op) const {
  auto found = find(op.ctx);
  if (!found) {
    throw IntegrityError("no vertex matches ctx " + to_string(op.ctx) + " of " + to_string(op.oid) +
                         " at " + replica_name(rid_));
  }
  return *found;
}

void CssSpace::link(VertexId u, VertexId v, ProtoOp op) {
  auto& from = vertices_.at(u);
  const auto& to = vertices_.at(v);
  if (op.ctx != from.oids || to.oids != from.oids.with(op.oid) || from.oids.contains(op.oid)) {
    throw IntegrityError("edge " + to_string(op.oid) + " does not match " + to_string(from.oids) +
                         " -> " + to_string(to.oids));
  }
  for (const auto& e : from.edges) {
    if (e.op.oid == op.oid) return;
  }
  auto pos = from.edges.end();
  for (auto it = from.edges.begin(); it != from.edges.end(); ++it) {
    EdgeOrder fwd = compare_ops(op, it->op, rid_);
    EdgeOrder back = compare_ops(it->op, op, rid_);
    if (fwd == back) {
      throw IntegrityError("compare_ops is not antisymmetric on " + to_string(op.oid) + " and " +
                           to_string(it->op.oid));
    }
    if (fwd == EdgeOrder::kLeft && pos == from.edges.end()) pos = it;
  }
  from.edges.insert(pos, CssEdge{std::move(op), v});
}

const CssEdge* CssSpace::first_edge(VertexId u) const {
  const auto& edges = vertices_.at(u).edges;
  return edges.empty() ? nullptr : &edges.front();
}

VertexId CssSpace::append(const ProtoOp& op) {
  VertexId v = add_vertex(vertices_[cur_].oids.with(op.oid));
  link(cur_, v, op);
  cur_ = v;
  return v;
}

XformResult CssSpace::xform_traced(ProtoOp op) {
  VertexId u = locate(op);
  VertexId v = add_vertex(vertices_[u].oids.with(op.oid));
  std::vector<ProtoOp> against;

  while (u != cur_) {
    const CssEdge* first = first_edge(u);
    if (first == nullptr) {
      throw IntegrityError("first-edge walk hit a leaf before cur at " + to_string(vertices_[u].oids));
    }
    // Copy out: adding vertices below may reallocate.
    const VertexId u_next = first->target;
    const ProtoOp other = first->op;

    auto [op_t, other_t] = transform_pair(op, other, rule_);
    VertexId v_next = add_vertex(vertices_[v].oids.with(other.oid));
    link(v, v_next, std::move(other_t));
    link(u, v, op);

    against.push_back(other);
    u = u_next;
    v = v_next;
    op = std::move(op_t);
  }

  link(u, v, op);
  cur_ = v;
  return XformResult{std::move(op), std::move(against)};
}

std::vector<ProtoOp> CssSpace::first_path_ops(VertexId v) const {
  std::vector<ProtoOp> out;
  while (v != cur_) {
    const CssEdge* first = first_edge(v);
    if (first == nullptr) break;
    out.push_back(first->op);
    v = first->target;
  }
  return out;
}

std::vector<ListState> materialize(const CssSpace& space) {
  std::vector<ListState> lists(space.size());
  std::vector<bool> done(space.size(), false);
  done[CssSpace::root()] = true;
  for (VertexId u = 0; u < space.size(); ++u) {
    for (const auto& e : space.vertex(u).edges) {
      if (!done[e.target] && done[u]) {
        lists[e.target] = otwb::apply(lists[u], e.op.o);
        done[e.target] = true;
      }
    }
  }
  return lists;
}

}  // namespace otwb
