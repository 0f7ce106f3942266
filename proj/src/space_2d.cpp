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

#include "otwb/space_2d.hpp"

#include "otwb/errors.hpp"

namespace otwb {

std::pair<ProtoOp2D, ProtoOp2D> transform_pair(const ProtoOp2D& op, const ProtoOp2D& other,
                                               PriorityRule rule) {
  ProtoOp2D op_t{transform(op.o, other.o, rule), op.oid, op.ctx.with(other.oid)};
  ProtoOp2D other_t{transform(other.o, op.o, rule), other.oid, other.ctx.with(op.oid)};
  return {std::move(op_t), std::move(other_t)};
}

std::string to_string(Dimension d) { return d == Dimension::kLocal ? "local" : "global"; }

StateSpace2D::StateSpace2D(PriorityRule rule) : rule_(rule) { new_vertex(OidSet{}); }

VertexId StateSpace2D::new_vertex(OidSet oids) {
  if (index_.count(oids) != 0) {
    throw IntegrityError("2D vertex " + to_string(oids) + " already exists");
  }
  VertexId id = vertices_.size();
  index_.emplace(oids, id);
  vertices_.push_back(Vertex2D{std::move(oids), {}});
  return id;
}

void StateSpace2D::set_edge(VertexId u, Dimension d, ProtoOp2D op, VertexId v) {
  auto& from = vertices_.at(u);
  const auto& to = vertices_.at(v);
  if (op.ctx != from.oids || to.oids != from.oids.with(op.oid) || from.oids.contains(op.oid)) {
    throw IntegrityError("2D edge " + to_string(op.oid) + " does not match " + to_string(from.oids) +
                         " -> " + to_string(to.oids));
  }
  auto& slot = from.edges[static_cast<int>(d)];
  if (slot) {
    throw IntegrityError(to_string(d) + " edge of " + to_string(from.oids) + " is already occupied");
  }
  slot = Edge2D{std::move(op), v};
}

std::optional<VertexId> StateSpace2D::find(const OidSet& oids) const {
  auto it = index_.find(oids);
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

VertexId StateSpace2D::locate(const ProtoOp2D& op) const {
  auto found = find(op.ctx);
  if (!found) {
    throw IntegrityError("no 2D vertex matches ctx " + to_string(op.ctx) + " of " + to_string(op.oid));
  }
  return *found;
}

VertexId StateSpace2D::add(const ProtoOp2D& op, Dimension d, VertexId u) {
  const auto& from = vertices_.at(u);
  if (op.ctx != from.oids) {
    throw IntegrityError("add: ctx " + to_string(op.ctx) + " != " + to_string(from.oids));
  }
  if (from.edge(d)) {
    throw IntegrityError(to_string(d) + " edge of " + to_string(from.oids) + " is already occupied");
  }
  VertexId v = new_vertex(from.oids.with(op.oid));
  set_edge(u, d, op, v);
  return v;
}

VertexId StateSpace2D::append(const ProtoOp2D& op, Dimension d) {
  cur_ = add(op, d, cur_);
  return cur_;
}

ProtoOp2D StateSpace2D::xform(ProtoOp2D op, Dimension d) {
  VertexId u = locate(op);
  VertexId v = add(op, flip(d), u);

  while (u != cur_) {
    const auto& step = vertices_[u].edge(d);
    if (!step) {
      throw IntegrityError(to_string(d) + " walk hit a dead end at " + to_string(vertices_[u].oids));
    }
    const VertexId u_next = step->target;
    const ProtoOp2D other = step->op;

    auto [op_t, other_t] = transform_pair(op, other, rule_);
    VertexId v_next = new_vertex(vertices_[v].oids.with(other.oid));
    set_edge(v, d, std::move(other_t), v_next);
    set_edge(u_next, flip(d), op_t, v_next);

    u = u_next;
    v = v_next;
    op = std::move(op_t);
  }

  cur_ = v;
  return op;
}

std::vector<ListState> materialize(const StateSpace2D& space) {
  std::vector<ListState> lists(space.size());
  std::vector<bool> done(space.size(), false);
  done[StateSpace2D::root()] = true;
  for (VertexId u = 0; u < space.size(); ++u) {
    if (!done[u]) continue;
    for (const auto& e : space.vertex(u).edges) {
      if (e && !done[e->target]) {
        lists[e->target] = otwb::apply(lists[u], e->op.o);
        done[e->target] = true;
      }
    }
  }
  return lists;
}

}  // namespace otwb
