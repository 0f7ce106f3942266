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

// Jupiter's 2D state space: every vertex has at most one LOCAL and one
// GLOBAL outgoing edge. xform walks the d-dimension edges from the context
// vertex to cur, placing the incoming operation along 1-d.

#include <array>
#include <map>
#include <optional>
#include <utility>
#include <vector>

#include "otwb/css_space.hpp"
#include "otwb/list_op.hpp"
#include "otwb/oid.hpp"

namespace otwb {

struct ProtoOp2D {
  ListOp o;
  Oid oid;
  OidSet ctx;

  friend bool operator==(const ProtoOp2D&, const ProtoOp2D&) = default;
};

std::pair<ProtoOp2D, ProtoOp2D> transform_pair(const ProtoOp2D& op, const ProtoOp2D& other,
                                               PriorityRule rule);

enum class Dimension { kLocal = 0, kGlobal = 1 };

inline Dimension flip(Dimension d) {
  return d == Dimension::kLocal ? Dimension::kGlobal : Dimension::kLocal;
}

std::string to_string(Dimension d);

struct Edge2D {
  ProtoOp2D op;
  VertexId target = 0;
};

struct Vertex2D {
  OidSet oids;
  std::array<std::optional<Edge2D>, 2> edges;

  const std::optional<Edge2D>& edge(Dimension d) const { return edges[static_cast<int>(d)]; }
};

class StateSpace2D {
 public:
  explicit StateSpace2D(PriorityRule rule = PriorityRule::kSmallerWins);

  PriorityRule rule() const { return rule_; }
  static constexpr VertexId root() { return 0; }
  VertexId cur() const { return cur_; }
  std::size_t size() const { return vertices_.size(); }
  const Vertex2D& vertex(VertexId id) const { return vertices_.at(id); }
  const std::vector<Vertex2D>& vertices() const { return vertices_; }

  std::optional<VertexId> find(const OidSet& oids) const;
  VertexId locate(const ProtoOp2D& op) const;

  /// Creates u.oids ∪ {op.oid} and installs it as u's d-edge. Requires
  /// op.ctx == u.oids and an empty d slot; cur is left alone.
  VertexId add(const ProtoOp2D& op, Dimension d, VertexId u);

  /// add() at cur, then cur moves to the new vertex.
  VertexId append(const ProtoOp2D& op, Dimension d);

  ProtoOp2D xform(ProtoOp2D op, Dimension d);

 private:
  VertexId new_vertex(OidSet oids);
  void set_edge(VertexId u, Dimension d, ProtoOp2D op, VertexId v);

  PriorityRule rule_;
  std::vector<Vertex2D> vertices_;
  std::map<OidSet, VertexId> index_;
  VertexId cur_ = 0;
};

std::vector<ListState> materialize(const StateSpace2D& space);

}  // namespace otwb
