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

#include "otwb/dot.hpp"

#include <sstream>

namespace otwb {

namespace {

std::string escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    if (c == '"' || c == '\\') out.push_back('\\');
    out.push_back(c);
  }
  return out;
}

std::string node_label(const OidSet& oids, const ListState& list) {
  return escape(to_string(oids)) + "\\n\\\"" + escape(glyphs(list)) + "\\\"";
}

std::string edge_label(const Oid& oid, const ListOp& o) { return escape(to_string(oid) + " " + to_string(o)); }

void header(std::ostringstream& out, const std::string& graph_name) {
  out << "digraph \"" << escape(graph_name) << "\" {\n"
      << "  ordering=out;\n"
      << "  node [shape=box, fontname=\"monospace\"];\n"
      << "  edge [fontname=\"monospace\"];\n";
}

}  // namespace

std::string dot_node_name(const OidSet& oids) {
  std::string name = "v_";
  for (const auto& o : oids) name += "c" + std::to_string(o.cid) + "s" + std::to_string(o.seq);
  return name;
}

std::string to_dot(const CssSpace& space, const std::string& graph_name) {
  const auto lists = materialize(space);
  std::ostringstream out;
  header(out, graph_name);
  for (VertexId v = 0; v < space.size(); ++v) {
    const auto& vx = space.vertex(v);
    out << "  " << dot_node_name(vx.oids) << " [label=\"" << node_label(vx.oids, lists[v]) << "\""
        << (v == space.cur() ? ", penwidth=2" : "") << "];\n";
  }
  for (const auto& vx : space.vertices()) {
    for (const auto& e : vx.edges) {
      out << "  " << dot_node_name(vx.oids) << " -> " << dot_node_name(space.vertex(e.target).oids)
          << " [label=\"" << edge_label(e.op.oid, e.op.o) << "\"];\n";
    }
  }
  out << "}\n";
  return out.str();
}

std::string to_dot(const StateSpace2D& space, const std::string& graph_name) {
  const auto lists = materialize(space);
  std::ostringstream out;
  header(out, graph_name);
  for (VertexId v = 0; v < space.size(); ++v) {
    const auto& vx = space.vertex(v);
    out << "  " << dot_node_name(vx.oids) << " [label=\"" << node_label(vx.oids, lists[v]) << "\""
        << (v == space.cur() ? ", penwidth=2" : "") << "];\n";
  }
  for (const auto& vx : space.vertices()) {
    for (Dimension d : {Dimension::kLocal, Dimension::kGlobal}) {
      const auto& e = vx.edge(d);
      if (!e) continue;
      out << "  " << dot_node_name(vx.oids) << " -> " << dot_node_name(space.vertex(e->target).oids)
          << " [label=\"" << edge_label(e->op.oid, e->op.o) << "\", style="
          << (d == Dimension::kLocal ? "solid" : "dashed") << "];\n";
    }
  }
  out << "}\n";
  return out.str();
}

}  // namespace otwb
