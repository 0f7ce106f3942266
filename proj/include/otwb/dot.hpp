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

// Graphviz rendering of state spaces. Node names are stable across replicas
// ("v_" followed by c<cid>s<seq> per oid), so the same state gets the same
// name in every file.

#include <string>

#include "otwb/css_space.hpp"
#include "otwb/space_2d.hpp"

namespace otwb {

std::string dot_node_name(const OidSet& oids);

/// Edges are emitted in compare_ops order with ordering=out, so the first
/// edge of a vertex is drawn leftmost.
std::string to_dot(const CssSpace& space, const std::string& graph_name);

/// Local edges solid, global edges dashed.
std::string to_dot(const StateSpace2D& space, const std::string& graph_name);

}  // namespace otwb
