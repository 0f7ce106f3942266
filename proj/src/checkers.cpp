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

#include "otwb/checkers.hpp"

#include <algorithm>
#include <cstdint>
#include <deque>
#include <map>
#include <stdexcept>

namespace otwb {

namespace {

using nlohmann::json;

Verdict pass(std::string check) { return Verdict{std::move(check), true, {}, nullptr}; }

Verdict fail(std::string check, std::string detail, json witness) {
  return Verdict{std::move(check), false, std::move(detail), std::move(witness)};
}

json element_json(const Element& e) { return to_string(e); }

json list_json(const ListState& list) {
  json out = json::array();
  for (const auto& e : list) out.push_back(element_json(e));
  return out;
}

json oids_json(const OidSet& oids) {
  json out = json::array();
  for (const auto& o : oids) out.push_back(to_string(o));
  return out;
}

json event_json(const DoEvent& e) {
  json j{{"trace_index", e.trace_index},
         {"replica", replica_name(e.replica)},
         {"op", to_string(e.op)},
         {"list", glyphs(e.list)}};
  if (e.oid) j["oid"] = to_string(*e.oid);
  return j;
}

std::set<Oid> element_ids(const ListState& list) {
  std::set<Oid> out;
  for (const auto& e : list) out.insert(e.id());
  return out;
}

struct Incompatibility {
  std::size_t first = 0;   // list with a before b
  std::size_t second = 0;  // list with b before a
  Oid a, b;
};

// Two lists disagree on a common pair iff the union of their orders holds
// both (a, b) and (b, a), so one pass over all pairs finds any conflict.
std::optional<Incompatibility> find_incompatible(const std::vector<const ListState*>& lists) {
  std::map<std::pair<Oid, Oid>, std::size_t> seen;
  for (std::size_t i = 0; i < lists.size(); ++i) {
    const auto& w = *lists[i];
    for (std::size_t p = 0; p < w.size(); ++p) {
      for (std::size_t q = p + 1; q < w.size(); ++q) {
        const Oid a = w[p].id();
        const Oid b = w[q].id();
        auto rev = seen.find({b, a});
        if (rev != seen.end()) return Incompatibility{rev->second, i, b, a};
        seen.emplace(std::make_pair(a, b), i);
      }
    }
  }
  return std::nullopt;
}

std::map<Oid, Element> element_index(const std::vector<const ListState*>& lists) {
  std::map<Oid, Element> out;
  for (const auto* w : lists) {
    for (const auto& e : *w) out.emplace(e.id(), e);
  }
  return out;
}

}  // namespace

bool all_satisfied(const std::vector<Verdict>& verdicts) {
  return std::all_of(verdicts.begin(), verdicts.end(), [](const Verdict& v) { return v.satisfied; });
}

// Abstract executions --------------------------------------------------------

AbstractExecution build_abstract_execution(const Trace& trace) {
  AbstractExecution a;
  for (std::size_t i = 0; i < trace.events.size(); ++i) {
    const auto& e = trace.events[i];
    if (e.type != EventType::kDo) continue;
    a.history.push_back(DoEvent{i, e.replica, e.op, e.oid, e.list});
  }
  const auto n = a.history.size();
  a.vis.assign(n, std::vector<bool>(n, false));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      a.vis[i][j] = happens_before(trace.events[a.history[i].trace_index],
                                   trace.events[a.history[j].trace_index]);
    }
  }
  return a;
}

ListOrder build_list_order(const std::vector<ListState>& lists) {
  ListOrder lo;
  for (const auto& w : lists) {
    for (std::size_t p = 0; p < w.size(); ++p) {
      for (std::size_t q = p + 1; q < w.size(); ++q) lo.emplace(w[p].id(), w[q].id());
    }
  }
  return lo;
}

ListOrder build_list_order(const AbstractExecution& a) {
  std::vector<ListState> lists;
  for (const auto& e : a.history) lists.push_back(e.list);
  return build_list_order(lists);
}

Verdict check_convergence(const AbstractExecution& a) {
  const std::string name = "convergence";
  std::map<std::set<Oid>, std::size_t> first_read;
  for (std::size_t j = 0; j < a.history.size(); ++j) {
    if (a.history[j].op.kind != OpKind::kRead) continue;
    std::set<Oid> visible;
    for (std::size_t i = 0; i < a.history.size(); ++i) {
      if (a.vis[i][j] && a.history[i].oid) visible.insert(*a.history[i].oid);
    }
    auto [it, inserted] = first_read.emplace(std::move(visible), j);
    if (!inserted && a.history[it->second].list != a.history[j].list) {
      return fail(name, "two reads saw the same updates but returned different lists",
                  json{{"first", event_json(a.history[it->second])}, {"second", event_json(a.history[j])}});
    }
  }
  return pass(name);
}

Verdict check_weak_spec(const AbstractExecution& a) {
  const std::string name = "weak_spec";
  for (std::size_t j = 0; j < a.history.size(); ++j) {
    const DoEvent& e = a.history[j];

    // 1(a): the returned list holds exactly the visible inserts minus the
    // visible deletes, the event itself included.
    std::set<Oid> expected;
    std::set<Oid> deleted;
    for (std::size_t i = 0; i < a.history.size(); ++i) {
      if (i != j && !a.vis[i][j]) continue;
      const ListOp& op = a.history[i].op;
      if (op.kind == OpKind::kIns) expected.insert(op.element->id());
      if (op.kind == OpKind::kDel && op.element) deleted.insert(op.element->id());
    }
    for (const auto& d : deleted) expected.erase(d);
    const std::set<Oid> actual = element_ids(e.list);
    if (actual.size() != e.list.size() || actual != expected) {
      json missing = json::array();
      json unexpected = json::array();
      for (const auto& o : expected) {
        if (!actual.count(o)) missing.push_back(to_string(o));
      }
      for (const auto& o : actual) {
        if (!expected.count(o)) unexpected.push_back(to_string(o));
      }
      return fail(name, "returned list does not hold exactly the visible elements",
                  json{{"event", event_json(e)}, {"missing", missing}, {"unexpected", unexpected}});
    }

    // 1(c): an insertion is found where it asked to be, up to clamping.
    if (e.op.kind == OpKind::kIns) {
      const auto k = std::min(e.op.position, e.list.size() - 1);
      if (e.list[k] != *e.op.element) {
        return fail(name, "inserted element is not at its position",
                    json{{"event", event_json(e)}, {"position", k}});
      }
    }
  }

  // 1(b) holds by construction of lo from the returned lists. Condition 2
  // asks lo to be irreflexive once closed within the elements of each
  // returned list, which fails exactly when two lists order a common pair
  // differently.
  std::vector<const ListState*> lists;
  for (const auto& e : a.history) lists.push_back(&e.list);
  if (auto bad = find_incompatible(lists)) {
    return fail(name, "two returned lists order a common pair differently",
                json{{"first", event_json(a.history[bad->first])},
                     {"second", event_json(a.history[bad->second])},
                     {"pair", {to_string(bad->a), to_string(bad->b)}}});
  }
  return pass(name);
}

Verdict check_strong_spec(const AbstractExecution& a) {
  const std::string name = "strong_spec";
  std::vector<const ListState*> lists;
  for (const auto& e : a.history) lists.push_back(&e.list);
  const auto elements = element_index(lists);
  const ListOrder lo = build_list_order(a);

  std::map<Oid, std::vector<Oid>> succ;
  for (const auto& [x, y] : lo) succ[x].push_back(y);

  // Shortest cycle: BFS from every element back to itself.
  std::vector<Oid> best;
  for (const auto& [start, _] : elements) {
    std::map<Oid, Oid> parent;
    std::deque<Oid> queue{start};
    std::optional<Oid> closing;
    while (!queue.empty() && !closing) {
      const Oid x = queue.front();
      queue.pop_front();
      for (const auto& y : succ[x]) {
        if (y == start) {
          closing = x;
          break;
        }
        if (parent.emplace(y, x).second) queue.push_back(y);
      }
    }
    if (!closing) continue;
    std::vector<Oid> cycle;
    for (Oid x = *closing; x != start; x = parent.at(x)) cycle.push_back(x);
    cycle.push_back(start);
    std::reverse(cycle.begin(), cycle.end());
    if (best.empty() || cycle.size() < best.size()) best = std::move(cycle);
  }

  if (best.empty()) return pass(name);
  json cycle = json::array();
  std::string glyph_cycle;
  for (const auto& o : best) {
    cycle.push_back(element_json(elements.at(o)));
    glyph_cycle.push_back(elements.at(o).glyph);
  }
  return fail(name, "the list order has a cycle", json{{"cycle", cycle}, {"glyphs", glyph_cycle}});
}

Verdict check_pairwise_compatibility(const std::vector<ListState>& states) {
  const std::string name = "pairwise_compatibility";
  std::vector<const ListState*> lists;
  for (const auto& s : states) lists.push_back(&s);
  if (auto bad = find_incompatible(lists)) {
    const auto elements = element_index(lists);
    return fail(name, "two states order a common pair differently",
                json{{"first", list_json(states[bad->first])},
                     {"second", list_json(states[bad->second])},
                     {"a", element_json(elements.at(bad->a))},
                     {"b", element_json(elements.at(bad->b))}});
  }
  return pass(name);
}

// Protocol relations ---------------------------------------------------------

namespace {

struct Behaviour {
  EventType type;
  std::string op;  // do events only; receive payloads legitimately differ
  std::optional<Oid> oid;
  ListState list;

  bool operator==(const Behaviour&) const = default;
};

json behaviour_json(const Behaviour& b) {
  json j{{"type", to_string(b.type)}, {"list", glyphs(b.list)}};
  if (!b.op.empty()) j["op"] = b.op;
  if (b.oid) j["oid"] = to_string(*b.oid);
  return j;
}

std::map<ReplicaId, std::vector<Behaviour>> behaviours(const Trace& t, bool include_receives) {
  std::map<ReplicaId, std::vector<Behaviour>> out;
  for (const auto& e : t.events) {
    if (e.type == EventType::kSend) continue;
    if (e.type == EventType::kReceive && !include_receives) continue;
    out[e.replica].push_back(
        Behaviour{e.type, e.type == EventType::kDo ? to_string(e.op) : std::string{}, e.oid, e.list});
  }
  return out;
}

Verdict compare_behaviours(const std::string& name, const std::map<ReplicaId, std::vector<Behaviour>>& lhs,
                           const std::map<ReplicaId, std::vector<Behaviour>>& rhs, const char* lhs_name,
                           const char* rhs_name, bool clients_only) {
  std::set<ReplicaId> replicas;
  for (const auto& [r, _] : lhs) replicas.insert(r);
  for (const auto& [r, _] : rhs) replicas.insert(r);
  static const std::vector<Behaviour> kNone;
  for (ReplicaId r : replicas) {
    if (clients_only && r == kServerId) continue;
    const auto& a = lhs.count(r) ? lhs.at(r) : kNone;
    const auto& b = rhs.count(r) ? rhs.at(r) : kNone;
    const auto n = std::max(a.size(), b.size());
    for (std::size_t k = 0; k < n; ++k) {
      if (k < a.size() && k < b.size() && a[k] == b[k]) continue;
      json w{{"replica", replica_name(r)}, {"position", k}};
      w[lhs_name] = k < a.size() ? behaviour_json(a[k]) : json(nullptr);
      w[rhs_name] = k < b.size() ? behaviour_json(b[k]) : json(nullptr);
      return fail(name, "replica behaviours diverge", w);
    }
  }
  return pass(name);
}

}  // namespace

Verdict check_equivalence(const Trace& cjupiter, const Trace& jupiter) {
  if (!(cjupiter.schedule == jupiter.schedule) || cjupiter.rule != jupiter.rule) {
    throw std::invalid_argument("equivalence needs two runs of the same schedule");
  }
  return compare_behaviours("equivalence", behaviours(cjupiter, true), behaviours(jupiter, true), "cjupiter",
                            "jupiter", false);
}

Verdict check_simulation(const Trace& cjupiter, const Trace& djupiter) {
  if (!(cjupiter.schedule == djupiter.schedule) || cjupiter.rule != djupiter.rule) {
    throw std::invalid_argument("simulation needs two runs of the same schedule");
  }
  return compare_behaviours("simulation", behaviours(cjupiter, false), behaviours(djupiter, false), "cjupiter",
                            "djupiter", true);
}

// Structural checks ------------------------------------------------------------

namespace {

json edge_json(const CssVertex& u, const CssEdge& e, const CssSpace& s) {
  return json{{"from", oids_json(u.oids)},
              {"oid", to_string(e.op.oid)},
              {"op", to_string(e.op.o)},
              {"to", oids_json(s.vertex(e.target).oids)}};
}

const CssEdge* edge_with(const CssVertex& v, const Oid& oid) {
  for (const auto& e : v.edges) {
    if (e.op.oid == oid) return &e;
  }
  return nullptr;
}

class Bitset {
 public:
  explicit Bitset(std::size_t n = 0) : words_((n + 63) / 64, 0) {}
  void set(std::size_t i) { words_[i / 64] |= std::uint64_t{1} << (i % 64); }
  bool test(std::size_t i) const { return (words_[i / 64] >> (i % 64)) & 1U; }
  Bitset& operator|=(const Bitset& o) {
    for (std::size_t k = 0; k < words_.size(); ++k) words_[k] |= o.words_[k];
    return *this;
  }
  friend Bitset operator&(Bitset a, const Bitset& b) {
    for (std::size_t k = 0; k < a.words_.size(); ++k) a.words_[k] &= b.words_[k];
    return a;
  }
  template <typename F>
  void for_each(F&& f) const {
    for (std::size_t k = 0; k < words_.size(); ++k) {
      for (std::uint64_t w = words_[k]; w != 0; w &= w - 1) {
        f(k * 64 + static_cast<std::size_t>(__builtin_ctzll(w)));
      }
    }
  }

 private:
  std::vector<std::uint64_t> words_;
};

// Reflexive ancestor sets; relies on edges always pointing to younger vertices.
std::vector<Bitset> ancestors(const CssSpace& s) {
  std::vector<Bitset> anc(s.size(), Bitset(s.size()));
  for (VertexId v = 0; v < s.size(); ++v) anc[v].set(v);
  for (VertexId u = 0; u < s.size(); ++u) {
    for (const auto& e : s.vertex(u).edges) anc[e.target] |= anc[u];
  }
  return anc;
}

// The deepest common ancestors of a and b: members of the (downward-closed)
// common-ancestor set none of whose children are in it.
std::vector<VertexId> lowest_common_ancestors(const CssSpace& s, const std::vector<Bitset>& anc, VertexId a,
                                              VertexId b) {
  const Bitset common = anc[a] & anc[b];
  std::vector<VertexId> out;
  common.for_each([&](std::size_t c) {
    for (const auto& e : s.vertex(c).edges) {
      if (common.test(e.target)) return;
    }
    out.push_back(c);
  });
  return out;
}

// Labels along one path from `from` down to `to` (BFS over edges).
std::optional<std::vector<Oid>> path_labels(const CssSpace& s, VertexId from, VertexId to) {
  std::map<VertexId, std::pair<VertexId, Oid>> parent;
  std::deque<VertexId> queue{from};
  std::set<VertexId> seen{from};
  while (!queue.empty()) {
    VertexId u = queue.front();
    queue.pop_front();
    if (u == to) break;
    for (const auto& e : s.vertex(u).edges) {
      if (seen.insert(e.target).second) {
        parent[e.target] = {u, e.op.oid};
        queue.push_back(e.target);
      }
    }
  }
  if (!seen.count(to)) return std::nullopt;
  std::vector<Oid> labels;
  for (VertexId v = to; v != from; v = parent.at(v).first) labels.push_back(parent.at(v).second);
  std::reverse(labels.begin(), labels.end());
  return labels;
}

}  // namespace

Verdict check_out_degree(const CssSpace& s, int n_clients) {
  const std::string name = "n_ary";
  for (const auto& v : s.vertices()) {
    if (v.edges.size() > static_cast<std::size_t>(n_clients)) {
      return fail(name, "vertex has more children than clients",
                  json{{"vertex", oids_json(v.oids)}, {"children", v.edges.size()}, {"clients", n_clients}});
    }
  }
  return pass(name);
}

Verdict check_simple_paths(const CssSpace& s) {
  const std::string name = "simple_path";
  if (!s.vertex(CssSpace::root()).oids.empty()) {
    return fail(name, "root is not the empty state", json{{"root", oids_json(s.vertex(0).oids)}});
  }
  // Every edge adds one fresh oid, so along any path from the root the
  // labels are distinct and collect to the endpoint's oids.
  std::vector<bool> reached(s.size(), false);
  reached[CssSpace::root()] = true;
  for (VertexId u = 0; u < s.size(); ++u) {
    const auto& v = s.vertex(u);
    std::set<Oid> labels;
    for (const auto& e : v.edges) {
      const auto& t = s.vertex(e.target);
      if (v.oids.contains(e.op.oid) || t.oids != v.oids.with(e.op.oid) || e.op.ctx != v.oids ||
          !labels.insert(e.op.oid).second || e.target <= u) {
        return fail(name, "edge repeats an oid or does not add exactly its own oid", edge_json(v, e, s));
      }
      if (reached[u]) reached[e.target] = true;
    }
  }
  for (VertexId u = 0; u < s.size(); ++u) {
    if (!reached[u]) {
      return fail(name, "vertex unreachable from the root", json{{"vertex", oids_json(s.vertex(u).oids)}});
    }
  }
  return pass(name);
}

Verdict check_square_closure(const CssSpace& s) {
  const std::string name = "square_closure";
  for (const auto& u : s.vertices()) {
    if (u.edges.size() < 2) continue;
    const CssEdge& first = u.edges.front();
    for (std::size_t k = 1; k < u.edges.size(); ++k) {
      const CssEdge& other = u.edges[k];
      json w{{"vertex", oids_json(u.oids)}, {"first", to_string(first.op.oid)}, {"other", to_string(other.op.oid)}};
      auto joined = s.find(u.oids.with(first.op.oid).with(other.op.oid));
      if (!joined) return fail(name, "square vertex missing", w);
      const CssEdge* across = edge_with(s.vertex(first.target), other.op.oid);
      const CssEdge* down = edge_with(s.vertex(other.target), first.op.oid);
      if (!across || !down || across->target != *joined || down->target != *joined) {
        return fail(name, "square edges missing", w);
      }
      if (across->op.o != transform(other.op.o, first.op.o, s.rule()) ||
          down->op.o != transform(first.op.o, other.op.o, s.rule())) {
        return fail(name, "square edges are not the transformed operations", w);
      }
    }
  }
  return pass(name);
}

Verdict check_square_closure(const StateSpace2D& s) {
  const std::string name = "square_closure_2d";
  for (const auto& u : s.vertices()) {
    const auto& local = u.edge(Dimension::kLocal);
    const auto& global = u.edge(Dimension::kGlobal);
    if (!local || !global) continue;
    json w{{"vertex", oids_json(u.oids)}, {"local", to_string(local->op.oid)}, {"global", to_string(global->op.oid)}};
    auto joined = s.find(u.oids.with(local->op.oid).with(global->op.oid));
    if (!joined) return fail(name, "square vertex missing", w);
    const auto& across = s.vertex(local->target).edge(Dimension::kGlobal);
    const auto& down = s.vertex(global->target).edge(Dimension::kLocal);
    if (!across || !down || across->target != *joined || down->target != *joined ||
        across->op.oid != global->op.oid || down->op.oid != local->op.oid) {
      return fail(name, "square edges missing", w);
    }
    if (across->op.o != transform(global->op.o, local->op.o, s.rule()) ||
        down->op.o != transform(local->op.o, global->op.o, s.rule())) {
      return fail(name, "square edges are not the transformed operations", w);
    }
  }
  return pass(name);
}

Verdict check_unique_lca(const CssSpace& s) {
  const std::string name = "unique_lca";
  const auto anc = ancestors(s);
  for (VertexId a = 0; a < s.size(); ++a) {
    for (VertexId b = a + 1; b < s.size(); ++b) {
      const auto lcas = lowest_common_ancestors(s, anc, a, b);
      if (lcas.size() != 1) {
        json found = json::array();
        for (auto c : lcas) found.push_back(oids_json(s.vertex(c).oids));
        return fail(name, "vertex pair without a unique lowest common ancestor",
                    json{{"a", oids_json(s.vertex(a).oids)}, {"b", oids_json(s.vertex(b).oids)}, {"lcas", found}});
      }
    }
  }
  return pass(name);
}

Verdict check_disjoint_paths(const CssSpace& s) {
  const std::string name = "disjoint_paths";
  const auto anc = ancestors(s);
  for (VertexId a = 0; a < s.size(); ++a) {
    for (VertexId b = a + 1; b < s.size(); ++b) {
      const auto lcas = lowest_common_ancestors(s, anc, a, b);
      if (lcas.empty()) continue;  // reported by unique_lca
      const VertexId w = lcas.front();
      auto to_a = path_labels(s, w, a);
      auto to_b = path_labels(s, w, b);
      if (!to_a || !to_b) return fail(name, "no path from the common ancestor", json{{"lca", oids_json(s.vertex(w).oids)}});
      std::set<Oid> on_a(to_a->begin(), to_a->end());
      for (const auto& o : *to_b) {
        if (on_a.count(o)) {
          return fail(name, "paths from the LCA share an oid",
                      json{{"a", oids_json(s.vertex(a).oids)},
                           {"b", oids_json(s.vertex(b).oids)},
                           {"lca", oids_json(s.vertex(w).oids)},
                           {"shared", to_string(o)}});
        }
      }
    }
  }
  return pass(name);
}

Verdict check_vertex_compatibility(const CssSpace& s) {
  const std::string name = "compatible_states";
  const auto lists = materialize(s);
  // Every incoming edge, not just the one materialize used, must agree.
  for (VertexId u = 0; u < s.size(); ++u) {
    for (const auto& e : s.vertex(u).edges) {
      if (otwb::apply(lists[u], e.op.o) != lists[e.target]) {
        json w = edge_json(s.vertex(u), e, s);
        w["via_edge"] = glyphs(otwb::apply(lists[u], e.op.o));
        w["materialized"] = glyphs(lists[e.target]);
        return fail(name, "two paths reach a vertex with different lists", w);
      }
    }
  }
  Verdict v = check_pairwise_compatibility(lists);
  v.check = name;
  return v;
}

Verdict check_first_paths(const CssSpace& server, const std::vector<Oid>& arrivals) {
  const std::string name = "first_path";
  for (VertexId v = 0; v < server.size(); ++v) {
    const auto& oids = server.vertex(v).oids;
    std::vector<Oid> expected;
    for (const auto& a : arrivals) {
      if (!oids.contains(a)) expected.push_back(a);
    }
    std::vector<Oid> actual;
    for (const auto& op : server.first_path_ops(v)) actual.push_back(op.oid);
    if (actual != expected) {
      json e = json::array();
      json a = json::array();
      for (const auto& o : expected) e.push_back(to_string(o));
      for (const auto& o : actual) a.push_back(to_string(o));
      return fail(name, "first-edge path is not the remaining arrivals in order",
                  json{{"vertex", oids_json(oids)}, {"expected", e}, {"actual", a}});
    }
  }
  return pass(name);
}

Verdict check_server_transforms(const RunResult& cjupiter) {
  const std::string name = "ot_sequence";
  const Trace& t = cjupiter.trace;
  std::map<Oid, std::size_t> generated;
  for (std::size_t i = 0; i < t.events.size(); ++i) {
    if (t.events[i].type == EventType::kDo && t.events[i].oid) generated.emplace(*t.events[i].oid, i);
  }
  const auto& arrivals = cjupiter.server_arrivals;
  for (std::size_t k = 0; k < cjupiter.server_transforms.size(); ++k) {
    const auto& st = cjupiter.server_transforms[k];
    std::vector<Oid> expected;
    for (std::size_t j = 0; j < k; ++j) {
      const auto& earlier = t.events[generated.at(arrivals[j])];
      if (!happens_before(earlier, t.events[generated.at(st.oid)])) expected.push_back(arrivals[j]);
    }
    if (st.against != expected) {
      json e = json::array();
      json a = json::array();
      for (const auto& o : expected) e.push_back(to_string(o));
      for (const auto& o : st.against) a.push_back(to_string(o));
      return fail(name, "server transformed against the wrong operations",
                  json{{"oid", to_string(st.oid)}, {"expected", e}, {"actual", a}});
    }
  }
  return pass(name);
}

Verdict check_compactness(const std::vector<const CssSpace*>& spaces) {
  const std::string name = "compactness";
  if (spaces.empty()) return pass(name);
  const CssSpace& ref = *spaces.front();
  for (std::size_t k = 1; k < spaces.size(); ++k) {
    const CssSpace& other = *spaces[k];
    json w{{"reference", replica_name(ref.rid())}, {"other", replica_name(other.rid())}};
    if (other.size() != ref.size()) {
      w["sizes"] = {ref.size(), other.size()};
      return fail(name, "different vertex counts", w);
    }
    for (const auto& u : ref.vertices()) {
      auto found = other.find(u.oids);
      w["vertex"] = oids_json(u.oids);
      if (!found) return fail(name, "vertex missing", w);
      const auto& v = other.vertex(*found);
      if (v.edges.size() != u.edges.size()) return fail(name, "different edge counts", w);
      for (std::size_t i = 0; i < u.edges.size(); ++i) {
        const auto& a = u.edges[i];
        const auto& b = v.edges[i];
        if (a.op.oid != b.op.oid || a.op.o != b.op.o || a.op.ctx != b.op.ctx ||
            ref.vertex(a.target).oids != other.vertex(b.target).oids) {
          w["edge"] = i;
          return fail(name, "edges differ in label or order", w);
        }
      }
    }
  }
  return pass(name);
}

Verdict check_server_union(const CssSpace& server, const std::vector<const StateSpace2D*>& per_client) {
  const std::string name = "server_union";
  using EdgeKey = std::pair<OidSet, Oid>;
  std::set<OidSet> vertices;
  std::map<EdgeKey, ListOp> edges;
  for (const auto* s : per_client) {
    for (const auto& v : s->vertices()) {
      vertices.insert(v.oids);
      for (const auto& e : v.edges) {
        if (!e) continue;
        auto [it, inserted] = edges.emplace(EdgeKey{v.oids, e->op.oid}, e->op.o);
        if (!inserted && it->second != e->op.o) {
          return fail(name, "per-client spaces disagree on an edge",
                      json{{"from", oids_json(v.oids)}, {"oid", to_string(e->op.oid)}});
        }
      }
    }
  }
  std::set<OidSet> css_vertices;
  std::map<EdgeKey, ListOp> css_edges;
  for (const auto& v : server.vertices()) {
    css_vertices.insert(v.oids);
    for (const auto& e : v.edges) css_edges.emplace(EdgeKey{v.oids, e.op.oid}, e.op.o);
  }
  if (vertices != css_vertices) {
    json only_union = json::array();
    json only_css = json::array();
    for (const auto& v : vertices) {
      if (!css_vertices.count(v)) only_union.push_back(oids_json(v));
    }
    for (const auto& v : css_vertices) {
      if (!vertices.count(v)) only_css.push_back(oids_json(v));
    }
    return fail(name, "vertex sets differ", json{{"only_in_union", only_union}, {"only_in_css", only_css}});
  }
  if (edges != css_edges) {
    for (const auto& [key, o] : css_edges) {
      auto it = edges.find(key);
      if (it == edges.end() || it->second != o) {
        return fail(name, "edge sets differ", json{{"from", oids_json(key.first)}, {"oid", to_string(key.second)}});
      }
    }
    return fail(name, "union has edges the n-ary space lacks", json{{"union_edges", edges.size()}, {"css_edges", css_edges.size()}});
  }
  return pass(name);
}

Verdict check_client_subgraph(const StateSpace2D& jupiter, const CssSpace& cjupiter) {
  const std::string name = "client_subgraph";
  for (const auto& v : jupiter.vertices()) {
    auto found = cjupiter.find(v.oids);
    if (!found) return fail(name, "2D vertex missing from the n-ary space", json{{"vertex", oids_json(v.oids)}});
    for (const auto& e : v.edges) {
      if (!e) continue;
      const CssEdge* match = edge_with(cjupiter.vertex(*found), e->op.oid);
      if (!match || match->op.o != e->op.o || match->op.ctx != e->op.ctx ||
          cjupiter.vertex(match->target).oids != jupiter.vertex(e->target).oids) {
        return fail(name, "2D edge missing from the n-ary space",
                    json{{"from", oids_json(v.oids)}, {"oid", to_string(e->op.oid)}, {"op", to_string(e->op.o)}});
      }
    }
  }
  return pass(name);
}

namespace {

// Runs `check` over every space and keeps the first failure, tagged with the
// replica it came from.
template <typename F>
Verdict over_spaces(const std::string& name, const std::vector<const CssSpace*>& spaces, F&& check) {
  for (const auto* s : spaces) {
    Verdict v = check(*s);
    if (!v.satisfied) {
      v.check = name;
      v.witness["replica"] = replica_name(s->rid());
      return v;
    }
  }
  return pass(name);
}

}  // namespace

std::vector<Verdict> check_structural(const RunResult& cjupiter) {
  const int n = cjupiter.trace.schedule.n_clients;
  std::vector<const CssSpace*> spaces;
  for (const auto& [rid, s] : cjupiter.css) spaces.push_back(&s);

  std::vector<Verdict> out;
  out.push_back(over_spaces("n_ary", spaces, [n](const CssSpace& s) { return check_out_degree(s, n); }));
  out.push_back(over_spaces("simple_path", spaces, [](const CssSpace& s) { return check_simple_paths(s); }));
  out.push_back(over_spaces("square_closure", spaces, [](const CssSpace& s) { return check_square_closure(s); }));
  out.push_back(over_spaces("unique_lca", spaces, [](const CssSpace& s) { return check_unique_lca(s); }));
  out.push_back(over_spaces("disjoint_paths", spaces, [](const CssSpace& s) { return check_disjoint_paths(s); }));
  out.push_back(
      over_spaces("compatible_states", spaces, [](const CssSpace& s) { return check_vertex_compatibility(s); }));

  // First-edge paths at the server after every arrival and at the end.
  Verdict first = pass("first_path");
  if (auto server = cjupiter.css.find(kServerId); server != cjupiter.css.end()) {
    first = check_first_paths(server->second, cjupiter.server_arrivals);
    if (auto steps = cjupiter.css_steps.find(kServerId); first.satisfied && steps != cjupiter.css_steps.end()) {
      for (std::size_t k = 0; k < steps->second.size() && first.satisfied; ++k) {
        std::vector<Oid> prefix(cjupiter.server_arrivals.begin(),
                                cjupiter.server_arrivals.begin() + static_cast<std::ptrdiff_t>(k));
        first = check_first_paths(steps->second[k], prefix);
        if (!first.satisfied) first.witness["step"] = k;
      }
    }
  }
  out.push_back(std::move(first));
  out.push_back(check_server_transforms(cjupiter));
  out.push_back(check_compactness(spaces));
  return out;
}

std::vector<Verdict> check_jupiter_relation(const RunResult& cjupiter, const RunResult& jupiter) {
  std::vector<Verdict> out;

  std::vector<const StateSpace2D*> per_client;
  for (const auto& [cid, s] : jupiter.jupiter_server) per_client.push_back(&s);
  auto server = cjupiter.css.find(kServerId);
  out.push_back(server == cjupiter.css.end() ? fail("server_union", "no server space", nullptr)
                                             : check_server_union(server->second, per_client));

  Verdict sub = pass("client_subgraph");
  for (const auto& [cid, steps] : jupiter.jupiter_steps) {
    auto css = cjupiter.css_steps.find(cid);
    if (css == cjupiter.css_steps.end() || css->second.size() != steps.size()) {
      sub = fail("client_subgraph", "step snapshots do not line up", json{{"replica", replica_name(cid)}});
      break;
    }
    for (std::size_t k = 0; k < steps.size() && sub.satisfied; ++k) {
      sub = check_client_subgraph(steps[k], css->second[k]);
      if (!sub.satisfied) {
        sub.witness["replica"] = replica_name(cid);
        sub.witness["step"] = k;
      }
    }
    if (!sub.satisfied) break;
  }
  out.push_back(std::move(sub));

  Verdict closure = pass("square_closure_2d");
  for (const auto* group : {&jupiter.jupiter_clients, &jupiter.jupiter_server}) {
    for (const auto& [cid, s] : *group) {
      if (!closure.satisfied) break;
      closure = check_square_closure(s);
      if (!closure.satisfied) closure.witness["replica"] = replica_name(cid);
    }
  }
  out.push_back(std::move(closure));
  return out;
}

}  // namespace otwb
