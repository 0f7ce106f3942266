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

#include <gtest/gtest.h>

#include "otwb/checkers.hpp"
#include "test_util.hpp"

using namespace otwb;
using namespace otwb::testing;

namespace {

ListState lst(const std::string& s) {
  // Elements keyed by glyph so the same glyph means the same element.
  ListState out;
  for (char g : s) out.push_back(Element{g, 1 + (g - 'a'), 1});
  return out;
}

DoEvent read_event(ReplicaId r, const std::string& s) { return DoEvent{0, r, ListOp::read(), std::nullopt, lst(s)}; }

DoEvent ins_event(ReplicaId r, char g, std::size_t pos, const std::string& after) {
  Element e{g, 1 + (g - 'a'), 1};
  return DoEvent{0, r, ListOp::ins(e, pos, priority_of(r)), e.id(), lst(after)};
}

AbstractExecution with_vis(std::vector<DoEvent> h, const std::vector<std::pair<int, int>>& edges) {
  AbstractExecution a;
  a.history = std::move(h);
  a.vis.assign(a.history.size(), std::vector<bool>(a.history.size(), false));
  for (auto [i, j] : edges) a.vis[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] = true;
  return a;
}

std::size_t do_position(const AbstractExecution& a, Oid oid) {
  for (std::size_t i = 0; i < a.history.size(); ++i) {
    if (a.history[i].oid == oid) return i;
  }
  throw std::out_of_range(to_string(oid));
}

}  // namespace

TEST(AbstractExecution, EmptyTrace) {
  auto a = build_abstract_execution(Trace{});
  EXPECT_TRUE(a.history.empty());
  EXPECT_TRUE(check_convergence(a).satisfied);
  EXPECT_TRUE(check_weak_spec(a).satisfied);
  EXPECT_TRUE(check_strong_spec(a).satisfied);
}

TEST(AbstractExecution, ScenarioVisibility) {
  auto a = build_abstract_execution(run(podc16_schedule()).trace);
  const auto i1 = do_position(a, {1, 1});
  const auto i3 = do_position(a, {2, 1});
  const auto i4 = do_position(a, {3, 1});
  EXPECT_TRUE(a.vis[i1][i3]);
  EXPECT_FALSE(a.vis[i3][i4]);
  EXPECT_FALSE(a.vis[i4][i3]);
}

TEST(AbstractExecution, SingleReplicaIsTotal) {
  auto a = build_abstract_execution(run(random_schedule(1, 6, 3)).trace);
  for (std::size_t i = 0; i < a.history.size(); ++i) {
    for (std::size_t j = 0; j < a.history.size(); ++j) EXPECT_EQ(a.vis[i][j], i < j);
  }
}

TEST(Convergence, ScenarioConverges) {
  EXPECT_TRUE(check_convergence(build_abstract_execution(run(podc16_schedule()).trace)).satisfied);
}

TEST(Convergence, SingleReadIsVacuous) {
  auto a = with_vis({read_event(1, "")}, {});
  EXPECT_TRUE(check_convergence(a).satisfied);
}

TEST(Convergence, CorruptedReadIsCaught) {
  auto t = run(podc16_schedule()).trace;
  for (auto it = t.events.rbegin(); it != t.events.rend(); ++it) {
    if (it->op.kind == OpKind::kRead) {
      std::reverse(it->list.begin(), it->list.end());
      break;
    }
  }
  auto v = check_convergence(build_abstract_execution(t));
  EXPECT_FALSE(v.satisfied);
  EXPECT_TRUE(v.witness.contains("first"));
}

TEST(ListOrder, ExampleLists) {
  auto lo = build_list_order(std::vector<ListState>{lst("ba"), lst("ax"), lst("xb")});
  const Oid a = lst("a")[0].id(), b = lst("b")[0].id(), x = lst("x")[0].id();
  EXPECT_TRUE(lo.count({b, a}));
  EXPECT_TRUE(lo.count({a, x}));
  EXPECT_TRUE(lo.count({x, b}));
  EXPECT_EQ(lo.size(), 3U);
  EXPECT_EQ(build_list_order(std::vector<ListState>{lst("ab")}), (ListOrder{{a, b}}));
}

TEST(ListOrder, MatchesPairScan) {
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    auto a = build_abstract_execution(run(corpus_schedule(seed)).trace);
    ListOrder oracle;
    for (const auto& e : a.history) {
      for (std::size_t p = 0; p < e.list.size(); ++p)
        for (std::size_t q = 0; q < e.list.size(); ++q)
          if (p < q) oracle.insert({e.list[p].id(), e.list[q].id()});
    }
    EXPECT_EQ(build_list_order(a), oracle);
  }
}

TEST(WeakSpec, ScenarioSatisfies) {
  EXPECT_TRUE(check_weak_spec(build_abstract_execution(run(podc16_schedule()).trace)).satisfied);
}

TEST(WeakSpec, AllowsThreeCyclicButPairwiseCompatibleLists) {
  auto a = build_abstract_execution(run(podc16_schedule()).trace);
  std::set<std::string> returned;
  for (const auto& e : a.history) returned.insert(glyphs(e.list));
  EXPECT_TRUE(returned.count("ax") && returned.count("xb") && returned.count("ba"));
  EXPECT_TRUE(check_weak_spec(a).satisfied);
}

TEST(WeakSpec, RejectsOppositeOrders) {
  // a and b inserted concurrently, then both seen everywhere, read back in
  // opposite orders.
  auto a = with_vis({ins_event(1, 'a', 0, "a"), ins_event(2, 'b', 0, "b"), read_event(1, "ab"), read_event(2, "ba")},
                    {{0, 2}, {1, 2}, {0, 3}, {1, 3}});
  auto v = check_weak_spec(a);
  EXPECT_FALSE(v.satisfied);
  EXPECT_TRUE(v.witness.contains("pair"));
}

TEST(WeakSpec, RejectsMissingElement) {
  auto a = with_vis({ins_event(1, 'a', 0, "a"), read_event(1, "")}, {{0, 1}});
  EXPECT_FALSE(check_weak_spec(a).satisfied);
}

TEST(WeakSpec, RejectsMisplacedInsert) {
  auto a = with_vis({ins_event(1, 'b', 0, "b"), ins_event(1, 'a', 0, "ba")}, {{0, 1}});
  EXPECT_FALSE(check_weak_spec(a).satisfied);
}

TEST(StrongSpec, ScenarioHasThreeCycle) {
  auto v = check_strong_spec(build_abstract_execution(run(podc16_schedule()).trace));
  ASSERT_FALSE(v.satisfied);
  std::string g = v.witness.at("glyphs");
  std::sort(g.begin(), g.end());
  EXPECT_EQ(g, "abx");
}

TEST(StrongSpec, LargerWinsAvoidsTheCycle) {
  auto r = run(podc16_schedule(), RunConfig{Protocol::kCJupiter, PriorityRule::kLargerWins, false});
  EXPECT_TRUE(check_strong_spec(build_abstract_execution(r.trace)).satisfied);
}

TEST(StrongSpec, SingleReplicaSatisfies) {
  EXPECT_TRUE(check_strong_spec(build_abstract_execution(run(random_schedule(1, 8, 5)).trace)).satisfied);
}

TEST(StrongSpec, LinearSchedulesSatisfy) {
  // Every update fully propagated before the next one is generated.
  Schedule s;
  s.n_clients = 3;
  const char glyph[] = "abcdef";
  for (int k = 0; k < 6; ++k) {
    const ReplicaId c = 1 + k % 3;
    s.steps.push_back(gen_ins(c, glyph[k], static_cast<std::size_t>(k % 2)));
    s.steps.push_back(deliver(kServerId, c));
    for (ReplicaId d = 1; d <= 3; ++d) {
      if (d != c) s.steps.push_back(deliver(d, kServerId));
    }
    s.steps.push_back(gen_read(1 + (k + 1) % 3));
  }
  EXPECT_TRUE(check_strong_spec(build_abstract_execution(run(s).trace)).satisfied);
}

TEST(PairwiseCompatibility, Examples) {
  EXPECT_TRUE(check_pairwise_compatibility({lst("ba"), lst("ax"), lst("xb")}).satisfied);
  auto v = check_pairwise_compatibility({lst("ab"), lst("ba")});
  EXPECT_FALSE(v.satisfied);
  EXPECT_TRUE(v.witness.contains("a"));
}

TEST(Equivalence, ScenarioAndEmpty) {
  auto s = podc16_schedule();
  EXPECT_TRUE(check_equivalence(run(s).trace, run(s, RunConfig{Protocol::kJupiter}).trace).satisfied);
  Schedule empty;
  EXPECT_TRUE(check_equivalence(run(empty).trace, run(empty, RunConfig{Protocol::kJupiter}).trace).satisfied);
}

TEST(Equivalence, ScheduleMismatchIsRejected) {
  EXPECT_THROW(check_equivalence(run(podc16_schedule()).trace, run(random_schedule(2, 2, 1)).trace),
               std::invalid_argument);
}

TEST(Equivalence, DivergenceIsReported) {
  auto s = podc16_schedule();
  auto j = run(s, RunConfig{Protocol::kJupiter}).trace;
  for (auto& e : j.events) {
    if (e.type == EventType::kReceive && e.replica == 3) {
      e.list.clear();
      break;
    }
  }
  auto v = check_equivalence(run(s).trace, j);
  EXPECT_FALSE(v.satisfied);
  EXPECT_EQ(v.witness.at("replica"), "c3");
}

TEST(Simulation, ScenarioMatches) {
  auto s = podc16_schedule();
  EXPECT_TRUE(check_simulation(run(s).trace, run(s, RunConfig{Protocol::kDJupiter}).trace).satisfied);
}

TEST(Structural, ScenarioPassesEverything) {
  auto cj = run(podc16_schedule(), RunConfig{Protocol::kCJupiter, std::nullopt, true});
  auto j = run(podc16_schedule(), RunConfig{Protocol::kJupiter, std::nullopt, true});
  for (const auto& v : check_structural(cj)) EXPECT_TRUE(v.satisfied) << v.check << " " << v.witness.dump();
  for (const auto& v : check_jupiter_relation(cj, j)) EXPECT_TRUE(v.satisfied) << v.check << " " << v.witness.dump();
  EXPECT_EQ(cj.css.at(kServerId).size(), 8U);
}

TEST(Structural, SingleClientIsAChain) {
  auto cj = run(random_schedule(1, 5, 9), RunConfig{Protocol::kCJupiter, std::nullopt, true});
  for (const auto& v : check_structural(cj)) EXPECT_TRUE(v.satisfied) << v.check;
  for (const auto& v : cj.css.at(kServerId).vertices()) EXPECT_LE(v.edges.size(), 1U);
}

TEST(Structural, ChecksNoticeBrokenInputs) {
  auto cj = run(podc16_schedule(), RunConfig{Protocol::kCJupiter, std::nullopt, true});
  auto j = run(podc16_schedule(), RunConfig{Protocol::kJupiter, std::nullopt, true});
  const auto& server = cj.css.at(kServerId);
  EXPECT_FALSE(check_out_degree(server, 2).satisfied);

  auto shuffled = cj.server_arrivals;
  std::swap(shuffled[2], shuffled[3]);
  EXPECT_FALSE(check_first_paths(server, shuffled).satisfied);

  const auto& partial = cj.css_steps.at(3)[2];
  EXPECT_FALSE(check_compactness({&server, &partial}).satisfied);

  std::vector<const StateSpace2D*> only_c1 = {&j.jupiter_server.at(1)};
  EXPECT_FALSE(check_server_union(server, only_c1).satisfied);

  EXPECT_FALSE(check_client_subgraph(j.jupiter_clients.at(3), cj.css_steps.at(3)[1]).satisfied);

  auto bad = cj;
  bad.server_transforms[3].against.pop_back();
  EXPECT_FALSE(check_server_transforms(bad).satisfied);
}

TEST(Structural, FuzzedRunsPass) {
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    auto s = corpus_schedule(seed);
    auto cj = run(s, RunConfig{Protocol::kCJupiter, std::nullopt, true});
    auto j = run(s, RunConfig{Protocol::kJupiter, std::nullopt, true});
    for (const auto& v : check_structural(cj)) EXPECT_TRUE(v.satisfied) << seed << " " << v.check;
    for (const auto& v : check_jupiter_relation(cj, j)) EXPECT_TRUE(v.satisfied) << seed << " " << v.check;
  }
}

TEST(Consistency, WeakImpliesConvergence) {
  for (std::uint64_t seed = 0; seed < 200; ++seed) {
    auto a = build_abstract_execution(run(corpus_schedule(seed)).trace);
    if (check_weak_spec(a).satisfied) EXPECT_TRUE(check_convergence(a).satisfied) << seed;
  }
}

TEST(Consistency, StrongFailureNeedsIncompatibilityOrALongCycle) {
  for (std::uint64_t seed = 0; seed < 300; ++seed) {
    auto a = build_abstract_execution(run(corpus_schedule(seed)).trace);
    auto strong = check_strong_spec(a);
    if (strong.satisfied) continue;
    std::vector<ListState> lists;
    for (const auto& e : a.history) lists.push_back(e.list);
    const bool incompatible = !check_pairwise_compatibility(lists).satisfied;
    EXPECT_TRUE(incompatible || strong.witness.at("cycle").size() >= 3) << seed;
  }
}
