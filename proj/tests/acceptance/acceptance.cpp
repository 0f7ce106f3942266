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

// Acceptance run: one PASS/FAIL line per criterion, exit 1 if any fails.

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <functional>
#include <iostream>
#include <set>
#include <string>
#include <vector>

#include "otwb/checkers.hpp"
#include "otwb/json_io.hpp"
#include "otwb/simnet.hpp"

using namespace otwb;

namespace {

constexpr std::uint64_t kCorpusSeeds = 1000;

struct Outcome {
  bool pass = true;
  std::string note;

  void fail(const std::string& why) {
    if (pass) note = why;
    pass = false;
  }
};

const Oid o1{1, 1}, o2{1, 2}, o3{2, 1}, o4{3, 1};

std::string failing_checks(const std::vector<Verdict>& vs) {
  std::string out;
  for (const auto& v : vs) {
    if (!v.satisfied) out += (out.empty() ? "" : ",") + v.check;
  }
  return out;
}

Outcome golden_run() {
  Outcome o;
  const auto r = run(podc16_schedule());
  std::vector<std::string> server;
  for (const auto& e : r.trace.events) {
    if (e.replica == kServerId && e.type == EventType::kReceive) server.push_back(glyphs(e.list));
  }
  if (server != std::vector<std::string>{"x", "", "a", "ba"}) o.fail("server lists differ");
  auto list_at = [&](ReplicaId rid, const OidSet& oids) -> std::string {
    const auto& space = r.css.at(rid);
    auto v = space.find(oids);
    return v ? glyphs(materialize(space)[*v]) : std::string("<missing>");
  };
  if (list_at(2, {o1, o3}) != "ax") o.fail("c2 v13 is not \"ax\"");
  if (list_at(3, {o1, o4}) != "xb") o.fail("c3 v14 is not \"xb\"");
  bool c2_saw = false, c3_saw = false;
  for (const auto& e : r.trace.events) {
    if (e.replica == 2 && e.type != EventType::kSend && glyphs(e.list) == "ax") c2_saw = true;
    if (e.replica == 3 && e.type != EventType::kSend && glyphs(e.list) == "xb") c3_saw = true;
  }
  if (!c2_saw || !c3_saw) o.fail("c2/c3 never held the intermediate list");
  if (r.lists.size() != 4) o.fail("expected four replicas");
  for (const auto& [rid, list] : r.lists) {
    if (glyphs(list) != "ba") o.fail(replica_name(rid) + " ends at \"" + glyphs(list) + "\"");
  }
  return o;
}

Outcome compactness() {
  Outcome o;
  const auto r = run(podc16_schedule());
  const std::set<OidSet> expected = {{},         {o1},         {o1, o2},         {o1, o3},
                                     {o1, o4},   {o1, o2, o3}, {o1, o2, o4},     {o1, o2, o3, o4}};
  std::vector<const CssSpace*> spaces;
  for (const auto& [rid, s] : r.css) {
    spaces.push_back(&s);
    std::set<OidSet> got;
    for (const auto& v : s.vertices()) got.insert(v.oids);
    if (got != expected || s.size() != expected.size()) o.fail(replica_name(rid) + " has other vertices");
  }
  if (spaces.size() != 4) o.fail("expected four spaces");
  const auto v = check_compactness(spaces);
  if (!v.satisfied) o.fail(v.detail);
  return o;
}

struct CorpusRuns {
  RunResult cj, j, dj;
};

CorpusRuns run_all(const Schedule& s) {
  return {run(s, RunConfig{Protocol::kCJupiter, std::nullopt, true}),
          run(s, RunConfig{Protocol::kJupiter, std::nullopt, true}),
          run(s, RunConfig{Protocol::kDJupiter})};
}

std::vector<Schedule> corpus() {
  std::vector<Schedule> out;
  for (std::uint64_t s = 0; s < kCorpusSeeds; ++s) out.push_back(corpus_schedule(s));
  return out;
}

Outcome equivalence(const std::vector<Schedule>& schedules) {
  Outcome o;
  auto one = [&](const Schedule& s, const std::string& name) {
    const auto v = check_equivalence(run(s).trace, run(s, RunConfig{Protocol::kJupiter}).trace);
    if (!v.satisfied) o.fail(name + ": " + v.witness.dump());
  };
  one(podc16_schedule(), "podc16");
  for (const auto& s : schedules) one(s, "seed " + std::to_string(s.rng->seed));
  return o;
}

Outcome cp1_exhaustive() {
  Outcome o;
  constexpr std::size_t kMaxPos = 5;
  constexpr int kPriorities = 3;
  constexpr std::size_t kMaxLen = 4;
  long checked = 0;

  auto ops_for = [&](int pri, char glyph) {
    std::vector<ListOp> out{ListOp::nop()};
    for (std::size_t p = 0; p <= kMaxPos; ++p) {
      out.push_back(ListOp::ins(Element{glyph, pri, 1}, p, priority_of(pri)));
      out.push_back(ListOp::del(p, priority_of(pri)));
    }
    return out;
  };

  for (PriorityRule rule : {PriorityRule::kSmallerWins, PriorityRule::kLargerWins}) {
    for (std::size_t len = 0; len <= kMaxLen; ++len) {
      ListState base;
      for (std::size_t i = 0; i < len; ++i) base.push_back(Element{static_cast<char>('p' + i), 9, static_cast<int>(i + 1)});
      for (int p1 = 1; p1 <= kPriorities; ++p1) {
        for (int p2 = 1; p2 <= kPriorities; ++p2) {
          // Two concurrent operations never come from the same client.
          if (p1 == p2) continue;
          for (const auto& a : ops_for(p1, 'a')) {
            if (!applicable(base, a)) continue;
            for (const auto& b : ops_for(p2, 'b')) {
              if (!applicable(base, b)) continue;
              ++checked;
              if (!check_cp1(a, b, base, rule)) {
                o.fail(to_string(a) + " vs " + to_string(b) + " on length " + std::to_string(len));
              }
            }
          }
        }
      }
    }
  }
  if (o.pass) o.note = std::to_string(checked) + " pairs";
  return o;
}

std::string pad(int k) { return k < 10 ? " " + std::to_string(k) : std::to_string(k); }

}  // namespace

int main() {
  using Clock = std::chrono::steady_clock;
  bool all = true;
  auto report = [&](int k, const std::string& title, Outcome o, double secs, double limit) {
    if (limit > 0 && secs >= limit) o.fail("took " + std::to_string(secs) + " s");
    all = all && o.pass;
    std::printf("%s %s  %-28s %7.2fs%s%s\n", o.pass ? "PASS" : "FAIL", pad(k).c_str(), title.c_str(), secs,
                o.note.empty() ? "" : "  ", o.note.c_str());
    std::fflush(stdout);
  };
  auto timed = [](const std::function<Outcome()>& f, double& secs) {
    const auto t0 = Clock::now();
    Outcome o;
    try {
      o = f();
    } catch (const std::exception& e) {
      o.fail(std::string("exception: ") + e.what());
    }
    secs = std::chrono::duration<double>(Clock::now() - t0).count();
    return o;
  };

  double secs = 0;
  auto o = timed(golden_run, secs);
  report(1, "golden run", o, secs, 1.0);

  o = timed(compactness, secs);
  report(2, "compactness", o, secs, 0);

  const auto schedules = corpus();
  o = timed([&] { return equivalence(schedules); }, secs);
  report(3, "jupiter/cjupiter equivalence", o, secs, 60.0);

  // Criteria 4, 5, 7, 9 share one pass over the corpus.
  Outcome union_o, subgraph_o, weak_o, structural_o;
  double union_s = 0, subgraph_s = 0, weak_s = 0, structural_s = 0;
  for (const auto& s : schedules) {
    const std::string seed = "seed " + std::to_string(s.rng->seed);
    CorpusRuns r;
    try {
      r = run_all(s);
    } catch (const std::exception& e) {
      weak_o.fail(seed + ": " + e.what());
      continue;
    }
    auto t0 = Clock::now();
    for (const auto& v : check_jupiter_relation(r.cj, r.j)) {
      if (v.check == "server_union" && !v.satisfied) union_o.fail(seed + ": " + v.detail);
      if (v.check == "client_subgraph" && !v.satisfied) subgraph_o.fail(seed + ": " + v.detail);
    }
    auto t1 = Clock::now();
    for (const RunResult* run : {&r.cj, &r.j, &r.dj}) {
      const auto a = build_abstract_execution(run->trace);
      const auto weak = check_weak_spec(a);
      const auto conv = check_convergence(a);
      if (!weak.satisfied || !conv.satisfied) weak_o.fail(seed + " " + to_string(run->trace.protocol));
    }
    auto t2 = Clock::now();
    const auto structural = check_structural(r.cj);
    if (!all_satisfied(structural)) structural_o.fail(seed + ": " + failing_checks(structural));
    auto t3 = Clock::now();
    union_s += std::chrono::duration<double>(t1 - t0).count() / 2;
    subgraph_s += std::chrono::duration<double>(t1 - t0).count() / 2;
    weak_s += std::chrono::duration<double>(t2 - t1).count();
    structural_s += std::chrono::duration<double>(t3 - t2).count();
  }
  report(4, "server-space union", union_o, union_s, 0);
  report(5, "client subgraph", subgraph_o, subgraph_s, 0);

  o = timed(cp1_exhaustive, secs);
  report(6, "CP1 exhaustive", o, secs, 30.0);

  report(7, "weak spec + convergence", weak_o, weak_s, 0);

  o = timed(
      [] {
        Outcome out;
        const auto v = check_strong_spec(build_abstract_execution(run(podc16_schedule()).trace));
        if (v.satisfied) {
          out.fail("strong spec satisfied");
          return out;
        }
        std::set<char> got;
        for (char g : v.witness.at("glyphs").get<std::string>()) got.insert(g);
        if (got != std::set<char>{'a', 'x', 'b'}) out.fail("cycle over " + v.witness.dump());
        out.note = "cycle " + v.witness.at("glyphs").get<std::string>();
        return out;
      },
      secs);
  report(8, "strong spec counterexample", o, secs, 0);

  report(9, "structural properties", structural_o, structural_s, 120.0);

  o = timed(
      [&] {
        Outcome out;
        for (const auto& s : schedules) {
          for (Protocol p : {Protocol::kCJupiter, Protocol::kJupiter, Protocol::kDJupiter}) {
            const auto a = to_json(run(s, RunConfig{p}).trace).dump();
            const auto b = to_json(run(s, RunConfig{p}).trace).dump();
            if (a != b) out.fail("seed " + std::to_string(s.rng->seed) + " " + to_string(p));
          }
        }
        return out;
      },
      secs);
  report(10, "deterministic trace JSON", o, secs, 0);

  std::cout << (all ? "all criteria PASS" : "some criteria FAIL") << "\n";
  return all ? 0 : 1;
}
