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

#include "otwb/cli.hpp"

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <set>
#include <sstream>

#include "CLI11.hpp"

#include "otwb/checkers.hpp"
#include "otwb/dot.hpp"
#include "otwb/errors.hpp"
#include "otwb/json_io.hpp"
#include "otwb/simnet.hpp"

namespace otwb {

namespace {

namespace fs = std::filesystem;
using nlohmann::json;

constexpr int kExitOk = 0;
constexpr int kExitFailed = 1;
constexpr int kExitUsage = 2;

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

const std::vector<std::string> kAllChecks = {"convergence", "weak", "strong", "equivalence", "simulation", "structural"};

struct Options {
  std::string protocol = "cjupiter";
  std::string schedule = "builtin:podc16";
  std::uint64_t seed = 0;
  int clients = 3;
  int ops = 4;
  std::vector<std::string> checks;
  std::vector<std::string> expect_violation;
  std::string priority;
  std::string format = "text";
  std::string out_dir;
  bool dot = false;
  bool steps = false;
  std::uint64_t seeds = 1000;
};

std::vector<std::string> split_list(const std::vector<std::string>& raw) {
  std::vector<std::string> out;
  for (const auto& item : raw) {
    std::stringstream ss(item);
    std::string part;
    while (std::getline(ss, part, ',')) {
      if (!part.empty()) out.push_back(part);
    }
  }
  return out;
}

// Canonical check tokens; "weak_spec" and "strong_spec" are accepted too.
std::string check_token(std::string s) {
  if (s == "weak_spec") return "weak";
  if (s == "strong_spec") return "strong";
  if (s != "all" && std::find(kAllChecks.begin(), kAllChecks.end(), s) == kAllChecks.end()) {
    throw UsageError("unknown check \"" + s + "\"");
  }
  return s;
}

std::vector<std::string> resolve_checks(const std::vector<std::string>& raw, bool fuzz) {
  std::vector<std::string> out;
  auto add = [&out](const std::string& c) {
    if (std::find(out.begin(), out.end(), c) == out.end()) out.push_back(c);
  };
  for (const auto& item : split_list(raw)) {
    const std::string c = check_token(item);
    if (c != "all") {
      add(c);
      continue;
    }
    for (const auto& each : kAllChecks) {
      // Random schedules satisfy the strong spec only by luck.
      if (!(fuzz && each == "strong")) add(each);
    }
  }
  return out;
}

std::optional<std::uint64_t> env_seed() {
  const char* raw = std::getenv("OTWB_SEED");
  if (raw == nullptr || *raw == '\0') return std::nullopt;
  try {
    std::size_t used = 0;
    auto v = std::stoull(raw, &used);
    if (used != std::string(raw).size()) throw std::invalid_argument(raw);
    return v;
  } catch (const std::exception&) {
    throw UsageError(std::string("OTWB_SEED is not an unsigned integer: ") + raw);
  }
}

Protocol parse_protocol(const std::string& s) {
  auto p = protocol_from_string(s);
  if (!p) throw UsageError("unknown protocol \"" + s + "\"");
  return *p;
}

Schedule resolve_schedule(const Options& o) {
  Schedule s;
  if (o.schedule == "builtin:podc16") {
    s = podc16_schedule();
  } else if (o.schedule == "random") {
    if (o.clients < 1 || o.ops < 0) throw UsageError("--clients must be >= 1 and --ops >= 0");
    s = random_schedule(o.clients, o.ops, o.seed);
  } else if (o.schedule.rfind("builtin:", 0) == 0) {
    throw UsageError("unknown builtin schedule \"" + o.schedule + "\"");
  } else {
    s = load_schedule(o.schedule);
  }
  if (!o.priority.empty()) {
    auto rule = priority_rule_from_string(o.priority);
    if (!rule) throw UsageError("unknown priority rule \"" + o.priority + "\"");
    s.priority_rule = *rule;
  }
  return s;
}

void write_file(const fs::path& path, const std::string& content) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot write " + path.string());
  f << content;
  if (!f) throw std::runtime_error("cannot write " + path.string());
}

fs::path prepare_dir(const std::string& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec || !fs::is_directory(dir)) throw std::runtime_error("cannot create directory " + dir);
  return fs::path(dir);
}

// Lazily runs the schedule under each protocol at most once.
class Runs {
 public:
  explicit Runs(Schedule schedule) : schedule_(std::move(schedule)) {}

  const RunResult& get(Protocol p) {
    auto it = cache_.find(p);
    if (it == cache_.end()) it = cache_.emplace(p, run(schedule_, RunConfig{p, std::nullopt, true})).first;
    return it->second;
  }
  const Schedule& schedule() const { return schedule_; }

 private:
  Schedule schedule_;
  std::map<Protocol, RunResult> cache_;
};

std::vector<Verdict> evaluate(Runs& runs, const std::vector<Protocol>& protocols, const std::vector<std::string>& checks) {
  std::vector<Verdict> out;
  auto tag = [&](Verdict v, Protocol p) {
    if (protocols.size() > 1) v.check += "[" + to_string(p) + "]";
    return v;
  };
  for (const auto& c : checks) {
    if (c == "convergence" || c == "weak" || c == "strong") {
      for (Protocol p : protocols) {
        const auto a = build_abstract_execution(runs.get(p).trace);
        out.push_back(tag(c == "convergence" ? check_convergence(a)
                          : c == "weak"      ? check_weak_spec(a)
                                             : check_strong_spec(a),
                          p));
      }
    } else if (c == "equivalence") {
      out.push_back(check_equivalence(runs.get(Protocol::kCJupiter).trace, runs.get(Protocol::kJupiter).trace));
    } else if (c == "simulation") {
      out.push_back(check_simulation(runs.get(Protocol::kCJupiter).trace, runs.get(Protocol::kDJupiter).trace));
    } else if (c == "structural") {
      for (auto& v : check_structural(runs.get(Protocol::kCJupiter))) out.push_back(std::move(v));
      for (auto& v : check_jupiter_relation(runs.get(Protocol::kCJupiter), runs.get(Protocol::kJupiter))) {
        out.push_back(std::move(v));
      }
    }
  }
  return out;
}

bool expected_violation(const Verdict& v, const std::set<std::string>& expect) {
  const std::string base = v.check.substr(0, v.check.find('['));
  return expect.count(base) != 0;
}

std::set<std::string> expectation_set(const std::vector<std::string>& raw) {
  std::set<std::string> out;
  for (const auto& item : split_list(raw)) {
    const std::string c = check_token(item);
    if (c == "all") throw UsageError("--expect-violation needs specific checks");
    out.insert(c == "weak" ? "weak_spec" : c == "strong" ? "strong_spec" : c);
  }
  return out;
}

json verdict_report(const Verdict& v, bool expected) {
  json j = to_json(v);
  if (expected) j["expected_violation"] = true;
  return j;
}

int cmd_run(const Options& o, std::ostream& out) {
  const Protocol protocol = parse_protocol(o.protocol);
  Runs runs(resolve_schedule(o));
  const auto checks = resolve_checks(o.checks, false);
  auto expect = expectation_set(o.expect_violation);
  if (o.schedule == "builtin:podc16") expect.insert("strong_spec");

  const RunResult& main = runs.get(protocol);
  const auto verdicts = evaluate(runs, {protocol}, checks);

  bool ok = true;
  json report_verdicts = json::array();
  for (const auto& v : verdicts) {
    const bool exp = expected_violation(v, expect);
    ok = ok && (v.satisfied != exp);
    report_verdicts.push_back(verdict_report(v, exp));
  }
  json lists = json::object();
  for (const auto& [rid, list] : main.lists) lists[replica_name(rid)] = glyphs(list);
  json report{{"format", kFormatVersion},
              {"protocol", to_string(protocol)},
              {"schedule", o.schedule},
              {"lists", lists},
              {"verdicts", report_verdicts},
              {"ok", ok}};

  if (!o.out_dir.empty()) {
    const auto dir = prepare_dir(o.out_dir);
    write_file(dir / "schedule.json", to_json(runs.schedule()).dump(2) + "\n");
    write_file(dir / "trace.json", to_json(main.trace).dump(2) + "\n");
    write_file(dir / "verdicts.json", report.dump(2) + "\n");
    if (o.dot) {
      for (const auto& [rid, s] : main.css) write_file(dir / (replica_name(rid) + ".dot"), to_dot(s, replica_name(rid)));
      for (const auto& [cid, s] : main.jupiter_clients) {
        write_file(dir / (replica_name(cid) + ".dot"), to_dot(s, replica_name(cid)));
      }
      for (const auto& [cid, s] : main.jupiter_server) {
        const std::string name = "server-" + replica_name(cid);
        write_file(dir / (name + ".dot"), to_dot(s, name));
      }
    }
  }

  if (o.format == "json") {
    out << report.dump(2) << "\n";
    return ok ? kExitOk : kExitFailed;
  }
  out << "protocol " << to_string(protocol) << ", schedule " << o.schedule << " (" << runs.schedule().n_clients
      << " clients, " << runs.schedule().steps.size() << " steps)\n";
  out << "final lists:";
  for (const auto& [rid, list] : main.lists) out << " " << replica_name(rid) << "=\"" << glyphs(list) << "\"";
  out << "\n";
  for (const auto& v : verdicts) {
    const bool exp = expected_violation(v, expect);
    out << "  " << v.check << ": " << (v.satisfied ? "satisfied" : "VIOLATED");
    if (exp) out << (v.satisfied ? " (violation expected)" : " (expected)");
    if (!v.satisfied) out << " - " << v.detail << " " << v.witness.dump();
    out << "\n";
  }
  out << (ok ? "OK" : "FAILED") << "\n";
  return ok ? kExitOk : kExitFailed;
}

int cmd_fuzz(const Options& o, std::ostream& out) {
  if (o.clients < 1 || o.ops < 1) throw UsageError("--clients and --ops must be >= 1");
  std::vector<Protocol> protocols = {Protocol::kCJupiter, Protocol::kJupiter, Protocol::kDJupiter};
  if (!o.protocol.empty()) protocols = {parse_protocol(o.protocol)};
  auto raw_checks = o.checks.empty() ? std::vector<std::string>{"all"} : o.checks;
  const auto checks = resolve_checks(raw_checks, true);
  const auto expect = expectation_set(o.expect_violation);

  std::optional<fs::path> dir;
  if (!o.out_dir.empty()) dir = prepare_dir(o.out_dir);

  json failures = json::array();
  const auto clients = static_cast<std::uint64_t>(o.clients);
  const auto ops = static_cast<std::uint64_t>(o.ops);
  for (std::uint64_t s = o.seed; s < o.seed + o.seeds; ++s) {
    Schedule schedule =
        random_schedule(static_cast<int>(1 + s % clients), static_cast<int>(1 + (s / clients) % ops), s);
    if (!o.priority.empty()) schedule.priority_rule = *priority_rule_from_string(o.priority);
    Runs runs(schedule);
    json bad = json::array();
    try {
      for (const auto& v : evaluate(runs, protocols, checks)) {
        const bool exp = expected_violation(v, expect);
        if (v.satisfied == exp) bad.push_back(verdict_report(v, exp));
      }
    } catch (const std::exception& e) {
      bad.push_back(json{{"check", "run"}, {"satisfied", false}, {"detail", e.what()}});
    }
    if (bad.empty()) continue;
    failures.push_back(json{{"seed", s}, {"verdicts", bad}});
    if (dir) write_file(*dir / ("seed-" + std::to_string(s) + ".json"), to_json(schedule).dump(2) + "\n");
    if (o.format != "json") out << "seed " << s << ": " << bad.dump() << "\n";
  }

  const bool ok = failures.empty();
  if (o.format == "json") {
    out << json{{"format", kFormatVersion}, {"first_seed", o.seed}, {"seeds", o.seeds}, {"failures", failures}, {"ok", ok}}
               .dump(2)
        << "\n";
  } else {
    out << "fuzz: " << o.seeds << " seeds from " << o.seed << ", " << failures.size() << " failing\n";
  }
  return ok ? kExitOk : kExitFailed;
}

int cmd_export_dot(const Options& o, std::ostream& out) {
  const Protocol protocol = parse_protocol(o.protocol);
  const RunResult r = run(resolve_schedule(o), RunConfig{protocol, std::nullopt, o.steps});
  const auto dir = prepare_dir(o.out_dir);
  std::vector<std::string> written;
  auto emit = [&](const std::string& name, const std::string& body) {
    write_file(dir / (name + ".dot"), body);
    written.push_back(name + ".dot");
  };
  for (const auto& [rid, s] : r.css) emit(replica_name(rid), to_dot(s, replica_name(rid)));
  for (const auto& [cid, s] : r.jupiter_clients) emit(replica_name(cid), to_dot(s, replica_name(cid)));
  for (const auto& [cid, s] : r.jupiter_server) emit("server-" + replica_name(cid), to_dot(s, "server-" + replica_name(cid)));
  for (const auto& [rid, steps] : r.css_steps) {
    for (std::size_t k = 0; k < steps.size(); ++k) {
      const std::string name = replica_name(rid) + "-step" + std::to_string(k);
      emit(name, to_dot(steps[k], name));
    }
  }
  for (const auto& [cid, steps] : r.jupiter_steps) {
    for (std::size_t k = 0; k < steps.size(); ++k) {
      const std::string name = replica_name(cid) + "-step" + std::to_string(k);
      emit(name, to_dot(steps[k], name));
    }
  }
  for (const auto& w : written) out << (dir / w).string() << "\n";
  return kExitOk;
}

void add_schedule_options(CLI::App* cmd, Options& o) {
  cmd->add_option("--protocol", o.protocol, "cjupiter | jupiter | djupiter");
  cmd->add_option("--schedule", o.schedule, "schedule file, builtin:podc16, or random");
  cmd->add_option("--seed", o.seed, "seed for --schedule random (OTWB_SEED overrides)");
  cmd->add_option("--clients", o.clients, "clients for --schedule random");
  cmd->add_option("--ops", o.ops, "updates for --schedule random");
  cmd->add_option("--priority", o.priority, "smaller_wins | larger_wins");
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"otwb: replay and check Jupiter-family OT protocols"};
  app.name("otwb");
  app.require_subcommand(1);

  Options o;

  auto* run_cmd = app.add_subcommand("run", "replay one schedule and run checks");
  add_schedule_options(run_cmd, o);
  run_cmd->add_option("--check", o.checks, "convergence, weak, strong, equivalence, simulation, structural, all");
  run_cmd->add_option("--expect-violation", o.expect_violation, "checks that must come out violated");
  run_cmd->add_option("--format", o.format, "text | json")->check(CLI::IsMember({"text", "json"}));
  run_cmd->add_option("--out", o.out_dir, "write schedule, trace and verdict JSON here");
  run_cmd->add_flag("--dot", o.dot, "with --out, also write final state spaces as DOT");

  auto* fuzz_cmd = app.add_subcommand("fuzz", "check many seeded random schedules");
  fuzz_cmd->add_option("--seeds", o.seeds, "number of seeds");
  fuzz_cmd->add_option("--seed", o.seed, "first seed (OTWB_SEED overrides)");
  fuzz_cmd->add_option("--clients", o.clients, "seed s uses 1 + s % clients clients");
  fuzz_cmd->add_option("--ops", o.ops, "seed s uses 1 + (s / clients) % ops updates");
  fuzz_cmd->add_option("--protocol", o.protocol, "restrict per-trace checks to one protocol");
  fuzz_cmd->add_option("--priority", o.priority, "smaller_wins | larger_wins");
  fuzz_cmd->add_option("--check", o.checks, "as for run; all excludes strong");
  fuzz_cmd->add_option("--expect-violation", o.expect_violation, "checks that must come out violated");
  fuzz_cmd->add_option("--format", o.format, "text | json")->check(CLI::IsMember({"text", "json"}));
  fuzz_cmd->add_option("--out", o.out_dir, "write failing schedules here");

  auto* dot_cmd = app.add_subcommand("export-dot", "write state spaces as Graphviz files");
  add_schedule_options(dot_cmd, o);
  dot_cmd->add_option("--out", o.out_dir, "output directory")->required();
  dot_cmd->add_flag("--steps", o.steps, "also write one file per construction step");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err) == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (auto s = env_seed()) o.seed = *s;
    if (fuzz_cmd->parsed()) {
      if (fuzz_cmd->count("--clients") == 0) o.clients = 4;
      if (fuzz_cmd->count("--ops") == 0) o.ops = 8;
      if (fuzz_cmd->count("--protocol") == 0) o.protocol.clear();
      return cmd_fuzz(o, out);
    }
    if (run_cmd->parsed()) {
      if (run_cmd->count("--check") == 0) o.checks = {"all"};
      return cmd_run(o, out);
    }
    return cmd_export_dot(o, out);
  } catch (const UsageError& e) {
    err << "otwb: " << e.what() << "\n";
    return kExitUsage;
  } catch (const ScheduleError& e) {
    err << "otwb: bad schedule: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "otwb: " << e.what() << "\n";
    return kExitUsage;
  }
}

}  // namespace otwb
