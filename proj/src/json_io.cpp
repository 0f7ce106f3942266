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

#include "otwb/json_io.hpp"

#include <fstream>

#include "otwb/errors.hpp"

namespace otwb {

using nlohmann::json;

namespace {

std::string kind_token(OpKind k) {
  switch (k) {
    case OpKind::kIns: return "ins";
    case OpKind::kDel: return "del";
    case OpKind::kRead: return "read";
    case OpKind::kNop: return "nop";
  }
  return "?";
}

json list_json(const ListState& list) {
  json out = json::array();
  for (const auto& e : list) out.push_back(to_string(e));
  return out;
}

json op_spec_json(const OpSpec& op) {
  json j{{"kind", kind_token(op.kind)}};
  if (op.kind == OpKind::kIns) j["glyph"] = std::string(1, op.glyph);
  if (op.kind == OpKind::kIns || op.kind == OpKind::kDel) j["pos"] = op.pos;
  return j;
}

template <typename T>
T field(const json& j, const char* key, const std::string& where) {
  if (!j.is_object() || !j.contains(key)) throw ScheduleError(where + ": missing \"" + key + "\"");
  try {
    return j.at(key).get<T>();
  } catch (const json::exception&) {
    throw ScheduleError(where + ": \"" + key + "\" has the wrong type");
  }
}

OpSpec op_spec_from_json(const json& j, const std::string& where) {
  const auto kind = field<std::string>(j, "kind", where);
  OpSpec op;
  if (kind == "ins") {
    op.kind = OpKind::kIns;
    const auto glyph = field<std::string>(j, "glyph", where);
    if (glyph.size() != 1) throw ScheduleError(where + ": glyph must be one character");
    op.glyph = glyph[0];
    op.pos = field<std::size_t>(j, "pos", where);
  } else if (kind == "del") {
    op.kind = OpKind::kDel;
    op.pos = field<std::size_t>(j, "pos", where);
  } else if (kind == "read") {
    op.kind = OpKind::kRead;
  } else {
    throw ScheduleError(where + ": unknown op kind \"" + kind + "\"");
  }
  return op;
}

}  // namespace

ReplicaId replica_from_string(const std::string& s) {
  if (s == "server") return kServerId;
  if (s.size() >= 2 && s[0] == 'c' && s.find_first_not_of("0123456789", 1) == std::string::npos) {
    return std::stoi(s.substr(1));
  }
  throw ScheduleError("not a replica name: \"" + s + "\"");
}

json to_json(const ListOp& op) {
  json j{{"kind", kind_token(op.kind)}};
  if (op.kind == OpKind::kIns || op.kind == OpKind::kDel) {
    j["pos"] = op.position;
    j["priority"] = op.priority.value;
    j["element"] = op.element ? json(to_string(*op.element)) : json(nullptr);
  }
  return j;
}

json to_json(const Schedule& schedule) {
  json steps = json::array();
  for (const auto& step : schedule.steps) {
    if (const auto* g = std::get_if<GenerateStep>(&step)) {
      steps.push_back(json{{"type", "generate"}, {"cid", g->cid}, {"op", op_spec_json(g->op)}});
    } else {
      const auto& d = std::get<DeliverStep>(step);
      steps.push_back(json{{"type", "deliver"}, {"to", replica_name(d.to)}, {"from", replica_name(d.from)}});
    }
  }
  json j{{"format", kFormatVersion},
         {"n_clients", schedule.n_clients},
         {"steps", steps},
         {"priority_rule", to_string(schedule.priority_rule)}};
  if (schedule.rng) j["rng"] = json{{"name", schedule.rng->name}, {"seed", schedule.rng->seed}};
  return j;
}

Schedule schedule_from_json(const json& j) {
  if (!j.is_object()) throw ScheduleError("schedule: expected an object");
  if (j.contains("format") && j.at("format") != kFormatVersion) {
    throw ScheduleError("schedule: unsupported format " + j.at("format").dump());
  }
  Schedule s;
  s.n_clients = field<int>(j, "n_clients", "schedule");
  if (j.contains("priority_rule")) {
    auto rule = priority_rule_from_string(field<std::string>(j, "priority_rule", "schedule"));
    if (!rule) throw ScheduleError("schedule: unknown priority_rule");
    s.priority_rule = *rule;
  }
  if (j.contains("rng") && !j.at("rng").is_null()) {
    s.rng = RngInfo{field<std::string>(j.at("rng"), "name", "rng"), field<std::uint64_t>(j.at("rng"), "seed", "rng")};
  }
  const auto& steps = j.contains("steps") ? j.at("steps") : json::array();
  if (!steps.is_array()) throw ScheduleError("schedule: \"steps\" must be an array");
  for (std::size_t i = 0; i < steps.size(); ++i) {
    const std::string where = "step " + std::to_string(i);
    const auto type = field<std::string>(steps[i], "type", where);
    if (type == "generate") {
      s.steps.push_back(GenerateStep{field<int>(steps[i], "cid", where), op_spec_from_json(steps[i].value("op", json()), where)});
    } else if (type == "deliver") {
      s.steps.push_back(DeliverStep{replica_from_string(field<std::string>(steps[i], "to", where)),
                                    replica_from_string(field<std::string>(steps[i], "from", where))});
    } else {
      throw ScheduleError(where + ": unknown step type \"" + type + "\"");
    }
  }
  validate(s);
  return s;
}

Schedule load_schedule(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ScheduleError("cannot open schedule file " + path);
  json j;
  try {
    in >> j;
  } catch (const json::parse_error& e) {
    throw ScheduleError(path + ": " + e.what());
  }
  return schedule_from_json(j);
}

json to_json(const Trace& trace) {
  json events = json::array();
  for (const auto& e : trace.events) {
    json ev{{"type", to_string(e.type)}, {"replica", replica_name(e.replica)}, {"clock", e.clock}, {"op", to_json(e.op)}};
    if (e.oid) ev["oid"] = to_string(*e.oid);
    if (e.msg) ev["msg"] = *e.msg;
    if (e.type == EventType::kSend) {
      ev["to"] = e.peer == kBroadcast ? std::string("broadcast") : replica_name(e.peer);
    }
    if (e.type == EventType::kReceive) ev["from"] = replica_name(e.peer);
    if (e.type != EventType::kSend) ev["list"] = list_json(e.list);
    events.push_back(std::move(ev));
  }
  json j{{"format", kFormatVersion},
         {"protocol", to_string(trace.protocol)},
         {"priority_rule", to_string(trace.rule)},
         {"schedule", to_json(trace.schedule)},
         {"events", events}};
  j["rng"] = trace.schedule.rng ? json{{"name", trace.schedule.rng->name}, {"seed", trace.schedule.rng->seed}}
                                : json(nullptr);
  return j;
}

json to_json(const Verdict& verdict) {
  json j{{"check", verdict.check}, {"satisfied", verdict.satisfied}};
  if (!verdict.satisfied) {
    j["detail"] = verdict.detail;
    j["witness"] = verdict.witness;
  }
  return j;
}

json to_json(const std::vector<Verdict>& verdicts) {
  json out = json::array();
  for (const auto& v : verdicts) out.push_back(to_json(v));
  return out;
}

}  // namespace otwb
