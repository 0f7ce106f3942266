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

// JSON forms of schedules, traces and verdicts. Every document carries
// "format": 1. Objects serialize with sorted keys, so equal values dump to
// equal bytes.

#include <string>
#include <vector>

#include "json.hpp"

#include "otwb/checkers.hpp"
#include "otwb/simnet.hpp"

namespace otwb {

inline constexpr int kFormatVersion = 1;

/// "server" or "c<i>".
ReplicaId replica_from_string(const std::string& s);

nlohmann::json to_json(const ListOp& op);
nlohmann::json to_json(const Schedule& schedule);
nlohmann::json to_json(const Trace& trace);
nlohmann::json to_json(const Verdict& verdict);
nlohmann::json to_json(const std::vector<Verdict>& verdicts);

/// Throws ScheduleError on anything malformed.
Schedule schedule_from_json(const nlohmann::json& j);

Schedule load_schedule(const std::string& path);

}  // namespace otwb
