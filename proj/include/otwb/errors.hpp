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

#include <stdexcept>
#include <string>

namespace otwb {

/// A protocol or state-space invariant was broken (missing context vertex,
/// occupied edge slot, out-of-order delivery, ...). Never recoverable.
class IntegrityError : public std::logic_error {
 public:
  explicit IntegrityError(const std::string& what) : std::logic_error(what) {}
};

/// A schedule is malformed for the requested topology.
class ScheduleError : public std::runtime_error {
 public:
  explicit ScheduleError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace otwb
