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

#include "otwb/oid.hpp"

namespace otwb {

std::string replica_name(ReplicaId rid) {
  return rid == kServerId ? std::string("server") : "c" + std::to_string(rid);
}

std::string to_string(const Oid& oid) {
  return std::to_string(oid.cid) + ":" + std::to_string(oid.seq);
}

OidSet::OidSet(std::initializer_list<Oid> oids) : items_(oids) {
  std::sort(items_.begin(), items_.end());
  items_.erase(std::unique(items_.begin(), items_.end()), items_.end());
}

void OidSet::insert(const Oid& oid) {
  auto it = std::lower_bound(items_.begin(), items_.end(), oid);
  if (it == items_.end() || *it != oid) items_.insert(it, oid);
}

void OidSet::erase(const Oid& oid) {
  auto it = std::lower_bound(items_.begin(), items_.end(), oid);
  if (it != items_.end() && *it == oid) items_.erase(it);
}

std::string to_string(const OidSet& oids) {
  std::string out = "{";
  bool first = true;
  for (const auto& oid : oids) {
    if (!first) out += ",";
    out += to_string(oid);
    first = false;
  }
  return out + "}";
}

}  // namespace otwb
