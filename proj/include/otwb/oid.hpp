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

#include <algorithm>
#include <compare>
#include <initializer_list>
#include <string>
#include <vector>

namespace otwb {

/// Replica identifier. The server is 0; clients are 1..n.
using ReplicaId = int;
inline constexpr ReplicaId kServerId = 0;

std::string replica_name(ReplicaId rid);

/// Globally unique operation identifier: generating client and its sequence number.
struct Oid {
  int cid = 0;
  int seq = 0;

  friend auto operator<=>(const Oid&, const Oid&) = default;
};

std::string to_string(const Oid& oid);

/// A set of oids kept as a sorted vector so it can serve as a map key
/// (vertices are looked up by their oid set).
class OidSet {
 public:
  using const_iterator = std::vector<Oid>::const_iterator;

  OidSet() = default;
  OidSet(std::initializer_list<Oid> oids);

  bool contains(const Oid& oid) const {
    return std::binary_search(items_.begin(), items_.end(), oid);
  }
  void insert(const Oid& oid);
  void erase(const Oid& oid);
  OidSet with(const Oid& oid) const {
    OidSet copy = *this;
    copy.insert(oid);
    return copy;
  }
  bool subset_of(const OidSet& other) const {
    return std::includes(other.items_.begin(), other.items_.end(), items_.begin(), items_.end());
  }

  std::size_t size() const { return items_.size(); }
  bool empty() const { return items_.empty(); }
  const_iterator begin() const { return items_.begin(); }
  const_iterator end() const { return items_.end(); }
  const std::vector<Oid>& items() const { return items_; }

  friend auto operator<=>(const OidSet&, const OidSet&) = default;

 private:
  std::vector<Oid> items_;
};

/// "{1:1,1:2}"
std::string to_string(const OidSet& oids);

}  // namespace otwb
