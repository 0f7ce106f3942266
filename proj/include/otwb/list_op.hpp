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

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "otwb/oid.hpp"

namespace otwb {

/// A list element. Identity is (origin_cid, origin_seq), i.e. the oid of the
/// insertion that created it; the glyph is only for display.
struct Element {
  char glyph = '?';
  int origin_cid = 0;
  int origin_seq = 0;

  Oid id() const { return Oid{origin_cid, origin_seq}; }

  friend bool operator==(const Element&, const Element&) = default;
};

/// "x@1:1"
std::string to_string(const Element& e);

/// Direction of the Ins/Ins tie-break. Under kSmallerWins a smaller client id
/// means a higher priority; kLargerWins flips it.
enum class PriorityRule { kSmallerWins, kLargerWins };

std::string to_string(PriorityRule rule);
std::optional<PriorityRule> priority_rule_from_string(const std::string& s);

/// Priority token attached to Ins/Del. Derived from the generating client.
struct Priority {
  int value = 0;

  friend bool operator==(const Priority&, const Priority&) = default;
};

Priority priority_of(int cid);

/// True iff `a` is strictly higher priority than `b` under `rule`.
bool higher_priority(Priority a, Priority b, PriorityRule rule);

enum class OpKind { kIns, kDel, kRead, kNop };

std::string to_string(OpKind kind);

/// Signature-level list operation. Read and Nop carry no position, element
/// or priority. For Del, `element` records what was deleted at generation
/// time and is never touched by transformation.
struct ListOp {
  OpKind kind = OpKind::kNop;
  std::optional<Element> element;
  std::size_t position = 0;
  Priority priority{};

  static ListOp ins(Element e, std::size_t pos, Priority pr) {
    return ListOp{OpKind::kIns, e, pos, pr};
  }
  static ListOp del(std::size_t pos, Priority pr, std::optional<Element> deleted = std::nullopt) {
    return ListOp{OpKind::kDel, deleted, pos, pr};
  }
  static ListOp read() { return ListOp{OpKind::kRead, std::nullopt, 0, {}}; }
  static ListOp nop() { return ListOp{OpKind::kNop, std::nullopt, 0, {}}; }

  bool is_update() const { return kind == OpKind::kIns || kind == OpKind::kDel; }

  friend bool operator==(const ListOp&, const ListOp&) = default;
};

/// "Ins(x,0)", "Del(x,1)", "Del(_,3)", "Read", "Nop"
std::string to_string(const ListOp& op);

using ListState = std::vector<Element>;

/// Concatenated glyphs, e.g. "ba".
std::string glyphs(const ListState& state);

/// Applies `op` in place and returns the removed element for a Del that hit
/// something. Ins lands at min(pos, len); Del removes at min(pos, len - 1) and
/// is a no-op on an empty list; Read/Nop leave the state alone.
std::optional<Element> apply_in_place(ListState& state, const ListOp& op);

/// Pure form: the returned state is also the list value handed to the user.
ListState apply(ListState state, const ListOp& op);

/// True iff `op` can be applied to `state` without clamping
/// (Ins: pos <= len, Del: pos < len). Read/Nop are always applicable.
bool applicable(const ListState& state, const ListOp& op);

/// OT(o1, o2): o1 rewritten to take the concurrent o2 into account.
/// Nop is absorbing on the left and neutral on the right. Read never
/// transforms; passing one is a logic error.
ListOp transform(const ListOp& o1, const ListOp& o2, PriorityRule rule = PriorityRule::kSmallerWins);

/// CP1 on `state`: state;o1;OT(o2,o1) == state;o2;OT(o1,o2).
bool check_cp1(const ListOp& o1, const ListOp& o2, const ListState& state,
               PriorityRule rule = PriorityRule::kSmallerWins);

}  // namespace otwb
