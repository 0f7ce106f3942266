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

#include "otwb/list_op.hpp"

#include <algorithm>
#include <stdexcept>

namespace otwb {

std::string to_string(const Element& e) {
  return std::string(1, e.glyph) + "@" + std::to_string(e.origin_cid) + ":" +
         std::to_string(e.origin_seq);
}

std::string to_string(PriorityRule rule) {
  return rule == PriorityRule::kSmallerWins ? "smaller_wins" : "larger_wins";
}

std::optional<PriorityRule> priority_rule_from_string(const std::string& s) {
  if (s == "smaller_wins") return PriorityRule::kSmallerWins;
  if (s == "larger_wins") return PriorityRule::kLargerWins;
  return std::nullopt;
}

Priority priority_of(int cid) { return Priority{cid}; }

bool higher_priority(Priority a, Priority b, PriorityRule rule) {
  return rule == PriorityRule::kSmallerWins ? a.value < b.value : a.value > b.value;
}

std::string to_string(OpKind kind) {
  switch (kind) {
    case OpKind::kIns: return "Ins";
    case OpKind::kDel: return "Del";
    case OpKind::kRead: return "Read";
    case OpKind::kNop: return "Nop";
  }
  return "?";
}

std::string to_string(const ListOp& op) {
  switch (op.kind) {
    case OpKind::kIns:
    case OpKind::kDel: {
      std::string glyph = op.element ? std::string(1, op.element->glyph) : std::string("_");
      return to_string(op.kind) + "(" + glyph + "," + std::to_string(op.position) + ")";
    }
    case OpKind::kRead:
    case OpKind::kNop:
      return to_string(op.kind);
  }
  return "?";
}

std::string glyphs(const ListState& state) {
  std::string out;
  out.reserve(state.size());
  for (const auto& e : state) out.push_back(e.glyph);
  return out;
}

std::optional<Element> apply_in_place(ListState& state, const ListOp& op) {
  switch (op.kind) {
    case OpKind::kIns: {
      if (!op.element) throw std::invalid_argument("Ins without element");
      auto pos = std::min(op.position, state.size());
      state.insert(state.begin() + static_cast<std::ptrdiff_t>(pos), *op.element);
      return std::nullopt;
    }
    case OpKind::kDel: {
      if (state.empty()) return std::nullopt;
      auto pos = std::min(op.position, state.size() - 1);
      Element removed = state[pos];
      state.erase(state.begin() + static_cast<std::ptrdiff_t>(pos));
      return removed;
    }
    case OpKind::kRead:
    case OpKind::kNop:
      return std::nullopt;
  }
  return std::nullopt;
}

ListState apply(ListState state, const ListOp& op) {
  apply_in_place(state, op);
  return state;
}

bool applicable(const ListState& state, const ListOp& op) {
  switch (op.kind) {
    case OpKind::kIns: return op.position <= state.size();
    case OpKind::kDel: return op.position < state.size();
    default: return true;
  }
}

ListOp transform(const ListOp& o1, const ListOp& o2, PriorityRule rule) {
  if (o1.kind == OpKind::kRead || o2.kind == OpKind::kRead) {
    throw std::invalid_argument("Read operations are never transformed");
  }
  if (o1.kind == OpKind::kNop) return o1;
  if (o2.kind == OpKind::kNop) return o1;

  ListOp out = o1;
  const auto p1 = o1.position;
  const auto p2 = o2.position;

  if (o1.kind == OpKind::kIns && o2.kind == OpKind::kIns) {
    if (p1 > p2 || (p1 == p2 && higher_priority(o1.priority, o2.priority, rule))) {
      out.position = p1 + 1;
    }
  } else if (o1.kind == OpKind::kIns && o2.kind == OpKind::kDel) {
    if (p1 > p2) out.position = p1 - 1;
  } else if (o1.kind == OpKind::kDel && o2.kind == OpKind::kIns) {
    if (p1 >= p2) out.position = p1 + 1;
  } else {
    if (p1 == p2) return ListOp::nop();
    if (p1 > p2) out.position = p1 - 1;
  }
  return out;
}

bool check_cp1(const ListOp& o1, const ListOp& o2, const ListState& state, PriorityRule rule) {
  ListState left = otwb::apply(otwb::apply(state, o1), transform(o2, o1, rule));
  ListState right = otwb::apply(otwb::apply(state, o2), transform(o1, o2, rule));
  return left == right;
}

}  // namespace otwb
