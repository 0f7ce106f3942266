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

#include "otwb/protocols.hpp"

#include <algorithm>
#include <stdexcept>

#include "otwb/errors.hpp"

namespace otwb {

ListOp make_local_op(const ListState& state, const ListOp& request, const Oid& oid) {
  const Priority pr = priority_of(oid.cid);
  switch (request.kind) {
    case OpKind::kIns: {
      const char glyph = request.element ? request.element->glyph : '?';
      return ListOp::ins(Element{glyph, oid.cid, oid.seq}, std::min(request.position, state.size()), pr);
    }
    case OpKind::kDel: {
      if (state.empty()) return ListOp::nop();
      const auto pos = std::min(request.position, state.size() - 1);
      return ListOp::del(pos, pr, state[pos]);
    }
    case OpKind::kRead:
      throw std::invalid_argument("Read is not an update; use read()");
    case OpKind::kNop:
      break;
  }
  throw std::invalid_argument("Nop cannot be requested");
}

void apply_remote(ListState& state, const ListOp& op) {
  if (!applicable(state, op)) {
    throw IntegrityError(to_string(op) + " is out of range on a list of length " +
                         std::to_string(state.size()));
  }
  auto removed = apply_in_place(state, op);
  if (op.kind == OpKind::kDel && op.element && removed != op.element) {
    throw IntegrityError(to_string(op) + " removed " + (removed ? to_string(*removed) : "nothing") +
                         " instead of " + to_string(*op.element));
  }
}

// CJupiter ----------------------------------------------------------------

CJClient::CJClient(ReplicaId cid, PriorityRule rule) : cid_(cid), space_(cid, rule) {}

ProtoOp CJClient::local_do(const ListOp& request) {
  const Oid oid{cid_, ++seq_};
  ListOp o = make_local_op(state_, request, oid);
  apply_in_place(state_, o);
  ProtoOp op{std::move(o), oid, space_.vertex(space_.cur()).oids, {}};
  space_.append(op);
  return op;
}

ProtoOp CJClient::receive(const ProtoOp& op) {
  ProtoOp t = space_.xform(op);
  apply_remote(state_, t.o);
  return t;
}

CJServer::CJServer(int n_clients, PriorityRule rule) : n_clients_(n_clients), space_(kServerId, rule) {}

CJServerReceipt CJServer::receive(ProtoOp op) {
  op.sctx = soids_;
  soids_.insert(op.oid);
  XformResult xr = space_.xform_traced(op);
  apply_remote(state_, xr.op.o);

  CJServerReceipt receipt{std::move(xr.op), std::move(xr.against), {}};
  for (ReplicaId c = 1; c <= n_clients_; ++c) {
    if (c != op.oid.cid) receipt.fanout.push_back({c, op});
  }
  return receipt;
}

// Jupiter -----------------------------------------------------------------

JClient::JClient(ReplicaId cid, PriorityRule rule) : cid_(cid), space_(rule) {}

ProtoOp2D JClient::local_do(const ListOp& request) {
  const Oid oid{cid_, ++seq_};
  ListOp o = make_local_op(state_, request, oid);
  apply_in_place(state_, o);
  ProtoOp2D op{std::move(o), oid, space_.vertex(space_.cur()).oids};
  space_.append(op, Dimension::kLocal);
  return op;
}

ProtoOp2D JClient::receive(const ProtoOp2D& op) {
  ProtoOp2D t = space_.xform(op, Dimension::kLocal);
  apply_remote(state_, t.o);
  return t;
}

JServer::JServer(int n_clients, PriorityRule rule)
    : spaces_(static_cast<std::size_t>(n_clients), StateSpace2D(rule)) {}

const StateSpace2D& JServer::space_for(ReplicaId cid) const {
  if (cid < 1 || cid > n_clients()) throw std::out_of_range("no client " + replica_name(cid));
  return spaces_[static_cast<std::size_t>(cid - 1)];
}

StateSpace2D& JServer::mutable_space(ReplicaId cid) {
  if (cid < 1 || cid > n_clients()) throw IntegrityError("operation from unknown client " + replica_name(cid));
  return spaces_[static_cast<std::size_t>(cid - 1)];
}

JServerReceipt JServer::receive(const ProtoOp2D& op) {
  const ReplicaId origin = op.oid.cid;
  ProtoOp2D t = mutable_space(origin).xform(op, Dimension::kGlobal);
  apply_remote(state_, t.o);

  JServerReceipt receipt{t, {}};
  for (ReplicaId c = 1; c <= n_clients(); ++c) {
    if (c == origin) continue;
    mutable_space(c).append(t, Dimension::kGlobal);
    receipt.fanout.push_back({c, t});
  }

  const auto& expected = space_for(origin).vertex(space_for(origin).cur()).oids;
  for (const auto& s : spaces_) {
    if (s.vertex(s.cur()).oids != expected) {
      throw IntegrityError("server-side 2D spaces disagree on the current state after " + to_string(op.oid));
    }
  }
  return receipt;
}

// DJupiter ----------------------------------------------------------------

DJReplica::DJReplica(ReplicaId rid, PriorityRule rule) : rid_(rid), space_(rid, rule) {}

ProtoOp DJReplica::generate(const ListOp& request) {
  const Oid oid{rid_, ++seq_};
  ListOp o = make_local_op(state_, request, oid);
  apply_in_place(state_, o);
  ProtoOp op{std::move(o), oid, space_.vertex(space_.cur()).oids, {}};
  space_.append(op);
  return op;
}

std::optional<ProtoOp> DJReplica::deliver(const ProtoOp& op) {
  if (delivered_.contains(op.oid)) {
    throw IntegrityError(to_string(op.oid) + " delivered twice at " + replica_name(rid_));
  }
  if (!op.ctx.subset_of(delivered_)) {
    throw IntegrityError(to_string(op.oid) + " delivered at " + replica_name(rid_) +
                         " before its causal context " + to_string(op.ctx));
  }
  ProtoOp stamped = op;
  stamped.sctx = delivered_;
  delivered_.insert(op.oid);
  if (op.oid.cid == rid_) return std::nullopt;

  ProtoOp t = space_.xform(stamped);
  apply_remote(state_, t.o);
  return t;
}

}  // namespace otwb
