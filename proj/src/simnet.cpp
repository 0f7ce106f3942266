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

#include "otwb/simnet.hpp"

#include <deque>
#include <random>
#include <stdexcept>
#include <utility>

#include "otwb/errors.hpp"
#include "otwb/protocols.hpp"

namespace otwb {

std::string to_string(Protocol p) {
  switch (p) {
    case Protocol::kCJupiter: return "cjupiter";
    case Protocol::kJupiter: return "jupiter";
    case Protocol::kDJupiter: return "djupiter";
  }
  return "?";
}

std::optional<Protocol> protocol_from_string(const std::string& s) {
  if (s == "cjupiter") return Protocol::kCJupiter;
  if (s == "jupiter") return Protocol::kJupiter;
  if (s == "djupiter") return Protocol::kDJupiter;
  return std::nullopt;
}

std::string to_string(EventType t) {
  switch (t) {
    case EventType::kDo: return "do";
    case EventType::kSend: return "send";
    case EventType::kReceive: return "receive";
  }
  return "?";
}

ListOp OpSpec::request() const {
  switch (kind) {
    case OpKind::kIns: return ListOp::ins(Element{glyph, 0, 0}, pos, Priority{});
    case OpKind::kDel: return ListOp::del(pos, Priority{});
    case OpKind::kRead: return ListOp::read();
    case OpKind::kNop: break;
  }
  throw std::invalid_argument("a schedule cannot request Nop");
}

void validate(const Schedule& schedule) {
  const int n = schedule.n_clients;
  if (n < 1) throw ScheduleError("n_clients must be at least 1");
  auto check_replica = [n](ReplicaId r, std::size_t i) {
    if (r < 0 || r > n) {
      throw ScheduleError("step " + std::to_string(i) + ": no replica " + std::to_string(r));
    }
  };
  std::map<std::pair<ReplicaId, ReplicaId>, int> in_flight;
  for (std::size_t i = 0; i < schedule.steps.size(); ++i) {
    const Step& step = schedule.steps[i];
    if (const auto* g = std::get_if<GenerateStep>(&step)) {
      check_replica(g->cid, i);
      if (g->op.kind == OpKind::kNop) throw ScheduleError("step " + std::to_string(i) + ": Nop request");
      if (g->op.kind == OpKind::kRead) continue;
      if (g->cid == kServerId) {
        throw ScheduleError("step " + std::to_string(i) + ": the server does not generate updates");
      }
      ++in_flight[{g->cid, kServerId}];
      continue;
    }
    const auto& d = std::get<DeliverStep>(step);
    check_replica(d.to, i);
    check_replica(d.from, i);
    if ((d.to == kServerId) == (d.from == kServerId)) {
      throw ScheduleError("step " + std::to_string(i) + ": no channel " + replica_name(d.from) + " -> " +
                          replica_name(d.to));
    }
    int& pending = in_flight[{d.from, d.to}];
    if (pending == 0) {
      throw ScheduleError("step " + std::to_string(i) + ": nothing in flight on " + replica_name(d.from) +
                          " -> " + replica_name(d.to));
    }
    --pending;
    if (d.to == kServerId) {
      for (ReplicaId c = 1; c <= n; ++c) {
        if (c != d.from) ++in_flight[{kServerId, c}];
      }
    }
  }
}

Schedule podc16_schedule() {
  auto gen = [](ReplicaId cid, OpKind kind, char glyph, std::size_t pos) {
    return Step{GenerateStep{cid, OpSpec{kind, glyph, pos}}};
  };
  auto deliver = [](ReplicaId to, ReplicaId from) { return Step{DeliverStep{to, from}}; };
  Schedule s;
  s.n_clients = 3;
  s.steps = {
      gen(1, OpKind::kIns, 'x', 0),
      deliver(kServerId, 1),
      gen(1, OpKind::kDel, 'x', 0),
      deliver(2, kServerId),
      deliver(3, kServerId),
      gen(2, OpKind::kIns, 'a', 0),
      gen(3, OpKind::kIns, 'b', 1),
      deliver(kServerId, 1),
      deliver(kServerId, 2),
      deliver(kServerId, 3),
      deliver(1, kServerId),
      deliver(1, kServerId),
      deliver(2, kServerId),
      deliver(2, kServerId),
      deliver(3, kServerId),
      deliver(3, kServerId),
      gen(1, OpKind::kRead, '?', 0),
      gen(2, OpKind::kRead, '?', 0),
      gen(3, OpKind::kRead, '?', 0),
  };
  return s;
}

bool happens_before(const TraceEvent& e1, const TraceEvent& e2) {
  if (e1.clock.size() != e2.clock.size()) return false;
  bool strictly = false;
  for (std::size_t i = 0; i < e1.clock.size(); ++i) {
    if (e1.clock[i] > e2.clock[i]) return false;
    if (e1.clock[i] < e2.clock[i]) strictly = true;
  }
  return strictly;
}

std::vector<std::vector<bool>> happens_before(const Trace& trace) {
  const auto n = trace.events.size();
  std::vector<std::vector<bool>> hb(n, std::vector<bool>(n, false));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      hb[i][j] = happens_before(trace.events[i], trace.events[j]);
    }
  }
  return hb;
}

namespace {

ProtoOp widen(const ProtoOp2D& op) { return ProtoOp{op.o, op.oid, op.ctx, {}}; }
ProtoOp2D narrow(const ProtoOp& op) { return ProtoOp2D{op.o, op.oid, op.ctx}; }

struct Message {
  int id = 0;
  ProtoOp op;
  std::vector<int> clock;
};

class Simulation {
 public:
  Simulation(const Schedule& schedule, const RunConfig& config)
      : protocol_(config.protocol),
        n_(schedule.n_clients),
        rule_(config.priority_override.value_or(schedule.priority_rule)),
        capture_(config.capture_steps),
        clocks_(static_cast<std::size_t>(n_ + 1), std::vector<int>(static_cast<std::size_t>(n_ + 1), 0)) {
    trace_.protocol = protocol_;
    trace_.schedule = schedule;
    trace_.rule = rule_;
    switch (protocol_) {
      case Protocol::kCJupiter:
        cj_server_.emplace(n_, rule_);
        for (ReplicaId c = 1; c <= n_; ++c) cj_clients_.emplace_back(c, rule_);
        break;
      case Protocol::kJupiter:
        j_server_.emplace(n_, rule_);
        for (ReplicaId c = 1; c <= n_; ++c) j_clients_.emplace_back(c, rule_);
        break;
      case Protocol::kDJupiter:
        for (ReplicaId c = 1; c <= n_; ++c) dj_replicas_.emplace_back(c, rule_);
        submissions_.resize(static_cast<std::size_t>(n_ + 1));
        cursors_.assign(static_cast<std::size_t>(n_ + 1), 0);
        break;
    }
    for (ReplicaId r = first_replica(); r <= n_; ++r) snapshot(r);
  }

  void step(const Step& step) {
    if (const auto* g = std::get_if<GenerateStep>(&step)) {
      generate(*g);
    } else {
      deliver(std::get<DeliverStep>(step));
    }
  }

  const ListState& list(ReplicaId r) const {
    switch (protocol_) {
      case Protocol::kCJupiter:
        return r == kServerId ? cj_server_->read() : client(cj_clients_, r).read();
      case Protocol::kJupiter:
        return r == kServerId ? j_server_->read() : client(j_clients_, r).read();
      case Protocol::kDJupiter:
        return client(dj_replicas_, r).read();
    }
    throw std::logic_error("unknown protocol");
  }

  std::size_t pending(ReplicaId from, ReplicaId to) const {
    auto it = channels_.find({from, to});
    return it == channels_.end() ? 0 : it->second.size();
  }

  RunResult finish() && {
    RunResult result;
    for (ReplicaId r = first_replica(); r <= n_; ++r) result.lists[r] = list(r);
    switch (protocol_) {
      case Protocol::kCJupiter:
        result.css.emplace(kServerId, cj_server_->space());
        for (const auto& c : cj_clients_) result.css.emplace(c.cid(), c.space());
        break;
      case Protocol::kJupiter:
        for (const auto& c : j_clients_) {
          result.jupiter_clients.emplace(c.cid(), c.space());
          result.jupiter_server.emplace(c.cid(), j_server_->space_for(c.cid()));
        }
        break;
      case Protocol::kDJupiter:
        for (const auto& r : dj_replicas_) result.css.emplace(r.rid(), r.space());
        break;
    }
    result.trace = std::move(trace_);
    result.server_arrivals = std::move(arrivals_);
    result.server_transforms = std::move(transforms_);
    result.css_steps = std::move(css_steps_);
    result.jupiter_steps = std::move(jupiter_steps_);
    return result;
  }

 private:
  template <typename Replica>
  static const Replica& client(const std::vector<Replica>& v, ReplicaId r) {
    return v.at(static_cast<std::size_t>(r - 1));
  }
  template <typename Replica>
  static Replica& client(std::vector<Replica>& v, ReplicaId r) {
    return v.at(static_cast<std::size_t>(r - 1));
  }

  ReplicaId first_replica() const { return protocol_ == Protocol::kDJupiter ? 1 : kServerId; }

  TraceEvent& record(EventType type, ReplicaId r, const std::vector<int>* merge = nullptr) {
    auto& clock = clocks_.at(static_cast<std::size_t>(r));
    if (merge) {
      for (std::size_t i = 0; i < clock.size(); ++i) clock[i] = std::max(clock[i], (*merge)[i]);
    }
    ++clock[static_cast<std::size_t>(r)];
    TraceEvent e;
    e.type = type;
    e.replica = r;
    e.clock = clock;
    trace_.events.push_back(std::move(e));
    return trace_.events.back();
  }

  void snapshot(ReplicaId r) {
    if (!capture_) return;
    switch (protocol_) {
      case Protocol::kCJupiter:
        css_steps_[r].push_back(r == kServerId ? cj_server_->space() : client(cj_clients_, r).space());
        break;
      case Protocol::kJupiter:
        if (r != kServerId) jupiter_steps_[r].push_back(client(j_clients_, r).space());
        break;
      case Protocol::kDJupiter:
        css_steps_[r].push_back(client(dj_replicas_, r).space());
        break;
    }
  }

  void send(ReplicaId from, ReplicaId to, const ProtoOp& op) {
    const int id = next_msg_++;
    auto& e = record(EventType::kSend, from);
    e.op = op.o;
    e.oid = op.oid;
    e.msg = id;
    e.peer = to;
    Message m{id, op, e.clock};
    if (to == kBroadcast) {
      submissions_[static_cast<std::size_t>(from)].push_back(std::move(m));
    } else {
      channels_[{from, to}].push_back(std::move(m));
    }
  }

  void record_receive(ReplicaId r, ReplicaId from, const Message& m) {
    auto& e = record(EventType::kReceive, r, &m.clock);
    e.op = m.op.o;
    e.oid = m.op.oid;
    e.msg = m.id;
    e.peer = from;
    e.list = list(r);
  }

  void generate(const GenerateStep& g) {
    const ReplicaId r = g.cid;
    if (g.op.kind == OpKind::kRead) {
      if (protocol_ == Protocol::kDJupiter && r == kServerId) return;
      auto& e = record(EventType::kDo, r);
      e.op = ListOp::read();
      e.list = list(r);
      return;
    }
    const ListOp request = g.op.request();
    ProtoOp op;
    switch (protocol_) {
      case Protocol::kCJupiter: op = client(cj_clients_, r).local_do(request); break;
      case Protocol::kJupiter: op = widen(client(j_clients_, r).local_do(request)); break;
      case Protocol::kDJupiter: op = client(dj_replicas_, r).generate(request); break;
    }
    auto& e = record(EventType::kDo, r);
    e.op = op.o;
    e.oid = op.oid;
    e.list = list(r);
    snapshot(r);
    send(r, protocol_ == Protocol::kDJupiter ? kBroadcast : kServerId, op);
  }

  Message pop(ReplicaId from, ReplicaId to) {
    auto it = channels_.find({from, to});
    if (it == channels_.end() || it->second.empty()) {
      throw ScheduleError("nothing in flight on " + replica_name(from) + " -> " + replica_name(to));
    }
    Message m = std::move(it->second.front());
    it->second.pop_front();
    return m;
  }

  void deliver(const DeliverStep& d) {
    if (protocol_ == Protocol::kDJupiter) {
      if (d.to == kServerId) {
        commit(d.from);
      } else {
        deliver_broadcast(d.to);
      }
      return;
    }

    Message m = pop(d.from, d.to);
    if (d.to == kServerId) {
      arrivals_.push_back(m.op.oid);
      std::vector<Outgoing<ProtoOp>> fanout;
      if (protocol_ == Protocol::kCJupiter) {
        CJServerReceipt receipt = cj_server_->receive(m.op);
        ServerTransform st{m.op.oid, {}};
        for (const auto& a : receipt.against) st.against.push_back(a.oid);
        transforms_.push_back(std::move(st));
        fanout = std::move(receipt.fanout);
      } else {
        JServerReceipt receipt = j_server_->receive(narrow(m.op));
        for (auto& out : receipt.fanout) fanout.push_back({out.to, widen(out.op)});
      }
      record_receive(kServerId, d.from, m);
      snapshot(kServerId);
      for (const auto& out : fanout) send(kServerId, out.to, out.op);
      return;
    }

    if (protocol_ == Protocol::kCJupiter) {
      client(cj_clients_, d.to).receive(m.op);
    } else {
      client(j_clients_, d.to).receive(narrow(m.op));
    }
    record_receive(d.to, d.from, m);
    snapshot(d.to);
  }

  // The server's arrival order is replayed as the broadcast order.
  void commit(ReplicaId from) {
    auto& queue = submissions_.at(static_cast<std::size_t>(from));
    if (queue.empty()) throw ScheduleError("no pending broadcast submission from " + replica_name(from));
    Message m = std::move(queue.front());
    queue.pop_front();
    if (!m.op.ctx.subset_of(committed_oids_)) {
      throw IntegrityError("broadcast of " + to_string(m.op.oid) + " would overtake its causal context");
    }
    committed_oids_.insert(m.op.oid);
    arrivals_.push_back(m.op.oid);
    committed_.push_back(std::move(m));
  }

  void deliver_broadcast(ReplicaId to) {
    auto& replica = client(dj_replicas_, to);
    auto& cursor = cursors_.at(static_cast<std::size_t>(to));
    while (cursor < committed_.size() && committed_[cursor].op.oid.cid == to) {
      replica.deliver(committed_[cursor].op);
      ++cursor;
    }
    if (cursor == committed_.size()) {
      throw ScheduleError("no committed broadcast pending for " + replica_name(to));
    }
    const Message& m = committed_[cursor++];
    replica.deliver(m.op);
    record_receive(to, m.op.oid.cid, m);
    snapshot(to);
  }

  Protocol protocol_;
  int n_;
  PriorityRule rule_;
  bool capture_;

  std::optional<CJServer> cj_server_;
  std::vector<CJClient> cj_clients_;
  std::optional<JServer> j_server_;
  std::vector<JClient> j_clients_;
  std::vector<DJReplica> dj_replicas_;

  std::map<std::pair<ReplicaId, ReplicaId>, std::deque<Message>> channels_;
  std::vector<std::deque<Message>> submissions_;
  std::vector<Message> committed_;
  OidSet committed_oids_;
  std::vector<std::size_t> cursors_;

  std::vector<std::vector<int>> clocks_;
  int next_msg_ = 0;
  Trace trace_;
  std::vector<Oid> arrivals_;
  std::vector<ServerTransform> transforms_;
  std::map<ReplicaId, std::vector<CssSpace>> css_steps_;
  std::map<ReplicaId, std::vector<StateSpace2D>> jupiter_steps_;
};

constexpr char kGlyphs[] = "abcdefghijklmnopqrstuvwxyzABCDEFGHIJKLMNOPQRSTUVWXYZ0123456789";
constexpr std::size_t kGlyphCount = sizeof(kGlyphs) - 1;

}  // namespace

RunResult run(const Schedule& schedule, const RunConfig& config) {
  validate(schedule);
  Simulation sim(schedule, config);
  for (const auto& step : schedule.steps) sim.step(step);
  return std::move(sim).finish();
}

Schedule random_schedule(int n_clients, int n_updates, std::uint64_t seed,
                         const RandomScheduleOptions& options) {
  if (n_clients < 1) throw std::invalid_argument("n_clients must be at least 1");
  if (n_updates < 0) throw std::invalid_argument("n_updates must be non-negative");

  Schedule schedule;
  schedule.n_clients = n_clients;
  schedule.rng = RngInfo{kRngName, seed};

  // Replayed under CJupiter as it is built so positions track real lists.
  Simulation sim(schedule, RunConfig{});
  std::mt19937_64 rng(seed);
  auto draw = [&rng](std::size_t bound) { return static_cast<std::size_t>(rng() % bound); };
  const auto read_permille = static_cast<std::size_t>(options.read_probability * 1000.0);

  auto emit = [&](Step step) {
    sim.step(step);
    schedule.steps.push_back(std::move(step));
  };

  int remaining = n_updates;
  std::size_t glyph = 0;
  for (;;) {
    std::vector<Step> candidates;
    if (remaining > 0) {
      for (ReplicaId c = 1; c <= n_clients; ++c) candidates.push_back(GenerateStep{c, {}});
    }
    for (ReplicaId c = 1; c <= n_clients; ++c) {
      if (sim.pending(c, kServerId) > 0) candidates.push_back(DeliverStep{kServerId, c});
      if (sim.pending(kServerId, c) > 0) candidates.push_back(DeliverStep{c, kServerId});
    }
    if (candidates.empty()) break;

    if (read_permille > 0 && draw(1000) < read_permille) {
      const auto reader = static_cast<ReplicaId>(1 + draw(static_cast<std::size_t>(n_clients)));
      emit(GenerateStep{reader, OpSpec{OpKind::kRead, '?', 0}});
    }

    Step pick = candidates[draw(candidates.size())];
    if (auto* g = std::get_if<GenerateStep>(&pick)) {
      const std::size_t len = sim.list(g->cid).size();
      if (len == 0 || draw(2) == 0) {
        g->op = OpSpec{OpKind::kIns, kGlyphs[glyph++ % kGlyphCount], draw(len + 1)};
      } else {
        g->op = OpSpec{OpKind::kDel, '?', draw(len)};
      }
      --remaining;
    }
    emit(std::move(pick));
  }

  if (options.final_reads) {
    for (ReplicaId c = 1; c <= n_clients; ++c) emit(GenerateStep{c, OpSpec{OpKind::kRead, '?', 0}});
  }
  return schedule;
}

Schedule corpus_schedule(std::uint64_t seed) {
  const int clients = 1 + static_cast<int>(seed % 4);
  const int updates = 1 + static_cast<int>((seed / 4) % 8);
  return random_schedule(clients, updates, seed);
}

}  // namespace otwb
