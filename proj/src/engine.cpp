#include "oppnet/engine.hpp"

#include "oppnet/rng.hpp"
#include "oppnet/topology.hpp"

#include <algorithm>
#include <cmath>
#include <queue>
#include <thread>
#include <unordered_map>

namespace oppnet {

std::string_view to_string(ProtocolMode mode) {
  switch (mode) {
    case ProtocolMode::ReceiverBased: return "receiver_based";
    case ProtocolMode::SenderPrioritized: return "sender_prioritized";
  }
  return "unknown";
}

ProtocolMode parse_protocol_mode(std::string_view text) {
  if (text == "receiver_based") return ProtocolMode::ReceiverBased;
  if (text == "sender_prioritized") return ProtocolMode::SenderPrioritized;
  throw Error("unknown protocol mode '" + std::string(text) + "'");
}

namespace {

struct LinkDraw {
  std::size_t peer = 0;
  double micro_ok = 1.0;  // (1-p)^m
  double data_ok = 1.0;   // (1-p)^d
};

/// Flattened, index-based view of a topology for the hot loop.
class Network {
 public:
  Network(const Topology& topology, const PathCostTable& costs) : frame_(topology.frame) {
    const std::size_t n = topology.nodes.size();
    ids_.reserve(n);
    for (const auto& node : topology.nodes) {
      index_.emplace(node.id.value, ids_.size());
      ids_.push_back(node.id);
      hop_.push_back(node.hop_id);
      rank_.push_back(node.rank);
      cost_.push_back(costs.at(node.id));
    }
    gateway_ = index_.at(topology.gateway.value);
    p_sw_ = topology.channel.evaluated().p_sw;

    neighbors_.resize(n);
    candidates_.resize(n);
    stamped_.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
      for (NodeId nb : topology.neighbors(ids_[i])) {
        auto ber = topology.link(ids_[i], nb);
        if (!ber) ber = topology.link(nb, ids_[i]);
        const double q = 1.0 - ber->value();
        LinkDraw draw{index_.at(nb.value), std::pow(q, frame_.micro_frame_bits()),
                      std::pow(q, frame_.data_bits())};
        neighbors_[i].push_back(draw);
        if (hop_[draw.peer] < hop_[i]) candidates_[i].push_back(draw);
      }
      if (ids_[i] == topology.gateway || candidates_[i].empty()) continue;
      const ForwarderSet fs = forwarder_set(topology, ids_[i], costs);
      for (const auto& e : fs.entries()) stamped_[i].push_back(index_.at(e.node().value));
    }
  }

  std::size_t size() const { return ids_.size(); }
  std::size_t gateway() const { return gateway_; }
  NodeId id(std::size_t i) const { return ids_[i]; }
  int hop(std::size_t i) const { return hop_[i]; }
  double rank(std::size_t i) const { return rank_[i]; }
  double cost(std::size_t i) const { return cost_[i]; }
  const FrameParams& frame() const { return frame_; }
  const std::vector<LinkDraw>& candidates(std::size_t i) const { return candidates_[i]; }
  const std::vector<std::size_t>& stamped(std::size_t i) const { return stamped_[i]; }

  std::size_t index(NodeId id) const {
    auto it = index_.find(id.value);
    if (it == index_.end()) throw Error("unknown node id " + to_string(id));
    return it->second;
  }

  const LinkDraw* link(std::size_t from, std::size_t to) const {
    for (const auto& l : neighbors_[from]) {
      if (l.peer == to) return &l;
    }
    return nullptr;
  }

  /// Copy received: some micro-frame and the data frame decode.
  bool receives(const LinkDraw& l, Rng& rng) const {
    if (!rng.bernoulli(p_sw_)) return true;
    return preamble_heard(l, rng) && rng.bernoulli(l.data_ok);
  }

  /// Transmission overheard: some micro-frame or the data frame decodes.
  bool overhears(const LinkDraw& l, Rng& rng) const {
    if (!rng.bernoulli(p_sw_)) return true;
    const bool pre = preamble_heard(l, rng);
    const bool data = rng.bernoulli(l.data_ok);
    return pre || data;
  }

 private:
  bool preamble_heard(const LinkDraw& l, Rng& rng) const {
    bool heard = false;
    for (int k = 0; k < frame_.micro_frames(); ++k) heard = rng.bernoulli(l.micro_ok) || heard;
    return heard;
  }

  FrameParams frame_;
  std::vector<NodeId> ids_;
  std::unordered_map<std::uint32_t, std::size_t> index_;
  std::vector<int> hop_;
  std::vector<double> rank_;
  std::vector<double> cost_;
  std::size_t gateway_ = 0;
  double p_sw_ = 1.0;
  std::vector<std::vector<LinkDraw>> neighbors_;
  std::vector<std::vector<LinkDraw>> candidates_;
  std::vector<std::vector<std::size_t>> stamped_;
};

struct PendingTx {
  long long time;
  std::uint64_t seq;
  std::size_t node;
  int hops;
  int attempt;
};

struct LaterFirst {
  bool operator()(const PendingTx& a, const PendingTx& b) const {
    if (a.time != b.time) return a.time > b.time;
    return a.seq > b.seq;
  }
};

DeliveryTrace deliver(const Network& net, const SimConfig& config, long long replication_index) {
  Rng rng(replication_seed(config.seed, static_cast<std::uint64_t>(replication_index)));
  DeliveryTrace trace;
  const bool log = config.record_events;
  auto record = [&](long long time, EventKind kind, std::size_t actor, std::string detail) {
    if (log) trace.events.push_back({time, kind, net.id(actor), std::move(detail)});
  };

  std::size_t source = 0;
  if (config.source) {
    source = net.index(*config.source);
  } else {
    if (net.size() < 2) {
      source = net.gateway();
    } else {
      // Uniform over non-gateway nodes.
      std::size_t pick = static_cast<std::size_t>(rng.below(net.size() - 1));
      source = pick >= net.gateway() ? pick + 1 : pick;
    }
  }
  trace.source = net.id(source);

  if (source == net.gateway()) {
    record(0, EventKind::GatewayArrival, source, "source is gateway");
    trace.delivered = true;
    return trace;
  }

  const bool receiver_based = config.mode == ProtocolMode::ReceiverBased;
  const long long bits = net.frame().bits_per_transmission();
  std::vector<char> seen(net.size(), 0);
  seen[source] = 1;
  int arrivals = 0;
  std::uint64_t seq = 0;
  std::priority_queue<PendingTx, std::vector<PendingTx>, LaterFirst> pending;
  pending.push({0, seq++, source, 0, 1});

  std::vector<std::size_t> hearing;
  struct Slotted {
    std::size_t node;
    int slot;
  };
  std::vector<Slotted> election;

  while (!pending.empty()) {
    const PendingTx tx = pending.top();
    pending.pop();
    if (tx.hops >= config.max_hops) continue;

    ++trace.transmissions;
    trace.energy_bits += bits;
    record(tx.time, EventKind::TransmitPreamble, tx.node, "attempt " + std::to_string(tx.attempt));
    record(tx.time, EventKind::TransmitData, tx.node, "hops " + std::to_string(tx.hops));

    hearing.clear();
    for (const auto& l : net.candidates(tx.node)) {
      if (l.peer != net.gateway() && seen[l.peer]) continue;
      if (!net.receives(l, rng)) continue;
      hearing.push_back(l.peer);
      record(tx.time, EventKind::Receive, l.peer, "from " + to_string(net.id(tx.node)));
      if (l.peer == net.gateway()) {
        if (arrivals == 0) trace.hops = tx.hops + 1;
        ++arrivals;
        record(tx.time, EventKind::GatewayArrival, l.peer, "hops " + std::to_string(tx.hops + 1));
      } else {
        seen[l.peer] = 1;
      }
    }

    if (hearing.empty()) {
      if (tx.attempt < config.max_attempts) {
        pending.push({tx.time + 1, seq++, tx.node, tx.hops, tx.attempt + 1});
      }
      continue;
    }

    // Order the contenders and give each its backoff slot.
    election.clear();
    if (receiver_based) {
      std::sort(hearing.begin(), hearing.end(), [&](std::size_t a, std::size_t b) {
        if (net.rank(a) != net.rank(b)) return net.rank(a) < net.rank(b);
        return net.id(a) < net.id(b);
      });
      for (std::size_t k = 0; k < hearing.size(); ++k) {
        election.push_back({hearing[k], static_cast<int>(k)});
      }
    } else {
      const auto& header = net.stamped(tx.node);
      for (std::size_t k = 0; k < header.size(); ++k) {
        if (std::find(hearing.begin(), hearing.end(), header[k]) != hearing.end()) {
          election.push_back({header[k], static_cast<int>(k)});
        }
      }
    }
    std::erase_if(election, [&](const Slotted& s) { return s.slot >= config.election_slots; });
    if (election.empty()) continue;

    const Slotted winner = election.front();
    record(tx.time + 1 + winner.slot, EventKind::Elect, winner.node,
           "slot " + std::to_string(winner.slot));
    if (winner.node != net.gateway()) {
      pending.push({tx.time + 1 + winner.slot, seq++, winner.node, tx.hops + 1, 1});
    }

    const bool suppress = !receiver_based || config.suppression;
    for (std::size_t k = 1; k < election.size(); ++k) {
      const Slotted& c = election[k];
      if (c.node == net.gateway()) continue;
      const long long fire_at = tx.time + 1 + c.slot;
      bool overheard = false;
      if (suppress) {
        if (const LinkDraw* l = net.link(c.node, winner.node)) overheard = net.overhears(*l, rng);
      }
      if (overheard) {
        record(fire_at, EventKind::Suppress, c.node, "heard " + to_string(net.id(winner.node)));
        continue;
      }
      ++trace.duplicate_forwards;
      trace.duplicate_cost += net.cost(c.node);
      record(fire_at, EventKind::DuplicateForward, c.node, "slot " + std::to_string(c.slot));
      pending.push({fire_at, seq++, c.node, tx.hops + 1, 1});
    }
  }

  trace.delivered = arrivals > 0;
  trace.duplicate_arrivals = std::max(0, arrivals - 1);
  return trace;
}

struct Accumulator {
  long long attempted = 0;
  long long succeeded = 0;
  double duplicates = 0.0;
  double duplicate_arrivals = 0.0;
  double overhead = 0.0;
  double overhead_sq = 0.0;
  double transmissions = 0.0;
  double hops = 0.0;
  double energy = 0.0;

  void add(const DeliveryTrace& t) {
    ++attempted;
    if (t.delivered) {
      ++succeeded;
      hops += t.hops;
    }
    duplicates += t.duplicate_forwards;
    duplicate_arrivals += t.duplicate_arrivals;
    overhead += t.duplicate_cost;
    overhead_sq += t.duplicate_cost * t.duplicate_cost;
    transmissions += t.transmissions;
    energy += static_cast<double>(t.energy_bits);
  }

  void merge(const Accumulator& o) {
    attempted += o.attempted;
    succeeded += o.succeeded;
    duplicates += o.duplicates;
    duplicate_arrivals += o.duplicate_arrivals;
    overhead += o.overhead;
    overhead_sq += o.overhead_sq;
    transmissions += o.transmissions;
    hops += o.hops;
    energy += o.energy;
  }
};

}  // namespace

DeliveryTrace simulate_delivery(const Topology& topology, const PathCostTable& costs,
                                const SimConfig& config, long long replication_index) {
  return deliver(Network(topology, costs), config, replication_index);
}

Metrics run_experiment(const Topology& topology, const SimConfig& config) {
  return run_experiment(topology, network_path_costs(topology, UnreachablePolicy::Infinite), config);
}

Metrics run_experiment(const Topology& topology, const PathCostTable& costs, const SimConfig& config) {
  if (config.replications < 1) throw Error("replications must be at least 1");
  if (config.max_attempts < 1 || config.election_slots < 1) {
    throw Error("max_attempts and election_slots must be positive");
  }
  int diameter = 0;
  for (const auto& n : topology.nodes) diameter = std::max(diameter, n.hop_id);
  if (config.max_hops < diameter) {
    throw Error("max_hops " + std::to_string(config.max_hops) + " is below the network depth " +
                std::to_string(diameter));
  }

  const Network net(topology, costs);
  SimConfig quiet = config;
  quiet.record_events = false;

  // Fixed chunking keeps the floating point reduction order independent of
  // the number of worker threads.
  constexpr long long kChunks = 64;
  const long long reps = config.replications;
  std::vector<Accumulator> partial(static_cast<std::size_t>(std::min(kChunks, reps)));
  const long long chunks = static_cast<long long>(partial.size());
  auto run_chunk = [&](long long c) {
    const long long begin = reps * c / chunks;
    const long long end = reps * (c + 1) / chunks;
    for (long long r = begin; r < end; ++r) partial[static_cast<std::size_t>(c)].add(deliver(net, quiet, r));
  };

  const unsigned workers = std::max(1u, std::min<unsigned>(std::thread::hardware_concurrency(),
                                                           static_cast<unsigned>(chunks)));
  if (workers == 1 || reps < 1000) {
    for (long long c = 0; c < chunks; ++c) run_chunk(c);
  } else {
    std::vector<std::jthread> pool;
    for (unsigned w = 0; w < workers; ++w) {
      pool.emplace_back([&, w] {
        for (long long c = w; c < chunks; c += workers) run_chunk(c);
      });
    }
  }

  Accumulator total;
  for (const auto& p : partial) total.merge(p);

  Metrics m;
  const double n = static_cast<double>(total.attempted);
  m.deliveries_attempted = total.attempted;
  m.deliveries_succeeded = total.succeeded;
  m.pdr = static_cast<double>(total.succeeded) / n;
  m.mean_duplicates = total.duplicates / n;
  m.mean_duplicate_arrivals = total.duplicate_arrivals / n;
  m.empirical_coordination_overhead = total.overhead / n;
  m.mean_transmissions = total.transmissions / n;
  m.mean_hops = total.succeeded > 0 ? total.hops / static_cast<double>(total.succeeded) : 0.0;
  m.mean_energy_bits = total.energy / n;
  if (total.attempted > 1) {
    const double var = std::max(0.0, (total.overhead_sq - total.overhead * total.overhead / n) / (n - 1));
    m.overhead_std_error = std::sqrt(var / n);
  }
  return m;
}

double empirical_link_success(const Topology& topology, NodeId from, NodeId to,
                              const FrameParams& frame, long long trials, std::uint64_t seed) {
  if (trials < 1) throw Error("trials must be at least 1");
  auto ber = topology.link(from, to);
  if (!ber) throw Error("no link " + to_string(from) + "-" + to_string(to));
  const double p = ber->value();
  const double p_sw = topology.channel.evaluated().p_sw;

  Rng rng(mix_seed(seed));
  auto frame_clean = [&](int bits) {
    for (int b = 0; b < bits; ++b) {
      if (rng.bernoulli(p)) return false;
    }
    return true;
  };

  long long heard = 0;
  for (long long t = 0; t < trials; ++t) {
    if (!rng.bernoulli(p_sw)) {
      ++heard;
      continue;
    }
    bool preamble = false;
    for (int k = 0; k < frame.micro_frames(); ++k) preamble = frame_clean(frame.micro_frame_bits()) || preamble;
    const bool data = frame_clean(frame.data_bits());
    if (preamble && data) ++heard;
  }
  return static_cast<double>(heard) / static_cast<double>(trials);
}

}  // namespace oppnet
