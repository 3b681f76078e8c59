#include "oppnet/topology.hpp"

#include "oppnet/rng.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <numbers>

namespace oppnet {

double mapped_ber(const DistanceMappedBer& model, double distance, double range) {
  const double ratio = range > 0.0 ? distance / range : 1.0;
  const double p = model.p_min + (model.p_max - model.p_min) * ratio * ratio;
  return std::clamp(p, std::min(model.p_min, model.p_max), std::max(model.p_min, model.p_max));
}

Topology generate(const GeneratorConfig& config, std::uint64_t seed) {
  if (config.node_count < 1) throw Error("node count must be at least 1");
  if (!(config.area_side > 0.0) || !(config.radio_range > 0.0)) {
    throw Error("area side and radio range must be positive");
  }

  Rng rng(mix_seed(seed));
  Topology t;
  t.frame = config.frame;
  t.channel = config.channel;
  t.gateway = NodeId{0};
  t.nodes.push_back(Node{NodeId{0}, config.gateway_position, 1.0, 0});
  for (int i = 1; i < config.node_count; ++i) {
    Eigen::Vector2d pos(rng.uniform() * config.area_side, rng.uniform() * config.area_side);
    t.nodes.push_back(Node{NodeId{static_cast<std::uint32_t>(i)}, pos, 1.0, 0});
  }

  for (std::size_t a = 0; a < t.nodes.size(); ++a) {
    for (std::size_t b = a + 1; b < t.nodes.size(); ++b) {
      const double dist = (t.nodes[a].position - t.nodes[b].position).norm();
      if (dist > config.radio_range) continue;
      const double p = std::visit(
          [&](const auto& model) -> double {
            using M = std::decay_t<decltype(model)>;
            if constexpr (std::is_same_v<M, FixedBer>) {
              return model.p;
            } else {
              return mapped_ber(model, dist, config.radio_range);
            }
          },
          config.ber);
      t.add_link(t.nodes[a].id, t.nodes[b].id, BitErrorRate(p));
    }
  }

  try {
    return assign_hop_ids(std::move(t));
  } catch (const Error& e) {
    throw Error(std::string("disconnected topology (") + e.what() + ")");
  }
}

Topology assign_hop_ids(Topology topology) {
  auto gw = topology.index_of(topology.gateway);
  if (!gw) throw Error("gateway is not a node");

  std::vector<int> hop(topology.nodes.size(), -1);
  hop[*gw] = 0;
  std::deque<std::size_t> frontier{*gw};
  while (!frontier.empty()) {
    const std::size_t cur = frontier.front();
    frontier.pop_front();
    for (NodeId nb : topology.neighbors(topology.nodes[cur].id)) {
      const std::size_t idx = *topology.index_of(nb);
      if (hop[idx] >= 0) continue;
      hop[idx] = hop[cur] + 1;
      frontier.push_back(idx);
    }
  }
  for (std::size_t i = 0; i < hop.size(); ++i) {
    if (hop[i] < 0) throw Error("disconnected node " + to_string(topology.nodes[i].id));
    topology.nodes[i].hop_id = hop[i];
  }
  return topology;
}

Topology compute_ranks(Topology topology, UnreachablePolicy policy) {
  const PathCostTable costs = network_path_costs(topology, policy);
  for (std::size_t i = 0; i < topology.nodes.size(); ++i) {
    auto& n = topology.nodes[i];
    n.rank = n.id == topology.gateway ? 1.0 : 1.0 + costs.cost[static_cast<Eigen::Index>(i)];
  }
  return topology;
}

Topology prepare(Topology topology) {
  return compute_ranks(assign_hop_ids(std::move(topology)), UnreachablePolicy::Infinite);
}

ForwarderSet forwarder_set(const Topology& topology, NodeId node, const PathCostTable& costs) {
  const Node& self = topology.node(node);
  const double p_sw = topology.channel.evaluated().p_sw;
  std::vector<ForwarderEntry> entries;
  for (NodeId nb : topology.neighbors(node)) {
    if (topology.node(nb).hop_id >= self.hop_id) continue;
    auto ber = topology.link(node, nb);
    if (!ber) ber = topology.link(nb, node);
    entries.emplace_back(nb, link_success(*ber, topology.frame, p_sw), costs.at(nb));
  }
  if (entries.empty() && node != topology.gateway) {
    throw Error("disconnected node " + to_string(node) + ": no neighbor with smaller hop id");
  }
  return ForwarderSet(std::move(entries));
}

int hop_distance(const Topology& topology, NodeId a, NodeId b) {
  return std::abs(topology.node(a).hop_id - topology.node(b).hop_id);
}

double rank_difference_distance(const Topology& topology, NodeId a, NodeId b) {
  return std::abs(topology.node(a).rank - topology.node(b).rank);
}

Topology witness_topology() {
  Topology t;
  t.gateway = NodeId{1};
  t.nodes = {
      Node{NodeId{1}, {0.0, 0.0}},
      Node{NodeId{2}, {30.0, 0.0}},
      Node{NodeId{5}, {60.0, 0.0}},
  };
  const double ber = ber_for_link_success(1.0 / 1.52, t.frame, t.channel.evaluated().p_sw);
  t.add_link(NodeId{1}, NodeId{2}, BitErrorRate(ber));
  t.add_link(NodeId{2}, NodeId{5}, BitErrorRate(ber));
  return prepare(std::move(t));
}

Topology chain_topology(int hops, double ber, const FrameParams& frame, const ChannelModel& channel) {
  if (hops < 0) throw Error("chain length must be non-negative");
  Topology t;
  t.frame = frame;
  t.channel = channel;
  t.gateway = NodeId{0};
  for (int i = 0; i <= hops; ++i) {
    t.nodes.push_back(Node{NodeId{static_cast<std::uint32_t>(i)}, {10.0 * i, 0.0}});
    if (i > 0) {
      t.add_link(NodeId{static_cast<std::uint32_t>(i - 1)}, NodeId{static_cast<std::uint32_t>(i)},
                 BitErrorRate(ber));
    }
  }
  return prepare(std::move(t));
}

Topology star_topology(int relays, double source_ber, std::optional<double> relay_ber,
                       const FrameParams& frame, const ChannelModel& channel) {
  if (relays < 1) throw Error("star needs at least one relay");
  Topology t;
  t.frame = frame;
  t.channel = channel;
  t.gateway = NodeId{0};
  t.nodes.push_back(Node{NodeId{0}, {0.0, 0.0}});
  for (int i = 1; i <= relays; ++i) {
    const double angle = 2.0 * std::numbers::pi * (i - 1) / relays;
    t.nodes.push_back(Node{NodeId{static_cast<std::uint32_t>(i)},
                           {10.0 + 5.0 * std::cos(angle), 5.0 * std::sin(angle)}});
  }
  const NodeId source{static_cast<std::uint32_t>(relays + 1)};
  t.nodes.push_back(Node{source, {20.0, 0.0}});

  for (int i = 1; i <= relays; ++i) {
    const NodeId relay{static_cast<std::uint32_t>(i)};
    t.add_link(t.gateway, relay, BitErrorRate(0.0));
    t.add_link(source, relay, BitErrorRate(source_ber));
    if (relay_ber) {
      for (int j = i + 1; j <= relays; ++j) {
        t.add_link(relay, NodeId{static_cast<std::uint32_t>(j)}, BitErrorRate(*relay_ber));
      }
    }
  }
  return prepare(std::move(t));
}

Topology diamond_topology(double source_ber, double relay_ber, std::optional<double> cross_ber,
                          const FrameParams& frame, const ChannelModel& channel) {
  Topology t;
  t.frame = frame;
  t.channel = channel;
  t.gateway = NodeId{0};
  t.nodes = {
      Node{NodeId{0}, {0.0, 0.0}},
      Node{NodeId{1}, {10.0, 5.0}},
      Node{NodeId{2}, {10.0, -5.0}},
      Node{NodeId{3}, {20.0, 0.0}},
  };
  t.add_link(NodeId{0}, NodeId{1}, BitErrorRate(relay_ber));
  t.add_link(NodeId{0}, NodeId{2}, BitErrorRate(relay_ber));
  t.add_link(NodeId{3}, NodeId{1}, BitErrorRate(source_ber));
  t.add_link(NodeId{3}, NodeId{2}, BitErrorRate(source_ber));
  if (cross_ber) t.add_link(NodeId{1}, NodeId{2}, BitErrorRate(*cross_ber));
  return prepare(std::move(t));
}

}  // namespace oppnet
