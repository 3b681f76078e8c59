#pragma once

#include "oppnet/analysis.hpp"
#include "oppnet/model.hpp"

#include <cstdint>
#include <variant>

namespace oppnet {

struct FixedBer {
  double p = 0.0;
};

/// p = p_min + (p_max - p_min) * (dist / range)^2, clamped to [p_min, p_max].
struct DistanceMappedBer {
  double p_min = 0.0;
  double p_max = 0.01;
};

using BerModel = std::variant<FixedBer, DistanceMappedBer>;

struct GeneratorConfig {
  int node_count = 1;  ///< including the gateway
  double area_side = 100.0;
  double radio_range = 40.0;
  Eigen::Vector2d gateway_position = Eigen::Vector2d::Zero();
  BerModel ber = FixedBer{};
  FrameParams frame{8, 2, 100};
  ChannelModel channel;
};

double mapped_ber(const DistanceMappedBer& model, double distance, double range);

/// Uniform random placement in [0, side]^2 with the gateway (id 0) pinned at
/// its configured position. Hop ids are assigned; ranks are left at 1.
/// Throws "disconnected topology" if some node cannot reach the gateway.
Topology generate(const GeneratorConfig& config, std::uint64_t seed);

/// Breadth-first hop count from the gateway.
Topology assign_hop_ids(Topology topology);

/// rank = 1 + Y from network_path_costs; the gateway gets rank 1.
Topology compute_ranks(Topology topology, UnreachablePolicy policy = UnreachablePolicy::Throw);

/// assign_hop_ids followed by compute_ranks. Nodes that can never make
/// progress get an infinite rank rather than an error.
Topology prepare(Topology topology);

ForwarderSet forwarder_set(const Topology& topology, NodeId node, const PathCostTable& costs);

int hop_distance(const Topology& topology, NodeId a, NodeId b);

/// |rank(a) - rank(b)|. Kept only to exhibit how rank differences overstate
/// hop distance on lossy links; the engine never uses it.
double rank_difference_distance(const Topology& topology, NodeId a, NodeId b);

// Small named scenarios used by the tools and tests.

/// Gateway 1, relay 2 and node 5 in a line. Both links have success
/// 1/1.52, so Y(5) = 3.04 and rank(5) = 4.04 while node 5 is two hops out.
Topology witness_topology();

/// Gateway 0 and nodes 1..n in a line; every link has the given bit error rate.
Topology chain_topology(int hops, double ber, const FrameParams& frame = {8, 2, 100},
                        const ChannelModel& channel = {});

/// Source (id n+1) with n relays (ids 1..n), each relay one lossless hop from
/// gateway 0. Source-relay links use `source_ber`; relays are mutually linked
/// with `relay_ber` unless it is empty.
Topology star_topology(int relays, double source_ber, std::optional<double> relay_ber,
                       const FrameParams& frame = {8, 2, 100}, const ChannelModel& channel = {});

/// Gateway 0, relays 1 and 2 at hop 1, source 3 at hop 2. Source-relay links
/// use `source_ber`, relay-gateway links `relay_ber`, the relay-relay link
/// `cross_ber` unless empty.
Topology diamond_topology(double source_ber, double relay_ber, std::optional<double> cross_ber,
                          const FrameParams& frame = {8, 2, 100}, const ChannelModel& channel = {});

}  // namespace oppnet
