#pragma once

#include "oppnet/analysis.hpp"
#include "oppnet/model.hpp"

#include <cstdint>
#include <optional>
#include <string_view>

namespace oppnet {

enum class ProtocolMode {
  ReceiverBased,      ///< receivers elect the forwarder among themselves
  SenderPrioritized,  ///< sender stamps its ordered forwarder set into the header
};

std::string_view to_string(ProtocolMode mode);
ProtocolMode parse_protocol_mode(std::string_view text);

struct SimConfig {
  ProtocolMode mode = ProtocolMode::ReceiverBased;
  long long replications = 1;
  std::uint64_t seed = 1;
  std::optional<NodeId> source;  ///< empty: uniform over non-gateway nodes
  int max_hops = 64;
  int election_slots = 16;
  bool suppression = true;  ///< overhearing suppression in receiver-based mode
  int max_attempts = 1;     ///< broadcasts per hop before the packet is dropped
  bool record_events = true;
};

/// One source-to-gateway delivery. Deterministic for fixed
/// (topology, costs, config, replication_index).
///
/// Reception of a copy requires decoding at least one micro-frame and the
/// data frame. Suppression requires overhearing the elected forwarder's
/// preamble or data, so a candidate duplicates with the failure probability
/// of the closed-form model. Channel gating is drawn per transmission and
/// receiver.
DeliveryTrace simulate_delivery(const Topology& topology, const PathCostTable& costs,
                                const SimConfig& config, long long replication_index);

/// Aggregates `config.replications` deliveries; replication r uses
/// replication_seed(config.seed, r).
Metrics run_experiment(const Topology& topology, const SimConfig& config);
Metrics run_experiment(const Topology& topology, const PathCostTable& costs, const SimConfig& config);

/// Bit-level estimate of the probability that `to` decodes a transmission of
/// `from` (at least one micro-frame and the data frame), including channel
/// gating on the topology's evaluated channel.
double empirical_link_success(const Topology& topology, NodeId from, NodeId to,
                              const FrameParams& frame, long long trials, std::uint64_t seed);

}  // namespace oppnet
