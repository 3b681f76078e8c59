#pragma once

#include <Eigen/Core>

#include <compare>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace oppnet {

/// Raised for contract violations reported by the library (bad input,
/// unreachable nodes, degenerate forwarder sets).
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct NodeId {
  std::uint32_t value = 0;

  friend auto operator<=>(const NodeId&, const NodeId&) = default;
};

std::string to_string(NodeId id);

/// Preamble-sampling frame geometry: r_m micro-frames of m bits followed by a
/// d-bit data frame.
class FrameParams {
 public:
  FrameParams(int micro_frame_bits, int micro_frames, int data_bits);

  int micro_frame_bits() const { return m_; }
  int micro_frames() const { return r_m_; }
  int data_bits() const { return d_; }

  /// Bits on air for one transmission (full preamble plus data).
  long long bits_per_transmission() const {
    return static_cast<long long>(m_) * r_m_ + d_;
  }

  static bool valid(int m, int r_m, int d) { return m >= 1 && r_m >= 1 && d >= 1; }

  friend bool operator==(const FrameParams&, const FrameParams&) = default;

 private:
  int m_;
  int r_m_;
  int d_;
};

class BitErrorRate {
 public:
  explicit BitErrorRate(double p);

  double value() const { return p_; }

  static bool valid(double p) { return p >= 0.0 && p <= 1.0; }

  friend bool operator==(const BitErrorRate&, const BitErrorRate&) = default;

 private:
  double p_;
};

struct Channel {
  double p_sw = 1.0;
  double p_acc = 1.0;
  double bandwidth_hz = 1.0;

  friend bool operator==(const Channel&, const Channel&) = default;
};

/// Cognitive channel set. `evaluated` selects the channel whose switching
/// probability gates link failures.
class ChannelModel {
 public:
  ChannelModel();
  ChannelModel(std::vector<Channel> channels, double noise_power, std::size_t evaluated = 0);

  std::span<const Channel> channels() const { return channels_; }
  double noise_power() const { return noise_power_; }
  std::size_t evaluated_index() const { return evaluated_; }
  const Channel& evaluated() const { return channels_[evaluated_]; }

  static bool valid(const Channel& c) {
    return c.p_sw >= 0.0 && c.p_sw <= 1.0 && c.p_acc >= 0.0 && c.p_acc <= 1.0 &&
           c.bandwidth_hz > 0.0;
  }

  friend bool operator==(const ChannelModel&, const ChannelModel&) = default;

 private:
  std::vector<Channel> channels_;
  double noise_power_;
  std::size_t evaluated_;
};

/// Candidate next hop: link success probability and the remaining path cost
/// from that candidate to the gateway (ETX units).
class ForwarderEntry {
 public:
  ForwarderEntry(NodeId node, double p_link, double remaining_cost);

  NodeId node() const { return node_; }
  double p_link() const { return p_link_; }
  double remaining_cost() const { return remaining_cost_; }

  static bool valid(double p_link, double remaining_cost) {
    return p_link >= 0.0 && p_link <= 1.0 && remaining_cost >= 0.0;
  }

  friend bool operator==(const ForwarderEntry&, const ForwarderEntry&) = default;

 private:
  NodeId node_;
  double p_link_;
  double remaining_cost_;
};

/// Forwarder set kept in canonical order: ascending remaining cost, ties by
/// ascending node id. Input order never matters.
class ForwarderSet {
 public:
  ForwarderSet() = default;
  explicit ForwarderSet(std::vector<ForwarderEntry> entries);

  std::span<const ForwarderEntry> entries() const { return entries_; }
  std::size_t size() const { return entries_.size(); }
  bool empty() const { return entries_.empty(); }
  const ForwarderEntry& operator[](std::size_t i) const { return entries_[i]; }

  Eigen::ArrayXd p_link() const;
  Eigen::ArrayXd remaining_cost() const;

  friend bool operator==(const ForwarderSet&, const ForwarderSet&) = default;

 private:
  std::vector<ForwarderEntry> entries_;
};

struct Node {
  NodeId id;
  Eigen::Vector2d position = Eigen::Vector2d::Zero();
  double rank = 1.0;
  int hop_id = 0;
};

/// Static network snapshot. Links are stored per direction so asymmetric maps
/// can be represented (and reported by validate()).
struct Topology {
  std::vector<Node> nodes;
  NodeId gateway;
  std::map<std::pair<NodeId, NodeId>, BitErrorRate> links;
  FrameParams frame{8, 2, 100};
  ChannelModel channel;

  std::optional<std::size_t> index_of(NodeId id) const;
  const Node& node(NodeId id) const;
  Node& node(NodeId id);
  bool has_node(NodeId id) const { return index_of(id).has_value(); }

  /// Inserts the link in both directions.
  void add_link(NodeId a, NodeId b, BitErrorRate ber);
  std::optional<BitErrorRate> link(NodeId a, NodeId b) const;

  /// Neighbors over either link direction, ascending id.
  std::vector<NodeId> neighbors(NodeId id) const;
};

struct Violation {
  std::string kind;
  std::string detail;
};

std::vector<Violation> validate(const Topology& topology);

enum class EventKind {
  TransmitPreamble,
  TransmitData,
  Receive,
  Elect,
  Suppress,
  DuplicateForward,
  GatewayArrival,
};

std::string_view to_string(EventKind kind);

struct TraceEvent {
  long long time = 0;
  EventKind kind = EventKind::TransmitPreamble;
  NodeId actor;
  std::string detail;
};

struct DeliveryTrace {
  NodeId source;
  std::vector<TraceEvent> events;
  bool delivered = false;
  int duplicate_arrivals = 0;
  int transmissions = 0;

  // Derived bookkeeping kept alongside the event log.
  int duplicate_forwards = 0;
  double duplicate_cost = 0.0;
  long long energy_bits = 0;
  int hops = 0;  ///< hop count of the first copy to reach the gateway
};

struct Metrics {
  long long deliveries_attempted = 0;
  long long deliveries_succeeded = 0;
  double pdr = 0.0;
  double mean_duplicates = 0.0;
  double empirical_coordination_overhead = 0.0;
  double mean_transmissions = 0.0;
  double mean_hops = 0.0;
  double mean_duplicate_arrivals = 0.0;
  double mean_energy_bits = 0.0;
  /// Standard error of empirical_coordination_overhead across deliveries.
  double overhead_std_error = 0.0;
};

}  // namespace oppnet
