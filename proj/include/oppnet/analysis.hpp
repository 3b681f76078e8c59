#pragma once

#include "oppnet/model.hpp"

#include <Eigen/Core>

#include <cmath>
#include <concepts>

namespace oppnet {

// Closed-form model of receiver-based opportunistic forwarding over a
// preamble-sampling MAC. Scalar functions are templated on the floating point
// type; the forwarder-set functions accept any Eigen array expression whose
// coefficients are already in canonical (cost-sorted) order.

/// Probability that every one of the r_m preamble micro-frames is corrupted:
/// [1 - (1-p)^m]^{r_m}.
template <std::floating_point Scalar>
Scalar preamble_miss_probability(Scalar p, const FrameParams& frame) {
  using std::pow;
  const Scalar micro_ok = pow(Scalar(1) - p, Scalar(frame.micro_frame_bits()));
  return pow(Scalar(1) - micro_ok, Scalar(frame.micro_frames()));
}

/// Probability that the d-bit data frame is corrupted: 1 - (1-p)^d.
template <std::floating_point Scalar>
Scalar data_miss_probability(Scalar p, const FrameParams& frame) {
  using std::pow;
  return Scalar(1) - pow(Scalar(1) - p, Scalar(frame.data_bits()));
}

/// P_f = P_sw * preamble_miss * data_miss: a forwarder-set member hears
/// neither the preamble nor the data frame of an ongoing transmission.
template <std::floating_point Scalar>
Scalar failure_probability(Scalar p, const FrameParams& frame, Scalar p_sw) {
  return p_sw * preamble_miss_probability(p, frame) * data_miss_probability(p, frame);
}

/// P_ab = 1 - P_f.
template <std::floating_point Scalar>
Scalar link_success(Scalar p, const FrameParams& frame, Scalar p_sw) {
  return Scalar(1) - failure_probability(p, frame, p_sw);
}

/// Probability that a receiver obtains a usable copy of the packet: on the
/// evaluated channel it must decode at least one micro-frame and the data
/// frame; off that channel the transmission is taken as clean.
template <std::floating_point Scalar>
Scalar reception_probability(Scalar p, const FrameParams& frame, Scalar p_sw) {
  const Scalar on_channel =
      (Scalar(1) - preamble_miss_probability(p, frame)) * (Scalar(1) - data_miss_probability(p, frame));
  return (Scalar(1) - p_sw) + p_sw * on_channel;
}

inline double preamble_miss_probability(BitErrorRate p, const FrameParams& frame) {
  return preamble_miss_probability(p.value(), frame);
}
inline double failure_probability(BitErrorRate p, const FrameParams& frame, double p_sw) {
  return failure_probability(p.value(), frame, p_sw);
}
inline double link_success(BitErrorRate p, const FrameParams& frame, double p_sw) {
  return link_success(p.value(), frame, p_sw);
}
inline double reception_probability(BitErrorRate p, const FrameParams& frame, double p_sw) {
  return reception_probability(p.value(), frame, p_sw);
}

/// Inverse of link_success in the bit error rate (bisection; link_success is
/// non-increasing in p). Throws if the target is not attainable.
double ber_for_link_success(double target, const FrameParams& frame, double p_sw);

/// Inverse of reception_probability in the bit error rate.
double ber_for_reception(double target, const FrameParams& frame, double p_sw);

namespace detail {

/// Telescoping sum sum_j cost_j * p_j * prod_{n<j} (1 - p_n) and the miss
/// product prod_j (1 - p_j), in coefficient order.
template <typename PDerived, typename YDerived>
std::pair<typename PDerived::Scalar, typename PDerived::Scalar> ordered_progress(
    const Eigen::ArrayBase<PDerived>& p_link, const Eigen::ArrayBase<YDerived>& cost) {
  using Scalar = typename PDerived::Scalar;
  eigen_assert(p_link.size() == cost.size());
  Scalar weighted = 0;
  Scalar none_so_far = 1;
  for (Eigen::Index j = 0; j < p_link.size(); ++j) {
    // Zero-probability terms contribute nothing, even against an infinite cost.
    if (p_link.coeff(j) != Scalar(0) && none_so_far != Scalar(0)) {
      weighted += cost.coeff(j) * p_link.coeff(j) * none_so_far;
    }
    none_so_far *= Scalar(1) - p_link.coeff(j);
  }
  return {weighted, none_so_far};
}

}  // namespace detail

/// Expected path cost through a sorted forwarder set:
///   Y_i = (1 + sum_j Y_j P_ij prod_{n<j}(1-P_in)) / (1 - prod_j (1-P_ij)).
/// Throws "unreachable forwarder set" when no entry can ever receive.
template <typename PDerived, typename YDerived>
typename PDerived::Scalar total_path_cost(const Eigen::ArrayBase<PDerived>& p_link,
                                          const Eigen::ArrayBase<YDerived>& cost) {
  using Scalar = typename PDerived::Scalar;
  if (p_link.size() == 0) throw Error("empty forwarder set");
  const auto [weighted, none] = detail::ordered_progress(p_link, cost);
  const Scalar reach = Scalar(1) - none;
  if (!(reach > Scalar(0))) throw Error("unreachable forwarder set");
  return (Scalar(1) + weighted) / reach;
}

/// Cost-weighted coordination overhead
///   Delta_c = sum_b P_ib Y_b prod_{r<b} (1 - P_ir).
template <typename PDerived, typename YDerived>
typename PDerived::Scalar coordination_overhead(const Eigen::ArrayBase<PDerived>& p_link,
                                                const Eigen::ArrayBase<YDerived>& cost) {
  if (p_link.size() == 0) throw Error("empty forwarder set");
  return detail::ordered_progress(p_link, cost).first;
}

double total_path_cost(const ForwarderSet& fs);
double coordination_overhead(const ForwarderSet& fs);

/// Coordination overhead of N forwarders sharing cost and link success:
/// cost * (1 - (1-p)^N).
template <std::floating_point Scalar>
Scalar equal_cost_overhead(Scalar cost, Scalar p_link, int n) {
  using std::pow;
  return cost * (Scalar(1) - pow(Scalar(1) - p_link, Scalar(n)));
}

/// Expected retransmissions after the first attempt of a geometric process
/// with per-attempt failure f: chi = f / (1 - f).
template <std::floating_point Scalar>
Scalar expected_retransmissions(Scalar per_attempt_failure) {
  if (!(per_attempt_failure >= Scalar(0) && per_attempt_failure <= Scalar(1))) {
    throw Error("per-attempt failure probability outside [0,1]");
  }
  if (per_attempt_failure == Scalar(1)) throw Error("never succeeds");
  return per_attempt_failure / (Scalar(1) - per_attempt_failure);
}

/// Probability that no member of the forwarder set receives one attempt.
double all_miss_probability(const ForwarderSet& fs);

/// Potential bandwidth P_acc * B of a cognitive channel.
template <std::floating_point Scalar>
Scalar potential_bandwidth(Scalar p_acc, Scalar bandwidth_hz) {
  if (!(p_acc >= Scalar(0) && p_acc <= Scalar(1))) throw Error("access probability outside [0,1]");
  if (!(bandwidth_hz > Scalar(0))) throw Error("bandwidth must be positive");
  return p_acc * bandwidth_hz;
}

/// Per-node expected path cost Y, aligned with Topology::nodes.
struct PathCostTable {
  std::vector<NodeId> ids;
  Eigen::VectorXd cost;

  double at(NodeId id) const;
};

/// What network_path_costs does with a node whose forwarder set can never
/// receive (every p_link is 0).
enum class UnreachablePolicy { Throw, Infinite };

/// Applies total_path_cost network-wide in ascending hop id order. Requires
/// assigned hop ids; throws "disconnected node" for a non-gateway node
/// without eligible forwarders. With UnreachablePolicy::Infinite a node whose
/// forwarders never receive gets +inf instead of an error.
PathCostTable network_path_costs(const Topology& topology,
                                 UnreachablePolicy policy = UnreachablePolicy::Throw);

}  // namespace oppnet
