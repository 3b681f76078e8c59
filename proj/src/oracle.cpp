#include "oppnet/oracle.hpp"

#include "oppnet/rng.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace oppnet::oracle {

SingleHopResult exact_single_hop(const ForwarderSet& fs) {
  const std::size_t n = fs.size();
  if (n == 0) throw Error("empty forwarder set");
  if (n > 20) throw Error("exact_single_hop enumerates at most 20 forwarders");

  SingleHopResult out;
  double p_none = 0.0;
  double weighted = 0.0;
  for (std::uint32_t mask = 0; mask < (1u << n); ++mask) {
    double prob = 1.0;
    const ForwarderEntry* best = nullptr;
    for (std::size_t j = 0; j < n; ++j) {
      const ForwarderEntry& e = fs[j];
      if (mask & (1u << j)) {
        prob *= e.p_link();
        const bool better = best == nullptr || e.remaining_cost() < best->remaining_cost() ||
                            (e.remaining_cost() == best->remaining_cost() && e.node() < best->node());
        if (better) best = &e;
      } else {
        prob *= 1.0 - e.p_link();
      }
    }
    out.total_probability += prob;
    if (best == nullptr) {
      p_none = prob;
    } else if (prob > 0.0) {
      weighted += prob * best->remaining_cost();
    }
  }

  out.overhead = weighted;
  const double p_some = 1.0 - p_none;
  if (!(p_some > 0.0)) throw Error("unreachable forwarder set");
  // Attempts until a non-empty subset: geometric with mean 1 / p_some. Then the
  // chosen forwarder's remaining cost, conditioned on a non-empty subset.
  out.expected_cost = 1.0 / p_some + weighted / p_some;
  return out;
}

double exact_two_hop(const ChainSpec& spec, std::size_t max_states) {
  const auto& sizes = spec.level_sizes;
  if (sizes.size() < 2) throw Error("chain needs a gateway level and a source level");
  if (sizes.size() - 1 > 3) throw Error("chain longer than 3 hops");
  if (sizes.front() != 1 || sizes.back() != 1) throw Error("gateway and source levels hold one node");
  if (spec.success.size() != sizes.size()) throw Error("success table does not match levels");
  for (std::size_t l = 1; l < sizes.size(); ++l) {
    if (sizes[l] < 1 || sizes[l] > 2) throw Error("at most 2 nodes per level");
    if (spec.success[l].size() != static_cast<std::size_t>(sizes[l])) throw Error("bad success table");
    for (const auto& row : spec.success[l]) {
      if (row.size() != static_cast<std::size_t>(sizes[l - 1])) throw Error("bad success table");
    }
  }

  // Transient states: every non-gateway node, numbered level by level.
  std::vector<std::size_t> offset(sizes.size(), 0);
  std::size_t states = 0;
  for (std::size_t l = 1; l < sizes.size(); ++l) {
    offset[l] = states;
    states += static_cast<std::size_t>(sizes[l]);
  }
  if (states > max_states) throw Error("state space exceeds configured bound");

  // A policy fixes, per node, which receiver wins when both next-level nodes
  // hear; encode one bit per node.
  const std::size_t source_state = offset.back();
  double best = std::numeric_limits<double>::infinity();
  for (std::uint32_t policy = 0; policy < (1u << states); ++policy) {
    Eigen::MatrixXd Q = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(states),
                                              static_cast<Eigen::Index>(states));
    for (std::size_t l = 1; l < sizes.size(); ++l) {
      for (int i = 0; i < sizes[l]; ++i) {
        const std::size_t from = offset[l] + static_cast<std::size_t>(i);
        const auto& p = spec.success[l][static_cast<std::size_t>(i)];
        const int below = sizes[l - 1];
        for (std::uint32_t mask = 0; mask < (1u << below); ++mask) {
          double prob = 1.0;
          for (int j = 0; j < below; ++j) prob *= (mask & (1u << j)) ? p[j] : 1.0 - p[j];
          int chosen = -1;
          if (mask == 3u) {
            chosen = (policy >> from) & 1u ? 1 : 0;
          } else if (mask != 0u) {
            chosen = mask == 1u ? 0 : 1;
          }
          if (chosen < 0) {
            Q(static_cast<Eigen::Index>(from), static_cast<Eigen::Index>(from)) += prob;
          } else if (l - 1 > 0) {
            const std::size_t to = offset[l - 1] + static_cast<std::size_t>(chosen);
            Q(static_cast<Eigen::Index>(from), static_cast<Eigen::Index>(to)) += prob;
          }
        }
      }
    }
    const Eigen::MatrixXd fundamental =
        Eigen::MatrixXd::Identity(Q.rows(), Q.cols()) - Q;
    Eigen::FullPivLU<Eigen::MatrixXd> lu(fundamental);
    if (!lu.isInvertible()) continue;
    const Eigen::VectorXd steps = lu.solve(Eigen::VectorXd::Ones(Q.rows()));
    best = std::min(best, steps[static_cast<Eigen::Index>(source_state)]);
  }
  if (!std::isfinite(best)) throw Error("source never reaches the gateway");
  return best;
}

FrameEstimate bit_level_frame_oracle(double p, const FrameParams& frame, long long trials,
                                     std::uint64_t seed) {
  if (trials < 1) throw Error("trials must be at least 1");
  Rng rng(mix_seed(seed));
  long long preamble_missed = 0;
  long long data_missed = 0;
  long long both_missed = 0;
  for (long long t = 0; t < trials; ++t) {
    int clean_micro = 0;
    for (int k = 0; k < frame.micro_frames(); ++k) {
      int errors = 0;
      for (int b = 0; b < frame.micro_frame_bits(); ++b) errors += rng.bernoulli(p) ? 1 : 0;
      if (errors == 0) ++clean_micro;
    }
    int data_errors = 0;
    for (int b = 0; b < frame.data_bits(); ++b) data_errors += rng.bernoulli(p) ? 1 : 0;
    const bool pm = clean_micro == 0;
    const bool dm = data_errors > 0;
    preamble_missed += pm;
    data_missed += dm;
    both_missed += pm && dm;
  }
  const double n = static_cast<double>(trials);
  return {static_cast<double>(preamble_missed) / n, static_cast<double>(data_missed) / n,
          static_cast<double>(both_missed) / n, trials};
}

}  // namespace oppnet::oracle
