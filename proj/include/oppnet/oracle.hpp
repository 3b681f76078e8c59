#pragma once

#include "oppnet/model.hpp"

#include <cstdint>
#include <vector>

namespace oppnet::oracle {

// Brute-force references for the closed forms. Nothing here calls into the
// analysis module.

struct SingleHopResult {
  double expected_cost = 0.0;
  double overhead = 0.0;
  double total_probability = 0.0;  ///< sum over all reception subsets (should be 1)
};

/// Enumerates all 2^N reception subsets of one broadcast. The subset's
/// forwarder is its lowest-cost member (ties by node id). Limited to N <= 20.
SingleHopResult exact_single_hop(const ForwarderSet& fs);

/// Layered network for exact_two_hop. Level 0 is the gateway, the last level
/// holds the single source. `success[l][i][j]` is the link success from node i
/// of level l to node j of level l-1.
struct ChainSpec {
  std::vector<int> level_sizes;
  std::vector<std::vector<std::vector<double>>> success;
};

/// Expected end-to-end transmissions from the source, by absorbing-chain
/// analysis. Every relay policy (priority permutation per node) is evaluated
/// and the cheapest is returned. Limited to 3 hops and 2 nodes per level.
double exact_two_hop(const ChainSpec& spec, std::size_t max_states = 16);

struct FrameEstimate {
  double preamble_miss = 0.0;
  double data_miss = 0.0;
  double joint_miss = 0.0;
  long long trials = 0;
};

/// Bit-by-bit simulation of r_m micro-frames and one data frame.
FrameEstimate bit_level_frame_oracle(double p, const FrameParams& frame, long long trials,
                                     std::uint64_t seed);

}  // namespace oppnet::oracle
