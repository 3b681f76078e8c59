#include <doctest.h>

#include "oppnet/oracle.hpp"
#include "oppnet/rng.hpp"

#include <cmath>

using namespace oppnet;

namespace {

ForwarderSet make_set(std::initializer_list<std::pair<double, double>> pc) {
  std::vector<ForwarderEntry> e;
  std::uint32_t id = 1;
  for (auto [p, c] : pc) e.emplace_back(NodeId{id++}, p, c);
  return ForwarderSet(std::move(e));
}

oracle::ChainSpec line(double p1, double p2) {
  // gateway <- relay <- source
  return {{1, 1, 1}, {{}, {{p1}}, {{p2}}}};
}

}  // namespace

TEST_CASE("exact single hop") {
  const auto one = oracle::exact_single_hop(make_set({{1.0, 0.0}}));
  CHECK(one.expected_cost == 1.0);
  CHECK(one.overhead == 0.0);

  const auto two = oracle::exact_single_hop(make_set({{0.5, 1.0}, {0.5, 1.0}}));
  CHECK(two.expected_cost == doctest::Approx(7.0 / 3.0).epsilon(1e-15));

  const auto mixed = oracle::exact_single_hop(make_set({{0.5, 1.0}, {0.5, 2.0}}));
  CHECK(mixed.overhead == doctest::Approx(1.0).epsilon(1e-15));

  CHECK_THROWS_AS(oracle::exact_single_hop(ForwarderSet{}), Error);
  CHECK_THROWS_WITH_AS(oracle::exact_single_hop(make_set({{0.0, 1.0}})), "unreachable forwarder set",
                       Error);
}

TEST_CASE("subset probabilities sum to one") {
  Rng rng(3);
  for (int i = 0; i < 300; ++i) {
    const int n = 1 + static_cast<int>(rng.below(10));
    std::vector<ForwarderEntry> e;
    for (int j = 0; j < n; ++j) {
      e.emplace_back(NodeId{static_cast<std::uint32_t>(j)}, 0.05 + 0.95 * rng.uniform(), 3.0 * rng.uniform());
    }
    CHECK(std::abs(oracle::exact_single_hop(ForwarderSet(e)).total_probability - 1.0) <= 1e-12);
  }
}

TEST_CASE("exact two hop") {
  CHECK(oracle::exact_two_hop(line(1.0, 1.0)) == doctest::Approx(2.0).epsilon(1e-14));
  CHECK(std::abs(oracle::exact_two_hop(line(0.8, 0.8)) - 2.5) <= 1e-12);

  // Diamond: two relays with lossless uplinks, source reaches each w.p. 0.5.
  const oracle::ChainSpec diamond{{1, 2, 1}, {{}, {{1.0}, {1.0}}, {{0.5, 0.5}}}};
  const auto fs = make_set({{0.5, 1.0}, {0.5, 1.0}});
  CHECK(std::abs(oracle::exact_two_hop(diamond) - oracle::exact_single_hop(fs).expected_cost) <= 1e-12);

  // Unequal relays: the oracle finds the better priority on its own.
  const oracle::ChainSpec skewed{{1, 2, 1}, {{}, {{0.5}, {1.0}}, {{0.9, 0.3}}}};
  const double best = oracle::exact_two_hop(skewed);
  // Prefer relay 1 (cost 1) over relay 0 (cost 2) when both hear.
  const double p_some = 1.0 - 0.1 * 0.7;
  const double expected = (1.0 + 0.3 * 1.0 + 0.9 * 0.7 * 2.0) / p_some;
  CHECK(best == doctest::Approx(expected).epsilon(1e-13));

  CHECK_THROWS_AS(oracle::exact_two_hop({{1, 2, 2, 2, 1}, {}}), Error);
  CHECK_THROWS_WITH_AS(oracle::exact_two_hop(line(0.8, 0.8), 1), "state space exceeds configured bound",
                       Error);
  CHECK_THROWS_AS(oracle::exact_two_hop(line(0.0, 0.8)), Error);
}

TEST_CASE("bit-level frame oracle") {
  const FrameParams f{8, 2, 100};
  const auto zero = oracle::bit_level_frame_oracle(0.0, f, 1000, 1);
  CHECK(zero.preamble_miss == 0.0);
  CHECK(zero.data_miss == 0.0);
  CHECK(zero.joint_miss == 0.0);
  const auto one = oracle::bit_level_frame_oracle(1.0, f, 1000, 1);
  CHECK(one.preamble_miss == 1.0);
  CHECK(one.data_miss == 1.0);
  CHECK(one.joint_miss == 1.0);

  // Frozen closed-form values for p = 0.01.
  const auto est = oracle::bit_level_frame_oracle(0.01, f, 400000, 9);
  auto within = [&](double observed, double expected) {
    return std::abs(observed - expected) < 3.0 * std::sqrt(expected * (1 - expected) / 400000.0);
  };
  CHECK(within(est.preamble_miss, 0.005968382239));
  CHECK(within(est.data_miss, 0.6339676587));
  CHECK(within(est.joint_miss, 0.003783761314));
}
