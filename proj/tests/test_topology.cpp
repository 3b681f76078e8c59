#include <doctest.h>

#include "oppnet/rng.hpp"
#include "oppnet/topology.hpp"

#include <deque>
#include <limits>

using namespace oppnet;

namespace {

// Independent shortest-path reference: Floyd-Warshall over unit edge weights.
std::vector<std::vector<int>> all_pairs_hops(const Topology& t) {
  const std::size_t n = t.nodes.size();
  const int inf = std::numeric_limits<int>::max() / 4;
  std::vector<std::vector<int>> d(n, std::vector<int>(n, inf));
  for (std::size_t i = 0; i < n; ++i) d[i][i] = 0;
  for (const auto& [key, ber] : t.links) {
    d[*t.index_of(key.first)][*t.index_of(key.second)] = 1;
  }
  for (std::size_t k = 0; k < n; ++k)
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) d[i][j] = std::min(d[i][j], d[i][k] + d[k][j]);
  return d;
}

GeneratorConfig dense_config(int nodes) {
  GeneratorConfig c;
  c.node_count = nodes;
  c.area_side = 100.0;
  c.radio_range = 45.0;
  c.gateway_position = {50.0, 50.0};
  c.ber = DistanceMappedBer{0.0005, 0.01};
  return c;
}

Topology generate_connected(const GeneratorConfig& c, std::uint64_t& seed) {
  for (;; ++seed) {
    try {
      return generate(c, seed);
    } catch (const Error&) {
    }
  }
}

}  // namespace

TEST_CASE("generate: degenerate and small cases") {
  GeneratorConfig one;
  one.node_count = 1;
  const auto g = generate(one, 3);
  REQUIRE(g.nodes.size() == 1);
  CHECK(g.links.empty());
  CHECK(validate(g).empty());

  GeneratorConfig two;
  two.node_count = 2;
  two.area_side = 10.0;
  two.radio_range = 100.0;
  two.ber = FixedBer{0.001};
  const auto t = generate(two, 1);
  CHECK(t.links.size() == 2);
  CHECK(t.link(NodeId{0}, NodeId{1}) == t.link(NodeId{1}, NodeId{0}));
  CHECK(validate(t).empty());
}

TEST_CASE("generate: deterministic for a fixed seed") {
  const auto c = dense_config(20);
  std::uint64_t seed = 7;
  const auto a = generate_connected(c, seed);
  const auto b = generate(c, seed);
  REQUIRE(a.nodes.size() == b.nodes.size());
  for (std::size_t i = 0; i < a.nodes.size(); ++i) {
    CHECK(a.nodes[i].position == b.nodes[i].position);
    CHECK(a.nodes[i].hop_id == b.nodes[i].hop_id);
  }
  CHECK(a.links == b.links);
}

TEST_CASE("generate: disconnected graphs are rejected") {
  GeneratorConfig c;
  c.node_count = 10;
  c.area_side = 1000.0;
  c.radio_range = 1.0;
  CHECK_THROWS_WITH_AS(generate(c, 1), doctest::Contains("disconnected topology"), Error);
}

TEST_CASE("distance-mapped ber") {
  const DistanceMappedBer m{0.001, 0.011};
  CHECK(mapped_ber(m, 0.0, 10.0) == doctest::Approx(0.001));
  CHECK(mapped_ber(m, 5.0, 10.0) == doctest::Approx(0.001 + 0.01 * 0.25));
  CHECK(mapped_ber(m, 20.0, 10.0) == doctest::Approx(0.011));
}

TEST_CASE("hop ids") {
  Topology gw;
  gw.gateway = NodeId{0};
  gw.nodes = {Node{NodeId{0}, {}, 1.0, 5}};
  CHECK(assign_hop_ids(gw).nodes[0].hop_id == 0);

  const auto chain = chain_topology(2, 0.0);
  CHECK(chain.node(NodeId{0}).hop_id == 0);
  CHECK(chain.node(NodeId{1}).hop_id == 1);
  CHECK(chain.node(NodeId{2}).hop_id == 2);

  Topology broken = chain;
  broken.nodes.push_back(Node{NodeId{9}});
  CHECK_THROWS_WITH_AS(assign_hop_ids(broken), doctest::Contains("disconnected node"), Error);
}

TEST_CASE("hop ids match an all-pairs search on random graphs") {
  std::uint64_t seed = 100;
  for (int round = 0; round < 10; ++round, ++seed) {
    const auto t = generate_connected(dense_config(10 + 4 * round), seed);
    const auto d = all_pairs_hops(t);
    const std::size_t gw = *t.index_of(t.gateway);
    for (std::size_t i = 0; i < t.nodes.size(); ++i) {
      CHECK(t.nodes[i].hop_id == d[gw][i]);
      for (std::size_t j = 0; j < t.nodes.size(); ++j) {
        const int hd = hop_distance(t, t.nodes[i].id, t.nodes[j].id);
        CHECK(hd == hop_distance(t, t.nodes[j].id, t.nodes[i].id));
        CHECK((hd == 0) == (t.nodes[i].hop_id == t.nodes[j].hop_id));
        CHECK(hd <= d[i][j]);
      }
    }
  }
}

TEST_CASE("ranks") {
  const auto chain = chain_topology(1, 0.0);
  CHECK(chain.node(NodeId{0}).rank == 1.0);
  CHECK(chain.node(NodeId{1}).rank == 2.0);

  const FrameParams f{8, 2, 100};
  const auto lossy = chain_topology(2, ber_for_link_success(0.8, f, 1.0));
  CHECK(lossy.node(NodeId{2}).rank == doctest::Approx(3.5).epsilon(1e-13));
}

TEST_CASE("ranks are monotone over forwarder sets") {
  std::uint64_t seed = 300;
  for (int round = 0; round < 8; ++round, ++seed) {
    const auto t = compute_ranks(generate_connected(dense_config(25), seed));
    const auto costs = network_path_costs(t);
    for (const auto& n : t.nodes) {
      if (n.id == t.gateway) continue;
      const auto fs = forwarder_set(t, n.id, costs);
      for (const auto& e : fs.entries()) {
        CHECK(n.rank > t.node(e.node()).rank);
      }
    }
  }
}

TEST_CASE("forwarder sets") {
  const auto chain = chain_topology(1, 0.0);
  const auto costs = network_path_costs(chain);
  const auto fs = forwarder_set(chain, NodeId{1}, costs);
  REQUIRE(fs.size() == 1);
  CHECK(fs[0].node() == NodeId{0});
  CHECK(fs[0].remaining_cost() == 0.0);
  CHECK(fs[0].p_link() == 1.0);

  // Relay 1 has the better uplink, so it comes first.
  Topology d = diamond_topology(0.001, 0.0, std::nullopt);
  d.add_link(NodeId{0}, NodeId{2}, BitErrorRate(0.005));
  d = prepare(d);
  const auto dc = network_path_costs(d);
  const auto dfs = forwarder_set(d, NodeId{3}, dc);
  REQUIRE(dfs.size() == 2);
  CHECK(dfs[0].node() == NodeId{1});
  CHECK(dfs[1].node() == NodeId{2});
  CHECK(dfs[0].remaining_cost() < dfs[1].remaining_cost());

  // Equal costs fall back to node id.
  const auto sym = diamond_topology(0.001, 0.002, std::nullopt);
  const auto sfs = forwarder_set(sym, NodeId{3}, network_path_costs(sym));
  CHECK(sfs[0].remaining_cost() == sfs[1].remaining_cost());
  CHECK(sfs[0].node() == NodeId{1});

  Topology stranded = chain;
  stranded.nodes.push_back(Node{NodeId{5}, {}, 1.0, 3});
  CHECK_THROWS_WITH_AS(forwarder_set(stranded, NodeId{5}, costs), doctest::Contains("disconnected node"),
                       Error);
}

TEST_CASE("hop distance versus rank difference") {
  const auto chain = chain_topology(2, 0.0);
  CHECK(hop_distance(chain, NodeId{1}, NodeId{1}) == 0);
  CHECK(hop_distance(chain, NodeId{0}, NodeId{2}) == 2);
  CHECK(rank_difference_distance(chain, NodeId{2}, NodeId{2}) == 0.0);
  // Lossless links: ETX equals hop count.
  CHECK(rank_difference_distance(chain, NodeId{0}, NodeId{2}) == 2.0);
  CHECK_THROWS_AS(hop_distance(chain, NodeId{0}, NodeId{42}), Error);

  const auto w = witness_topology();
  CHECK(w.node(NodeId{5}).hop_id == 2);
  CHECK(hop_distance(w, w.gateway, NodeId{5}) == 2);
  CHECK(w.node(NodeId{5}).rank == doctest::Approx(4.04).epsilon(1e-12));
  CHECK(rank_difference_distance(w, w.gateway, NodeId{5}) == doctest::Approx(3.04).epsilon(1e-12));
}

TEST_CASE("rank difference inflates hop distance on lossy paths") {
  std::uint64_t seed = 500;
  for (int round = 0; round < 6; ++round, ++seed) {
    auto c = dense_config(20);
    const auto lossless = compute_ranks(generate_connected([&] {
      auto cc = c;
      cc.ber = FixedBer{0.0};
      return cc;
    }(), seed));
    for (const auto& n : lossless.nodes) {
      CHECK(rank_difference_distance(lossless, lossless.gateway, n.id) ==
            static_cast<double>(hop_distance(lossless, lossless.gateway, n.id)));
    }
    const auto lossy = compute_ranks(generate_connected(c, seed));
    for (const auto& n : lossy.nodes) {
      if (n.id == lossy.gateway) continue;
      CHECK(rank_difference_distance(lossy, lossy.gateway, n.id) >
            static_cast<double>(hop_distance(lossy, lossy.gateway, n.id)));
    }
  }
}
