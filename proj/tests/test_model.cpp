#include <doctest.h>

#include "oppnet/model.hpp"
#include "oppnet/rng.hpp"

#include <algorithm>
#include <random>

using namespace oppnet;

namespace {

bool has_kind(const std::vector<Violation>& v, const std::string& kind) {
  return std::any_of(v.begin(), v.end(), [&](const Violation& x) { return x.kind == kind; });
}

}  // namespace

TEST_CASE("validate: gateway-only topology is valid") {
  Topology t;
  t.gateway = NodeId{0};
  t.nodes = {Node{NodeId{0}}};
  CHECK(validate(t).empty());
}

TEST_CASE("validate: asymmetric link map yields one symmetry violation") {
  Topology t;
  t.gateway = NodeId{0};
  t.nodes = {Node{NodeId{0}}, Node{NodeId{1}, {1.0, 0.0}, 2.0, 1}};
  t.links.insert_or_assign({NodeId{1}, NodeId{0}}, BitErrorRate(0.1));
  const auto v = validate(t);
  REQUIRE(v.size() == 1);
  CHECK(v[0].kind == "symmetry");

  // Present both ways but with different rates is still asymmetric.
  t.links.insert_or_assign({NodeId{0}, NodeId{1}}, BitErrorRate(0.2));
  const auto w = validate(t);
  REQUIRE(w.size() == 1);
  CHECK(w[0].kind == "symmetry");
}

TEST_CASE("validate: gateway hop id must be zero") {
  Topology t;
  t.gateway = NodeId{0};
  t.nodes = {Node{NodeId{0}, {0.0, 0.0}, 1.0, 1}};
  const auto v = validate(t);
  REQUIRE(v.size() == 1);
  CHECK(v[0].kind == "gateway hop id");
}

TEST_CASE("validate: missing gateway and stranded nodes are reported") {
  Topology t;
  t.gateway = NodeId{9};
  t.nodes = {Node{NodeId{0}}};
  CHECK(has_kind(validate(t), "gateway"));

  Topology u;
  u.gateway = NodeId{0};
  u.nodes = {Node{NodeId{0}}, Node{NodeId{1}, {}, 1.0, 1}, Node{NodeId{2}, {}, 1.0, 1}};
  u.add_link(NodeId{0}, NodeId{1}, BitErrorRate(0.0));
  u.add_link(NodeId{1}, NodeId{2}, BitErrorRate(0.0));  // 2 only sees an equal hop id
  const auto v = validate(u);
  REQUIRE(v.size() == 1);
  CHECK(v[0].kind == "connectivity");
}

TEST_CASE("constructors accept exactly the invariant-satisfying values") {
  Rng rng(2024);
  for (int i = 0; i < 2000; ++i) {
    const double p = rng.uniform() * 3.0 - 1.0;
    CHECK(BitErrorRate::valid(p) == (p >= 0.0 && p <= 1.0));
    bool accepted = true;
    try {
      BitErrorRate{p};
    } catch (const Error&) {
      accepted = false;
    }
    CHECK(accepted == BitErrorRate::valid(p));

    const int m = static_cast<int>(rng.below(7)) - 3;
    const int r = static_cast<int>(rng.below(7)) - 3;
    const int d = static_cast<int>(rng.below(7)) - 3;
    bool frame_ok = true;
    try {
      FrameParams{m, r, d};
    } catch (const Error&) {
      frame_ok = false;
    }
    CHECK(frame_ok == (m >= 1 && r >= 1 && d >= 1));

    const double cost = rng.uniform() * 4.0 - 1.0;
    bool entry_ok = true;
    try {
      ForwarderEntry{NodeId{1}, p, cost};
    } catch (const Error&) {
      entry_ok = false;
    }
    CHECK(entry_ok == (p >= 0.0 && p <= 1.0 && cost >= 0.0));

    const Channel c{p, rng.uniform() * 3.0 - 1.0, rng.uniform() * 2.0 - 1.0};
    bool channel_ok = true;
    try {
      ChannelModel({c}, 1.0);
    } catch (const Error&) {
      channel_ok = false;
    }
    CHECK(channel_ok == ChannelModel::valid(c));
  }
}

TEST_CASE("forwarder set order is canonical under shuffling") {
  std::vector<ForwarderEntry> entries = {
      {NodeId{4}, 0.3, 2.0}, {NodeId{2}, 0.9, 1.0}, {NodeId{7}, 0.5, 1.0},
      {NodeId{1}, 0.1, 3.5}, {NodeId{3}, 0.6, 2.0},
  };
  const ForwarderSet reference(entries);
  std::vector<std::uint32_t> ids;
  for (const auto& e : reference.entries()) ids.push_back(e.node().value);
  CHECK(ids == std::vector<std::uint32_t>{2, 7, 3, 4, 1});

  std::mt19937 gen(5);
  for (int i = 0; i < 50; ++i) {
    std::shuffle(entries.begin(), entries.end(), gen);
    CHECK(ForwarderSet(entries) == reference);
  }
}

TEST_CASE("topology link helpers") {
  Topology t;
  t.gateway = NodeId{0};
  t.nodes = {Node{NodeId{0}}, Node{NodeId{3}}};
  t.add_link(NodeId{0}, NodeId{3}, BitErrorRate(0.25));
  CHECK(t.link(NodeId{3}, NodeId{0})->value() == 0.25);
  CHECK(t.neighbors(NodeId{0}) == std::vector<NodeId>{NodeId{3}});
  CHECK_THROWS_AS(t.node(NodeId{8}), Error);
  CHECK(to_string(EventKind::DuplicateForward) == "duplicate-forward");
}
