#include "oppnet/cli.hpp"

#include <charconv>
#include <istream>
#include <ostream>
#include <set>
#include <sstream>

namespace oppnet::cli {

namespace {

std::string shortest(double v) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

[[noreturn]] void fail(const std::string& origin, int line, const std::string& msg) {
  throw ConfigError(origin + ":" + std::to_string(line) + ": " + msg);
}

Topology from_inline(const InlineRecipe& in, const FrameParams& frame, const ChannelModel& channel) {
  Topology t;
  t.frame = frame;
  t.channel = channel;
  t.gateway = NodeId{in.gateway};
  for (const auto& n : in.nodes) t.nodes.push_back(Node{NodeId{n.id}, {n.x, n.y}});
  for (const auto& l : in.links) {
    if (!BitErrorRate::valid(l.p)) {
      throw ConfigError("link " + std::to_string(l.a) + "-" + std::to_string(l.b) + ": ber must lie in [0,1]");
    }
    if (!t.has_node(NodeId{l.a}) || !t.has_node(NodeId{l.b})) {
      throw ConfigError("link " + std::to_string(l.a) + "-" + std::to_string(l.b) + ": unknown endpoint");
    }
    t.add_link(NodeId{l.a}, NodeId{l.b}, BitErrorRate(l.p));
  }
  return t;
}

}  // namespace

Topology resolve_topology(const TopologyRecipe& recipe, const FrameParams& frame, const ChannelModel& channel) {
  auto ber = [&](const LinkQuality& q) { return resolve_ber(q, frame, channel); };
  auto opt_ber = [&](const std::optional<LinkQuality>& q) -> std::optional<double> {
    if (!q) return std::nullopt;
    return ber(*q);
  };

  Topology t = std::visit(
      [&](const auto& r) -> Topology {
        using R = std::decay_t<decltype(r)>;
        if constexpr (std::is_same_v<R, WitnessRecipe>) {
          Topology w = witness_topology();
          w.frame = frame;
          w.channel = channel;
          const double p = ber(LinkQuality{LinkQuality::Kind::LinkSuccess, 1.0 / 1.52});
          for (auto& [key, value] : w.links) value = BitErrorRate(p);
          return prepare(std::move(w));
        } else if constexpr (std::is_same_v<R, ChainRecipe>) {
          return chain_topology(r.hops, ber(r.link), frame, channel);
        } else if constexpr (std::is_same_v<R, StarRecipe>) {
          return star_topology(r.relays, ber(r.source), opt_ber(r.relay), frame, channel);
        } else if constexpr (std::is_same_v<R, DiamondRecipe>) {
          return diamond_topology(ber(r.source), ber(r.relay), opt_ber(r.cross), frame, channel);
        } else if constexpr (std::is_same_v<R, GenerateRecipe>) {
          GeneratorConfig g;
          g.node_count = r.nodes;
          g.area_side = r.area;
          g.radio_range = r.range;
          g.gateway_position = r.gateway;
          g.ber = r.ber;
          g.frame = frame;
          g.channel = channel;
          return prepare(generate(g, r.seed));
        } else {
          Topology raw = from_inline(r, frame, channel);
          // Structural problems are reported before hop ids are derived.
          for (const auto& v : validate(raw)) {
            if (v.kind != "connectivity" && v.kind != "rank" && v.kind != "hop id" && v.kind != "gateway hop id") {
              throw ConfigError("invalid topology: " + v.kind + ": " + v.detail);
            }
          }
          return prepare(std::move(raw));
        }
      },
      recipe);

  const auto violations = validate(t);
  if (!violations.empty()) {
    std::string msg = "invalid topology:";
    for (const auto& v : violations) msg += " [" + v.kind + ": " + v.detail + "]";
    throw ConfigError(msg);
  }
  return t;
}

void write_topology(std::ostream& out, const Topology& topology) {
  out << "nodes " << topology.nodes.size() << " gateway " << topology.gateway.value << "\n";
  for (const auto& n : topology.nodes) {
    out << "node " << n.id.value << " " << shortest(n.position.x()) << " " << shortest(n.position.y()) << "\n";
  }
  for (const auto& [key, ber] : topology.links) {
    if (key.first < key.second) {
      out << "link " << key.first.value << " " << key.second.value << " " << shortest(ber.value()) << "\n";
    }
  }
}

InlineRecipe read_topology(std::istream& in, const std::string& origin) {
  InlineRecipe out;
  std::string line;
  int lineno = 0;
  bool header = false;
  std::size_t declared = 0;
  std::set<std::pair<std::uint32_t, std::uint32_t>> seen;
  while (std::getline(in, line)) {
    ++lineno;
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos || line[first] == '#') continue;
    std::istringstream ls(line);
    std::string tag;
    ls >> tag;
    auto expect_end = [&] {
      std::string extra;
      if (ls >> extra) fail(origin, lineno, "unexpected trailing field '" + extra + "'");
    };
    if (tag == "nodes") {
      if (header) fail(origin, lineno, "duplicate header");
      std::string gw_tag;
      long long count = -1;
      long long gw = -1;
      if (!(ls >> count >> gw_tag >> gw) || gw_tag != "gateway" || count < 1 || gw < 0) {
        fail(origin, lineno, "expected 'nodes <N> gateway <id>'");
      }
      expect_end();
      header = true;
      declared = static_cast<std::size_t>(count);
      out.gateway = static_cast<std::uint32_t>(gw);
    } else if (tag == "node") {
      if (!header) fail(origin, lineno, "field 'node' before header");
      long long id = -1;
      double x = 0;
      double y = 0;
      if (!(ls >> id >> x >> y) || id < 0) fail(origin, lineno, "field 'node': expected '<id> <x> <y>'");
      expect_end();
      out.nodes.push_back({static_cast<std::uint32_t>(id), x, y});
    } else if (tag == "link") {
      if (!header) fail(origin, lineno, "field 'link' before header");
      long long a = -1;
      long long b = -1;
      double p = 0;
      if (!(ls >> a >> b >> p) || a < 0 || b < 0) fail(origin, lineno, "field 'link': expected '<a> <b> <ber>'");
      expect_end();
      if (!BitErrorRate::valid(p)) fail(origin, lineno, "field 'link': ber must lie in [0,1]");
      if (a == b) fail(origin, lineno, "field 'link': self loop");
      const std::pair key{static_cast<std::uint32_t>(std::min(a, b)), static_cast<std::uint32_t>(std::max(a, b))};
      if (!seen.insert(key).second) fail(origin, lineno, "field 'link': duplicate link");
      out.links.push_back({static_cast<std::uint32_t>(a), static_cast<std::uint32_t>(b), p});
    } else {
      fail(origin, lineno, "unknown record '" + tag + "'");
    }
  }
  if (!header) fail(origin, lineno, "missing 'nodes' header");
  if (out.nodes.size() != declared) {
    fail(origin, lineno,
         "header declares " + std::to_string(declared) + " nodes, found " + std::to_string(out.nodes.size()));
  }
  return out;
}

}  // namespace oppnet::cli
