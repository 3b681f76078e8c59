#include "oppnet/cli.hpp"

#include <yaml-cpp/yaml.h>

#include <charconv>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

namespace oppnet::cli {

namespace {

std::string shortest(double v) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

class Reader {
 public:
  explicit Reader(std::string origin) : origin_(std::move(origin)) {}

  [[noreturn]] void fail(const YAML::Node& node, const std::string& field, const std::string& msg) const {
    std::ostringstream os;
    os << origin_;
    if (node.IsDefined() && !node.Mark().is_null()) os << ":" << node.Mark().line + 1;
    os << ": field '" << field << "': " << msg;
    throw ConfigError(os.str());
  }

  void require_map(const YAML::Node& node, const std::string& field) const {
    if (!node.IsMap()) fail(node, field, "expected a mapping");
  }

  void allow_keys(const YAML::Node& map, const std::string& field,
                  std::initializer_list<std::string_view> keys) const {
    require_map(map, field);
    for (const auto& kv : map) {
      const auto key = kv.first.as<std::string>();
      if (std::find(keys.begin(), keys.end(), key) == keys.end()) {
        fail(kv.first, join(field, key), "unknown key");
      }
    }
  }

  template <typename T>
  T get(const YAML::Node& node, const std::string& field) const {
    if (!node.IsDefined() || node.IsNull()) fail(node, field, "missing value");
    if (!node.IsScalar()) fail(node, field, "expected a scalar");
    try {
      return node.as<T>();
    } catch (const YAML::Exception&) {
      fail(node, field, "cannot convert '" + node.Scalar() + "'");
    }
  }

  template <typename T>
  T get(const YAML::Node& map, const std::string& parent, const char* key, T fallback) const {
    const YAML::Node n = map[key];
    if (!n.IsDefined()) return fallback;
    return get<T>(n, join(parent, key));
  }

  template <typename T>
  T require(const YAML::Node& map, const std::string& parent, const char* key) const {
    const YAML::Node n = map[key];
    if (!n.IsDefined()) fail(map, join(parent, key), "required");
    return get<T>(n, join(parent, key));
  }

  static std::string join(const std::string& parent, std::string_view key) {
    return parent.empty() ? std::string(key) : parent + "." + std::string(key);
  }

  const std::string& origin() const { return origin_; }

 private:
  std::string origin_;
};

// Exactly one of "<prefix>ber", "<prefix>success", "<prefix>reception".
std::optional<LinkQuality> read_quality(const Reader& r, const YAML::Node& map, const std::string& field,
                                        const std::string& prefix, bool required) {
  std::optional<LinkQuality> out;
  const std::pair<const char*, LinkQuality::Kind> kinds[] = {
      {"ber", LinkQuality::Kind::Ber},
      {"success", LinkQuality::Kind::LinkSuccess},
      {"reception", LinkQuality::Kind::Reception},
  };
  for (const auto& [suffix, kind] : kinds) {
    const std::string key = prefix + suffix;
    const YAML::Node n = map[key];
    if (!n.IsDefined()) continue;
    if (out) r.fail(n, Reader::join(field, key), "give only one of ber/success/reception");
    const double v = r.get<double>(n, Reader::join(field, key));
    if (!(v >= 0.0 && v <= 1.0)) r.fail(n, Reader::join(field, key), "must lie in [0,1]");
    out = LinkQuality{kind, v};
  }
  if (required && !out) r.fail(map, Reader::join(field, prefix + "ber"), "link quality required");
  return out;
}

std::vector<std::string> quality_keys(const std::string& prefix) {
  return {prefix + "ber", prefix + "success", prefix + "reception"};
}

void allow_keys_dynamic(const Reader& r, const YAML::Node& map, const std::string& field,
                        const std::vector<std::string>& keys) {
  r.require_map(map, field);
  for (const auto& kv : map) {
    const auto key = kv.first.as<std::string>();
    if (std::find(keys.begin(), keys.end(), key) == keys.end()) {
      r.fail(kv.first, Reader::join(field, key), "unknown key");
    }
  }
}

TopologyRecipe read_topology_recipe(const Reader& r, const YAML::Node& node, const std::string& base_dir) {
  const std::string field = "topology";
  r.require_map(node, field);
  if (node.size() != 1) r.fail(node, field, "give exactly one of witness/chain/star/diamond/generate/inline/file");
  const auto key = node.begin()->first.as<std::string>();
  const YAML::Node body = node.begin()->second;
  const std::string sub = Reader::join(field, key);

  if (key == "witness") {
    if (!r.get<bool>(body, sub)) r.fail(body, sub, "must be true");
    return WitnessRecipe{};
  }
  if (key == "chain") {
    auto keys = quality_keys("");
    keys.push_back("hops");
    allow_keys_dynamic(r, body, sub, keys);
    ChainRecipe c;
    c.hops = r.require<int>(body, sub, "hops");
    if (c.hops < 0) r.fail(body["hops"], Reader::join(sub, "hops"), "must be non-negative");
    c.link = *read_quality(r, body, sub, "", true);
    return c;
  }
  if (key == "star") {
    auto keys = quality_keys("source_");
    for (auto& k : quality_keys("relay_")) keys.push_back(k);
    keys.push_back("relays");
    allow_keys_dynamic(r, body, sub, keys);
    StarRecipe s;
    s.relays = r.require<int>(body, sub, "relays");
    if (s.relays < 1) r.fail(body["relays"], Reader::join(sub, "relays"), "must be at least 1");
    s.source = *read_quality(r, body, sub, "source_", true);
    s.relay = read_quality(r, body, sub, "relay_", false);
    return s;
  }
  if (key == "diamond") {
    auto keys = quality_keys("source_");
    for (auto& k : quality_keys("relay_")) keys.push_back(k);
    for (auto& k : quality_keys("cross_")) keys.push_back(k);
    allow_keys_dynamic(r, body, sub, keys);
    DiamondRecipe d;
    d.source = *read_quality(r, body, sub, "source_", true);
    d.relay = *read_quality(r, body, sub, "relay_", true);
    d.cross = read_quality(r, body, sub, "cross_", false);
    return d;
  }
  if (key == "generate") {
    r.allow_keys(body, sub, {"nodes", "area", "range", "seed", "gateway", "ber"});
    GenerateRecipe g;
    g.nodes = r.require<int>(body, sub, "nodes");
    if (g.nodes < 1) r.fail(body["nodes"], Reader::join(sub, "nodes"), "must be at least 1");
    g.area = r.get<double>(body, sub, "area", g.area);
    g.range = r.get<double>(body, sub, "range", g.range);
    g.seed = r.get<std::uint64_t>(body, sub, "seed", g.seed);
    if (const YAML::Node gw = body["gateway"]; gw.IsDefined()) {
      if (!gw.IsSequence() || gw.size() != 2) r.fail(gw, Reader::join(sub, "gateway"), "expected [x, y]");
      g.gateway = {r.get<double>(gw[0], Reader::join(sub, "gateway")),
                   r.get<double>(gw[1], Reader::join(sub, "gateway"))};
    }
    const YAML::Node ber = body["ber"];
    const std::string bf = Reader::join(sub, "ber");
    if (!ber.IsDefined()) r.fail(body, bf, "required");
    r.require_map(ber, bf);
    if (ber["fixed"].IsDefined()) {
      r.allow_keys(ber, bf, {"fixed"});
      g.ber = FixedBer{r.require<double>(ber, bf, "fixed")};
    } else {
      r.allow_keys(ber, bf, {"min", "max"});
      g.ber = DistanceMappedBer{r.require<double>(ber, bf, "min"), r.require<double>(ber, bf, "max")};
    }
    return g;
  }
  if (key == "inline") {
    r.allow_keys(body, sub, {"gateway", "nodes", "links"});
    InlineRecipe in;
    in.gateway = r.require<std::uint32_t>(body, sub, "gateway");
    const YAML::Node nodes = body["nodes"];
    if (!nodes.IsSequence()) r.fail(nodes, Reader::join(sub, "nodes"), "expected a list of [id, x, y]");
    for (const auto& n : nodes) {
      const std::string nf = Reader::join(sub, "nodes");
      if (!n.IsSequence() || n.size() != 3) r.fail(n, nf, "expected [id, x, y]");
      in.nodes.push_back({r.get<std::uint32_t>(n[0], nf), r.get<double>(n[1], nf), r.get<double>(n[2], nf)});
    }
    const YAML::Node links = body["links"];
    if (links.IsDefined()) {
      if (!links.IsSequence()) r.fail(links, Reader::join(sub, "links"), "expected a list of [a, b, ber]");
      for (const auto& l : links) {
        const std::string lf = Reader::join(sub, "links");
        if (!l.IsSequence() || l.size() != 3) r.fail(l, lf, "expected [a, b, ber]");
        in.links.push_back({r.get<std::uint32_t>(l[0], lf), r.get<std::uint32_t>(l[1], lf), r.get<double>(l[2], lf)});
      }
    }
    return in;
  }
  if (key == "file") {
    std::filesystem::path path = r.get<std::string>(body, sub);
    if (path.is_relative()) path = std::filesystem::path(base_dir) / path;
    std::ifstream in(path);
    if (!in) r.fail(body, sub, "cannot open " + path.string());
    return read_topology(in, path.string());
  }
  r.fail(node.begin()->first, sub, "unknown topology kind");
}

void emit_quality(YAML::Emitter& e, const std::string& prefix, const LinkQuality& q) {
  const char* suffix = q.kind == LinkQuality::Kind::Ber           ? "ber"
                       : q.kind == LinkQuality::Kind::LinkSuccess ? "success"
                                                                  : "reception";
  e << YAML::Key << prefix + suffix << YAML::Value << shortest(q.value);
}

void emit_recipe(YAML::Emitter& e, const TopologyRecipe& recipe) {
  e << YAML::BeginMap;
  std::visit(
      [&](const auto& r) {
        using R = std::decay_t<decltype(r)>;
        if constexpr (std::is_same_v<R, WitnessRecipe>) {
          e << YAML::Key << "witness" << YAML::Value << true;
        } else if constexpr (std::is_same_v<R, ChainRecipe>) {
          e << YAML::Key << "chain" << YAML::Value << YAML::BeginMap;
          e << YAML::Key << "hops" << YAML::Value << r.hops;
          emit_quality(e, "", r.link);
          e << YAML::EndMap;
        } else if constexpr (std::is_same_v<R, StarRecipe>) {
          e << YAML::Key << "star" << YAML::Value << YAML::BeginMap;
          e << YAML::Key << "relays" << YAML::Value << r.relays;
          emit_quality(e, "source_", r.source);
          if (r.relay) emit_quality(e, "relay_", *r.relay);
          e << YAML::EndMap;
        } else if constexpr (std::is_same_v<R, DiamondRecipe>) {
          e << YAML::Key << "diamond" << YAML::Value << YAML::BeginMap;
          emit_quality(e, "source_", r.source);
          emit_quality(e, "relay_", r.relay);
          if (r.cross) emit_quality(e, "cross_", *r.cross);
          e << YAML::EndMap;
        } else if constexpr (std::is_same_v<R, GenerateRecipe>) {
          e << YAML::Key << "generate" << YAML::Value << YAML::BeginMap;
          e << YAML::Key << "nodes" << YAML::Value << r.nodes;
          e << YAML::Key << "area" << YAML::Value << shortest(r.area);
          e << YAML::Key << "range" << YAML::Value << shortest(r.range);
          e << YAML::Key << "seed" << YAML::Value << r.seed;
          e << YAML::Key << "gateway" << YAML::Value << YAML::Flow << YAML::BeginSeq
            << shortest(r.gateway.x()) << shortest(r.gateway.y()) << YAML::EndSeq;
          e << YAML::Key << "ber" << YAML::Value << YAML::Flow << YAML::BeginMap;
          if (const auto* f = std::get_if<FixedBer>(&r.ber)) {
            e << YAML::Key << "fixed" << YAML::Value << shortest(f->p);
          } else {
            const auto& m = std::get<DistanceMappedBer>(r.ber);
            e << YAML::Key << "min" << YAML::Value << shortest(m.p_min);
            e << YAML::Key << "max" << YAML::Value << shortest(m.p_max);
          }
          e << YAML::EndMap << YAML::EndMap;
        } else {
          e << YAML::Key << "inline" << YAML::Value << YAML::BeginMap;
          e << YAML::Key << "gateway" << YAML::Value << r.gateway;
          e << YAML::Key << "nodes" << YAML::Value << YAML::BeginSeq;
          for (const auto& n : r.nodes) {
            e << YAML::Flow << YAML::BeginSeq << n.id << shortest(n.x) << shortest(n.y) << YAML::EndSeq;
          }
          e << YAML::EndSeq;
          e << YAML::Key << "links" << YAML::Value << YAML::BeginSeq;
          for (const auto& l : r.links) {
            e << YAML::Flow << YAML::BeginSeq << l.a << l.b << shortest(l.p) << YAML::EndSeq;
          }
          e << YAML::EndSeq << YAML::EndMap;
        }
      },
      recipe);
  e << YAML::EndMap;
}

}  // namespace

std::string_view to_string(SweepAxis axis) {
  switch (axis) {
    case SweepAxis::ForwarderCount: return "n";
    case SweepAxis::BitErrorRate: return "ber";
    case SweepAxis::SwitchProbability: return "p_sw";
    case SweepAxis::MicroFrames: return "r_m";
    case SweepAxis::DataBits: return "d";
  }
  return "unknown";
}

double resolve_ber(const LinkQuality& q, const FrameParams& frame, const ChannelModel& channel) {
  const double p_sw = channel.evaluated().p_sw;
  switch (q.kind) {
    case LinkQuality::Kind::Ber: return q.value;
    case LinkQuality::Kind::LinkSuccess: return ber_for_link_success(q.value, frame, p_sw);
    case LinkQuality::Kind::Reception: return ber_for_reception(q.value, frame, p_sw);
  }
  return q.value;
}

ExperimentConfig parse_config(const std::string& text, const std::string& origin, const std::string& base_dir) {
  YAML::Node root;
  try {
    root = YAML::Load(text);
  } catch (const YAML::ParserException& e) {
    throw ConfigError(origin + ":" + std::to_string(e.mark.line + 1) + ": parse error: " + e.msg);
  }
  const Reader r(origin);
  if (root.IsNull()) root = YAML::Node(YAML::NodeType::Map);
  r.allow_keys(root, "", {"frame", "channel", "topology", "forwarder_sets", "simulation", "sweep"});

  ExperimentConfig cfg;
  if (const YAML::Node f = root["frame"]; f.IsDefined()) {
    r.allow_keys(f, "frame", {"m", "r_m", "d"});
    const int m = r.get<int>(f, "frame", "m", 8);
    const int rm = r.get<int>(f, "frame", "r_m", 2);
    const int d = r.get<int>(f, "frame", "d", 100);
    if (!FrameParams::valid(m, rm, d)) r.fail(f, "frame", "m, r_m and d must be positive integers");
    cfg.frame = FrameParams(m, rm, d);
  }

  if (const YAML::Node c = root["channel"]; c.IsDefined()) {
    r.allow_keys(c, "channel", {"noise_power", "evaluated", "channels"});
    const double noise = r.get<double>(c, "channel", "noise_power", 1.0);
    const auto evaluated = r.get<std::size_t>(c, "channel", "evaluated", 0);
    std::vector<Channel> channels;
    const YAML::Node list = c["channels"];
    if (list.IsDefined()) {
      if (!list.IsSequence() || list.size() == 0) r.fail(list, "channel.channels", "expected a non-empty list");
      for (std::size_t i = 0; i < list.size(); ++i) {
        const std::string field = "channel.channels[" + std::to_string(i) + "]";
        r.allow_keys(list[i], field, {"p_sw", "p_acc", "bandwidth_hz"});
        Channel ch{r.get<double>(list[i], field, "p_sw", 1.0), r.get<double>(list[i], field, "p_acc", 1.0),
                   r.get<double>(list[i], field, "bandwidth_hz", 1.0)};
        if (!ChannelModel::valid(ch)) r.fail(list[i], field, "p_sw/p_acc must lie in [0,1], bandwidth_hz > 0");
        channels.push_back(ch);
      }
    } else {
      channels.push_back(Channel{});
    }
    if (!(noise > 0.0)) r.fail(c["noise_power"], "channel.noise_power", "must be positive");
    if (evaluated >= channels.size()) r.fail(c["evaluated"], "channel.evaluated", "index out of range");
    cfg.channel = ChannelModel(std::move(channels), noise, evaluated);
  }

  if (const YAML::Node t = root["topology"]; t.IsDefined()) {
    cfg.topology = read_topology_recipe(r, t, base_dir);
  }

  if (const YAML::Node sets = root["forwarder_sets"]; sets.IsDefined()) {
    if (!sets.IsSequence()) r.fail(sets, "forwarder_sets", "expected a list of lists");
    for (std::size_t i = 0; i < sets.size(); ++i) {
      const std::string field = "forwarder_sets[" + std::to_string(i) + "]";
      if (!sets[i].IsSequence() || sets[i].size() == 0) r.fail(sets[i], field, "expected a non-empty list");
      std::vector<ForwarderEntry> entries;
      for (std::size_t j = 0; j < sets[i].size(); ++j) {
        const std::string ef = field + "[" + std::to_string(j) + "]";
        const YAML::Node e = sets[i][j];
        r.allow_keys(e, ef, {"node", "p_link", "cost"});
        const auto node = r.require<std::uint32_t>(e, ef, "node");
        const double p = r.require<double>(e, ef, "p_link");
        const double cost = r.require<double>(e, ef, "cost");
        if (!ForwarderEntry::valid(p, cost)) r.fail(e, ef, "p_link must lie in [0,1] and cost be >= 0");
        entries.emplace_back(NodeId{node}, p, cost);
      }
      cfg.forwarder_sets.emplace_back(std::move(entries));
    }
  }

  if (const YAML::Node s = root["simulation"]; s.IsDefined()) {
    r.allow_keys(s, "simulation", {"modes", "replications", "seed", "source", "max_hops", "election_slots",
                                   "suppression", "max_attempts"});
    SimulationSection sim;
    if (const YAML::Node modes = s["modes"]; modes.IsDefined()) {
      if (!modes.IsSequence() || modes.size() == 0) r.fail(modes, "simulation.modes", "expected a non-empty list");
      sim.modes.clear();
      for (const auto& m : modes) {
        try {
          sim.modes.push_back(parse_protocol_mode(r.get<std::string>(m, "simulation.modes")));
        } catch (const ConfigError&) {
          throw;
        } catch (const Error& e) {
          r.fail(m, "simulation.modes", e.what());
        }
      }
    }
    auto& b = sim.base;
    b.replications = r.get<long long>(s, "simulation", "replications", b.replications);
    b.seed = r.get<std::uint64_t>(s, "simulation", "seed", b.seed);
    b.max_hops = r.get<int>(s, "simulation", "max_hops", b.max_hops);
    b.election_slots = r.get<int>(s, "simulation", "election_slots", b.election_slots);
    b.suppression = r.get<bool>(s, "simulation", "suppression", b.suppression);
    b.max_attempts = r.get<int>(s, "simulation", "max_attempts", b.max_attempts);
    if (const YAML::Node src = s["source"]; src.IsDefined()) {
      const auto text = r.get<std::string>(src, "simulation.source");
      if (text != "uniform") b.source = NodeId{r.get<std::uint32_t>(src, "simulation.source")};
    }
    if (b.replications < 1) r.fail(s["replications"], "simulation.replications", "must be at least 1");
    if (b.max_hops < 1) r.fail(s["max_hops"], "simulation.max_hops", "must be at least 1");
    if (b.election_slots < 1) r.fail(s["election_slots"], "simulation.election_slots", "must be at least 1");
    if (b.max_attempts < 1) r.fail(s["max_attempts"], "simulation.max_attempts", "must be at least 1");
    cfg.simulation = sim;
  }

  if (const YAML::Node sw = root["sweep"]; sw.IsDefined()) {
    r.allow_keys(sw, "sweep", {"n", "ber", "p_sw", "r_m", "d"});
    if (sw.size() != 1) r.fail(sw, "sweep", "single-axis sweeps only");
    const auto key = sw.begin()->first.as<std::string>();
    const YAML::Node values = sw.begin()->second;
    const std::string field = Reader::join("sweep", key);
    SweepSection sec;
    sec.axis = key == "n"     ? SweepAxis::ForwarderCount
               : key == "ber" ? SweepAxis::BitErrorRate
               : key == "p_sw" ? SweepAxis::SwitchProbability
               : key == "r_m" ? SweepAxis::MicroFrames
                              : SweepAxis::DataBits;
    if (!values.IsSequence()) r.fail(values, field, "expected a list of values");
    if (values.size() == 0) r.fail(values, field, "empty sweep");
    const bool integral = sec.axis == SweepAxis::ForwarderCount || sec.axis == SweepAxis::MicroFrames ||
                          sec.axis == SweepAxis::DataBits;
    for (const auto& v : values) {
      if (integral) {
        const int n = r.get<int>(v, field);
        if (n < 1) r.fail(v, field, "must be a positive integer");
        sec.values.push_back(n);
      } else {
        const double x = r.get<double>(v, field);
        if (!(x >= 0.0 && x <= 1.0)) r.fail(v, field, "must lie in [0,1]");
        sec.values.push_back(x);
      }
    }
    cfg.sweep = sec;
  }
  return cfg;
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError(path + ": cannot open config file");
  std::stringstream ss;
  ss << in.rdbuf();
  const auto dir = std::filesystem::path(path).parent_path();
  return parse_config(ss.str(), path, dir.empty() ? "." : dir.string());
}

std::string emit_config(const ExperimentConfig& cfg) {
  YAML::Emitter e;
  e << YAML::BeginMap;
  e << YAML::Key << "frame" << YAML::Value << YAML::Flow << YAML::BeginMap;
  e << YAML::Key << "m" << YAML::Value << cfg.frame.micro_frame_bits();
  e << YAML::Key << "r_m" << YAML::Value << cfg.frame.micro_frames();
  e << YAML::Key << "d" << YAML::Value << cfg.frame.data_bits();
  e << YAML::EndMap;

  e << YAML::Key << "channel" << YAML::Value << YAML::BeginMap;
  e << YAML::Key << "noise_power" << YAML::Value << shortest(cfg.channel.noise_power());
  e << YAML::Key << "evaluated" << YAML::Value << cfg.channel.evaluated_index();
  e << YAML::Key << "channels" << YAML::Value << YAML::BeginSeq;
  for (const auto& c : cfg.channel.channels()) {
    e << YAML::Flow << YAML::BeginMap;
    e << YAML::Key << "p_sw" << YAML::Value << shortest(c.p_sw);
    e << YAML::Key << "p_acc" << YAML::Value << shortest(c.p_acc);
    e << YAML::Key << "bandwidth_hz" << YAML::Value << shortest(c.bandwidth_hz);
    e << YAML::EndMap;
  }
  e << YAML::EndSeq << YAML::EndMap;

  if (cfg.topology) {
    e << YAML::Key << "topology" << YAML::Value;
    emit_recipe(e, *cfg.topology);
  }

  if (!cfg.forwarder_sets.empty()) {
    e << YAML::Key << "forwarder_sets" << YAML::Value << YAML::BeginSeq;
    for (const auto& fs : cfg.forwarder_sets) {
      e << YAML::BeginSeq;
      for (const auto& entry : fs.entries()) {
        e << YAML::Flow << YAML::BeginMap;
        e << YAML::Key << "node" << YAML::Value << entry.node().value;
        e << YAML::Key << "p_link" << YAML::Value << shortest(entry.p_link());
        e << YAML::Key << "cost" << YAML::Value << shortest(entry.remaining_cost());
        e << YAML::EndMap;
      }
      e << YAML::EndSeq;
    }
    e << YAML::EndSeq;
  }

  if (cfg.simulation) {
    const auto& s = *cfg.simulation;
    e << YAML::Key << "simulation" << YAML::Value << YAML::BeginMap;
    e << YAML::Key << "modes" << YAML::Value << YAML::Flow << YAML::BeginSeq;
    for (auto m : s.modes) e << std::string(to_string(m));
    e << YAML::EndSeq;
    e << YAML::Key << "replications" << YAML::Value << s.base.replications;
    e << YAML::Key << "seed" << YAML::Value << s.base.seed;
    e << YAML::Key << "source" << YAML::Value;
    if (s.base.source) e << s.base.source->value; else e << "uniform";
    e << YAML::Key << "max_hops" << YAML::Value << s.base.max_hops;
    e << YAML::Key << "election_slots" << YAML::Value << s.base.election_slots;
    e << YAML::Key << "suppression" << YAML::Value << s.base.suppression;
    e << YAML::Key << "max_attempts" << YAML::Value << s.base.max_attempts;
    e << YAML::EndMap;
  }

  if (cfg.sweep) {
    e << YAML::Key << "sweep" << YAML::Value << YAML::BeginMap;
    e << YAML::Key << std::string(to_string(cfg.sweep->axis)) << YAML::Value << YAML::Flow << YAML::BeginSeq;
    for (double v : cfg.sweep->values) e << shortest(v);
    e << YAML::EndSeq << YAML::EndMap;
  }
  e << YAML::EndMap;
  return std::string(e.c_str()) + "\n";
}

std::uint64_t config_hash(const ExperimentConfig& config) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : emit_config(config)) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::string hash_hex(std::uint64_t hash) {
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(hash));
  return buf;
}

}  // namespace oppnet::cli
