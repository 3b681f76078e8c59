#include "oppnet/cli.hpp"

#include <nlohmann/json.hpp>

#include <charconv>
#include <cmath>
#include <limits>
#include <ostream>

namespace oppnet::cli {

namespace {

using Json = nlohmann::ordered_json;

Json number(double v) {
  if (!std::isfinite(v)) return nullptr;
  return v;
}

std::string csv_number(double v) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

std::uint64_t effective_seed(const ExperimentConfig& cfg) {
  if (cfg.simulation) return cfg.simulation->base.seed;
  if (cfg.topology) {
    if (const auto* g = std::get_if<GenerateRecipe>(&*cfg.topology)) return g->seed;
  }
  return 0;
}

struct Provenance {
  std::uint64_t seed;
  std::string hash;
};

void stamp(Json& j, const Provenance& p) {
  j["seed"] = p.seed;
  j["config_hash"] = p.hash;
  j["chi_convention"] = kChiConvention;
}

void emit(std::ostream& out, Json j, const Provenance& p) {
  stamp(j, p);
  out << j.dump() << "\n";
}

double chi_of(const ForwarderSet& fs) {
  const double f = all_miss_probability(fs);
  if (f >= 1.0) return std::numeric_limits<double>::infinity();
  return expected_retransmissions(f);
}

Json forwarder_set_record(const ForwarderSet& fs) {
  Json j;
  Json members = Json::array();
  for (const auto& e : fs.entries()) {
    members.push_back({{"node", e.node().value}, {"p_link", e.p_link()}, {"cost", e.remaining_cost()}});
  }
  j["forwarders"] = members;
  const bool reachable = all_miss_probability(fs) < 1.0;
  j["total_path_cost"] = reachable ? number(total_path_cost(fs)) : Json(nullptr);
  j["coordination_overhead"] = reachable ? number(coordination_overhead(fs)) : Json(nullptr);
  j["all_miss_probability"] = all_miss_probability(fs);
  j["chi"] = number(chi_of(fs));
  return j;
}

// Closed-form overhead and chi for one source, or averaged over every
// non-gateway node with a usable forwarder set.
struct Analytic {
  double overhead = std::numeric_limits<double>::quiet_NaN();
  double chi = std::numeric_limits<double>::quiet_NaN();
};

Analytic analytic_for(const Topology& t, const PathCostTable& costs, std::optional<NodeId> source) {
  auto one = [&](NodeId id) -> std::optional<std::pair<double, double>> {
    if (id == t.gateway) return std::nullopt;
    ForwarderSet fs;
    try {
      fs = forwarder_set(t, id, costs);
    } catch (const Error&) {
      return std::nullopt;
    }
    if (all_miss_probability(fs) >= 1.0) return std::nullopt;
    const double o = coordination_overhead(fs);
    if (!std::isfinite(o)) return std::nullopt;
    return std::pair{o, chi_of(fs)};
  };
  Analytic a;
  if (source) {
    if (auto v = one(*source)) a = {v->first, v->second};
    return a;
  }
  double so = 0.0;
  double sc = 0.0;
  int n = 0;
  for (const auto& node : t.nodes) {
    if (auto v = one(node.id)) {
      so += v->first;
      sc += v->second;
      ++n;
    }
  }
  if (n > 0) a = {so / n, sc / n};
  return a;
}

const Topology require_topology(const ExperimentConfig& cfg, const char* command) {
  if (!cfg.topology) throw ConfigError(std::string(command) + ": config has no topology section");
  return resolve_topology(*cfg.topology, cfg.frame, cfg.channel);
}

const SimulationSection& require_simulation(const ExperimentConfig& cfg, const char* command) {
  if (!cfg.simulation) throw ConfigError(std::string(command) + ": config has no simulation section");
  return *cfg.simulation;
}

Json metrics_record(const Metrics& m, ProtocolMode mode, const SimConfig& sc, const Analytic& a) {
  Json j;
  j["record"] = "metrics";
  j["mode"] = std::string(to_string(mode));
  j["replications"] = sc.replications;
  j["source"] = sc.source ? Json(sc.source->value) : Json("uniform");
  j["deliveries_attempted"] = m.deliveries_attempted;
  j["deliveries_succeeded"] = m.deliveries_succeeded;
  j["pdr"] = m.pdr;
  j["mean_duplicates"] = m.mean_duplicates;
  j["mean_duplicate_arrivals"] = m.mean_duplicate_arrivals;
  j["empirical_coordination_overhead"] = m.empirical_coordination_overhead;
  j["overhead_std_error"] = m.overhead_std_error;
  j["analytic_coordination_overhead"] = number(a.overhead);
  j["chi"] = number(a.chi);
  j["mean_transmissions"] = m.mean_transmissions;
  j["mean_hops"] = m.mean_hops;
  j["mean_energy_bits"] = m.mean_energy_bits;
  return j;
}

}  // namespace

int cmd_analyze(const ExperimentConfig& cfg, std::ostream& out) {
  const Provenance prov{effective_seed(cfg), hash_hex(config_hash(cfg))};

  for (std::size_t i = 0; i < cfg.channel.channels().size(); ++i) {
    const auto& c = cfg.channel.channels()[i];
    Json j;
    j["record"] = "channel";
    j["index"] = i;
    j["evaluated"] = i == cfg.channel.evaluated_index();
    j["p_sw"] = c.p_sw;
    j["p_acc"] = c.p_acc;
    j["bandwidth_hz"] = c.bandwidth_hz;
    j["potential_bandwidth"] = potential_bandwidth(c.p_acc, c.bandwidth_hz);
    emit(out, j, prov);
  }

  if (cfg.topology) {
    const Topology t = resolve_topology(*cfg.topology, cfg.frame, cfg.channel);
    const auto costs = network_path_costs(t, UnreachablePolicy::Infinite);
    const double p_sw = t.channel.evaluated().p_sw;
    for (const auto& [key, ber] : t.links) {
      if (!(key.first < key.second)) continue;
      Json j;
      j["record"] = "link";
      j["a"] = key.first.value;
      j["b"] = key.second.value;
      j["ber"] = ber.value();
      j["preamble_miss"] = preamble_miss_probability(ber.value(), t.frame);
      j["data_miss"] = data_miss_probability(ber.value(), t.frame);
      j["failure_probability"] = failure_probability(ber, t.frame, p_sw);
      j["link_success"] = link_success(ber, t.frame, p_sw);
      emit(out, j, prov);
    }
    std::vector<const Node*> order;
    for (const auto& n : t.nodes) order.push_back(&n);
    std::sort(order.begin(), order.end(), [](const Node* a, const Node* b) {
      return std::pair(a->hop_id, a->id) < std::pair(b->hop_id, b->id);
    });
    for (const Node* n : order) {
      Json j;
      j["record"] = "node";
      j["id"] = n->id.value;
      j["hop_id"] = n->hop_id;
      j["rank"] = number(n->rank);
      j["path_cost"] = number(costs.at(n->id));
      j["hop_distance"] = hop_distance(t, t.gateway, n->id);
      j["rank_difference_distance"] = number(rank_difference_distance(t, t.gateway, n->id));
      if (n->id != t.gateway) {
        const auto fs = forwarder_set(t, n->id, costs);
        j.update(forwarder_set_record(fs));
      }
      emit(out, j, prov);
    }
  }

  for (std::size_t i = 0; i < cfg.forwarder_sets.size(); ++i) {
    Json j;
    j["record"] = "forwarder_set";
    j["index"] = i;
    j.update(forwarder_set_record(cfg.forwarder_sets[i]));
    emit(out, j, prov);
  }
  return kSuccess;
}

int cmd_simulate(const ExperimentConfig& cfg, std::ostream& out) {
  const auto& sim = require_simulation(cfg, "simulate");
  const Topology t = require_topology(cfg, "simulate");
  const Provenance prov{effective_seed(cfg), hash_hex(config_hash(cfg))};
  const auto costs = network_path_costs(t, UnreachablePolicy::Infinite);
  const Analytic a = analytic_for(t, costs, sim.base.source);
  for (auto mode : sim.modes) {
    SimConfig sc = sim.base;
    sc.mode = mode;
    sc.record_events = false;
    const Metrics m = run_experiment(t, costs, sc);
    emit(out, metrics_record(m, mode, sc, a), prov);
  }
  return kSuccess;
}

int cmd_sweep(const ExperimentConfig& cfg, std::ostream& out) {
  if (!cfg.sweep) throw ConfigError("sweep: config has no sweep section");
  const auto& sim = require_simulation(cfg, "sweep");
  if (!cfg.topology) throw ConfigError("sweep: config has no topology section");
  const SweepSection& sw = *cfg.sweep;
  if (sw.axis == SweepAxis::ForwarderCount && !std::holds_alternative<StarRecipe>(*cfg.topology)) {
    throw ConfigError("sweep: axis 'n' requires a star topology");
  }
  const Provenance prov{effective_seed(cfg), hash_hex(config_hash(cfg))};

  out << to_string(sw.axis)
      << ",mode,analytic_overhead,empirical_overhead,pdr,mean_duplicates,chi,mean_transmissions,seed,config_hash,"
         "chi_convention\n";
  for (double value : sw.values) {
    FrameParams frame = cfg.frame;
    ChannelModel channel = cfg.channel;
    TopologyRecipe recipe = *cfg.topology;
    std::optional<NodeId> source = sim.base.source;
    switch (sw.axis) {
      case SweepAxis::ForwarderCount: {
        auto& star = std::get<StarRecipe>(recipe);
        star.relays = static_cast<int>(value);
        source = NodeId{static_cast<std::uint32_t>(star.relays + 1)};
        break;
      }
      case SweepAxis::MicroFrames:
        frame = FrameParams(frame.micro_frame_bits(), static_cast<int>(value), frame.data_bits());
        break;
      case SweepAxis::DataBits:
        frame = FrameParams(frame.micro_frame_bits(), frame.micro_frames(), static_cast<int>(value));
        break;
      case SweepAxis::SwitchProbability: {
        std::vector<Channel> cs(channel.channels().begin(), channel.channels().end());
        cs[channel.evaluated_index()].p_sw = value;
        channel = ChannelModel(std::move(cs), channel.noise_power(), channel.evaluated_index());
        break;
      }
      case SweepAxis::BitErrorRate:
        break;
    }
    Topology t = resolve_topology(recipe, frame, channel);
    if (sw.axis == SweepAxis::BitErrorRate) {
      for (auto& [key, ber] : t.links) ber = BitErrorRate(value);
      t = prepare(std::move(t));
    }
    const auto costs = network_path_costs(t, UnreachablePolicy::Infinite);
    const Analytic a = analytic_for(t, costs, source);
    for (auto mode : sim.modes) {
      SimConfig sc = sim.base;
      sc.mode = mode;
      sc.source = source;
      sc.record_events = false;
      const Metrics m = run_experiment(t, costs, sc);
      out << csv_number(value) << "," << to_string(mode) << "," << csv_number(a.overhead) << ","
          << csv_number(m.empirical_coordination_overhead) << "," << csv_number(m.pdr) << ","
          << csv_number(m.mean_duplicates) << "," << csv_number(a.chi) << "," << csv_number(m.mean_transmissions)
          << "," << prov.seed << "," << prov.hash << ",\"" << kChiConvention << "\"\n";
    }
  }
  return kSuccess;
}

int cmd_topology(const ExperimentConfig& cfg, std::ostream& out) {
  write_topology(out, require_topology(cfg, "topology"));
  return kSuccess;
}

}  // namespace oppnet::cli
