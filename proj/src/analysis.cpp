#include "oppnet/analysis.hpp"

#include "oppnet/topology.hpp"

#include <algorithm>
#include <limits>
#include <numeric>

namespace oppnet {

namespace {

template <typename Fn>
double invert_decreasing(Fn fn, double target, const char* what) {
  if (!(target >= 0.0 && target <= 1.0)) throw Error(std::string(what) + " target outside [0,1]");
  double lo = 0.0;
  double hi = 1.0;
  const double at_lo = fn(lo);
  const double at_hi = fn(hi);
  if (target > at_lo || target < at_hi) {
    throw Error(std::string(what) + " target " + std::to_string(target) + " not attainable");
  }
  for (int i = 0; i < 200 && hi - lo > 0.0; ++i) {
    const double mid = 0.5 * (lo + hi);
    if (mid == lo || mid == hi) break;
    if (fn(mid) > target) lo = mid; else hi = mid;
  }
  return std::abs(fn(lo) - target) <= std::abs(fn(hi) - target) ? lo : hi;
}

}  // namespace

double ber_for_link_success(double target, const FrameParams& frame, double p_sw) {
  return invert_decreasing([&](double p) { return link_success(p, frame, p_sw); }, target,
                           "link success");
}

double ber_for_reception(double target, const FrameParams& frame, double p_sw) {
  return invert_decreasing([&](double p) { return reception_probability(p, frame, p_sw); },
                           target, "reception");
}

double total_path_cost(const ForwarderSet& fs) {
  return total_path_cost(fs.p_link(), fs.remaining_cost());
}

double coordination_overhead(const ForwarderSet& fs) {
  return coordination_overhead(fs.p_link(), fs.remaining_cost());
}

double all_miss_probability(const ForwarderSet& fs) {
  return (1.0 - fs.p_link()).prod();
}

double PathCostTable::at(NodeId id) const {
  auto it = std::find(ids.begin(), ids.end(), id);
  if (it == ids.end()) throw Error("unknown node id " + to_string(id));
  return cost[it - ids.begin()];
}

PathCostTable network_path_costs(const Topology& topology, UnreachablePolicy policy) {
  if (!topology.has_node(topology.gateway)) throw Error("gateway is not a node");

  PathCostTable table;
  table.ids.reserve(topology.nodes.size());
  for (const auto& n : topology.nodes) table.ids.push_back(n.id);
  table.cost = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(topology.nodes.size()));

  std::vector<std::size_t> order(topology.nodes.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    const auto& na = topology.nodes[a];
    const auto& nb = topology.nodes[b];
    if (na.hop_id != nb.hop_id) return na.hop_id < nb.hop_id;
    return na.id < nb.id;
  });

  for (std::size_t idx : order) {
    const Node& n = topology.nodes[idx];
    if (n.id == topology.gateway) continue;
    const ForwarderSet fs = forwarder_set(topology, n.id, table);
    if (all_miss_probability(fs) >= 1.0) {
      if (policy == UnreachablePolicy::Throw) {
        throw Error("disconnected node " + to_string(n.id) + ": forwarder set never receives");
      }
      table.cost[static_cast<Eigen::Index>(idx)] = std::numeric_limits<double>::infinity();
      continue;
    }
    table.cost[static_cast<Eigen::Index>(idx)] = total_path_cost(fs);
  }
  return table;
}

}  // namespace oppnet
