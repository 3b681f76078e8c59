#include "oppnet/model.hpp"

#include <algorithm>
#include <set>

namespace oppnet {

std::string to_string(NodeId id) { return std::to_string(id.value); }

FrameParams::FrameParams(int micro_frame_bits, int micro_frames, int data_bits)
    : m_(micro_frame_bits), r_m_(micro_frames), d_(data_bits) {
  if (!valid(m_, r_m_, d_)) {
    throw Error("frame parameters must be positive (m=" + std::to_string(m_) +
                ", r_m=" + std::to_string(r_m_) + ", d=" + std::to_string(d_) + ")");
  }
}

BitErrorRate::BitErrorRate(double p) : p_(p) {
  if (!valid(p)) throw Error("bit error rate outside [0,1]: " + std::to_string(p));
}

ChannelModel::ChannelModel() : ChannelModel({Channel{}}, 1.0, 0) {}

ChannelModel::ChannelModel(std::vector<Channel> channels, double noise_power, std::size_t evaluated)
    : channels_(std::move(channels)), noise_power_(noise_power), evaluated_(evaluated) {
  if (channels_.empty()) throw Error("channel model needs at least one channel");
  if (evaluated_ >= channels_.size()) throw Error("evaluated channel index out of range");
  if (!(noise_power_ > 0.0)) throw Error("noise power must be positive");
  for (const auto& c : channels_) {
    if (!valid(c)) throw Error("channel parameters out of range");
  }
}

ForwarderEntry::ForwarderEntry(NodeId node, double p_link, double remaining_cost)
    : node_(node), p_link_(p_link), remaining_cost_(remaining_cost) {
  if (!valid(p_link, remaining_cost)) {
    throw Error("forwarder entry for node " + to_string(node) +
                " has p_link outside [0,1] or negative cost");
  }
}

ForwarderSet::ForwarderSet(std::vector<ForwarderEntry> entries) : entries_(std::move(entries)) {
  std::sort(entries_.begin(), entries_.end(), [](const ForwarderEntry& a, const ForwarderEntry& b) {
    if (a.remaining_cost() != b.remaining_cost()) return a.remaining_cost() < b.remaining_cost();
    if (a.node() != b.node()) return a.node() < b.node();
    return a.p_link() < b.p_link();
  });
}

Eigen::ArrayXd ForwarderSet::p_link() const {
  Eigen::ArrayXd out(static_cast<Eigen::Index>(entries_.size()));
  for (std::size_t i = 0; i < entries_.size(); ++i) out[static_cast<Eigen::Index>(i)] = entries_[i].p_link();
  return out;
}

Eigen::ArrayXd ForwarderSet::remaining_cost() const {
  Eigen::ArrayXd out(static_cast<Eigen::Index>(entries_.size()));
  for (std::size_t i = 0; i < entries_.size(); ++i) {
    out[static_cast<Eigen::Index>(i)] = entries_[i].remaining_cost();
  }
  return out;
}

std::optional<std::size_t> Topology::index_of(NodeId id) const {
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    if (nodes[i].id == id) return i;
  }
  return std::nullopt;
}

const Node& Topology::node(NodeId id) const {
  auto idx = index_of(id);
  if (!idx) throw Error("unknown node id " + to_string(id));
  return nodes[*idx];
}

Node& Topology::node(NodeId id) {
  auto idx = index_of(id);
  if (!idx) throw Error("unknown node id " + to_string(id));
  return nodes[*idx];
}

void Topology::add_link(NodeId a, NodeId b, BitErrorRate ber) {
  links.insert_or_assign({a, b}, ber);
  links.insert_or_assign({b, a}, ber);
}

std::optional<BitErrorRate> Topology::link(NodeId a, NodeId b) const {
  auto it = links.find({a, b});
  if (it == links.end()) return std::nullopt;
  return it->second;
}

std::vector<NodeId> Topology::neighbors(NodeId id) const {
  std::set<NodeId> out;
  for (const auto& [key, ber] : links) {
    if (key.first == id && key.second != id) out.insert(key.second);
    if (key.second == id && key.first != id) out.insert(key.first);
  }
  return {out.begin(), out.end()};
}

std::vector<Violation> validate(const Topology& topology) {
  std::vector<Violation> out;

  std::set<NodeId> ids;
  for (const auto& n : topology.nodes) {
    if (!ids.insert(n.id).second) {
      out.push_back({"duplicate node", "node " + to_string(n.id) + " listed more than once"});
    }
    if (!(n.rank > 0.0)) out.push_back({"rank", "node " + to_string(n.id) + " has non-positive rank"});
    if (n.hop_id < 0) out.push_back({"hop id", "node " + to_string(n.id) + " has negative hop id"});
  }

  const bool gateway_known = ids.contains(topology.gateway);
  if (!gateway_known) {
    out.push_back({"gateway", "gateway " + to_string(topology.gateway) + " is not a node"});
  } else if (topology.node(topology.gateway).hop_id != 0) {
    out.push_back({"gateway hop id", "gateway hop id is " +
                                         std::to_string(topology.node(topology.gateway).hop_id)});
  }

  for (const auto& [key, ber] : topology.links) {
    if (!ids.contains(key.first) || !ids.contains(key.second)) {
      out.push_back({"link endpoint", "link " + to_string(key.first) + "-" + to_string(key.second) +
                                          " references an unknown node"});
      continue;
    }
    auto reverse = topology.links.find({key.second, key.first});
    if (reverse == topology.links.end() || reverse->second != ber) {
      // Report each unordered pair once.
      if (reverse == topology.links.end() || key.first < key.second) {
        out.push_back({"symmetry", "link " + to_string(key.first) + "-" + to_string(key.second) +
                                       " has no matching reverse entry"});
      }
    }
  }

  if (gateway_known) {
    for (const auto& n : topology.nodes) {
      if (n.id == topology.gateway) continue;
      bool progress = false;
      for (NodeId nb : topology.neighbors(n.id)) {
        auto idx = topology.index_of(nb);
        if (idx && topology.nodes[*idx].hop_id < n.hop_id) {
          progress = true;
          break;
        }
      }
      if (!progress) {
        out.push_back({"connectivity", "node " + to_string(n.id) +
                                           " has no neighbor with a smaller hop id"});
      }
    }
  }
  return out;
}

std::string_view to_string(EventKind kind) {
  switch (kind) {
    case EventKind::TransmitPreamble: return "transmit-preamble";
    case EventKind::TransmitData: return "transmit-data";
    case EventKind::Receive: return "receive";
    case EventKind::Elect: return "elect";
    case EventKind::Suppress: return "suppress";
    case EventKind::DuplicateForward: return "duplicate-forward";
    case EventKind::GatewayArrival: return "gateway-arrival";
  }
  return "unknown";
}

}  // namespace oppnet
