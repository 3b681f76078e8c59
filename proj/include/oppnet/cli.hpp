#pragma once

#include "oppnet/engine.hpp"
#include "oppnet/model.hpp"
#include "oppnet/topology.hpp"

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace oppnet::cli {

enum ExitCode : int {
  kSuccess = 0,
  kConfigError = 1,
  kVerificationFailure = 2,
};

/// Raised for malformed configuration or topology files; the message carries
/// the origin, line and field.
class ConfigError : public Error {
 public:
  using Error::Error;
};

/// Link quality given either as a raw bit error rate or as a target
/// probability that is turned into a bit error rate for the active frame and
/// channel.
struct LinkQuality {
  enum class Kind { Ber, LinkSuccess, Reception };
  Kind kind = Kind::Ber;
  double value = 0.0;

  friend bool operator==(const LinkQuality&, const LinkQuality&) = default;
};

double resolve_ber(const LinkQuality& q, const FrameParams& frame, const ChannelModel& channel);

struct WitnessRecipe {
  friend bool operator==(const WitnessRecipe&, const WitnessRecipe&) = default;
};
struct ChainRecipe {
  int hops = 1;
  LinkQuality link;
  friend bool operator==(const ChainRecipe&, const ChainRecipe&) = default;
};
struct StarRecipe {
  int relays = 1;
  LinkQuality source;
  std::optional<LinkQuality> relay;
  friend bool operator==(const StarRecipe&, const StarRecipe&) = default;
};
struct DiamondRecipe {
  LinkQuality source;
  LinkQuality relay;
  std::optional<LinkQuality> cross;
  friend bool operator==(const DiamondRecipe&, const DiamondRecipe&) = default;
};
struct GenerateRecipe {
  int nodes = 1;
  double area = 100.0;
  double range = 40.0;
  std::uint64_t seed = 1;
  Eigen::Vector2d gateway = Eigen::Vector2d::Zero();
  BerModel ber = FixedBer{};
};
struct InlineRecipe {
  struct NodeLine {
    std::uint32_t id;
    double x;
    double y;
  };
  struct LinkLine {
    std::uint32_t a;
    std::uint32_t b;
    double p;
  };
  std::uint32_t gateway = 0;
  std::vector<NodeLine> nodes;
  std::vector<LinkLine> links;
};

using TopologyRecipe =
    std::variant<WitnessRecipe, ChainRecipe, StarRecipe, DiamondRecipe, GenerateRecipe, InlineRecipe>;

struct SimulationSection {
  std::vector<ProtocolMode> modes{ProtocolMode::ReceiverBased};
  SimConfig base;
};

enum class SweepAxis { ForwarderCount, BitErrorRate, SwitchProbability, MicroFrames, DataBits };

std::string_view to_string(SweepAxis axis);

struct SweepSection {
  SweepAxis axis = SweepAxis::ForwarderCount;
  std::vector<double> values;
};

struct ExperimentConfig {
  FrameParams frame{8, 2, 100};
  ChannelModel channel;
  std::optional<TopologyRecipe> topology;
  std::vector<ForwarderSet> forwarder_sets;
  std::optional<SimulationSection> simulation;
  std::optional<SweepSection> sweep;
};

/// Parses the YAML dialect documented in README.md. `origin` names the source
/// in diagnostics; relative topology file paths resolve against `base_dir`.
ExperimentConfig parse_config(const std::string& text, const std::string& origin = "<config>",
                              const std::string& base_dir = ".");
ExperimentConfig load_config(const std::string& path);

/// Canonical YAML for the effective configuration. Topology files are inlined,
/// so the output is self-contained and re-parses to the same configuration.
std::string emit_config(const ExperimentConfig& config);

/// FNV-1a over emit_config(config).
std::uint64_t config_hash(const ExperimentConfig& config);
std::string hash_hex(std::uint64_t hash);

/// Builds the topology and assigns hop ids and ranks.
Topology resolve_topology(const TopologyRecipe& recipe, const FrameParams& frame,
                          const ChannelModel& channel);

// Topology text format:
//   nodes N gateway G
//   node <id> <x> <y>        (N lines)
//   link <a> <b> <ber>       (one line per undirected link)
// Blank lines and lines starting with '#' are ignored.
void write_topology(std::ostream& out, const Topology& topology);
InlineRecipe read_topology(std::istream& in, const std::string& origin);

/// Human-readable note attached to every output record.
inline constexpr std::string_view kChiConvention =
    "chi=f/(1-f): retransmissions after the first attempt";

int cmd_analyze(const ExperimentConfig& config, std::ostream& out);
int cmd_simulate(const ExperimentConfig& config, std::ostream& out);
int cmd_sweep(const ExperimentConfig& config, std::ostream& out);
int cmd_topology(const ExperimentConfig& config, std::ostream& out);

struct VerifyGrid {
  int min_size = 1;
  int max_size = 4;
  std::vector<double> probs{0.0, 0.25, 0.5, 0.75, 1.0};
  std::vector<double> costs{0.0, 1.0, 2.5};
  double tolerance = 1e-12;
  double frame_ber = 0.01;
  long long frame_trials = 1000000;
  std::uint64_t seed = 2024;
};

/// Parses overrides such as "sizes=1-3;probs=0,0.5,1;costs=0,1;trials=10000".
/// Throws ConfigError("empty verification grid") when a list is empty.
VerifyGrid parse_grid(const std::string& spec);

/// Implementations under test. Defaults to the analysis module; tests swap in
/// faulty versions to check the report.
struct VerifyHooks {
  std::function<double(const ForwarderSet&)> total_path_cost;
  std::function<double(const ForwarderSet&)> coordination_overhead;
};

struct VerifyCase {
  std::string name;
  double max_abs_error = 0.0;
  double tolerance = 0.0;
  long long checked = 0;
  bool passed = true;
  std::string first_failure;
};

struct VerifyReport {
  std::vector<VerifyCase> cases;
  bool passed() const;
};

VerifyReport run_verification(const VerifyGrid& grid, const VerifyHooks& hooks = {});
int cmd_verify(const VerifyGrid& grid, std::ostream& out);

}  // namespace oppnet::cli
