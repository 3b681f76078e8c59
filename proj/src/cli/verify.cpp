#include "oppnet/cli.hpp"
#include "oppnet/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>
#include <sstream>

namespace oppnet::cli {

namespace {

std::vector<double> parse_list(const std::string& key, const std::string& text) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) continue;
    try {
      std::size_t used = 0;
      out.push_back(std::stod(item, &used));
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw ConfigError("grid field '" + key + "': bad number '" + item + "'");
    }
  }
  return out;
}

std::string describe(const ForwarderSet& fs) {
  std::ostringstream os;
  os.precision(17);
  os << "{";
  for (std::size_t i = 0; i < fs.size(); ++i) {
    if (i) os << ", ";
    os << "(p=" << fs[i].p_link() << ", Y=" << fs[i].remaining_cost() << ")";
  }
  os << "}";
  return os.str();
}

void record(VerifyCase& c, double error, const std::string& where) {
  ++c.checked;
  const double e = std::isnan(error) ? std::numeric_limits<double>::infinity() : error;
  c.max_abs_error = std::max(c.max_abs_error, e);
  if (!(e <= c.tolerance) && c.passed) {
    c.passed = false;
    std::ostringstream os;
    os.precision(17);
    os << where << ": error " << e;
    c.first_failure = os.str();
  }
}

void record_mismatch(VerifyCase& c, const std::string& where) {
  ++c.checked;
  if (c.passed) {
    c.passed = false;
    c.first_failure = where;
  }
}

// Both sides must agree on whether a set is unreachable; otherwise compare.
template <typename Expected, typename Actual>
void compare(VerifyCase& c, const std::string& where, Expected expected, Actual actual) {
  std::optional<double> e;
  std::optional<double> a;
  try {
    e = expected();
  } catch (const Error&) {
  }
  try {
    a = actual();
  } catch (const Error&) {
  }
  if (e.has_value() != a.has_value()) {
    record_mismatch(c, where + ": only one side rejects the input");
    return;
  }
  if (!e) {
    ++c.checked;
    return;
  }
  record(c, std::abs(*e - *a), where);
}

VerifyCase make_case(std::string name, double tolerance) {
  VerifyCase c;
  c.name = std::move(name);
  c.tolerance = tolerance;
  return c;
}

ForwarderSet single(std::uint32_t node, double p, double cost) {
  return ForwarderSet({ForwarderEntry(NodeId{node}, p, cost)});
}

}  // namespace

VerifyGrid parse_grid(const std::string& spec) {
  VerifyGrid g;
  std::stringstream ss(spec);
  std::string field;
  while (std::getline(ss, field, ';')) {
    if (field.empty()) continue;
    const auto eq = field.find('=');
    if (eq == std::string::npos) throw ConfigError("grid field '" + field + "': expected key=value");
    const std::string key = field.substr(0, eq);
    const std::string value = field.substr(eq + 1);
    if (key == "sizes") {
      const auto dash = value.find('-');
      try {
        if (value.empty()) throw ConfigError("empty verification grid");
        g.min_size = std::stoi(value.substr(0, dash));
        g.max_size = dash == std::string::npos ? g.min_size : std::stoi(value.substr(dash + 1));
      } catch (const ConfigError&) {
        throw;
      } catch (const std::exception&) {
        throw ConfigError("grid field 'sizes': expected <min>-<max>");
      }
      if (g.min_size < 1 || g.max_size > 8) throw ConfigError("grid field 'sizes': sizes must lie in 1..8");
      if (g.max_size < g.min_size) throw ConfigError("empty verification grid");
    } else if (key == "probs") {
      g.probs = parse_list(key, value);
      for (double p : g.probs) {
        if (!(p >= 0.0 && p <= 1.0)) throw ConfigError("grid field 'probs': values must lie in [0,1]");
      }
    } else if (key == "costs") {
      g.costs = parse_list(key, value);
      for (double c : g.costs) {
        if (!(c >= 0.0 && std::isfinite(c))) throw ConfigError("grid field 'costs': values must be finite and >= 0");
      }
    } else if (key == "tol") {
      const auto v = parse_list(key, value);
      if (v.size() != 1 || !(v[0] > 0.0)) throw ConfigError("grid field 'tol': expected one positive number");
      g.tolerance = v[0];
    } else if (key == "trials") {
      const auto v = parse_list(key, value);
      if (v.size() != 1 || v[0] < 0.0) throw ConfigError("grid field 'trials': expected a non-negative count");
      g.frame_trials = static_cast<long long>(v[0]);
    } else if (key == "ber") {
      const auto v = parse_list(key, value);
      if (v.size() != 1 || !(v[0] >= 0.0 && v[0] <= 1.0)) throw ConfigError("grid field 'ber': expected one value in [0,1]");
      g.frame_ber = v[0];
    } else if (key == "seed") {
      try {
        g.seed = std::stoull(value);
      } catch (const std::exception&) {
        throw ConfigError("grid field 'seed': expected an unsigned integer");
      }
    } else {
      throw ConfigError("grid field '" + key + "': unknown key");
    }
  }
  if (g.probs.empty() || g.costs.empty()) throw ConfigError("empty verification grid");
  return g;
}

bool VerifyReport::passed() const {
  return std::all_of(cases.begin(), cases.end(), [](const VerifyCase& c) { return c.passed; });
}

VerifyReport run_verification(const VerifyGrid& grid, const VerifyHooks& hooks) {
  if (grid.probs.empty() || grid.costs.empty() || grid.max_size < grid.min_size) {
    throw ConfigError("empty verification grid");
  }
  auto cost_fn = hooks.total_path_cost;
  if (!cost_fn) cost_fn = [](const ForwarderSet& fs) { return total_path_cost(fs); };
  auto overhead_fn = hooks.coordination_overhead;
  if (!overhead_fn) overhead_fn = [](const ForwarderSet& fs) { return coordination_overhead(fs); };

  VerifyCase cost = make_case("total_path_cost vs subset enumeration", grid.tolerance);
  VerifyCase overhead = make_case("coordination_overhead vs subset enumeration", grid.tolerance);
  VerifyCase mass = make_case("subset probabilities sum to one", grid.tolerance);

  // Every forwarder draws its (p, Y) pair from the grid, ids 1..k.
  std::vector<std::pair<double, double>> values;
  for (double p : grid.probs)
    for (double c : grid.costs) values.emplace_back(p, c);
  for (int k = grid.min_size; k <= grid.max_size; ++k) {
    std::vector<std::size_t> idx(static_cast<std::size_t>(k), 0);
    for (;;) {
      std::vector<ForwarderEntry> entries;
      for (int i = 0; i < k; ++i) {
        const auto [p, c] = values[idx[static_cast<std::size_t>(i)]];
        entries.emplace_back(NodeId{static_cast<std::uint32_t>(i + 1)}, p, c);
      }
      const ForwarderSet fs(std::move(entries));
      const std::string where = "set " + describe(fs);
      std::optional<oracle::SingleHopResult> exact;
      try {
        exact = oracle::exact_single_hop(fs);
      } catch (const Error&) {
      }
      if (exact) record(mass, std::abs(exact->total_probability - 1.0), where);
      compare(cost, where, [&] {
        if (!exact) throw Error("unreachable");
        return exact->expected_cost;
      }, [&] { return cost_fn(fs); });
      // No subset ever receives, so no duplicate can occur.
      compare(overhead, where, [&] { return exact ? exact->overhead : 0.0; }, [&] { return overhead_fn(fs); });

      std::size_t pos = 0;
      while (pos < idx.size() && ++idx[pos] == values.size()) idx[pos++] = 0;
      if (pos == idx.size()) break;
    }
  }

  // Multi-hop: closed form applied level by level against the absorbing chain.
  VerifyCase chain = make_case("two-hop chain vs absorbing chain", grid.tolerance);
  VerifyCase diamond = make_case("two-relay diamond vs absorbing chain", grid.tolerance);
  std::vector<double> live;
  for (double p : grid.probs)
    if (p > 0.0) live.push_back(p);
  for (double up : live) {
    for (double down : live) {
      std::ostringstream where;
      where.precision(17);
      where << "chain p_relay=" << up << " p_source=" << down;
      const oracle::ChainSpec spec{{1, 1, 1}, {{}, {{up}}, {{down}}}};
      compare(chain, where.str(), [&] { return oracle::exact_two_hop(spec); }, [&] {
        const double y_relay = cost_fn(single(0, up, 0.0));
        return cost_fn(single(1, down, y_relay));
      });
    }
  }
  for (double u1 : live) {
    for (double u2 : live) {
      for (double a : live) {
        for (double b : live) {
          std::ostringstream where;
          where.precision(17);
          where << "diamond uplinks=(" << u1 << "," << u2 << ") source=(" << a << "," << b << ")";
          const oracle::ChainSpec spec{{1, 2, 1}, {{}, {{u1}, {u2}}, {{a, b}}}};
          compare(diamond, where.str(), [&] { return oracle::exact_two_hop(spec); }, [&] {
            const double y1 = cost_fn(single(0, u1, 0.0));
            const double y2 = cost_fn(single(0, u2, 0.0));
            return cost_fn(ForwarderSet({ForwarderEntry(NodeId{1}, a, y1), ForwarderEntry(NodeId{2}, b, y2)}));
          });
        }
      }
    }
  }

  VerifyReport report;
  report.cases = {cost, overhead, mass, chain, diamond};

  if (grid.frame_trials > 0) {
    const FrameParams frame{8, 2, 100};
    const auto est = oracle::bit_level_frame_oracle(grid.frame_ber, frame, grid.frame_trials, grid.seed);
    const double n = static_cast<double>(grid.frame_trials);
    auto frame_case = [&](const char* name, double observed, double expected) {
      VerifyCase c = make_case(name, 3.0 * std::sqrt(expected * (1.0 - expected) / n));
      std::ostringstream where;
      where.precision(17);
      where << "ber=" << grid.frame_ber << " trials=" << grid.frame_trials << " expected=" << expected
            << " observed=" << observed;
      record(c, std::abs(observed - expected), where.str());
      report.cases.push_back(c);
    };
    frame_case("bit-level preamble miss (3 SE)", est.preamble_miss,
               preamble_miss_probability(grid.frame_ber, frame));
    frame_case("bit-level data miss (3 SE)", est.data_miss, data_miss_probability(grid.frame_ber, frame));
    frame_case("bit-level joint miss (3 SE)", est.joint_miss, failure_probability(grid.frame_ber, frame, 1.0));
  }
  return report;
}

int cmd_verify(const VerifyGrid& grid, std::ostream& out) {
  const auto report = run_verification(grid);
  for (const auto& c : report.cases) {
    out << (c.passed ? "PASS " : "FAIL ") << c.name << ": checked=" << c.checked
        << " max_abs_error=" << c.max_abs_error << " tolerance=" << c.tolerance << "\n";
    if (!c.passed) out << "  first failure: " << c.first_failure << "\n";
  }
  out << (report.passed() ? "verify: all cases passed\n" : "verify: FAILED\n");
  return report.passed() ? kSuccess : kVerificationFailure;
}

}  // namespace oppnet::cli
