// Acceptance suite: one PASS/FAIL line per criterion, details indented below.
// Exit status is non-zero if any criterion fails.

#include "oppnet/cli.hpp"
#include "oppnet/oracle.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

using namespace oppnet;

namespace {

const FrameParams kFrame{8, 2, 100};

struct Outcome {
  bool passed = true;
  std::vector<std::string> details;

  void check(bool ok, const std::string& what) {
    passed = passed && ok;
    details.push_back(std::string(ok ? "ok   " : "FAIL ") + what);
  }
};

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof(buf), f, args...);
  return buf;
}

int failures = 0;

void criterion(int id, const char* title, double budget_s, const std::function<void(Outcome&)>& body) {
  Outcome o;
  const auto t0 = std::chrono::steady_clock::now();
  try {
    body(o);
  } catch (const std::exception& e) {
    o.check(false, std::string("threw: ") + e.what());
  }
  const double elapsed = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  o.check(elapsed < budget_s, fmt("runtime %.2f s < %.0f s", elapsed, budget_s));
  std::printf("[%s] %d. %s\n", o.passed ? "PASS" : "FAIL", id, title);
  for (const auto& d : o.details) std::printf("       %s\n", d.c_str());
  std::fflush(stdout);
  if (!o.passed) ++failures;
}

std::uint64_t fnv1a(const std::string& s) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

}  // namespace

int main() {
  criterion(1, "closed forms match subset enumeration (sizes 1-4, tol 1e-12)", 5.0, [](Outcome& o) {
    cli::VerifyGrid grid;
    grid.min_size = 1;
    grid.max_size = 4;
    grid.probs = {0.0, 0.25, 0.5, 0.75, 1.0};
    grid.costs = {0.0, 1.0, 2.5};
    grid.tolerance = 1e-12;
    grid.frame_trials = 0;
    const auto report = cli::run_verification(grid);
    for (const auto& c : report.cases) {
      if (c.name.find("subset enumeration") == std::string::npos) continue;
      o.check(c.passed && c.checked > 0,
              fmt("%s: %lld sets, max |err| %.3g", c.name.c_str(), c.checked, c.max_abs_error) +
                  (c.passed ? "" : " first failure " + c.first_failure));
    }
  });

  criterion(2, "bit-level frame simulation agrees with the failure-probability factors (3 SE)", 30.0,
            [](Outcome& o) {
              const long long n = 1000000;
              const auto est = oracle::bit_level_frame_oracle(0.01, kFrame, n, 20240601);
              struct Row {
                const char* name;
                double observed;
                double frozen;
                double closed;
              };
              const Row rows[] = {
                  {"preamble miss", est.preamble_miss, 0.005968382239, preamble_miss_probability(0.01, kFrame)},
                  {"data miss", est.data_miss, 0.6339676587, data_miss_probability(0.01, kFrame)},
                  {"joint miss", est.joint_miss, 0.003783761314, failure_probability(0.01, kFrame, 1.0)},
              };
              for (const auto& r : rows) {
                const double se = std::sqrt(r.closed * (1.0 - r.closed) / static_cast<double>(n));
                o.check(std::abs(r.closed - r.frozen) < 1e-10,
                        fmt("%s closed form %.12f equals frozen %.12f", r.name, r.closed, r.frozen));
                o.check(std::abs(r.observed - r.closed) < 3.0 * se,
                        fmt("%s observed %.7f, |z| = %.2f < 3", r.name, r.observed,
                            std::abs(r.observed - r.closed) / se));
              }
            });

  criterion(3, "witness topology: hop distance 2, rank difference 3.04", 1.0, [](Outcome& o) {
    const auto w = witness_topology();
    const int hops = hop_distance(w, w.gateway, NodeId{5});
    const double rd = rank_difference_distance(w, w.gateway, NodeId{5});
    o.check(hops == 2, fmt("hop distance %d", hops));
    o.check(std::abs(rd - 3.04) <= 0.01, fmt("rank difference %.12f (rank %.12f)", rd, w.node(NodeId{5}).rank));
  });

  criterion(4, "overhead grows with forwarder count; simulator agrees within 3 SE", 60.0, [](Outcome& o) {
    const double p = 0.5;
    const double y = 1.0;
    double previous = -1.0;
    const long long reps = 100000;
    const double ber = ber_for_reception(p, kFrame, 1.0);
    for (int n = 1; n <= 6; ++n) {
      std::vector<ForwarderEntry> entries;
      for (int i = 0; i < n; ++i) entries.emplace_back(NodeId{static_cast<std::uint32_t>(i + 1)}, p, y);
      const double analytic = coordination_overhead(ForwarderSet(entries));
      const double reference = y * (1.0 - std::pow(1.0 - p, n));
      o.check(std::abs(analytic - reference) <= 1e-12 && analytic > previous,
              fmt("N=%d analytic %.15f, reference %.15f, increasing", n, analytic, reference));
      previous = analytic;

      // Relays hear the source with probability p; uplinks are lossless so
      // each relay has remaining cost 1. Relays overhear each other over a
      // lossy link, which is the only way duplicates arise.
      const auto star = star_topology(n, ber, 0.02, kFrame);
      SimConfig cfg;
      cfg.mode = ProtocolMode::ReceiverBased;
      cfg.replications = reps;
      cfg.seed = 4242 + static_cast<std::uint64_t>(n);
      cfg.source = NodeId{static_cast<std::uint32_t>(n + 1)};
      cfg.record_events = false;
      const auto m = run_experiment(star, cfg);
      const double se = m.overhead_std_error;
      const double z = se > 0 ? std::abs(m.empirical_coordination_overhead - analytic) / se
                              : std::numeric_limits<double>::infinity();
      o.check(z < 3.0, fmt("N=%d empirical %.5f (SE %.2g) vs analytic %.5f, |z| = %.3g", n,
                           m.empirical_coordination_overhead, se, analytic, z));
    }
  });

  criterion(5, "receiver-based and sender-prioritized PDR agree (99% two-proportion, |diff| < 0.01)", 120.0,
            [](Outcome& o) {
              GeneratorConfig gc;
              gc.node_count = 30;
              gc.area_side = 100.0;
              gc.radio_range = 35.0;
              gc.gateway_position = {50.0, 50.0};
              gc.ber = DistanceMappedBer{0.001, 0.01};
              Topology t;
              std::uint64_t seed = 77;
              for (;; ++seed) {
                try {
                  t = prepare(generate(gc, seed));
                  break;
                } catch (const Error&) {
                }
              }
              const auto costs = network_path_costs(t, UnreachablePolicy::Infinite);
              const long long reps = 100000;
              Metrics m[2];
              const ProtocolMode modes[2] = {ProtocolMode::ReceiverBased, ProtocolMode::SenderPrioritized};
              for (int i = 0; i < 2; ++i) {
                SimConfig cfg;
                cfg.mode = modes[i];
                cfg.replications = reps;
                cfg.seed = 900 + static_cast<std::uint64_t>(i);  // independent samples
                cfg.record_events = false;
                m[i] = run_experiment(t, costs, cfg);
              }
              const double p1 = m[0].pdr;
              const double p2 = m[1].pdr;
              const double pooled = (p1 + p2) / 2.0;
              const double se = std::sqrt(pooled * (1.0 - pooled) * 2.0 / static_cast<double>(reps));
              const double bound = 2.5758293035489 * se;
              o.details.push_back(fmt("topology seed %llu, %zu nodes", static_cast<unsigned long long>(seed),
                                      t.nodes.size()));
              o.check(std::abs(p1 - p2) <= bound,
                      fmt("PDR %.5f vs %.5f, |diff| %.5f <= 99%% bound %.5f", p1, p2, std::abs(p1 - p2), bound));
              o.check(std::abs(p1 - p2) < 0.01, fmt("|diff| %.5f < 0.01", std::abs(p1 - p2)));
            });

  criterion(6, "identical config gives byte-identical CSV", 10.0, [](Outcome& o) {
    const auto cfg = cli::parse_config(
        "topology:\n  generate: {nodes: 25, area: 100, range: 40, seed: 11, gateway: [50, 50],"
        " ber: {min: 0.001, max: 0.01}}\n"
        "simulation: {modes: [receiver_based, sender_prioritized], replications: 5000, seed: 31}\n"
        "sweep: {ber: [0.001, 0.003, 0.006]}\n");
    std::ostringstream a;
    std::ostringstream b;
    cli::cmd_sweep(cfg, a);
    cli::cmd_sweep(cli::parse_config(cli::emit_config(cfg)), b);
    o.check(a.str() == b.str() && fnv1a(a.str()) == fnv1a(b.str()),
            fmt("hash %016llx vs %016llx over %zu bytes", static_cast<unsigned long long>(fnv1a(a.str())),
                static_cast<unsigned long long>(fnv1a(b.str())), a.str().size()));
  });

  criterion(7, "perfect overhearing leaves no duplicate forwards on the diamond", 10.0, [](Outcome& o) {
    const auto d = diamond_topology(ber_for_reception(0.7, kFrame, 1.0), 0.0, 0.0, kFrame);
    const auto costs = network_path_costs(d);
    for (auto mode : {ProtocolMode::ReceiverBased, ProtocolMode::SenderPrioritized}) {
      SimConfig cfg;
      cfg.mode = mode;
      cfg.source = NodeId{3};
      long long duplicates = 0;
      long long suppressed = 0;
      for (long long r = 0; r < 10000; ++r) {
        const auto tr = simulate_delivery(d, costs, cfg, r);
        duplicates += tr.duplicate_forwards;
        for (const auto& e : tr.events) suppressed += e.kind == EventKind::Suppress;
      }
      o.check(duplicates == 0, fmt("%s: %lld duplicate forwards in 10000 deliveries (%lld suppressions)",
                                   std::string(to_string(mode)).c_str(), duplicates, suppressed));
    }
  });

  criterion(8, "0.8/0.8 chain costs 2.5, matching the absorbing-chain oracle", 1.0, [](Outcome& o) {
    const auto chain = chain_topology(2, ber_for_link_success(0.8, kFrame, 1.0), kFrame);
    const double y = network_path_costs(chain).at(NodeId{2});
    const double exact = oracle::exact_two_hop({{1, 1, 1}, {{}, {{0.8}}, {{0.8}}}});
    o.check(std::abs(y - 2.5) <= 1e-12, fmt("network path cost %.15f", y));
    o.check(std::abs(y - exact) <= 1e-12, fmt("oracle %.15f, |diff| %.3g", exact, std::abs(y - exact)));
  });

  std::printf("%s: %d criteria failed\n", failures ? "FAILED" : "PASSED", failures);
  return failures ? 1 : 0;
}
