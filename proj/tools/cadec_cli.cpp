// Command-line front end: Monte Carlo experiments, closed-form model
// evaluation, exhaustive verification suites and reset-period sweeps.
// Records are appended as JSON Lines; an optional CSV export mirrors them.
//
// Exit codes: 0 success, 1 runtime failure (censor budget, failed suite),
// 2 usage or validation error.

#include <CLI11.hpp>

#include <bit>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "cadec/harness.hpp"
#include "cadec/harrington1d.hpp"
#include "cadec/lattice.hpp"
#include "cadec/markov.hpp"
#include "cadec/oracles.hpp"
#include "cadec/records.hpp"
#include "cadec/rng.hpp"
#include "cadec/scala1d.hpp"

namespace {

using namespace cadec;

// ---------------------------------------------------------------------------
// Shared plumbing

struct GridSpec {
  std::string expr;  // "start:stop:points"
  bool log = false;
};

std::vector<double> expand_grid(const GridSpec& grid, double fallback) {
  if (grid.expr.empty()) return {fallback};
  double start = 0, stop = 0;
  int points = 0;
  char c1 = 0, c2 = 0;
  std::istringstream in(grid.expr);
  if (!(in >> start >> c1 >> stop >> c2 >> points) || c1 != ':' || c2 != ':' ||
      points < 1 || (grid.log && (start <= 0 || stop <= 0)))
    throw std::invalid_argument("grid must be start:stop:points (positive for --log)");
  std::vector<double> out;
  if (points == 1) return {start};
  for (int i = 0; i < points; ++i) {
    const double f = static_cast<double>(i) / (points - 1);
    out.push_back(grid.log ? start * std::pow(stop / start, f)
                           : start + f * (stop - start));
  }
  return out;
}

class RecordWriter {
 public:
  explicit RecordWriter(const std::string& path) : path_(path) {
    if (!path_.empty()) {
      file_.open(path_, std::ios::app);
      if (!file_) throw std::runtime_error("cannot open output file " + path_);
    }
  }
  void write(const ResultRecord& rec) {
    std::ostream& out = path_.empty() ? std::cout : file_;
    out << to_json_line(rec) << '\n';
    out.flush();
  }
  const std::string& path() const { return path_; }

 private:
  std::string path_;
  std::ofstream file_;
};

void maybe_export_csv(const std::string& jsonl, const std::string& csv) {
  if (csv.empty()) return;
  if (jsonl.empty())
    throw std::invalid_argument("--csv needs --out (CSV mirrors the JSONL file)");
  const std::size_t n = export_csv(jsonl, csv);
  std::cerr << "exported " << n << " records to " << csv << "\n";
}

// ---------------------------------------------------------------------------
// simulate

struct SimulateArgs {
  std::string decoder = "scala1d";
  int distance = 3;
  std::string model = "code-capacity";
  NoiseParams noise;
  bool tie_q = false, tie_sig = false, tie_cs = false, tie_fs = false;
  std::string reset = "none";
  int t_reset = 0;
  long long shots = 100000;
  bool adaptive = false;
  long long n_min = 1000, n_max = 1000000;
  double target_rel_se = 0.05;
  long long t_max = 10000000;
  std::uint64_t seed = 0;
  int threads = 1;
  GridSpec grid;
  std::string out, csv;
};

ExperimentSpec spec_from_args(const SimulateArgs& a, double p) {
  ExperimentSpec spec;
  spec.decoder = parse_decoder(a.decoder);
  spec.d = a.distance;
  spec.model = parse_model(a.model);
  spec.noise = a.noise;
  spec.noise.p = p;
  if (a.tie_q) spec.noise.q = p;
  if (a.tie_sig) spec.noise.p_sig = p;
  if (a.tie_cs) spec.noise.p_cs = p;
  if (a.tie_fs) spec.noise.p_fs = p;
  if (a.reset == "none") {
    spec.reset = ResetPolicy::kNone;
  } else if (a.reset == "fixed") {
    spec.reset = ResetPolicy::kFixed;
  } else if (a.reset == "auto") {
    spec.reset = ResetPolicy::kAuto;
  } else {
    throw std::invalid_argument("--reset must be none|fixed|auto");
  }
  spec.t_reset = a.t_reset;
  spec.shots.adaptive = a.adaptive;
  spec.shots.shots = a.shots;
  spec.shots.n_min = a.n_min;
  spec.shots.n_max = a.n_max;
  spec.shots.target_rel_se = a.target_rel_se;
  spec.t_max = a.t_max;
  spec.seed = a.seed;
  spec.threads = a.threads;
  spec.validate();
  return spec;
}

int run_simulate(const SimulateArgs& a) {
  RecordWriter writer(a.out);
  const std::vector<double> ps = expand_grid(a.grid, a.noise.p);
  for (double p : ps) {
    const ExperimentSpec spec = spec_from_args(a, p);
    const RunResult result = run_experiment(spec);
    const ResultRecord rec = make_record(spec, result);
    writer.write(rec);
    std::cerr << rec.decoder << " d=" << rec.d << " " << rec.model << " p=" << p
              << " -> estimate=" << result.estimate << " se=" << result.se
              << " shots=" << result.shots << "\n";
  }
  maybe_export_csv(a.out, a.csv);
  return 0;
}

// ---------------------------------------------------------------------------
// analytic

struct AnalyticArgs {
  std::string model = "ml-repetition";
  int distance = 3;
  int level = 1;
  int window = 10;
  double fc = 0.9;
  double p = 0.1;
  GridSpec grid;
  std::string out, csv;
};

int run_analytic(const AnalyticArgs& a) {
  RecordWriter writer(a.out);
  const std::vector<double> ps = expand_grid(a.grid, a.p);
  for (double p : ps) {
    ResultRecord rec;
    rec.decoder = "analytic-" + a.model;
    rec.d = a.distance;
    rec.model = "closed-form";
    rec.p = p;
    rec.se = 0.0;
    double value = 0.0;
    if (a.model == "ml-repetition") {
      value = ml_pl_repetition(p, a.distance);
    } else if (a.model == "concat-majority") {
      value = concat_majority_pl(p, a.level);
    } else if (a.model == "markov-lifetime") {
      value = lifetime_level1(a.distance, p);
    } else if (a.model == "markov-lifetime-two-level") {
      if (a.distance != 9)
        throw std::invalid_argument("the two-level lifetime model is defined for d=9");
      value = lifetime_d9_total(p);
    } else if (a.model == "chernoff") {
      const ChernoffBounds b = chernoff_bounds(a.window, a.fc, p);
      value = b.upper;
      rec.se = 0.0;
      std::cerr << "window=" << a.window << " fc=" << a.fc << " p=" << p
                << " upper=" << b.upper << " lower=" << b.lower << "\n";
    } else if (a.model == "chernoff-ratio") {
      const ChernoffRatios r = chernoff_ratios(a.level, a.fc, p);
      value = r.r_max;
      std::cerr << "level=" << a.level << " fc=" << a.fc << " p=" << p
                << " r_max=" << r.r_max << " r_min=" << r.r_min << "\n";
    } else if (a.model == "flip-chain") {
      value = flip_chain_failure_prob(a.level, p);
    } else {
      throw std::invalid_argument(
          "unknown analytic model (ml-repetition|concat-majority|markov-lifetime|"
          "markov-lifetime-two-level|chernoff|chernoff-ratio|flip-chain)");
    }
    rec.estimate = value;
    writer.write(rec);
    if (a.model != "chernoff" && a.model != "chernoff-ratio")
      std::cerr << a.model << " d=" << a.distance << " p=" << p << " -> " << value
                << "\n";
  }
  maybe_export_csv(a.out, a.csv);
  return 0;
}

// ---------------------------------------------------------------------------
// verify

struct VerifyArgs {
  std::string suite = "all";
  int max_distance = 13;
  int max_n = 10;
  int trials = 1000;
  std::uint64_t seed = 1;
};

bool suite_scala1d_ml(const VerifyArgs& a) {
  std::printf("suite scala1d-ml-equivalence (exhaustive, d <= %d)\n", a.max_distance);
  for (int d = 3; d <= a.max_distance; d += 2) {
    long long mismatches = 0;
    std::uint64_t first_bad = 0;
    for (std::uint64_t e = 0; e < (1ull << d); ++e) {
      RepetitionState init(d);
      for (int i = 0; i < d; ++i) init.errors[i] = (e >> i) & 1u;
      const auto res = scala1d_run_code_capacity(init);
      const bool fail = logical_failure_repetition(res.final_state);
      const bool expect = init.weight() > d / 2;
      if (fail != expect && mismatches++ == 0) first_bad = e;
    }
    std::printf("  d=%2d  configs=%8llu  mismatches=%lld\n", d, 1ull << d, mismatches);
    if (mismatches) {
      std::printf("  first mismatch at configuration 0x%llx\n",
                  static_cast<unsigned long long>(first_bad));
      return false;
    }
  }
  return true;
}

bool suite_matching(const VerifyArgs& a) {
  std::printf("suite matching-brute-force (%d random defect sets, d <= %d)\n",
              a.trials, std::min(a.max_distance, 9));
  Rng rng(a.seed, 0);
  for (int d = 3; d <= std::min(a.max_distance, 9); d += 2) {
    MatchingOracle oracle(d);
    for (int trial = 0; trial < a.trials; ++trial) {
      const int pairs = 1 + static_cast<int>(rng.below(4));
      std::vector<std::pair<int, int>> defects;
      while (static_cast<int>(defects.size()) < 2 * pairs) {
        const int r = static_cast<int>(rng.below(d));
        const int c = static_cast<int>(rng.below(d));
        bool dup = false;
        for (auto& [rr, cc] : defects) dup |= rr == r && cc == c;
        if (!dup) defects.emplace_back(r, c);
      }
      const int fast = oracle.match(defects).total_distance;
      const int slow = match_brute_force(defects, d).total_distance;
      if (fast != slow) {
        std::printf("  FAIL d=%d trial=%d: oracle %d vs brute force %d; defects:", d,
                    trial, fast, slow);
        for (auto& [r, c] : defects) std::printf(" (%d,%d)", r, c);
        std::printf("\n");
        return false;
      }
    }
    std::printf("  d=%d  %d sets matched exactly\n", d, a.trials);
  }
  return true;
}

bool suite_markov_reduction(const VerifyArgs& a) {
  std::printf("suite markov-reduction (weight aggregation, n <= %d)\n", a.max_n);
  for (int n = 1; n <= a.max_n; ++n) {
    double worst = 0;
    for (double p : {0.05, 0.3, 0.7}) {
      const Eigen::MatrixXd diff =
          reduced_matrix(n, p).matrix - weight_aggregated_full_chain(n, p);
      worst = std::max(worst, diff.cwiseAbs().maxCoeff());
    }
    std::printf("  n=%2d  max |diff| = %.3e\n", n, worst);
    if (worst > 1e-10) return false;
  }
  return true;
}

bool suite_block_majority(const VerifyArgs&) {
  std::printf("suite block-majority (hierarchical 1D, exhaustive)\n");
  for (std::uint32_t e = 0; e < 8; ++e) {
    const auto res = har1d_run_code_capacity(3, e);
    const int expect = std::popcount(e) >= 2 ? 1 : 0;
    if (res.logical_class != expect) {
      std::printf("  FAIL d=3 configuration %u: class %d, majority %d\n", e,
                  res.logical_class, expect);
      return false;
    }
  }
  std::printf("  d=3: all 8 configurations match majority\n");
  std::map<int, int> by_weight;
  for (std::uint32_t e = 0; e < 512; ++e) {
    const auto res = har1d_run_code_capacity(9, e);
    if (res.logical_class == 2) {
      std::printf("  FAIL d=9 configuration %u did not converge\n", e);
      return false;
    }
    if (res.logical_class == 1) ++by_weight[std::popcount(e)];
  }
  const std::map<int, int> expected = {{4, 27}, {5, 99}, {6, 84},
                                       {7, 36}, {8, 9},  {9, 1}};
  if (by_weight != expected) {
    std::printf("  FAIL d=9 failure enumerator deviates from the two-level law\n");
    for (auto& [w, n] : by_weight) std::printf("    weight %d: %d failures\n", w, n);
    return false;
  }
  std::printf("  d=9: 256/512 failures, enumerator matches the two-level law\n");
  return true;
}

bool suite_d7_wraparound(const VerifyArgs&) {
  std::printf("suite d7-wraparound (stale-signal failure mechanism)\n");
  // Three injected errors on a ring of 7: one transient error leaves stale
  // broadcast signals that push a later adjacent pair apart instead of
  // together, reaching the failing weight 4 at step 3.
  Scala1D ca(7);
  ca.set_errors(1u);  // lone error on qubit 0 before step 1
  ca.step(ca.syndrome());
  ca.step(ca.syndrome());
  if (ca.weight() != 0) {
    std::printf("  FAIL: lone error not corrected by step 2\n");
    return false;
  }
  ca.set_errors(ca.errors() ^ (1u << 3) ^ (1u << 4));  // pair before step 3
  ca.step(ca.syndrome());
  std::printf("  state after step 3: 0x%02llx (weight %d)\n",
              static_cast<unsigned long long>(ca.errors()), ca.weight());
  if (ca.errors() != 0x3cu || ca.weight() != 4) {
    std::printf("  FAIL: expected state 0x3c with weight 4\n");
    return false;
  }
  RepetitionState s(7);
  for (int i = 0; i < 7; ++i) s.errors[i] = (ca.errors() >> i) & 1u;
  if (!logical_failure_repetition(s)) {
    std::printf("  FAIL: weight-4 state not flagged by the majority referee\n");
    return false;
  }
  // Control: the same pair with no stale signals erodes cleanly.
  Scala1D fresh(7);
  fresh.set_errors((1u << 3) | (1u << 4));
  for (int t = 0; t < 5; ++t) fresh.step(fresh.syndrome());
  if (fresh.weight() != 0) {
    std::printf("  FAIL: control pair did not erode\n");
    return false;
  }
  std::printf("  deterministic failure at step 3 reproduced; control pair erodes\n");
  return true;
}

int run_verify(const VerifyArgs& a) {
  std::vector<std::pair<std::string, bool (*)(const VerifyArgs&)>> suites = {
      {"scala1d-ml-equivalence", suite_scala1d_ml},
      {"matching-brute-force", suite_matching},
      {"markov-reduction", suite_markov_reduction},
      {"block-majority", suite_block_majority},
      {"d7-wraparound", suite_d7_wraparound},
  };
  bool found = false, all_ok = true;
  for (auto& [name, fn] : suites) {
    if (a.suite != "all" && a.suite != name) continue;
    found = true;
    const bool ok = fn(a);
    std::printf("%-24s %s\n", name.c_str(), ok ? "PASS" : "FAIL");
    all_ok &= ok;
  }
  if (!found)
    throw std::invalid_argument(
        "unknown suite (scala1d-ml-equivalence|matching-brute-force|"
        "markov-reduction|block-majority|d7-wraparound|all)");
  return all_ok ? 0 : 1;
}

// ---------------------------------------------------------------------------
// sweep-reset

struct SweepResetArgs {
  SimulateArgs sim;  // decoder/model/noise/shots/seed/threads reused
  std::vector<int> candidates;
};

int run_sweep_reset(SweepResetArgs& a) {
  a.sim.reset = "fixed";
  std::vector<int> candidates = a.candidates;
  if (candidates.empty()) {
    const DecoderId id = parse_decoder(a.sim.decoder);
    const int top = (id == DecoderId::kScala1D) ? std::max(1, (a.sim.distance - 1) / 2)
                                                : a.sim.distance;
    for (int c = 1; c <= top; ++c) candidates.push_back(c);
  }
  RecordWriter writer(a.sim.out);
  int best = 0;
  RunResult best_result;
  ResultRecord best_record;
  std::printf("%8s %14s %12s %10s\n", "t_reset", "lifetime", "se", "censored");
  for (int cand : candidates) {
    a.sim.t_reset = cand;
    const ExperimentSpec spec = spec_from_args(a.sim, a.sim.noise.p);
    const RunResult result = run_lifetime(spec);
    std::printf("%8d %14.4f %12.4f %10lld\n", cand, result.estimate, result.se,
                result.censored);
    if (best == 0 || result.estimate > best_result.estimate) {
      best = cand;
      best_result = result;
      best_record = make_record(spec, result);
    }
  }
  std::printf("chosen t_reset = %d (lifetime %.4f)\n", best, best_result.estimate);
  writer.write(best_record);
  maybe_export_csv(a.sim.out, a.sim.csv);
  return 0;
}

// ---------------------------------------------------------------------------

void add_simulate_flags(CLI::App* cmd, SimulateArgs& a, bool seed_required) {
  cmd->add_option("--decoder", a.decoder,
                  "scala1d|scala2d|harrington1d|harrington2d");
  cmd->add_option("--distance,-d", a.distance, "code distance");
  cmd->add_option("--model", a.model, "code-capacity|phenomenological|signal");
  cmd->add_option("--p", a.noise.p, "data-qubit flip rate per step");
  cmd->add_option("--q", a.noise.q, "measurement flip rate per step");
  cmd->add_option("--p-sig", a.noise.p_sig, "broadcast-signal flip rate");
  cmd->add_option("--p-cs", a.noise.p_cs, "count-signal flip rate");
  cmd->add_option("--p-fs", a.noise.p_fs, "flip-signal flip rate");
  cmd->add_flag("--tie-q", a.tie_q, "set q equal to p at every grid point");
  cmd->add_flag("--tie-sig", a.tie_sig, "set p_sig equal to p at every grid point");
  cmd->add_flag("--tie-cs", a.tie_cs, "set p_cs equal to p at every grid point");
  cmd->add_flag("--tie-fs", a.tie_fs, "set p_fs equal to p at every grid point");
  cmd->add_option("--reset", a.reset, "none|fixed|auto");
  cmd->add_option("--t-reset", a.t_reset, "fixed signal-reset period");
  cmd->add_option("--shots", a.shots, "trials per point (fixed policy)");
  cmd->add_flag("--adaptive", a.adaptive, "double shots until the SE target");
  cmd->add_option("--n-min", a.n_min, "adaptive: initial shots");
  cmd->add_option("--n-max", a.n_max, "adaptive: shot cap");
  cmd->add_option("--target-rel-se", a.target_rel_se, "adaptive: relative SE target");
  cmd->add_option("--t-max", a.t_max, "lifetime step cap (censoring)");
  auto* seed = cmd->add_option("--seed", a.seed, "base RNG seed");
  if (seed_required) seed->required();
  cmd->add_option("--threads", a.threads, "worker count (results are invariant)");
  cmd->add_option("--p-grid", a.grid.expr, "sweep p over start:stop:points");
  cmd->add_flag("--log", a.grid.log, "logarithmic grid spacing");
  cmd->add_option("--out", a.out, "JSONL output path (stdout if omitted)");
  cmd->add_option("--csv", a.csv, "also export the JSONL file as CSV");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"cellular-automaton decoder laboratory"};
  app.require_subcommand(1);

  SimulateArgs sim;
  CLI::App* c_sim = app.add_subcommand("simulate", "run a Monte Carlo experiment");
  add_simulate_flags(c_sim, sim, /*seed_required=*/true);

  AnalyticArgs ana;
  CLI::App* c_ana = app.add_subcommand("analytic", "evaluate a closed-form model");
  c_ana->add_option("--model", ana.model,
                    "ml-repetition|concat-majority|markov-lifetime|"
                    "markov-lifetime-two-level|chernoff|chernoff-ratio|flip-chain");
  c_ana->add_option("--distance,-d", ana.distance, "code distance");
  c_ana->add_option("--level", ana.level, "hierarchy level / composition depth");
  c_ana->add_option("--window", ana.window, "counter window length");
  c_ana->add_option("--fc", ana.fc, "threshold fraction");
  c_ana->add_option("--p", ana.p, "rate");
  c_ana->add_option("--p-grid", ana.grid.expr, "sweep p over start:stop:points");
  c_ana->add_flag("--log", ana.grid.log, "logarithmic grid spacing");
  c_ana->add_option("--out", ana.out, "JSONL output path (stdout if omitted)");
  c_ana->add_option("--csv", ana.csv, "also export the JSONL file as CSV");

  VerifyArgs ver;
  CLI::App* c_ver = app.add_subcommand("verify", "run an exhaustive/oracle suite");
  c_ver->add_option("--suite", ver.suite,
                    "scala1d-ml-equivalence|matching-brute-force|markov-reduction|"
                    "block-majority|d7-wraparound|all");
  c_ver->add_option("--max-distance", ver.max_distance, "largest distance to check");
  c_ver->add_option("--max-n", ver.max_n, "largest bit count for the reduction suite");
  c_ver->add_option("--trials", ver.trials, "random sets for the matching suite");
  c_ver->add_option("--seed", ver.seed, "RNG seed for randomized suites");

  SweepResetArgs swp;
  CLI::App* c_swp = app.add_subcommand("sweep-reset",
                                       "evaluate reset periods and keep the best");
  add_simulate_flags(c_swp, swp.sim, /*seed_required=*/true);
  c_swp->add_option("--candidates", swp.candidates, "explicit reset periods to try");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << e.what() << "\n";
    return 2;
  }

  try {
    if (*c_sim) return run_simulate(sim);
    if (*c_ana) return run_analytic(ana);
    if (*c_ver) return run_verify(ver);
    if (*c_swp) return run_sweep_reset(swp);
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 2;
}
