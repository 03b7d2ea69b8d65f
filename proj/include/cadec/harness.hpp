#pragma once
// Monte Carlo experiment engine: noise injection, trial execution, adaptive
// sampling, estimators, reset-time search and power-law fits.
//
// Reproducibility contract: every trial draws from its own counter-based
// stream Rng(seed, trial_index), so (spec, seed) determines every outcome
// bit-for-bit independent of worker count and scheduling.
//
// Per-step noise/update order in lifetime experiments:
//   data flips -> measurement flips -> decoder step (including any scheduled
//   signal reset) -> signal flips -> referee.
// Referees: repetition code = majority vote (failure once the error weight
// reaches (d+1)/2); toric code = exact matching completion + homology.

#include <cstdint>
#include <stdexcept>
#include <utility>
#include <vector>

namespace cadec {

struct CensorBudgetExceeded : std::runtime_error {
  explicit CensorBudgetExceeded(const std::string& what) : std::runtime_error(what) {}
};
struct InsufficientPoints : std::runtime_error {
  InsufficientPoints() : std::runtime_error("power-law fit needs >= 3 positive points") {}
};

enum class DecoderId { kScala1D, kScala2D, kHarrington1D, kHarrington2D };
enum class NoiseModel { kCodeCapacity, kPhenomenological, kSignal };
enum class ResetPolicy { kNone, kFixed, kAuto };

struct NoiseParams {
  double p = 0.0;      // data-qubit flip rate per step
  double q = 0.0;      // measurement flip rate per step
  double p_sig = 0.0;  // signal flip rate (broadcast decoders)
  double p_cs = 0.0;   // count-signal flip rate (hierarchical decoders)
  double p_fs = 0.0;   // flip-signal flip rate (hierarchical decoders)
};

struct ShotsPolicy {
  bool adaptive = false;
  long long shots = 100000;  // fixed-N policy
  long long n_min = 1000;
  long long n_max = 1000000;
  double target_rel_se = 0.05;
};

struct ExperimentSpec {
  DecoderId decoder = DecoderId::kScala1D;
  int d = 3;
  NoiseModel model = NoiseModel::kCodeCapacity;
  NoiseParams noise;
  ResetPolicy reset = ResetPolicy::kNone;
  int t_reset = 0;              // fixed reset period (0 = never)
  ShotsPolicy shots;
  long long t_max = 10000000;   // lifetime step cap (censoring)
  std::uint64_t seed = 0;
  int threads = 1;

  void validate() const;  // decoder/distance/model compatibility
};

struct RunResult {
  double estimate = 0.0;  // p_L (code capacity) or mean lifetime
  double se = 0.0;
  long long shots = 0;
  long long failures = 0;
  long long censored = 0;
  int t_reset = 0;
  std::uint64_t seed = 0;
  double wall_ms = 0.0;
  bool target_met = true;  // adaptive-shots target reached (trivially true otherwise)
};

// Single-pass experiments with the fixed-N shots policy.
RunResult run_code_capacity(const ExperimentSpec& spec);
RunResult run_lifetime(const ExperimentSpec& spec);

// Doubles shot counts from n_min until the relative standard error reaches
// the target or n_max is hit (flagged via target_met).  Counter-based streams
// make grown runs extensions of smaller ones.
RunResult adaptive_sample(const ExperimentSpec& spec);

// Dispatches on model and shots policy.
RunResult run_experiment(const ExperimentSpec& spec);

// Evaluates each reset-period candidate with a reduced shot budget and
// returns the lifetime-maximizing period (ties toward the smaller period).
// Default candidates: 1..floor((d-1)/2) for 1D decoders, 1..d for 2D.
std::pair<int, RunResult> search_reset_time(const ExperimentSpec& spec,
                                            std::vector<int> candidates = {});

struct PowerLawFit {
  double lambda = 0.0;     // |slope| in log-log space
  double amplitude = 0.0;  // exp(intercept)
  double lambda_se = 0.0;  // standard error of the slope
};

// Least-squares fit of estimate = A * rate^(+-lambda) on (rate, estimate)
// pairs; requires >= 3 points with positive estimates.
PowerLawFit fit_scaling_exponent(const std::vector<std::pair<double, double>>& points);

}  // namespace cadec
