#include "cadec/harness.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <exception>
#include <functional>
#include <limits>
#include <mutex>
#include <thread>

#include "cadec/harrington1d.hpp"
#include "cadec/harrington2d.hpp"
#include "cadec/oracles.hpp"
#include "cadec/rng.hpp"
#include "cadec/scala1d.hpp"
#include "cadec/scala2d.hpp"

namespace cadec {

namespace {

struct TrialOutcome {
  bool fail = false;
  bool censored = false;
  double t = 0.0;
};

struct Accum {
  long long n = 0, fails = 0, censored = 0;
  double sum = 0.0, sum2 = 0.0;
  void add(const TrialOutcome& o) {
    ++n;
    fails += o.fail ? 1 : 0;
    censored += o.censored ? 1 : 0;
    sum += o.t;
    sum2 += o.t * o.t;
  }
  void merge(const Accum& o) {
    n += o.n;
    fails += o.fails;
    censored += o.censored;
    sum += o.sum;
    sum2 += o.sum2;
  }
};

using TrialFn = std::function<TrialOutcome(long long)>;

void run_trials(long long begin, long long end, int threads, const TrialFn& trial,
                Accum& acc) {
  if (threads <= 1) {
    for (long long i = begin; i < end; ++i) acc.add(trial(i));
    return;
  }
  std::atomic<long long> next{begin};
  std::mutex mu;
  std::exception_ptr first_error;
  std::vector<std::thread> pool;
  pool.reserve(threads);
  for (int w = 0; w < threads; ++w) {
    pool.emplace_back([&] {
      Accum local;
      try {
        for (;;) {
          const long long i = next.fetch_add(1);
          if (i >= end) break;
          local.add(trial(i));
        }
      } catch (...) {
        std::lock_guard<std::mutex> lock(mu);
        if (!first_error) first_error = std::current_exception();
        next.store(end);  // drain remaining work
      }
      std::lock_guard<std::mutex> lock(mu);
      acc.merge(local);
    });
  }
  for (auto& th : pool) th.join();
  if (first_error) std::rethrow_exception(first_error);
}

std::vector<std::uint32_t> random_rows(Rng& rng, int d, double p) {
  std::vector<std::uint32_t> rows(d);
  for (int r = 0; r < d; ++r)
    rows[r] = static_cast<std::uint32_t>(random_bit_mask64(rng, d, p));
  return rows;
}

ToricState random_toric_state(Rng& rng, int d, double p) {
  ToricState s(d);
  for (int r = 0; r < d; ++r) {
    const std::uint64_t hm = random_bit_mask64(rng, d, p);
    const std::uint64_t vm = random_bit_mask64(rng, d, p);
    for (int c = 0; c < d; ++c) {
      s.h[r * d + c] = (hm >> c) & 1;
      s.v[r * d + c] = (vm >> c) & 1;
    }
  }
  return s;
}

TrialOutcome code_capacity_trial(const ExperimentSpec& spec, long long idx) {
  Rng rng(spec.seed, static_cast<std::uint64_t>(idx));
  TrialOutcome out;
  switch (spec.decoder) {
    case DecoderId::kScala1D: {
      RepetitionState s(spec.d);
      const std::uint64_t e = random_bit_mask64(rng, spec.d, spec.noise.p);
      for (int i = 0; i < spec.d; ++i) s.errors[i] = (e >> i) & 1;
      const auto res = scala1d_run_code_capacity(s);
      out.fail = 2 * res.final_state.weight() > spec.d;
      break;
    }
    case DecoderId::kScala2D: {
      // Referee: the run fails if defects survive the fixed-length schedule or
      // the (defect-free) residual carries a logical operator on either cut.
      const ToricState init = random_toric_state(rng, spec.d, spec.noise.p);
      const ToricState fin = scala2d_run_code_capacity(init);
      const Syndrome2D syn = syndrome_toric(fin);
      bool any = false;
      for (std::uint8_t b : syn.defects) any |= b != 0;
      out.fail = any || homology_parity(fin, Direction::kHorizontal) != 0 ||
                 homology_parity(fin, Direction::kVertical) != 0;
      break;
    }
    case DecoderId::kHarrington1D: {
      const std::uint32_t e =
          static_cast<std::uint32_t>(random_bit_mask64(rng, spec.d, spec.noise.p));
      const auto res = har1d_run_code_capacity(spec.d, e);
      out.fail = res.logical_class != 0;
      out.censored =
          res.logical_class == 2 &&
          res.steps >= 50LL * spec.d * ipow(HierConstants::kU,
                                            level_count_for_distance(spec.d));
      break;
    }
    case DecoderId::kHarrington2D: {
      const ToricState init = random_toric_state(rng, spec.d, spec.noise.p);
      const auto res = har2d_run_code_capacity(init);
      out.fail = res.logical_class != 0;
      out.censored =
          res.logical_class == 2 &&
          res.steps >= 50LL * spec.d * ipow(HierConstants::kU,
                                            level_count_for_distance(spec.d));
      break;
    }
  }
  return out;
}

TrialOutcome lifetime_trial(const ExperimentSpec& spec, long long idx) {
  Rng rng(spec.seed, static_cast<std::uint64_t>(idx));
  const NoiseParams& nz = spec.noise;
  const int d = spec.d;
  switch (spec.decoder) {
    case DecoderId::kScala1D: {
      Scala1D dec(d);
      const int th = (d + 1) / 2;
      for (long long t = 1; t <= spec.t_max; ++t) {
        if (nz.p > 0) dec.set_errors(dec.errors() ^ random_bit_mask64(rng, d, nz.p));
        std::uint64_t syn = dec.syndrome();
        if (nz.q > 0) syn ^= random_bit_mask64(rng, d, nz.q);
        dec.step(syn);
        if (spec.t_reset > 0 && t % spec.t_reset == 0) dec.reset_signals();
        if (nz.p_sig > 0)
          dec.set_signals(dec.sig_left() ^ random_bit_mask64(rng, d, nz.p_sig),
                          dec.sig_right() ^ random_bit_mask64(rng, d, nz.p_sig));
        if (dec.weight() >= th) return {true, false, static_cast<double>(t)};
      }
      return {false, true, static_cast<double>(spec.t_max)};
    }
    case DecoderId::kHarrington1D: {
      Harrington1D dec(d);
      const int th = (d + 1) / 2;
      const int m = dec.levels();
      for (long long t = 1; t <= spec.t_max; ++t) {
        if (nz.p > 0) dec.set_errors(dec.errors() ^ static_cast<std::uint32_t>(
                                                        random_bit_mask64(rng, d, nz.p)));
        std::uint32_t syn = dec.syndrome();
        if (nz.q > 0) syn ^= static_cast<std::uint32_t>(random_bit_mask64(rng, d, nz.q));
        dec.step(syn);
        if (nz.p_cs > 0)
          for (int k = 1; k <= m; ++k)
            dec.corrupt_count_signals(
                k, static_cast<std::uint32_t>(random_bit_mask64(rng, d, nz.p_cs)),
                static_cast<std::uint32_t>(random_bit_mask64(rng, d, nz.p_cs)));
        if (nz.p_fs > 0)
          for (int k = 1; k <= m; ++k)
            dec.corrupt_flip_signals(
                k, static_cast<std::uint32_t>(random_bit_mask64(rng, d, nz.p_fs)),
                static_cast<std::uint32_t>(random_bit_mask64(rng, d, nz.p_fs)));
        if (dec.weight() >= th) return {true, false, static_cast<double>(t)};
      }
      return {false, true, static_cast<double>(spec.t_max)};
    }
    case DecoderId::kScala2D: {
      Scala2D dec(d);
      const MatchingOracle oracle(d);
      for (long long t = 1; t <= spec.t_max; ++t) {
        if (nz.p > 0) {
          ToricState s = dec.state();
          const ToricState flips = random_toric_state(rng, d, nz.p);
          for (std::size_t i = 0; i < s.h.size(); ++i) {
            s.h[i] ^= flips.h[i];
            s.v[i] ^= flips.v[i];
          }
          dec.set_state(s);
        }
        std::vector<std::uint32_t> syn = dec.syndrome_rows();
        if (nz.q > 0)
          for (int r = 0; r < d; ++r)
            syn[r] ^= static_cast<std::uint32_t>(random_bit_mask64(rng, d, nz.q));
        dec.step(syn, false);
        if (spec.t_reset > 0 && t % spec.t_reset == 0) dec.reset_signals();
        if (nz.p_sig > 0)
          dec.corrupt_signals(
              random_rows(rng, d, nz.p_sig), random_rows(rng, d, nz.p_sig),
              random_rows(rng, d, nz.p_sig), random_rows(rng, d, nz.p_sig));
        if (logical_failure_toric(dec.state(), oracle))
          return {true, false, static_cast<double>(t)};
      }
      return {false, true, static_cast<double>(spec.t_max)};
    }
    case DecoderId::kHarrington2D: {
      Harrington2D dec(d);
      const MatchingOracle oracle(d);
      const int m = dec.levels();
      for (long long t = 1; t <= spec.t_max; ++t) {
        if (nz.p > 0) {
          ToricState s = dec.state();
          const ToricState flips = random_toric_state(rng, d, nz.p);
          for (std::size_t i = 0; i < s.h.size(); ++i) {
            s.h[i] ^= flips.h[i];
            s.v[i] ^= flips.v[i];
          }
          dec.set_state(s);
        }
        std::vector<std::uint32_t> syn = dec.syndrome_rows();
        if (nz.q > 0)
          for (int r = 0; r < d; ++r)
            syn[r] ^= static_cast<std::uint32_t>(random_bit_mask64(rng, d, nz.q));
        dec.step(syn);
        if (nz.p_cs > 0)
          for (int k = 1; k <= m; ++k)
            for (int dir = 0; dir < 8; ++dir)
              dec.corrupt_count_signals(k, dir, random_rows(rng, d, nz.p_cs));
        if (nz.p_fs > 0)
          for (int k = 1; k <= m; ++k)
            for (int dir = 0; dir < 4; ++dir)
              dec.corrupt_flip_signals(k, dir, random_rows(rng, d, nz.p_fs));
        if (logical_failure_toric(dec.state(), oracle))
          return {true, false, static_cast<double>(t)};
      }
      return {false, true, static_cast<double>(spec.t_max)};
    }
  }
  return {};
}

TrialFn make_trial_fn(const ExperimentSpec& spec) {
  if (spec.model == NoiseModel::kCodeCapacity)
    return [spec](long long i) { return code_capacity_trial(spec, i); };
  return [spec](long long i) { return lifetime_trial(spec, i); };
}

RunResult finalize(const ExperimentSpec& spec, const Accum& acc, double wall_ms) {
  RunResult r;
  r.shots = acc.n;
  r.failures = acc.fails;
  r.censored = acc.censored;
  r.t_reset = spec.t_reset;
  r.seed = spec.seed;
  r.wall_ms = wall_ms;
  if (spec.model == NoiseModel::kCodeCapacity) {
    const double phat = acc.n ? static_cast<double>(acc.fails) / acc.n : 0.0;
    r.estimate = phat;
    r.se = acc.n ? std::sqrt(phat * (1.0 - phat) / acc.n) : 0.0;
  } else {
    const double mean = acc.n ? acc.sum / acc.n : 0.0;
    r.estimate = mean;
    if (acc.n > 1) {
      const double var = std::max(0.0, (acc.sum2 - acc.n * mean * mean) / (acc.n - 1));
      r.se = std::sqrt(var / acc.n);
    }
  }
  return r;
}

void check_censor_budget(const Accum& acc) {
  if (acc.n > 0 && 1000 * acc.censored > acc.n)
    throw CensorBudgetExceeded(std::to_string(acc.censored) + " of " +
                               std::to_string(acc.n) +
                               " trials hit the step cap (> 0.1% budget)");
}

RunResult run_fixed(const ExperimentSpec& spec) {
  spec.validate();
  const auto t0 = std::chrono::steady_clock::now();
  Accum acc;
  run_trials(0, spec.shots.shots, spec.threads, make_trial_fn(spec), acc);
  check_censor_budget(acc);
  const double ms = std::chrono::duration<double, std::milli>(
                        std::chrono::steady_clock::now() - t0)
                        .count();
  return finalize(spec, acc, ms);
}

}  // namespace

void ExperimentSpec::validate() const {
  const auto in01 = [](double x) { return x >= 0.0 && x <= 1.0; };
  if (!in01(noise.p) || !in01(noise.q) || !in01(noise.p_sig) || !in01(noise.p_cs) ||
      !in01(noise.p_fs))
    throw std::invalid_argument("noise rates must lie in [0,1]");
  switch (decoder) {
    case DecoderId::kScala1D:
      if (d < 3 || d > 63 || d % 2 == 0)
        throw std::invalid_argument("repetition-code distance must be odd, 3..63");
      break;
    case DecoderId::kScala2D:
      if (d < 3 || d > 31) throw std::invalid_argument("lattice size must be 3..31");
      break;
    case DecoderId::kHarrington1D:
    case DecoderId::kHarrington2D:
      level_count_for_distance(d);  // throws InvalidDistance unless d = 3^m
      if (d > 27) throw InvalidDistance("supported distances are 3, 9, 27");
      if (reset != ResetPolicy::kNone || t_reset != 0)
        throw std::invalid_argument(
            "hierarchical decoders manage their own schedule; no reset policy");
      break;
  }
  if (model == NoiseModel::kCodeCapacity &&
      (noise.q != 0 || noise.p_sig != 0 || noise.p_cs != 0 || noise.p_fs != 0))
    throw std::invalid_argument("code-capacity model admits data noise only");
  if (model == NoiseModel::kPhenomenological &&
      (noise.p_sig != 0 || noise.p_cs != 0 || noise.p_fs != 0))
    throw std::invalid_argument("phenomenological model admits p and q only");
  if (reset == ResetPolicy::kFixed && t_reset < 1)
    throw std::invalid_argument("fixed reset policy needs a period >= 1");
  if (t_reset < 0 || t_max < 1 || shots.shots < 1 || shots.n_min < 1 ||
      shots.n_max < shots.n_min)
    throw std::invalid_argument("invalid budget parameters");
}

RunResult run_code_capacity(const ExperimentSpec& spec) {
  if (spec.model != NoiseModel::kCodeCapacity)
    throw std::invalid_argument("spec is not a code-capacity experiment");
  return run_fixed(spec);
}

RunResult run_lifetime(const ExperimentSpec& spec) {
  if (spec.model == NoiseModel::kCodeCapacity)
    throw std::invalid_argument("spec is not a lifetime experiment");
  return run_fixed(spec);
}

RunResult adaptive_sample(const ExperimentSpec& spec) {
  spec.validate();
  const auto t0 = std::chrono::steady_clock::now();
  const TrialFn trial = make_trial_fn(spec);
  Accum acc;
  long long target_n = spec.shots.n_min;
  bool met = false;
  for (;;) {
    run_trials(acc.n, target_n, spec.threads, trial, acc);
    const RunResult probe = finalize(spec, acc, 0.0);
    if (probe.estimate > 0.0 && probe.se > 0.0 &&
        probe.se / probe.estimate <= spec.shots.target_rel_se) {
      met = true;
      break;
    }
    if (target_n >= spec.shots.n_max) break;
    target_n = std::min(target_n * 2, spec.shots.n_max);
  }
  check_censor_budget(acc);
  const double ms = std::chrono::duration<double, std::milli>(
                        std::chrono::steady_clock::now() - t0)
                        .count();
  RunResult r = finalize(spec, acc, ms);
  r.target_met = met;
  return r;
}

RunResult run_experiment(const ExperimentSpec& spec) {
  if (spec.reset == ResetPolicy::kAuto) {
    ExperimentSpec fixed = spec;
    fixed.reset = ResetPolicy::kFixed;
    fixed.t_reset = search_reset_time(spec).first;
    return fixed.shots.adaptive ? adaptive_sample(fixed) : run_fixed(fixed);
  }
  return spec.shots.adaptive ? adaptive_sample(spec) : run_fixed(spec);
}

std::pair<int, RunResult> search_reset_time(const ExperimentSpec& spec,
                                            std::vector<int> candidates) {
  if (spec.model == NoiseModel::kCodeCapacity)
    throw std::invalid_argument("reset search applies to lifetime experiments");
  if (candidates.empty()) {
    const bool one_dim = spec.decoder == DecoderId::kScala1D ||
                         spec.decoder == DecoderId::kHarrington1D;
    const int hi = one_dim ? std::max(1, (spec.d - 1) / 2) : spec.d;
    for (int t = 1; t <= hi; ++t) candidates.push_back(t);
  }
  ExperimentSpec probe_spec = spec;
  probe_spec.reset = ResetPolicy::kFixed;
  probe_spec.shots.adaptive = false;
  const long long base =
      spec.shots.adaptive ? spec.shots.n_min : spec.shots.shots / 10;
  probe_spec.shots.shots = std::max<long long>(500, base);
  int best_t = candidates.front();
  RunResult best_result;
  bool first = true;
  for (int cand : candidates) {
    probe_spec.t_reset = cand;
    const RunResult r = run_fixed(probe_spec);
    if (first || r.estimate > best_result.estimate) {
      best_t = cand;
      best_result = r;
      first = false;
    }
  }
  return {best_t, best_result};
}

PowerLawFit fit_scaling_exponent(const std::vector<std::pair<double, double>>& points) {
  std::vector<double> xs, ys;
  for (const auto& [rate, est] : points) {
    if (rate > 0.0 && est > 0.0) {
      xs.push_back(std::log(rate));
      ys.push_back(std::log(est));
    }
  }
  const std::size_t n = xs.size();
  if (n < 3) throw InsufficientPoints();
  double mx = 0, my = 0;
  for (std::size_t i = 0; i < n; ++i) {
    mx += xs[i];
    my += ys[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < n; ++i) {
    sxx += (xs[i] - mx) * (xs[i] - mx);
    sxy += (xs[i] - mx) * (ys[i] - my);
  }
  if (sxx <= 0.0) throw InsufficientPoints();
  const double slope = sxy / sxx;
  const double intercept = my - slope * mx;
  double ss_res = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const double r = ys[i] - (intercept + slope * xs[i]);
    ss_res += r * r;
  }
  PowerLawFit fit;
  fit.lambda = std::abs(slope);
  fit.amplitude = std::exp(intercept);
  fit.lambda_se = (n > 2) ? std::sqrt(ss_res / (n - 2) / sxx) : 0.0;
  return fit;
}

}  // namespace cadec
