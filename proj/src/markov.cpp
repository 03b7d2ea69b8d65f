#include "cadec/markov.hpp"

#include <bit>
#include <cmath>
#include <limits>
#include <vector>

#include "cadec/harrington1d.hpp"  // HierConstants, InvalidDistance, ipow
#include "cadec/oracles.hpp"       // p_maj

namespace cadec {

namespace {

std::vector<std::vector<double>> pascal(int n) {
  std::vector<std::vector<double>> c(n + 1, std::vector<double>(n + 1, 0.0));
  for (int i = 0; i <= n; ++i) {
    c[i][0] = 1.0;
    for (int j = 1; j <= i; ++j) c[i][j] = c[i - 1][j - 1] + c[i - 1][j];
  }
  return c;
}

}  // namespace

void AbsorbingChain::validate(double tol) const {
  const auto t = W.rows();
  if (W.cols() != t || R.rows() != t || pi0.size() != t)
    throw std::invalid_argument("inconsistent chain dimensions");
  for (Eigen::Index i = 0; i < t; ++i) {
    const double row = W.row(i).sum() + R.row(i).sum();
    if (std::abs(row - 1.0) > tol)
      throw std::invalid_argument("chain row " + std::to_string(i) +
                                  " does not sum to 1");
    if (W.row(i).minCoeff() < -tol || R.row(i).minCoeff() < -tol)
      throw std::invalid_argument("negative transition probability");
  }
  if (std::abs(pi0.sum() - 1.0) > tol)
    throw std::invalid_argument("initial distribution does not sum to 1");
}

double hitting_time(const AbsorbingChain& chain) {
  const auto t = chain.W.rows();
  const Eigen::MatrixXd A = Eigen::MatrixXd::Identity(t, t) - chain.W;
  Eigen::PartialPivLU<Eigen::MatrixXd> lu(A);
  // Guard against a (near-)singular system: rho(W) ~ 1.
  const double rcond_proxy = lu.matrixLU().diagonal().cwiseAbs().minCoeff();
  if (!(rcond_proxy > 1e-300)) throw SingularSystem();
  const Eigen::VectorXd x = lu.solve(Eigen::VectorXd::Ones(t));
  const double resid = (A * x - Eigen::VectorXd::Ones(t)).cwiseAbs().maxCoeff();
  const double scale = 1.0 + x.cwiseAbs().maxCoeff();
  if (!std::isfinite(resid) || resid / scale > 1e-9) throw SingularSystem();
  return chain.pi0.dot(x);
}

ReducedChain reduced_matrix(int n, double p) {
  if (n < 1) throw std::invalid_argument("bit count must be >= 1");
  const double q = 1.0 - p;
  const auto c = pascal(n);
  ReducedChain rc;
  rc.n = n;
  rc.p = p;
  rc.matrix = Eigen::MatrixXd::Zero(n + 1, n + 1);
  for (int k = 0; k <= n; ++k)
    for (int l = 0; l <= n; ++l) {
      double sum = 0.0;
      if (l == k) {
        for (int j = 0; j <= std::min(k, n - k); ++j)
          sum += c[k][j] * c[n - k][j] * std::pow(p, 2 * j) * std::pow(q, n - 2 * j);
      } else if (k < l) {
        const int delta = l - k;
        for (int j = 0; j + delta <= n - k && j <= k; ++j)
          sum += c[k][j] * c[n - k][delta + j] * std::pow(p, delta + 2 * j) *
                 std::pow(q, n - delta - 2 * j);
      } else {
        const int delta = k - l;
        for (int j = 0; j + delta <= k && j <= n - k; ++j)
          sum += c[k][delta + j] * c[n - k][j] * std::pow(p, delta + 2 * j) *
                 std::pow(q, n - delta - 2 * j);
      }
      rc.matrix(k, l) = sum;
    }
  return rc;
}

Eigen::MatrixXd weight_aggregated_full_chain(int n, double p) {
  const double q = 1.0 - p;
  std::vector<double> flip_prob(n + 1);
  for (int w = 0; w <= n; ++w)
    flip_prob[w] = std::pow(p, w) * std::pow(q, n - w);
  Eigen::MatrixXd agg = Eigen::MatrixXd::Zero(n + 1, n + 1);
  // Row k is independent of the representative; use x = 0b1...1 (k ones).
  for (int k = 0; k <= n; ++k) {
    const std::uint32_t x = (k == 32) ? 0xffffffffu : ((1u << k) - 1);
    for (std::uint32_t y = 0; y < (1u << n); ++y)
      agg(k, std::popcount(y)) += flip_prob[std::popcount(x ^ y)];
  }
  return agg;
}

AbsorbingChain block_chain(int d, double p) {
  const int m = level_count_for_distance(d);
  (void)m;
  const int nb = d / 3;
  const double pb = p_maj(p);
  const ReducedChain rc = reduced_matrix(nb, pb);
  const int n_trans = nb / 2 + 1;  // weights 0..floor(nb/2) are transient
  AbsorbingChain chain;
  chain.W = rc.matrix.topLeftCorner(n_trans, n_trans);
  // Absorption is total: collapse all absorbing weights into one column.
  chain.R = Eigen::MatrixXd::Zero(n_trans, 1);
  for (int k = 0; k < n_trans; ++k)
    chain.R(k, 0) = rc.matrix.row(k).segment(n_trans, nb + 1 - n_trans).sum();
  chain.pi0 = Eigen::VectorXd::Zero(n_trans);
  chain.pi0(0) = 1.0;
  return chain;
}

double lifetime_level1(int d, double p) {
  if (p <= 0.0) return std::numeric_limits<double>::infinity();
  return hitting_time(block_chain(d, p));
}

double lifetime_d9_total(double p) {
  if (p <= 0.0) return std::numeric_limits<double>::infinity();
  const AbsorbingChain chain = block_chain(9, p);
  const long long tau = HierConstants::kU + HierConstants::kQ;  // 13
  Eigen::RowVectorXd v = chain.pi0.transpose();
  double p_before = 0.0, t_weighted = 0.0;
  for (long long t = 1; t < tau; ++t) {
    const double f_t = (v * chain.R).sum();  // absorbed exactly at step t
    p_before += f_t;
    t_weighted += static_cast<double>(t) * f_t;
    v = v * chain.W;
  }
  if (p_before <= 0.0) return std::numeric_limits<double>::infinity();
  const double cond_mean = t_weighted / p_before;
  return cond_mean + static_cast<double>(tau) * (1.0 - p_before) / p_before;
}

double kl_bernoulli(double a, double p) {
  double s = 0.0;
  if (a > 0.0) s += a * std::log(a / p);
  if (a < 1.0) s += (1.0 - a) * std::log((1.0 - a) / (1.0 - p));
  return s;
}

double binomial_tail(int n, int k, double p) {
  // P(X >= k) via stable log-space summation.
  if (k <= 0) return 1.0;
  if (k > n) return 0.0;
  double lp = std::log(p), lq = std::log1p(-p);
  double lgn = std::lgamma(n + 1.0);
  double sum = 0.0;
  for (int l = k; l <= n; ++l) {
    const double lt =
        lgn - std::lgamma(l + 1.0) - std::lgamma(n - l + 1.0) + l * lp + (n - l) * lq;
    sum += std::exp(lt);
  }
  return std::min(sum, 1.0);
}

ChernoffBounds chernoff_bounds(int window, double f_C, double p) {
  if (!(f_C > 0.0 && f_C < 1.0) || !(p > 0.0 && p < 1.0))
    throw std::domain_error("threshold and rate must be strictly inside (0,1)");
  const int n = window;
  const int k = static_cast<int>(std::lround(f_C * n));
  const double a = static_cast<double>(k) / n;
  ChernoffBounds b;
  b.upper = std::exp(-n * kl_bernoulli(f_C, p));
  b.lower = std::exp(-n * kl_bernoulli(a, p)) / std::sqrt(2.0 * k);
  return b;
}

ChernoffRatios chernoff_ratios(int k, double f_C, double p) {
  if (k < 2) throw std::domain_error("ratios are defined for levels k >= 2");
  const ChernoffBounds bk =
      chernoff_bounds(static_cast<int>(ipow(HierConstants::kU, k)), f_C, p);
  const ChernoffBounds bk1 =
      chernoff_bounds(static_cast<int>(ipow(HierConstants::kU, k - 1)), f_C, p);
  ChernoffRatios r;
  r.r_max = bk.upper / bk1.lower;
  r.r_min = bk.lower / bk1.upper;
  return r;
}

double lifetime_lower_bound_level1(double f_C, double p) {
  const ChernoffBounds b = chernoff_bounds(HierConstants::kU, f_C, p);
  const double tau = HierConstants::kU + HierConstants::kQ;
  const double pm = p_maj(b.upper);
  if (pm <= 0.0) return std::numeric_limits<double>::infinity();
  return tau / pm;
}

double flip_chain_failure_prob(int k, double p) {
  if (k < 1) throw std::invalid_argument("level must be >= 1");
  const long long len = ipow(HierConstants::kQ, k);
  return static_cast<double>((len + 1) / 2) * p;
}

double flip_chain_failure_sim(int k, double p, long long shots, std::uint64_t seed) {
  if (k < 1) throw std::invalid_argument("level must be >= 1");
  const int len = static_cast<int>(ipow(HierConstants::kQ, k));
  const int threshold = (len + 1) / 2;
  long long fails = 0;
  for (long long trial = 0; trial < shots; ++trial) {
    Rng rng(seed, static_cast<std::uint64_t>(trial));
    std::uint64_t f = 0;
    const std::uint64_t lane_mask = (len == 64) ? ~0ull : ((1ull << len) - 1);
    for (int s = 0; s < len; ++s) {
      f ^= random_bit_mask64(rng, len, p);
      if (s < len - 1) f = ((f << 1) | (f & 1ull)) & lane_mask;  // bit i <- i-1, source holds
    }
    if (std::popcount(f) >= threshold) ++fails;
  }
  return static_cast<double>(fails) / static_cast<double>(shots);
}

}  // namespace cadec
