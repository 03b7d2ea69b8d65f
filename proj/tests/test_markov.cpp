#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <gmpxx.h>

#include <cmath>
#include <limits>

#include "cadec/markov.hpp"
#include "cadec/oracles.hpp"

using namespace cadec;

TEST_CASE("absorbing-chain validation rejects malformed inputs") {
  AbsorbingChain good;
  good.W = Eigen::MatrixXd::Constant(1, 1, 0.9);
  good.R = Eigen::MatrixXd::Constant(1, 1, 0.1);
  good.pi0 = Eigen::VectorXd::Constant(1, 1.0);
  CHECK_NOTHROW(good.validate());

  AbsorbingChain bad = good;
  bad.R(0, 0) = 0.2;  // row sum 1.1
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);

  AbsorbingChain bad2 = good;
  bad2.pi0(0) = 0.7;
  CHECK_THROWS_AS(bad2.validate(), std::invalid_argument);
}

TEST_CASE("hitting time of a geometric chain is 1/p") {
  AbsorbingChain chain;
  for (double p : {0.5, 0.1, 1e-4}) {
    chain.W = Eigen::MatrixXd::Constant(1, 1, 1 - p);
    chain.R = Eigen::MatrixXd::Constant(1, 1, p);
    chain.pi0 = Eigen::VectorXd::Constant(1, 1.0);
    CHECK(hitting_time(chain) == doctest::Approx(1.0 / p).epsilon(1e-12));
  }
}

TEST_CASE("hitting time solves a two-state birth chain in closed form") {
  // States {0,1}; 0 -> 1 with a, 1 -> absorbed with b, no other moves.
  const double a = 0.3, b = 0.2;
  AbsorbingChain chain;
  chain.W.resize(2, 2);
  chain.W << 1 - a, a, 0, 1 - b;
  chain.R.resize(2, 1);
  chain.R << 0, b;
  chain.pi0.resize(2);
  chain.pi0 << 1, 0;
  chain.validate();
  CHECK(hitting_time(chain) == doctest::Approx(1 / a + 1 / b).epsilon(1e-12));
}

TEST_CASE("a chain with no escape is singular") {
  AbsorbingChain chain;
  chain.W = Eigen::MatrixXd::Constant(1, 1, 1.0);
  chain.R = Eigen::MatrixXd::Constant(1, 1, 0.0);
  chain.pi0 = Eigen::VectorXd::Constant(1, 1.0);
  CHECK_THROWS_AS(hitting_time(chain), SingularSystem);
}

TEST_CASE("weight-reduced flip chain has exact small-n entries") {
  const ReducedChain rc = reduced_matrix(2, 0.3);
  CHECK(rc.matrix(0, 0) == doctest::Approx(0.49).epsilon(1e-14));
  CHECK(rc.matrix(0, 1) == doctest::Approx(0.42).epsilon(1e-14));
  CHECK(rc.matrix(0, 2) == doctest::Approx(0.09).epsilon(1e-14));
  // Symmetry of independent flips: from full weight the row reverses.
  CHECK(rc.matrix(2, 2) == doctest::Approx(0.49).epsilon(1e-14));
  CHECK(rc.matrix(2, 0) == doctest::Approx(0.09).epsilon(1e-14));
}

TEST_CASE("weight reduction agrees with aggregating the full product chain") {
  for (int n : {1, 2, 3, 5, 8}) {
    for (double p : {0.05, 0.3, 0.7}) {
      const ReducedChain rc = reduced_matrix(n, p);
      const Eigen::MatrixXd full = weight_aggregated_full_chain(n, p);
      CHECK((rc.matrix - full).cwiseAbs().maxCoeff() < 1e-12);
      for (int i = 0; i <= n; ++i)
        CHECK(rc.matrix.row(i).sum() == doctest::Approx(1.0).epsilon(1e-12));
    }
  }
}

TEST_CASE("block chain for distance 3 collapses to the geometric model") {
  for (double p : {0.05, 0.1, 0.3}) {
    const AbsorbingChain chain = block_chain(3, p);
    chain.validate();
    CHECK(hitting_time(chain) == doctest::Approx(1.0 / p_maj(p)).epsilon(1e-12));
    CHECK(lifetime_level1(3, p) == doctest::Approx(1.0 / p_maj(p)).epsilon(1e-12));
  }
}

TEST_CASE("block chain for distance 9 tracks three blocks") {
  const AbsorbingChain chain = block_chain(9, 0.1);
  chain.validate();
  CHECK(chain.W.rows() == 2);  // transient weights 0 and 1
  CHECK(lifetime_level1(9, 0.1) == doctest::Approx(35.8760854044).epsilon(1e-9));
  CHECK(lifetime_level1(9, 0.3) == doctest::Approx(4.74657852669).epsilon(1e-9));
  // More noise, shorter life; larger distance, longer life.
  CHECK(lifetime_level1(9, 0.3) < lifetime_level1(9, 0.1));
  CHECK(lifetime_level1(9, 0.1) > lifetime_level1(3, 0.1));
}

TEST_CASE("two-level lifetime model regressions and limits") {
  CHECK(lifetime_d9_total(0.05) == doctest::Approx(669.58241406).epsilon(1e-8));
  CHECK(lifetime_d9_total(0.10) == doctest::Approx(64.7335992802).epsilon(1e-8));
  CHECK(lifetime_d9_total(0.20) == doctest::Approx(10.7706444466).epsilon(1e-8));
  CHECK(lifetime_d9_total(0.05) > lifetime_d9_total(0.1));
  CHECK(std::isinf(lifetime_d9_total(0.0)));
}

TEST_CASE("binomial tail edge cases and exact-rational cross-check") {
  CHECK(binomial_tail(10, 0, 0.3) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(binomial_tail(10, 11, 0.3) == 0.0);
  CHECK(binomial_tail(10, 10, 0.5) == doctest::Approx(std::pow(0.5, 10)).epsilon(1e-12));
  // Monotone decreasing in the threshold.
  CHECK(binomial_tail(20, 5, 0.2) > binomial_tail(20, 6, 0.2));

  // Exact rational evaluation at p = 1/4, n = 30, k = 18.
  const int n = 30, k = 18;
  const mpq_class p(1, 4), q = 1 - p;
  mpq_class tail = 0;
  for (int j = k; j <= n; ++j) {
    mpz_class binom;
    mpz_bin_uiui(binom.get_mpz_t(), n, j);
    mpq_class term(binom);
    for (int i = 0; i < j; ++i) term *= p;
    for (int i = 0; i < n - j; ++i) term *= q;
    tail += term;
  }
  const double exact = tail.get_d();
  CHECK(binomial_tail(n, k, 0.25) == doctest::Approx(exact).epsilon(1e-10));
}

TEST_CASE("Bernoulli KL divergence closed forms") {
  CHECK(kl_bernoulli(0.3, 0.3) == doctest::Approx(0.0).epsilon(1e-15));
  // D(0.9 || 0.1) = 0.8 * ln 9.
  CHECK(kl_bernoulli(0.9, 0.1) == doctest::Approx(0.8 * std::log(9.0)).epsilon(1e-12));
  CHECK(kl_bernoulli(0.9, 0.1) > kl_bernoulli(0.9, 0.3));
}

TEST_CASE("Chernoff bounds bracket the exact tail") {
  for (int window : {10, 100}) {
    for (double p : {0.05, 0.1, 0.3}) {
      const ChernoffBounds cb = chernoff_bounds(window, 0.9, p);
      const int k = static_cast<int>(std::lround(0.9 * window));
      const double exact = binomial_tail(window, k, p);
      CHECK(cb.lower <= exact);
      CHECK(exact <= cb.upper);
      CHECK(cb.lower > 0.0);
    }
  }
  CHECK_THROWS_AS(chernoff_bounds(10, 1.0, 0.1), std::domain_error);
  CHECK_THROWS_AS(chernoff_bounds(10, 0.9, 0.0), std::domain_error);
}

TEST_CASE("level-ratio bounds bracket the true tail ratio") {
  const ChernoffRatios cr = chernoff_ratios(2, 0.9, 0.1);
  const double truth = binomial_tail(100, 90, 0.1) / binomial_tail(10, 9, 0.1);
  CHECK(cr.r_min <= truth);
  CHECK(truth <= cr.r_max);
  CHECK(cr.r_min == doctest::Approx(1.46859845782e-70).epsilon(1e-8));
  CHECK(cr.r_max == doctest::Approx(8.35940897084e-69).epsilon(1e-8));
}

TEST_CASE("level-1 lifetime lower bound regression") {
  CHECK(lifetime_lower_bound_level1(0.9, 0.1) ==
        doctest::Approx(8.02975427605e15).epsilon(1e-8));
  // Tighter thresholds survive longer.
  CHECK(lifetime_lower_bound_level1(0.9, 0.05) > lifetime_lower_bound_level1(0.9, 0.1));
}

TEST_CASE("flip-signal chain failure model and micro-simulation agree") {
  CHECK(flip_chain_failure_prob(1, 0.01) == doctest::Approx(0.02).epsilon(1e-12));
  CHECK(flip_chain_failure_prob(2, 0.003) == doctest::Approx(0.015).epsilon(1e-12));
  CHECK(flip_chain_failure_prob(3, 0.001) == doctest::Approx(0.014).epsilon(1e-12));
  // Simulation at small p approaches the leading-order model.
  const double sim1 = flip_chain_failure_sim(1, 0.01, 200000, 99);
  CHECK(sim1 == doctest::Approx(0.02).epsilon(0.05));
  const double sim2 = flip_chain_failure_sim(2, 0.003, 200000, 99);
  CHECK(sim2 == doctest::Approx(0.015).epsilon(0.05));
  // Reproducible for a fixed seed.
  CHECK(flip_chain_failure_sim(1, 0.01, 200000, 99) == sim1);
}
