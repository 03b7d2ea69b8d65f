#pragma once
// Closed-form lifetime models: absorbing Markov chains over error-weight
// classes, the weight-class reduction of the i.i.d. bit-flip chain, large-
// deviation (Chernoff) bounds on counter-threshold tail probabilities, and
// the flip-signal chain failure model.

#include <Eigen/Dense>
#include <cstdint>
#include <stdexcept>

#include "cadec/rng.hpp"

namespace cadec {

struct SingularSystem : std::runtime_error {
  SingularSystem() : std::runtime_error("I - W is numerically singular") {}
};

// Absorbing chain split into transient-to-transient (W) and transient-to-
// absorbing (R) blocks, with an initial distribution over transient states.
struct AbsorbingChain {
  Eigen::MatrixXd W;
  Eigen::MatrixXd R;
  Eigen::VectorXd pi0;

  // Checks shapes, row sums of [W | R] == 1 and pi0 sums to 1, within tol.
  void validate(double tol = 1e-12) const;
};

// Expected steps to absorption: pi0^T (I - W)^{-1} 1, via a direct solve.
double hitting_time(const AbsorbingChain& chain);

// Transition matrix of the Hamming weight of n bits, each flipping
// independently with probability p per step ((n+1) x (n+1), exact
// aggregation of the 2^n product chain).
struct ReducedChain {
  int n = 0;
  double p = 0.0;
  Eigen::MatrixXd matrix;
};
ReducedChain reduced_matrix(int n, double p);

// Brute-force oracle: aggregate the full 2^n product chain by weight.
Eigen::MatrixXd weight_aggregated_full_chain(int n, double p);

// Block-accumulation chain for distance d = 3^m: n_b = d/3 blocks, each
// flipping per step with probability p_maj(p); weights > n_b/2 are absorbing
// (majority of blocks in error), started from weight 0.
AbsorbingChain block_chain(int d, double p);

// Expected steps until a majority of blocks are in error (first-level
// lifetime model).  d = 3 reduces to the geometric mean 1/p_maj(p).
double lifetime_level1(int d, double p);

// Two-level lifetime model for d = 9: the block chain runs for at most
// tau = U + Q steps between hierarchy resets; conditional on absorption
// before tau the lifetime is the conditional mean first-passage time, and
// each survived window of tau steps restarts the chain:
//   <T> = E[T | T < tau] + tau * (1 - P) / P,  P = P(T < tau).
// Returns +infinity at P = 0 (p = 0).
double lifetime_d9_total(double p);

// Large-deviation bounds on the binomial tail P(X >= round(f_C * n)) for
// X ~ Binomial(n, p), n = window length:
//   upper = exp(-n * D(f_C || p))
//   lower = exp(-n * D(a || p)) / sqrt(2 * round(f_C * n)),  a = round(f_C*n)/n
// with D the Bernoulli Kullback-Leibler divergence.  Requires p < f_C for
// the upper bound to apply; throws std::domain_error if f_C or p is 0 or 1.
struct ChernoffBounds {
  double upper = 0.0;
  double lower = 0.0;
};
ChernoffBounds chernoff_bounds(int window, double f_C, double p);

double binomial_tail(int n, int k, double p);  // P(X >= k), double precision
double kl_bernoulli(double a, double p);

// Level-to-level growth ratios of the threshold tail probability P_k
// (window U^k): r_max = upper_k / lower_{k-1}, r_min = lower_k / upper_{k-1};
// the true ratio P_k / P_{k-1} lies in [r_min, r_max].  Requires k >= 2.
struct ChernoffRatios {
  double r_max = 0.0;
  double r_min = 0.0;
};
ChernoffRatios chernoff_ratios(int k, double f_C, double p);

// Lifetime lower bound from the level-1 threshold tail: tau / p_maj(P1_up),
// tau = U + Q, P1_up the upper bound on the level-1 tail.
double lifetime_lower_bound_level1(double f_C, double p);

// Flip-signal chain fragility at level k (chain length Q^k).
// Model: a single source flip early in the execution window replicates into
// at least ceil(Q^k/2) data errors, so the failure probability is
// ceil(Q^k/2) * p to leading order.
double flip_chain_failure_prob(int k, double p);

// Companion micro-simulation: Q^k lane bits start clear; each of Q^k rounds
// flips every bit with probability p and then (all but the last round)
// replicates bit i-1 into bit i synchronously, the source bit holding.
// Counts trials whose final active-bit count reaches ceil(Q^k/2).
double flip_chain_failure_sim(int k, double p, long long shots, std::uint64_t seed);

}  // namespace cadec
