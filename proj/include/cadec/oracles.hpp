#pragma once
// Exact baselines: closed-form logical-error curves for the repetition code,
// majority-vote reference decoding, and an exact minimum-weight perfect
// matching oracle on the torus (subset DP, certified against brute force).

#include <cstdint>
#include <stdexcept>
#include <utility>
#include <vector>

#include "cadec/lattice.hpp"

namespace cadec {

struct TooManyDefects : std::runtime_error {
  TooManyDefects() : std::runtime_error("defect count exceeds exact-matcher cap") {}
};
struct OddDefectCount : std::runtime_error {
  OddDefectCount() : std::runtime_error("defect count must be even") {}
};

// Probability that >= ceil(d/2) of d i.i.d. bits flip: the maximum-likelihood
// logical error rate of the distance-d repetition code under bit-flip rate p.
// Stable via log-binomials.
double ml_pl_repetition(double p, int d);

// m-fold composition of the block majority map p_maj(p) = 3p^2(1-p) + p^3.
double p_maj(double p);
double concat_majority_pl(double p, int m);

// L1 distance on the d x d torus.
int torus_distance(std::pair<int, int> a, std::pair<int, int> b, int d);

struct Matching {
  std::vector<std::pair<int, int>> pairs;  // index pairs into the defect list
  int total_distance = 0;
};

// Exact minimum-total-distance perfect matching of defect coordinates.
class MatchingOracle {
 public:
  explicit MatchingOracle(int d, int max_defects = 26)
      : d_(d), max_defects_(max_defects) {}

  Matching match(const std::vector<std::pair<int, int>>& defects) const;

  // XOR one shortest-path correction per matched pair into the state.
  // Path convention: rows first, shorter wrap direction, ties toward
  // increasing index.  Applying the correction empties the syndrome.
  void apply_correction(ToricState& state,
                        const std::vector<std::pair<int, int>>& defects,
                        const Matching& m) const;

  int d() const { return d_; }
  int max_defects() const { return max_defects_; }

 private:
  int d_;
  int max_defects_;
};

// Brute-force minimum over all pairings; certification oracle for tests.
Matching match_brute_force(const std::vector<std::pair<int, int>>& defects, int d);

std::vector<std::pair<int, int>> defect_coordinates(const Syndrome2D& syn);

// Majority-vote reference for the repetition code: the lower-weight of the two
// error classes consistent with the syndrome (d odd, never a tie).
std::vector<std::uint8_t> majority_correction(const Syndrome1D& syn);

// Residual-state referee for the toric code: complete the syndrome with the
// matching oracle, then test homology along both cuts.
bool logical_failure_toric(const ToricState& s, const MatchingOracle& oracle);

}  // namespace cadec
