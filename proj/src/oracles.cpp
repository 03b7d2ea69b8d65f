#include "cadec/oracles.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_map>

namespace cadec {

double ml_pl_repetition(double p, int d) {
  if (p < 0.0 || p > 1.0) throw std::domain_error("p outside [0,1]");
  if (p == 0.0) return 0.0;
  if (p == 1.0) return 1.0;
  const double lp = std::log(p), lq = std::log1p(-p);
  double sum = 0.0;
  for (int k = (d + 1) / 2; k <= d; ++k) {
    double lb = std::lgamma(d + 1.0) - std::lgamma(k + 1.0) -
                std::lgamma(d - k + 1.0);
    sum += std::exp(lb + k * lp + (d - k) * lq);
  }
  return std::min(sum, 1.0);
}

double p_maj(double p) { return 3.0 * p * p * (1.0 - p) + p * p * p; }

double concat_majority_pl(double p, int m) {
  if (p < 0.0 || p > 1.0) throw std::domain_error("p outside [0,1]");
  double x = p;
  for (int i = 0; i < m; ++i) x = p_maj(x);
  return x;
}

int torus_distance(std::pair<int, int> a, std::pair<int, int> b, int d) {
  int dr = std::abs(a.first - b.first);
  int dc = std::abs(a.second - b.second);
  return std::min(dr, d - dr) + std::min(dc, d - dc);
}

namespace {

// Subset DP over unmatched defects: take the lowest unmatched index, try all
// partners.  Dense table up to 16 defects, hashed memo beyond.
struct MatchSolver {
  int n;
  const std::vector<int>* dist;
  std::vector<int> dense;
  std::unordered_map<std::uint32_t, int> sparse;
  bool use_dense;

  int solve(std::uint32_t subset) {
    if (subset == 0) return 0;
    if (use_dense) {
      int& slot = dense[subset];
      if (slot >= 0) return slot;
      return slot = compute(subset);
    }
    auto it = sparse.find(subset);
    if (it != sparse.end()) return it->second;
    int v = compute(subset);
    sparse.emplace(subset, v);
    return v;
  }

  int compute(std::uint32_t subset) {
    int i = __builtin_ctz(subset);
    std::uint32_t rest = subset & (subset - 1);  // clear bit i
    int best = INT32_MAX;
    for (std::uint32_t s = rest; s != 0; s &= s - 1) {
      int j = __builtin_ctz(s);
      int v = (*dist)[i * n + j] + solve(rest & ~(1u << j));
      best = std::min(best, v);
    }
    return best;
  }
};

}  // namespace

Matching MatchingOracle::match(const std::vector<std::pair<int, int>>& defects) const {
  const int n = static_cast<int>(defects.size());
  if (n % 2 != 0) throw OddDefectCount();
  if (n > max_defects_) throw TooManyDefects();
  Matching out;
  if (n == 0) return out;

  std::vector<int> dist(n * n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      dist[i * n + j] = torus_distance(defects[i], defects[j], d_);

  MatchSolver solver;
  solver.n = n;
  solver.dist = &dist;
  solver.use_dense = n <= 16;
  if (solver.use_dense) solver.dense.assign(std::size_t(1) << n, -1);

  std::uint32_t subset = (n == 32) ? 0xffffffffu : ((1u << n) - 1);
  out.total_distance = solver.solve(subset);
  // Reconstruct the pairing greedily from the DP values.
  while (subset != 0) {
    int i = __builtin_ctz(subset);
    std::uint32_t rest = subset & (subset - 1);
    for (std::uint32_t s = rest; s != 0; s &= s - 1) {
      int j = __builtin_ctz(s);
      std::uint32_t nxt = rest & ~(1u << j);
      if (dist[i * n + j] + solver.solve(nxt) == solver.solve(subset)) {
        out.pairs.emplace_back(i, j);
        subset = nxt;
        break;
      }
    }
  }
  return out;
}

void MatchingOracle::apply_correction(ToricState& state,
                                      const std::vector<std::pair<int, int>>& defects,
                                      const Matching& m) const {
  const int d = d_;
  for (auto [ia, ib] : m.pairs) {
    auto [r, c] = defects[ia];
    auto [r2, c2] = defects[ib];
    // Rows first.  Moving a defect from face (r,c) to (r+1,c) crosses h-edge
    // (r+1,c); to (r-1,c) crosses h-edge (r,c).  Shorter wrap wins; on a tie
    // walk toward increasing index.
    int down = (r2 - r + d) % d;      // steps in +r direction
    int up = (r - r2 + d) % d;        // steps in -r direction
    if (down <= up) {
      for (int s = 0; s < down; ++s) {
        state.h[((r + 1) % d) * d + c] ^= 1;
        r = (r + 1) % d;
      }
    } else {
      for (int s = 0; s < up; ++s) {
        state.h[r * d + c] ^= 1;
        r = (r + d - 1) % d;
      }
    }
    // Then columns.  (r,c) -> (r,c+1) crosses v-edge (r,c+1); -> (r,c-1)
    // crosses v-edge (r,c).
    int right = (c2 - c + d) % d;
    int left = (c - c2 + d) % d;
    if (right <= left) {
      for (int s = 0; s < right; ++s) {
        state.v[r * d + (c + 1) % d] ^= 1;
        c = (c + 1) % d;
      }
    } else {
      for (int s = 0; s < left; ++s) {
        state.v[r * d + c] ^= 1;
        c = (c + d - 1) % d;
      }
    }
  }
}

namespace {

void enumerate_pairings(std::vector<int>& todo, const std::vector<int>& dist,
                        int n, int acc, int& best) {
  if (todo.empty()) {
    best = std::min(best, acc);
    return;
  }
  int i = todo[0];
  for (std::size_t k = 1; k < todo.size(); ++k) {
    int j = todo[k];
    std::vector<int> rest;
    rest.reserve(todo.size() - 2);
    for (std::size_t t = 1; t < todo.size(); ++t)
      if (t != k) rest.push_back(todo[t]);
    enumerate_pairings(rest, dist, n, acc + dist[i * n + j], best);
  }
}

}  // namespace

Matching match_brute_force(const std::vector<std::pair<int, int>>& defects, int d) {
  const int n = static_cast<int>(defects.size());
  if (n % 2 != 0) throw OddDefectCount();
  Matching out;
  if (n == 0) return out;
  std::vector<int> dist(n * n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      dist[i * n + j] = torus_distance(defects[i], defects[j], d);
  std::vector<int> todo(n);
  for (int i = 0; i < n; ++i) todo[i] = i;
  int best = INT32_MAX;
  enumerate_pairings(todo, dist, n, 0, best);
  out.total_distance = best;
  return out;
}

std::vector<std::pair<int, int>> defect_coordinates(const Syndrome2D& syn) {
  std::vector<std::pair<int, int>> out;
  for (int r = 0; r < syn.d; ++r)
    for (int c = 0; c < syn.d; ++c)
      if (syn.defects[r * syn.d + c]) out.emplace_back(r, c);
  return out;
}

std::vector<std::uint8_t> majority_correction(const Syndrome1D& syn) {
  const int d = syn.d;
  // One representative error pattern consistent with the syndrome.
  std::vector<std::uint8_t> e(d, 0);
  for (int i = 1; i < d; ++i) e[i] = e[i - 1] ^ syn.defects[i];
  int w = 0;
  for (auto b : e) w += b;
  if (w > d - w)
    for (auto& b : e) b ^= 1;  // other class has lower weight (d odd: no tie)
  return e;
}

bool logical_failure_toric(const ToricState& s, const MatchingOracle& oracle) {
  Syndrome2D syn = syndrome_toric(s);
  ToricState completed = s;
  if (syn.count() != 0) {
    auto defects = defect_coordinates(syn);
    Matching m = oracle.match(defects);
    oracle.apply_correction(completed, defects, m);
  }
  return homology_parity(completed, Direction::kHorizontal) != 0 ||
         homology_parity(completed, Direction::kVertical) != 0;
}

}  // namespace cadec
