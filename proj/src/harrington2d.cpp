#include "cadec/harrington2d.hpp"

#include <bit>
#include <cmath>
#include <numeric>
#include <unordered_set>

namespace cadec {

namespace {
constexpr int kOpp[8] = {1, 0, 3, 2, 7, 6, 5, 4};  // N<->S E<->W NE<->SW NW<->SE

// Default movement action by (row, col) address within a 3x3 block; codes
// 0=none 1=W 2=N 3=E 4=S.  Address 1,1 is the centre (holds).
constexpr int kDefaultAction[3][3] = {
    // ac=0  ac=1  ac=2
    {3, 4, 4},  // ar=0:  NW->E   N->S   NE->S
    {3, 0, 1},  // ar=1:   W->E   C      E->W
    {2, 2, 2},  // ar=2:  SW->N   S->N   SE->N
};
}  // namespace

int Harrington2D::rule_scalar(bool dC, bool dN, bool dE, bool dS, bool dW,
                              bool dNE, bool dNW, bool dSE, bool dSW, int dft) {
  if (!dC) return kActNone;
  if (dS) return kActS;
  if (dW) return kActW;
  if (dN || dE) return kActNone;  // the S/W member of the pair acts
  if (dNE || dNW) return kActN;
  if (dSE || dSW) return kActNone;  // the diagonal partner acts
  return dft;
}

int har2d_rule_for_test(bool dC, bool dN, bool dE, bool dS, bool dW, bool dNE,
                        bool dNW, bool dSE, bool dSW, int dft) {
  return Harrington2D::rule_scalar(dC, dN, dE, dS, dW, dNE, dNW, dSE, dSW, dft);
}

Harrington2D::Harrington2D(int d) : d_(d) {
  m_ = level_count_for_distance(d);
  if (d > 27) throw InvalidDistance("supported distances are 3, 9, 27");
  mask_ = (1u << d) - 1;
  h_.assign(d, 0);
  v_.assign(d, 0);
  def_w_.assign(d, 0);
  def_n_.assign(d, 0);
  def_e_.assign(d, 0);
  def_s_.assign(d, 0);
  for (int r = 0; r < d; ++r)
    for (int c = 0; c < d; ++c) {
      switch (kDefaultAction[r % 3][c % 3]) {
        case kActW: def_w_[r] |= 1u << c; break;
        case kActN: def_n_[r] |= 1u << c; break;
        case kActE: def_e_[r] |= 1u << c; break;
        case kActS: def_s_[r] |= 1u << c; break;
        default: break;
      }
    }
  levels_.resize(m_);
  cycle_ = 1;
  for (int k = 1; k <= m_; ++k) {
    Level& L = levels_[k - 1];
    L.k = k;
    L.Uk = ipow(HierConstants::kU, k);
    L.Ck = L.Uk + ipow(HierConstants::kQ, k);
    L.thC = static_cast<int>(std::lround(HierConstants::kFc * L.Uk));
    L.thN = static_cast<int>(std::lround(HierConstants::kFn * L.Uk));
    L.rep_rows.assign(d, 0);
    for (int dir = 0; dir < 8; ++dir) L.cs[dir].assign(d, 0);
    for (int dir = 0; dir < 4; ++dir) L.fs[dir].assign(d, 0);
    const int sp = static_cast<int>(ipow(3, k));
    const int centre = (sp - 1) / 2;
    for (int r = 0; r < d; ++r) {
      if (r % sp != centre) continue;
      for (int c = 0; c < d; ++c) {
        if (c % sp != centre) continue;
        L.rep_rows[r] |= 1u << c;
        Rep rep;
        rep.r = r;
        rep.c = c;
        const int ar = (k == m_) ? 1 : (r / sp) % 3;
        const int ac = (k == m_) ? 1 : (c / sp) % 3;
        rep.dft = static_cast<std::uint8_t>(kDefaultAction[ar][ac]);
        L.reps.push_back(rep);
      }
    }
    cycle_ = std::lcm(cycle_, L.Ck);
  }
}

std::vector<std::uint32_t> Harrington2D::syndrome_rows() const {
  std::vector<std::uint32_t> syn(d_);
  for (int r = 0; r < d_; ++r)
    syn[r] = h_[r] ^ h_[(r + 1) % d_] ^ v_[r] ^ west1(v_[r]);
  return syn;
}

ToricState Harrington2D::state() const {
  ToricState s(d_);
  for (int r = 0; r < d_; ++r)
    for (int c = 0; c < d_; ++c) {
      s.h[r * d_ + c] = (h_[r] >> c) & 1;
      s.v[r * d_ + c] = (v_[r] >> c) & 1;
    }
  return s;
}

void Harrington2D::set_state(const ToricState& s) {
  if (s.d != d_) throw std::invalid_argument("size mismatch");
  for (int r = 0; r < d_; ++r) {
    std::uint32_t hr = 0, vr = 0;
    for (int c = 0; c < d_; ++c) {
      if (s.h[r * d_ + c]) hr |= 1u << c;
      if (s.v[r * d_ + c]) vr |= 1u << c;
    }
    h_[r] = hr;
    v_[r] = vr;
  }
}

int Harrington2D::weight() const {
  int w = 0;
  for (int r = 0; r < d_; ++r) w += std::popcount(h_[r]) + std::popcount(v_[r]);
  return w;
}

bool Harrington2D::quiescent() const {
  for (std::uint32_t s : syndrome_rows())
    if (s) return false;
  for (const Level& L : levels_) {
    for (int dir = 0; dir < 8; ++dir)
      for (std::uint32_t row : L.cs[dir])
        if (row) return false;
    for (int dir = 0; dir < 4; ++dir)
      for (std::uint32_t row : L.fs[dir])
        if (row) return false;
    for (const Rep& rep : L.reps) {
      if (rep.dc) return false;
      for (int dir = 0; dir < 8; ++dir)
        if (rep.sc[dir]) return false;
    }
  }
  return true;
}

std::uint64_t Harrington2D::state_hash() const {
  auto mix = [](std::uint64_t h, std::uint64_t v) {
    h ^= v + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2);
    h *= 0xff51afd7ed558ccdull;
    return h ^ (h >> 33);
  };
  std::uint64_t h = 0x243f6a8885a308d3ull;
  for (int r = 0; r < d_; ++r)
    h = mix(h, (static_cast<std::uint64_t>(h_[r]) << 32) | v_[r]);
  for (const Level& L : levels_) {
    for (int dir = 0; dir < 8; ++dir)
      for (std::uint32_t row : L.cs[dir]) h = mix(h, row);
    for (int dir = 0; dir < 4; ++dir)
      for (std::uint32_t row : L.fs[dir]) h = mix(h, row);
    for (const Rep& rep : L.reps) {
      std::uint64_t acc = rep.dc;
      for (int dir = 0; dir < 8; ++dir) acc = (acc << 4) ^ rep.sc[dir];
      h = mix(h, acc);
    }
  }
  return h;
}

void Harrington2D::corrupt_count_signals(int level, int dir,
                                         const std::vector<std::uint32_t>& mask) {
  Level& L = levels_.at(level - 1);
  for (int r = 0; r < d_; ++r) L.cs[dir][r] ^= mask[r] & mask_;
}

void Harrington2D::corrupt_flip_signals(int level, int dir,
                                        const std::vector<std::uint32_t>& mask) {
  Level& L = levels_.at(level - 1);
  for (int r = 0; r < d_; ++r) L.fs[dir][r] ^= mask[r] & mask_;
}

int Harrington2D::n_active_signals() const {
  int n = 0;
  for (const Level& L : levels_) {
    for (int dir = 0; dir < 8; ++dir)
      for (std::uint32_t row : L.cs[dir]) n += std::popcount(row);
    for (int dir = 0; dir < 4; ++dir)
      for (std::uint32_t row : L.fs[dir]) n += std::popcount(row);
  }
  return n;
}

void Harrington2D::step(const std::vector<std::uint32_t>& measured) {
  const int d = d_;
  ++t_;

  // Neighbour defect maps.
  std::vector<std::uint32_t> syn(d);
  for (int r = 0; r < d; ++r) syn[r] = measured[r] & mask_;

  // Level-0 actions as four disjoint row-mask sets.
  std::vector<std::uint32_t> act_w(d), act_n(d), act_e(d), act_s(d);
  for (int r = 0; r < d; ++r) {
    const std::uint32_t dC = syn[r];
    const std::uint32_t dN = syn[(r + d - 1) % d];
    const std::uint32_t dS = syn[(r + 1) % d];
    const std::uint32_t dW = east1(dC);
    const std::uint32_t dE = west1(dC);
    const std::uint32_t dNE = west1(dN);
    const std::uint32_t dNW = east1(dN);
    const std::uint32_t dSE = west1(dS);
    const std::uint32_t dSW = east1(dS);
    const std::uint32_t card = dN | dE | dS | dW;
    const std::uint32_t moore = card | dNE | dNW | dSE | dSW;
    const std::uint32_t s0 = dC & dS;
    const std::uint32_t w0 = dC & dW & ~dS;
    const std::uint32_t n0 = dC & ~card & (dNE | dNW);
    const std::uint32_t free0 = dC & ~moore;
    act_s[r] = s0 | (free0 & def_s_[r]);
    act_w[r] = w0 | (free0 & def_w_[r]);
    act_n[r] = n0 | (free0 & def_n_[r]);
    act_e[r] = free0 & def_e_[r];
  }

  for (Level& L : levels_) {
    const long long off = t_ % L.Ck;
    const bool work = off >= 1 && off <= L.Uk;

    // Count-signal travel (lane index = direction of motion).
    std::vector<std::uint32_t> moved[8];
    for (int dir = 0; dir < 8; ++dir) moved[dir].resize(d);
    for (int r = 0; r < d; ++r) {
      const int ru = (r + 1) % d;          // source row for north motion
      const int rd = (r + d - 1) % d;      // source row for south motion
      moved[kN][r] = L.cs[kN][ru];
      moved[kS][r] = L.cs[kS][rd];
      moved[kE][r] = east1(L.cs[kE][r]);
      moved[kW][r] = west1(L.cs[kW][r]);
      moved[kNE][r] = east1(L.cs[kNE][ru]);
      moved[kNW][r] = west1(L.cs[kNW][ru]);
      moved[kSE][r] = east1(L.cs[kSE][rd]);
      moved[kSW][r] = west1(L.cs[kSW][rd]);
    }
    // Absorption at representatives (emitter side recorded via opposite dir).
    for (Rep& rep : L.reps) {
      const std::uint32_t bit = 1u << rep.c;
      if (work) {
        for (int dir = 0; dir < 8; ++dir)
          if (moved[dir][rep.r] & bit) ++rep.sc[kOpp[dir]];
      }
      if (work && (syn[rep.r] & bit)) ++rep.dc;
    }
    for (int r = 0; r < d; ++r) {
      const std::uint32_t keep = ~L.rep_rows[r];
      const std::uint32_t em = L.rep_rows[r] & syn[r];
      for (int dir = 0; dir < 8; ++dir)
        L.cs[dir][r] = (moved[dir][r] & keep) | em;
    }

    // Flip-signal replication (lane index = flip/travel direction).
    std::vector<std::uint32_t> nf[4];
    for (int dir = 0; dir < 4; ++dir) nf[dir].resize(d);
    for (int r = 0; r < d; ++r) {
      const std::uint32_t reps = L.rep_rows[r];
      nf[kActW - 1][r] = (reps & L.fs[kActW - 1][r]) | (~reps & west1(L.fs[kActW - 1][r]));
      nf[kActE - 1][r] = (reps & L.fs[kActE - 1][r]) | (~reps & east1(L.fs[kActE - 1][r]));
      nf[kActN - 1][r] =
          (reps & L.fs[kActN - 1][r]) | (~reps & L.fs[kActN - 1][(r + 1) % d]);
      nf[kActS - 1][r] =
          (reps & L.fs[kActS - 1][r]) | (~reps & L.fs[kActS - 1][(r + d - 1) % d]);
    }
    for (int dir = 0; dir < 4; ++dir) L.fs[dir] = nf[dir];

    if (off == L.Uk) {  // threshold counters into a virtual neighbourhood
      for (Rep& rep : L.reps) {
        const bool vC = rep.dc >= L.thC;
        const int act = rule_scalar(
            vC, rep.sc[kN] >= L.thN, rep.sc[kE] >= L.thN, rep.sc[kS] >= L.thN,
            rep.sc[kW] >= L.thN, rep.sc[kNE] >= L.thN, rep.sc[kNW] >= L.thN,
            rep.sc[kSE] >= L.thN, rep.sc[kSW] >= L.thN, rep.dft);
        if (act != kActNone) L.fs[act - 1][rep.r] |= 1u << rep.c;
        rep.dc = 0;
        for (int dir = 0; dir < 8; ++dir) rep.sc[dir] = 0;
      }
    }

    if (off == 0) {  // execute chains; later lanes and higher levels override
      for (int dir = 0; dir < 4; ++dir) {  // W, N, E, S
        for (int r = 0; r < d; ++r) {
          const std::uint32_t m = L.fs[dir][r];
          if (!m) continue;
          act_w[r] &= ~m;
          act_n[r] &= ~m;
          act_e[r] &= ~m;
          act_s[r] &= ~m;
        }
        std::vector<std::uint32_t>& target =
            (dir == kActW - 1) ? act_w
            : (dir == kActN - 1) ? act_n
            : (dir == kActE - 1) ? act_e
                                 : act_s;
        for (int r = 0; r < d; ++r) {
          target[r] |= L.fs[dir][r];
          L.fs[dir][r] = 0;
        }
      }
    }
  }

  // Apply qubit flips.
  for (int r = 0; r < d; ++r) {
    v_[r] ^= act_w[r];
    h_[r] ^= act_n[r];
    v_[r] ^= east1(act_e[r]);
    h_[(r + 1) % d] ^= act_s[r];
  }
}

HierCodeCapacityResult har2d_run_code_capacity(const ToricState& initial, long long cap) {
  Harrington2D dec(initial.d);
  dec.set_state(initial);
  if (cap < 0) cap = 50LL * initial.d * ipow(HierConstants::kU, dec.levels());
  const long long stride = dec.cycle_length();
  std::unordered_set<std::uint64_t> seen;
  HierCodeCapacityResult res{2, 0};
  while (dec.t() < cap) {
    dec.step(dec.syndrome_rows());
    if (dec.quiescent()) {
      const ToricState s = dec.state();
      const bool fail = homology_parity(s, Direction::kHorizontal) ||
                        homology_parity(s, Direction::kVertical);
      res.logical_class = fail ? 1 : 0;
      res.steps = dec.t();
      return res;
    }
    if (dec.t() % stride == 0 && !seen.insert(dec.state_hash()).second) {
      res.steps = dec.t();
      return res;
    }
  }
  res.steps = cap;
  return res;
}

}  // namespace cadec
