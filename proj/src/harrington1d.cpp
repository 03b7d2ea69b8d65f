#include "cadec/harrington1d.hpp"

#include <bit>
#include <cmath>
#include <numeric>
#include <unordered_set>

namespace cadec {

long long ipow(long long base, int exp) {
  long long r = 1;
  for (int i = 0; i < exp; ++i) r *= base;
  return r;
}

int level_count_for_distance(int d) {
  int m = 0;
  long long v = 1;
  while (v < d) {
    v *= 3;
    ++m;
  }
  if (v != d || m < 1)
    throw InvalidDistance("distance must be a power of 3, got " + std::to_string(d));
  return m;
}

int correct_1d(bool left_defect, bool own_defect, bool right_defect, int addr) {
  if (!own_defect || addr == 1) return 0;
  if (addr == 0) return left_defect ? -1 : +1;  // L: border pair else move right
  return right_defect ? 0 : -1;                 // R: yield to pair else move left
}

Harrington1D::Harrington1D(int d) : d_(d) {
  m_ = level_count_for_distance(d);
  if (d > 27) throw InvalidDistance("supported distances are 3, 9, 27");
  mask_ = (d == 32) ? 0xffffffffu : ((1u << d) - 1);
  mask_a0_ = mask_a2_ = 0;
  for (int i = 0; i < d; ++i) {
    if (i % 3 == 0) mask_a0_ |= 1u << i;
    if (i % 3 == 2) mask_a2_ |= 1u << i;
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
    L.reps = 0;
    L.csl = L.csr = L.fsl = L.fsr = 0;
    const int sp = static_cast<int>(ipow(3, k));
    const int centre = (sp - 1) / 2;
    for (int i = 0; i < d; ++i) {
      if (i % sp != centre) continue;
      L.reps |= 1u << i;
      L.rep_pos.push_back(i);
      L.addr.push_back(k == m_ ? 1 : static_cast<std::uint8_t>((i % (sp * 3)) / sp));
    }
    L.dc.assign(L.rep_pos.size(), 0);
    L.scl.assign(L.rep_pos.size(), 0);
    L.scr.assign(L.rep_pos.size(), 0);
    cycle_ = std::lcm(cycle_, L.Ck);
  }
}

std::uint32_t Harrington1D::syndrome() const { return (err_ ^ rotl1(err_)) & mask_; }

int Harrington1D::weight() const { return std::popcount(err_); }

void Harrington1D::corrupt_count_signals(int level, std::uint32_t left, std::uint32_t right) {
  Level& L = levels_.at(level - 1);
  L.csl ^= left & mask_;
  L.csr ^= right & mask_;
}

void Harrington1D::corrupt_flip_signals(int level, std::uint32_t left, std::uint32_t right) {
  Level& L = levels_.at(level - 1);
  L.fsl ^= left & mask_;
  L.fsr ^= right & mask_;
}

int Harrington1D::n_active_signals() const {
  int n = 0;
  for (const Level& L : levels_)
    n += std::popcount(L.csl) + std::popcount(L.csr) + std::popcount(L.fsl) +
         std::popcount(L.fsr);
  return n;
}

bool Harrington1D::quiescent() const {
  if (syndrome() != 0) return false;
  for (const Level& L : levels_) {
    if (L.csl | L.csr | L.fsl | L.fsr) return false;
    for (std::size_t j = 0; j < L.rep_pos.size(); ++j)
      if (L.dc[j] || L.scl[j] || L.scr[j]) return false;
  }
  return true;
}

std::uint64_t Harrington1D::state_hash() const {
  auto mix = [](std::uint64_t h, std::uint64_t v) {
    h ^= v + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2);
    h *= 0xff51afd7ed558ccdull;
    return h ^ (h >> 33);
  };
  std::uint64_t h = err_;
  for (const Level& L : levels_) {
    h = mix(h, (static_cast<std::uint64_t>(L.csl) << 32) | L.csr);
    h = mix(h, (static_cast<std::uint64_t>(L.fsl) << 32) | L.fsr);
    for (std::size_t j = 0; j < L.rep_pos.size(); ++j)
      h = mix(h, (static_cast<std::uint64_t>(L.dc[j]) << 32) |
                     (static_cast<std::uint64_t>(L.scl[j]) << 16) | L.scr[j]);
  }
  return h;
}

void Harrington1D::step(std::uint32_t syn) {
  syn &= mask_;
  ++t_;

  // Level-0 movement: actL = cells flipping their left qubit, actR right.
  const std::uint32_t l = rotl1(syn);   // left-neighbour defect
  const std::uint32_t r = rotr1(syn);   // right-neighbour defect
  std::uint32_t act_l = syn & ((mask_a0_ & l) | (mask_a2_ & ~r));
  std::uint32_t act_r = syn & mask_a0_ & ~l & ~act_l;

  for (Level& L : levels_) {
    const long long off = t_ % L.Ck;
    const bool work = off >= 1 && off <= L.Uk;

    // Count-signal travel, absorption at representatives, re-emission.
    std::uint32_t csl = rotr1(L.csl);
    std::uint32_t csr = rotl1(L.csr);
    if (work) {
      for (std::size_t j = 0; j < L.rep_pos.size(); ++j) {
        const std::uint32_t bit = 1u << L.rep_pos[j];
        if (csl & bit) ++L.scr[j];  // arrived travelling left => from the right
        if (csr & bit) ++L.scl[j];
      }
    }
    csl &= ~L.reps;
    csr &= ~L.reps;
    const std::uint32_t em = L.reps & syn;
    L.csl = csl | em;
    L.csr = csr | em;

    // Flip-signal replication: intermediates copy upstream, reps hold.
    L.fsr = (L.reps & L.fsr) | (~L.reps & rotl1(L.fsr) & mask_);
    L.fsl = (L.reps & L.fsl) | (~L.reps & rotr1(L.fsl) & mask_);

    if (work) {
      std::uint32_t hit = L.reps & syn;
      for (std::size_t j = 0; j < L.rep_pos.size(); ++j)
        if (hit & (1u << L.rep_pos[j])) ++L.dc[j];
    }

    if (off == L.Uk) {  // evaluate thresholds, arm flip signals, reset counters
      for (std::size_t j = 0; j < L.rep_pos.size(); ++j) {
        const bool cb = L.dc[j] >= L.thC;
        const bool lb = L.scl[j] >= L.thN;
        const bool rb = L.scr[j] >= L.thN;
        const int dir = cb ? correct_1d(lb, true, rb, L.addr[j]) : 0;
        if (dir == -1) L.fsl |= 1u << L.rep_pos[j];
        if (dir == +1) L.fsr |= 1u << L.rep_pos[j];
        L.dc[j] = L.scl[j] = L.scr[j] = 0;
      }
    }

    if (off == 0) {  // execute flip chains; higher levels override lower
      const std::uint32_t e_l = L.fsl;
      const std::uint32_t e_r = L.fsr & ~e_l;
      const std::uint32_t taken = e_l | e_r;
      act_l = (act_l & ~taken) | e_l;
      act_r = (act_r & ~taken) | e_r;
      L.fsl = L.fsr = 0;
    }
  }

  err_ ^= rotr1(act_l) ^ act_r;
}

HierCodeCapacityResult har1d_run_code_capacity(int d, std::uint32_t initial, long long cap) {
  Harrington1D dec(d);
  dec.set_errors(initial);
  if (cap < 0) cap = 50LL * d * ipow(HierConstants::kU, dec.levels());
  const long long stride = dec.cycle_length();
  std::unordered_set<std::uint64_t> seen;
  HierCodeCapacityResult res{2, 0};
  while (dec.t() < cap) {
    dec.step(dec.syndrome());
    if (dec.quiescent()) {
      res.logical_class = dec.errors() ? 1 : 0;
      res.steps = dec.t();
      return res;
    }
    if (dec.t() % stride == 0 && !seen.insert(dec.state_hash()).second) {
      res.steps = dec.t();  // deterministic cycle: will never converge
      return res;
    }
  }
  res.steps = cap;
  return res;
}

}  // namespace cadec
