#pragma once
// 1D signal-broadcasting cellular-automaton decoder for the repetition code.
//
// Each cell carries a defect bit and two signal bits (left-moving, right-
// moving).  One synchronous step, computed against a snapshot:
//   1. defect bits <- measured syndrome;
//   2. signal broadcast: new sig_left(i)  = sig_left(i+1)  OR defect(i+1),
//                        new sig_right(i) = sig_right(i-1) OR defect(i-1);
//   3. corrections (signals read post-update):
//        defect(i-1) & defect(i)                      -> flip left qubit;
//        isolated defect, only left-moving signal on  -> flip right qubit;
//        isolated defect, only right-moving signal on -> flip left qubit;
//      at most one flip per cell.
// State is bit-packed; d <= 63.

#include <cstdint>

#include "cadec/lattice.hpp"

namespace cadec {

class Scala1D {
 public:
  explicit Scala1D(int d);

  // One synchronous update against the measured syndrome mask (bit i = defect
  // at cell i).  Flips are applied to the internal error register.
  void step(std::uint64_t measured);

  void reset_signals() { sig_l_ = sig_r_ = 0; }

  std::uint64_t syndrome() const;  // noiseless, from current errors
  int n_signals() const;           // total active signal bits

  std::uint64_t errors() const { return err_; }
  void set_errors(std::uint64_t e) { err_ = e & mask_; }
  std::uint64_t sig_left() const { return sig_l_; }
  std::uint64_t sig_right() const { return sig_r_; }
  void set_signals(std::uint64_t l, std::uint64_t r) {
    sig_l_ = l & mask_;
    sig_r_ = r & mask_;
  }
  int weight() const;
  int d() const { return d_; }

 private:
  std::uint64_t rotl1(std::uint64_t x) const {
    return ((x << 1) | (x >> (d_ - 1))) & mask_;
  }
  std::uint64_t rotr1(std::uint64_t x) const {
    return ((x >> 1) | ((x & 1) << (d_ - 1))) & mask_;
  }

  int d_;
  std::uint64_t mask_;
  std::uint64_t err_ = 0;
  std::uint64_t sig_l_ = 0, sig_r_ = 0;
};

struct Scala1DCodeCapacityResult {
  RepetitionState final_state;
  int n_sigs = 0;           // active signals after the last step
  int erosion_steps = 0;    // first step after which the syndrome stays empty
};

// Runs exactly d-2 noiseless steps with no signal resets.
Scala1DCodeCapacityResult scala1d_run_code_capacity(const RepetitionState& initial);

}  // namespace cadec
