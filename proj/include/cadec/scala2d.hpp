#pragma once
// 2D signal-broadcasting cellular-automaton decoder for the toric code.
//
// Each face cell carries a defect bit and four direction signal bits
// (N,E,S,W = direction of travel).  One synchronous step:
//   1. scheduled signal reset (ramped schedule for the code-capacity run);
//   2. defect bits <- measured syndrome;
//   3. propagation with injection: every cell forwards each signal lane one
//      cell onward and merges its own defect into all four outgoing lanes;
//   4. reflection: defect-free cells holding >= 2 post-propagation signals
//      swap N<->S and E<->W (sending them back toward their emitters);
//   5. corrections (signals read post-reflection):
//        nearest-neighbour: defect & west-defect  -> flip W qubit;
//                           defect & north-defect (no west) -> flip N qubit;
//        signal-follow (only for isolated defects, 4-neighbourhood clear):
//          1 or 3 active signals -> flip toward the lone non-blocking signal's
//          sender; exactly 2 signals -> the three non-blocking source patterns
//          {W+N}->W, {W+S}->W, {N+E}->N (signal analogues of the NN rules);
//        one flip per cell, priority W > N > E > S.
// Rows are bit-packed (d <= 31).

#include <cstdint>
#include <vector>

#include "cadec/lattice.hpp"

namespace cadec {

class Scala2D {
 public:
  explicit Scala2D(int d);

  // One synchronous update; `measured` = per-row syndrome masks (bit c of
  // row r = defect at face (r,c)).  `reset_first` clears all signal lanes
  // before the update (scheduled reset).
  void step(const std::vector<std::uint32_t>& measured, bool reset_first);

  void reset_signals();
  std::vector<std::uint32_t> syndrome_rows() const;  // noiseless

  // XOR noise masks into the four signal lanes (harness hook; row-major).
  void corrupt_signals(const std::vector<std::uint32_t>& n,
                       const std::vector<std::uint32_t>& e,
                       const std::vector<std::uint32_t>& s,
                       const std::vector<std::uint32_t>& w);

  ToricState state() const;
  void set_state(const ToricState& s);
  int n_signals() const;
  int d() const { return d_; }

  // Ramped reset schedule: reset at step t for t in the cumulative sums of
  // 1,2,...,d,d-1,...,1 (total span d^2 steps).
  static std::vector<char> ramp_reset_table(int d);

 private:
  std::uint32_t east1(std::uint32_t x) const {  // bit c <- bit c-1
    return ((x << 1) | (x >> (d_ - 1))) & mask_;
  }
  std::uint32_t west1(std::uint32_t x) const {  // bit c <- bit c+1
    return ((x >> 1) | ((x & 1) << (d_ - 1))) & mask_;
  }

  int d_;
  std::uint32_t mask_;
  std::vector<std::uint32_t> h_, v_;              // error rows
  std::vector<std::uint32_t> sn_, se_, ss_, sw_;  // signal lanes
};

// Runs exactly d^2 noiseless steps under the ramp schedule.
ToricState scala2d_run_code_capacity(const ToricState& initial);

}  // namespace cadec
