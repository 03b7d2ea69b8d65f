#pragma once
// Hierarchical multi-level cellular-automaton decoder for the repetition code
// on a ring of d = 3^m qubits.
//
// Cell i sits between qubits i-1 and i (syndrome bit i = err[i-1] XOR err[i]).
// Level 0: every defective cell moves its defect one step per the border /
// default-movement rule, keyed to its address within its 3-cell block
// (0=L, 1=C, 2=R; C never acts).
// Levels k = 1..m: machinery lives on level-k representatives (cells with
// i mod 3^k == (3^k-1)/2).  Each level runs on a cycle of C_k = U^k + Q^k
// steps (U = 10, Q = 3):
//   - offsets 1..U^k (working window): representatives accumulate an own-defect
//     counter and absorb travelling count signals into per-side counters;
//   - offset U^k: thresholds are evaluated (own >= round(f_C U^k) = 9*10^(k-1),
//     side >= round(f_N U^k) = 4*10^(k-1)), a flip signal is armed per the same
//     movement rule applied to the representative's parent address, and all
//     counters reset;
//   - offsets U^k+1..0: flip signals replicate outward one cell per step
//     (non-representatives copy their upstream neighbour, representatives hold);
//   - offset 0: every cell holding a flip signal flips the adjacent qubit in
//     the signal's direction (a chain of exactly Q^k flips), then all flip
//     signals clear.
// Count signals are emitted by defective representatives into both lanes every
// step, travel one cell per step, and are absorbed at representatives.
// Per-cell state grows linearly with m = log_3 d.

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace cadec {

struct InvalidDistance : std::invalid_argument {
  explicit InvalidDistance(const std::string& what) : std::invalid_argument(what) {}
};

// Shared constants of the hierarchical decoders.
struct HierConstants {
  static constexpr int kU = 10;       // working-period base
  static constexpr int kQ = 3;        // colony linear size
  static constexpr double kFc = 0.9;  // own-defect threshold fraction
  static constexpr double kFn = 0.4;  // neighbour-signal threshold fraction
};

// Exact power helper (no floating point).
long long ipow(long long base, int exp);

// Returns m with 3^m == d, or throws InvalidDistance.
int level_count_for_distance(int d);

// Movement decision for a defective cell: -1 flip left qubit, +1 flip right
// qubit, 0 no action.  addr in {0=L, 1=C, 2=R}.  Returns 0 when own_defect is
// false or addr == C.  L-cell: defective left neighbour -> flip left (border
// pair; the neighbouring R-cell stays idle), else flip right (default
// movement toward the centre).  R-cell: defective right neighbour -> no
// action (that neighbour's L-cell handles the pair), else flip left.
int correct_1d(bool left_defect, bool own_defect, bool right_defect, int addr);

class Harrington1D {
 public:
  explicit Harrington1D(int d);  // d = 3^m, 3 <= d <= 27

  // One synchronous update given the measured syndrome (bit i = defect at
  // cell i).  The caller supplies measurement noise by XOR-ing the mask.
  void step(std::uint32_t measured_syndrome);

  std::uint32_t syndrome() const;  // noiseless syndrome of current errors
  std::uint32_t errors() const { return err_; }
  void set_errors(std::uint32_t e) { err_ = e & mask_; }
  int weight() const;

  int d() const { return d_; }
  int levels() const { return m_; }
  long long t() const { return t_; }
  long long cycle_length() const { return cycle_; }  // lcm over levels of C_k
  std::uint32_t mask() const { return mask_; }

  // Signal-lane corruption hooks (level in 1..m); the harness XORs noise
  // masks in after the decoder step.
  void corrupt_count_signals(int level, std::uint32_t left, std::uint32_t right);
  void corrupt_flip_signals(int level, std::uint32_t left, std::uint32_t right);

  int n_active_signals() const;  // all lanes, all levels

  // True iff syndrome, every signal lane and every counter are zero; this is
  // a fixed point of the noiseless dynamics.
  bool quiescent() const;

  // Fingerprint of (errors, lanes, counters); offsets are implicit when
  // sampled at a fixed stride of cycle_length().
  std::uint64_t state_hash() const;

 private:
  struct Level {
    int k;
    long long Uk, Ck;
    int thC, thN;
    std::uint32_t reps;      // representative-cell mask
    std::uint32_t csl, csr;  // count-signal lanes (travelling left / right)
    std::uint32_t fsl, fsr;  // flip-signal lanes
    std::vector<int> rep_pos;
    std::vector<std::uint8_t> addr;                // parent address per rep
    std::vector<std::uint16_t> dc, scl, scr;       // counters per rep
  };

  std::uint32_t rotl1(std::uint32_t x) const {  // bit i <- bit i-1
    return ((x << 1) | (x >> (d_ - 1))) & mask_;
  }
  std::uint32_t rotr1(std::uint32_t x) const {  // bit i <- bit i+1
    return ((x >> 1) | ((x & 1u) << (d_ - 1))) & mask_;
  }

  int d_, m_;
  std::uint32_t mask_;
  std::uint32_t mask_a0_, mask_a2_;  // cells with block address L / R
  std::uint32_t err_ = 0;
  long long t_ = 0;
  long long cycle_ = 1;
  std::vector<Level> levels_;
};

struct HierCodeCapacityResult {
  int logical_class;  // 0 success, 1 logical error, 2 no convergence
  long long steps;    // steps taken until quiescent (or until detection/cap)
};

// Noiseless run from a fixed error pattern until the decoder reaches its
// quiescent fixed point.  Deterministic cycling (detected by state-hash
// recurrence at a stride of one full cycle) or exceeding the step cap counts
// as non-convergence.  Default cap: 50 * d * U^m.
HierCodeCapacityResult har1d_run_code_capacity(int d, std::uint32_t initial,
                                               long long cap = -1);

}  // namespace cadec
