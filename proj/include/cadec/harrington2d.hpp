#pragma once
// Hierarchical multi-level cellular-automaton decoder for the toric code,
// d = 3^m.  Face cell (r,c) carries the defect bit; qubits live on edges
// (see lattice.hpp for the face/edge conventions).
//
// Level 0, applied every step to each defective cell with priority
// cardinal partner > diagonal partner > default movement:
//   - defective S neighbour -> flip the S qubit; else defective W neighbour ->
//     flip W (the N/E members of such pairs stay idle);
//   - no cardinal partner: defective NE or NW diagonal -> flip N
//     (SE/SW members wait for their partner to act);
//   - no Moore-neighbourhood partner: move the defect toward the colony
//     centre according to the cell's address in its 3x3 block
//     (N->S, S->N, W->E, E->W, NW->E, NE->S, SE->N, SW->N, C holds).
// Levels k = 1..m live on level-k representatives (both coordinates
// congruent to (3^k-1)/2 mod 3^k) and run on a cycle of C_k = U^k + Q^k
// steps, mirroring the 1D hierarchy: a defect counter plus eight
// per-direction signal counters accumulate during offsets 1..U^k; count
// signals are emitted by defective representatives into eight travel lanes,
// move one cell per step (diagonal lanes move diagonally), and are absorbed
// at representatives; at offset U^k the counters are thresholded into a
// virtual 3x3 defect neighbourhood and the same rule table (with the
// representative's parent address) arms a cardinal flip signal; flip signals
// replicate outward and execute a chain of Q^k qubit flips at offset 0,
// overriding lower-level actions.

#include <cstdint>
#include <vector>

#include "cadec/harrington1d.hpp"  // InvalidDistance, HierConstants, result type
#include "cadec/lattice.hpp"

namespace cadec {

class Harrington2D {
 public:
  explicit Harrington2D(int d);  // d = 3^m, 3 <= d <= 27

  // One synchronous update from the measured syndrome (row masks, bit c of
  // row r = defect at face (r,c)).
  void step(const std::vector<std::uint32_t>& measured);

  std::vector<std::uint32_t> syndrome_rows() const;  // noiseless
  ToricState state() const;
  void set_state(const ToricState& s);
  int weight() const;

  int d() const { return d_; }
  int levels() const { return m_; }
  long long t() const { return t_; }
  long long cycle_length() const { return cycle_; }

  bool quiescent() const;        // syndrome, lanes and counters all zero
  std::uint64_t state_hash() const;
  int n_active_signals() const;

  // XOR noise masks into the signal lanes of one level (harness hooks).
  // Count-signal direction index: 0=N 1=S 2=E 3=W 4=NE 5=NW 6=SE 7=SW;
  // flip-signal direction index: 0=W 1=N 2=E 3=S.
  void corrupt_count_signals(int level, int dir, const std::vector<std::uint32_t>& mask);
  void corrupt_flip_signals(int level, int dir, const std::vector<std::uint32_t>& mask);

 private:
  // Travel/lane directions.
  static constexpr int kN = 0, kS = 1, kE = 2, kW = 3;
  static constexpr int kNE = 4, kNW = 5, kSE = 6, kSW = 7;
  // Action codes.
  static constexpr int kActNone = 0, kActW = 1, kActN = 2, kActE = 3, kActS = 4;

  struct Rep {
    int r, c;
    std::uint8_t dft;  // default action for the parent-colony address
    std::uint16_t dc = 0;
    std::uint16_t sc[8] = {0, 0, 0, 0, 0, 0, 0, 0};
  };

  struct Level {
    int k;
    long long Uk, Ck;
    int thC, thN;
    std::vector<std::uint32_t> rep_rows;      // representative mask per row
    std::vector<std::uint32_t> cs[8];          // count-signal lanes
    std::vector<std::uint32_t> fs[4];          // flip-signal lanes (W,N,E,S order)
    std::vector<Rep> reps;
  };

  static int rule_scalar(bool dC, bool dN, bool dE, bool dS, bool dW, bool dNE,
                         bool dNW, bool dSE, bool dSW, int dft);
  friend int har2d_rule_for_test(bool, bool, bool, bool, bool, bool, bool, bool,
                                 bool, int);

  std::uint32_t east1(std::uint32_t x) const {  // bit c <- bit c-1
    return ((x << 1) | (x >> (d_ - 1))) & mask_;
  }
  std::uint32_t west1(std::uint32_t x) const {  // bit c <- bit c+1
    return ((x >> 1) | ((x & 1u) << (d_ - 1))) & mask_;
  }

  int d_, m_;
  std::uint32_t mask_;
  std::vector<std::uint32_t> h_, v_;  // error rows
  // Default level-0 movement masks per row, indexed by action code 1..4.
  std::vector<std::uint32_t> def_w_, def_n_, def_e_, def_s_;
  long long t_ = 0;
  long long cycle_ = 1;
  std::vector<Level> levels_;
};

// Exposes the movement rule table for exhaustive unit testing:
// arguments are the defect bits of the cell and its Moore neighbourhood plus
// the default action code; returns the action code.
int har2d_rule_for_test(bool dC, bool dN, bool dE, bool dS, bool dW, bool dNE,
                        bool dNW, bool dSE, bool dSW, int dft);

// Noiseless run from a fixed error state until quiescence; deterministic
// cycling or exceeding the cap counts as non-convergence (logical_class 2).
// Default cap: 50 * d * U^m.
HierCodeCapacityResult har2d_run_code_capacity(const ToricState& initial,
                                               long long cap = -1);

}  // namespace cadec
