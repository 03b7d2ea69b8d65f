#pragma once
// Error configurations and syndromes for the two code families:
//  - repetition code on a ring of d qubits (one stabilizer cell between each
//    adjacent qubit pair; cell i sits between qubits i-1 mod d and i),
//  - toric code on a d x d periodic lattice with 2d^2 edge qubits
//    (face (r,c) is bounded by h-edges (r,c),(r+1,c) and v-edges (r,c),(r,c+1)).
// Only X errors and plaquette syndromes are modeled; the Z sector is an
// identical dual instance.

#include <cstdint>
#include <stdexcept>
#include <vector>

namespace cadec {

struct RepetitionState {
  int d = 0;
  std::vector<std::uint8_t> errors;  // length d, 1 = X applied

  RepetitionState() = default;
  explicit RepetitionState(int d_) : d(d_), errors(d_, 0) {
    if (d < 3 || d % 2 == 0) throw std::invalid_argument("distance must be odd and >= 3");
  }
  int weight() const {
    int w = 0;
    for (auto e : errors) w += e;
    return w;
  }
};

struct ToricState {
  int d = 0;
  // row-major d*d arrays; h[r*d+c] is the edge on the north side of face (r,c),
  // v[r*d+c] the edge on its west side.
  std::vector<std::uint8_t> h, v;

  ToricState() = default;
  explicit ToricState(int d_) : d(d_), h(d_ * d_, 0), v(d_ * d_, 0) {
    if (d < 3) throw std::invalid_argument("lattice size must be >= 3");
  }
  int weight() const {
    int w = 0;
    for (auto e : h) w += e;
    for (auto e : v) w += e;
    return w;
  }
};

struct Syndrome1D {
  int d = 0;
  std::vector<std::uint8_t> defects;  // length d
  int count() const {
    int n = 0;
    for (auto b : defects) n += b;
    return n;
  }
};

struct Syndrome2D {
  int d = 0;
  std::vector<std::uint8_t> defects;  // d*d row-major
  int count() const {
    int n = 0;
    for (auto b : defects) n += b;
    return n;
  }
};

struct NonTrivialSyndrome : std::runtime_error {
  NonTrivialSyndrome() : std::runtime_error("state has a non-empty syndrome") {}
};

// Cell i is the stabilizer between qubits i-1 (mod d) and i.
Syndrome1D syndrome_repetition(const RepetitionState& s);

// Face (r,c) defect = parity of its four boundary edges.
Syndrome2D syndrome_toric(const ToricState& s);

// True iff the residual error is in the nontrivial class, i.e. majority-vote
// correction of the syndrome leaves the logical operator; equivalently
// weight >= (d+1)/2.
bool logical_failure_repetition(const RepetitionState& s);

// Parity of error bits crossing a fixed transversal cut.  Horizontal class:
// parity of h-errors in row 0; vertical class: parity of v-errors in column 0.
// Requires an empty syndrome (class is not defined otherwise).
enum class Direction { kHorizontal, kVertical };
int homology_parity(const ToricState& s, Direction dir);

// XOR the trivial loop attached to face (r,c) into the state (stabilizer
// application): the four edges meeting at the face's north-west corner,
// which is the boundary of the matching dual face.  Syndrome and both
// homology parities are unchanged.
void apply_face_boundary(ToricState& s, int r, int c);

}  // namespace cadec
