#include "cadec/lattice.hpp"

namespace cadec {

Syndrome1D syndrome_repetition(const RepetitionState& s) {
  Syndrome1D out;
  out.d = s.d;
  out.defects.resize(s.d);
  for (int i = 0; i < s.d; ++i) {
    int prev = (i + s.d - 1) % s.d;
    out.defects[i] = s.errors[prev] ^ s.errors[i];
  }
  return out;
}

Syndrome2D syndrome_toric(const ToricState& s) {
  const int d = s.d;
  Syndrome2D out;
  out.d = d;
  out.defects.resize(d * d);
  for (int r = 0; r < d; ++r) {
    int rs = ((r + 1) % d) * d;
    for (int c = 0; c < d; ++c) {
      out.defects[r * d + c] = s.h[r * d + c] ^ s.h[rs + c] ^ s.v[r * d + c] ^
                               s.v[r * d + (c + 1) % d];
    }
  }
  return out;
}

bool logical_failure_repetition(const RepetitionState& s) {
  return s.weight() >= (s.d + 1) / 2;
}

int homology_parity(const ToricState& s, Direction dir) {
  Syndrome2D syn = syndrome_toric(s);
  if (syn.count() != 0) throw NonTrivialSyndrome();
  int parity = 0;
  if (dir == Direction::kHorizontal) {
    for (int c = 0; c < s.d; ++c) parity ^= s.h[c];  // row 0 of h
  } else {
    for (int r = 0; r < s.d; ++r) parity ^= s.v[r * s.d];  // column 0 of v
  }
  return parity;
}

void apply_face_boundary(ToricState& s, int r, int c) {
  const int d = s.d;
  // The four edges incident to the north-west corner of face (r,c): the
  // defects-as-vertices dual of a face boundary.  Each adjacent face gains
  // exactly two of these edges, so every plaquette parity is preserved.
  s.h[r * d + c] ^= 1;
  s.h[r * d + (c + d - 1) % d] ^= 1;
  s.v[r * d + c] ^= 1;
  s.v[((r + d - 1) % d) * d + c] ^= 1;
}

}  // namespace cadec
