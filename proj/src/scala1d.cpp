#include "cadec/scala1d.hpp"

#include <bit>
#include <stdexcept>

namespace cadec {

Scala1D::Scala1D(int d) : d_(d) {
  if (d < 3 || d % 2 == 0 || d > 63)
    throw std::invalid_argument("distance must be odd, >= 3 and <= 63");
  mask_ = (d == 63) ? ~0ULL >> 1 : ((1ULL << d) - 1);
}

std::uint64_t Scala1D::syndrome() const { return err_ ^ rotl1(err_); }

int Scala1D::n_signals() const {
  return std::popcount(sig_l_) + std::popcount(sig_r_);
}

int Scala1D::weight() const { return std::popcount(err_); }

void Scala1D::step(std::uint64_t measured) {
  const std::uint64_t syn = measured & mask_;
  // Broadcast; corrections below read the post-update signals.
  sig_l_ = rotr1(sig_l_ | syn);
  sig_r_ = rotl1(sig_r_ | syn);

  const std::uint64_t dl = rotl1(syn);  // left neighbour's defect
  const std::uint64_t dr = rotr1(syn);  // right neighbour's defect
  const std::uint64_t nn = syn & dl;    // adjacent pair: flip left qubit
  const std::uint64_t iso = syn & ~dl & ~dr;
  const std::uint64_t follow_left = iso & ~sig_l_ & sig_r_;   // flip left
  const std::uint64_t follow_right = iso & sig_l_ & ~sig_r_;  // flip right

  // Cell i's left qubit is err(i-1), its right qubit err(i).
  err_ ^= rotr1(nn | follow_left) ^ follow_right;
}

Scala1DCodeCapacityResult scala1d_run_code_capacity(const RepetitionState& initial) {
  const int d = initial.d;
  Scala1D ca(d);
  std::uint64_t e = 0;
  for (int i = 0; i < d; ++i)
    if (initial.errors[i]) e |= 1ULL << i;
  ca.set_errors(e);

  Scala1DCodeCapacityResult out;
  out.erosion_steps = 0;
  bool settled = (ca.syndrome() == 0);
  for (int t = 1; t <= d - 2; ++t) {
    ca.step(ca.syndrome());
    if (ca.syndrome() != 0) {
      settled = false;
    } else if (!settled) {
      settled = true;
      out.erosion_steps = t;
    }
  }
  out.final_state = RepetitionState(d);
  for (int i = 0; i < d; ++i)
    out.final_state.errors[i] = (ca.errors() >> i) & 1;
  out.n_sigs = ca.n_signals();
  return out;
}

}  // namespace cadec
