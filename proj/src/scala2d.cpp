#include "cadec/scala2d.hpp"

#include <bit>
#include <stdexcept>

namespace cadec {

Scala2D::Scala2D(int d) : d_(d) {
  if (d < 3 || d > 31) throw std::invalid_argument("lattice size must be in [3,31]");
  mask_ = (1u << d) - 1;
  h_.assign(d, 0);
  v_.assign(d, 0);
  sn_.assign(d, 0);
  se_.assign(d, 0);
  ss_.assign(d, 0);
  sw_.assign(d, 0);
}

void Scala2D::reset_signals() {
  for (int r = 0; r < d_; ++r) sn_[r] = se_[r] = ss_[r] = sw_[r] = 0;
}

void Scala2D::corrupt_signals(const std::vector<std::uint32_t>& n,
                              const std::vector<std::uint32_t>& e,
                              const std::vector<std::uint32_t>& s,
                              const std::vector<std::uint32_t>& w) {
  for (int r = 0; r < d_; ++r) {
    sn_[r] ^= n[r] & mask_;
    se_[r] ^= e[r] & mask_;
    ss_[r] ^= s[r] & mask_;
    sw_[r] ^= w[r] & mask_;
  }
}

std::vector<std::uint32_t> Scala2D::syndrome_rows() const {
  std::vector<std::uint32_t> syn(d_);
  for (int r = 0; r < d_; ++r) {
    int rs = (r + 1) % d_;
    syn[r] = h_[r] ^ h_[rs] ^ v_[r] ^ west1(v_[r]);
  }
  return syn;
}

ToricState Scala2D::state() const {
  ToricState s(d_);
  for (int r = 0; r < d_; ++r)
    for (int c = 0; c < d_; ++c) {
      s.h[r * d_ + c] = (h_[r] >> c) & 1;
      s.v[r * d_ + c] = (v_[r] >> c) & 1;
    }
  return s;
}

void Scala2D::set_state(const ToricState& s) {
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

int Scala2D::n_signals() const {
  int n = 0;
  for (int r = 0; r < d_; ++r)
    n += std::popcount(sn_[r]) + std::popcount(se_[r]) + std::popcount(ss_[r]) +
         std::popcount(sw_[r]);
  return n;
}

std::vector<char> Scala2D::ramp_reset_table(int d) {
  std::vector<char> table(d * d + 1, 0);
  int t = 0;
  for (int step = 1; step <= d; ++step) {
    t += step;
    if (t <= d * d) table[t] = 1;
  }
  for (int step = d - 1; step >= 1; --step) {
    t += step;
    if (t <= d * d) table[t] = 1;
  }
  return table;
}

void Scala2D::step(const std::vector<std::uint32_t>& measured, bool reset_first) {
  const int d = d_;
  if (reset_first) reset_signals();

  // Propagation with injection, then reflection, per row.
  std::vector<std::uint32_t> nn(d), ne(d), ns(d), nw(d);
  for (int r = 0; r < d; ++r) {
    int rn = (r + 1) % d;       // source row for north-travelling lane
    int rs = (r + d - 1) % d;   // source row for south-travelling lane
    nn[r] = sn_[rn] | measured[rn];
    ns[r] = ss_[rs] | measured[rs];
    ne[r] = east1(se_[r] | measured[r]);
    nw[r] = west1(sw_[r] | measured[r]);
  }
  for (int r = 0; r < d; ++r) {
    std::uint32_t a = nn[r], b = ns[r], c = ne[r], e = nw[r];
    std::uint32_t two = (a & b) | (a & c) | (a & e) | (b & c) | (b & e) | (c & e);
    std::uint32_t refl = ~measured[r] & two & mask_;
    sn_[r] = (nn[r] & ~refl) | (ns[r] & refl);
    ss_[r] = (ns[r] & ~refl) | (nn[r] & refl);
    se_[r] = (ne[r] & ~refl) | (nw[r] & refl);
    sw_[r] = (nw[r] & ~refl) | (ne[r] & refl);
  }

  // Corrections; signals read post-reflection.
  std::vector<std::uint32_t> flip_w(d), flip_n(d), flip_e(d), flip_s(d);
  for (int r = 0; r < d; ++r) {
    const std::uint32_t syn = measured[r];
    const std::uint32_t dn = measured[(r + d - 1) % d];
    const std::uint32_t dsn = measured[(r + 1) % d];
    const std::uint32_t dw = east1(syn);
    const std::uint32_t de = west1(syn);
    const std::uint32_t rn = sn_[r], re = se_[r], rs = ss_[r], rw = sw_[r];

    const std::uint32_t nn_w = syn & dw;
    const std::uint32_t nn_n = syn & dn & ~dw;
    const std::uint32_t iso = syn & ~(dw | dn | de | dsn);

    const std::uint32_t odd = rn ^ re ^ rs ^ rw;  // 1 or 3 active signals
    const std::uint32_t fs = iso & odd & rn & ~rs & ~(re ^ rw);
    const std::uint32_t fn = iso & odd & rs & ~rn & ~(re ^ rw);
    const std::uint32_t fw = iso & odd & re & ~rw & ~(rn ^ rs);
    const std::uint32_t fe = iso & odd & rw & ~re & ~(rn ^ rs);

    const std::uint32_t at_least2 =
        (rn & re) | (rn & rs) | (rn & rw) | (re & rs) | (re & rw) | (rs & rw);
    const std::uint32_t at_least3 =
        (rn & re & rs) | (rn & re & rw) | (rn & rs & rw) | (re & rs & rw);
    const std::uint32_t two = at_least2 & ~at_least3;
    // Sources: a signal travelling E was sent from the west, etc.
    const std::uint32_t src_w = re, src_e = rw, src_n = rs, src_s = rn;
    const std::uint32_t fw2 = iso & two & src_w & (src_n | src_s);
    const std::uint32_t fn2 = iso & two & src_n & src_e;

    const std::uint32_t w = nn_w | fw | fw2;
    const std::uint32_t n = (nn_n | fn | fn2) & ~w;
    const std::uint32_t e2 = fe & ~w & ~n;
    const std::uint32_t s2 = fs & ~w & ~n & ~e2;
    flip_w[r] = w;
    flip_n[r] = n;
    flip_e[r] = e2;
    flip_s[r] = s2;
  }
  for (int r = 0; r < d; ++r) {
    v_[r] ^= flip_w[r];
    h_[r] ^= flip_n[r];
    v_[r] ^= east1(flip_e[r]);                 // east qubit of (r,c) is v(r,c+1)
    h_[(r + 1) % d] ^= flip_s[r];              // south qubit is h(r+1,c)
  }
}

ToricState scala2d_run_code_capacity(const ToricState& initial) {
  const int d = initial.d;
  Scala2D ca(d);
  ca.set_state(initial);
  auto resets = Scala2D::ramp_reset_table(d);
  for (int t = 1; t <= d * d; ++t)
    ca.step(ca.syndrome_rows(), resets[t]);
  return ca.state();
}

}  // namespace cadec
