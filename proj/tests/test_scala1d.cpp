#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <bit>
#include <cstdint>

#include "cadec/lattice.hpp"
#include "cadec/oracles.hpp"
#include "cadec/rng.hpp"
#include "cadec/scala1d.hpp"

using namespace cadec;

namespace {

RepetitionState state_from_mask(int d, std::uint64_t mask) {
  RepetitionState s(d);
  for (int i = 0; i < d; ++i) s.errors[i] = (mask >> i) & 1u;
  return s;
}

}  // namespace

TEST_CASE("constructor validates the distance") {
  CHECK_THROWS_AS(Scala1D(4), std::invalid_argument);
  CHECK_THROWS_AS(Scala1D(1), std::invalid_argument);
  CHECK_NOTHROW(Scala1D(63));
  CHECK_THROWS_AS(Scala1D(65), std::invalid_argument);
}

TEST_CASE("noiseless decoding lands in the majority class for every input") {
  for (int d : {3, 5, 7, 9, 13}) {
    for (std::uint64_t mask = 0; mask < (1ull << d); ++mask) {
      const RepetitionState init = state_from_mask(d, mask);
      const int w0 = init.weight();
      const auto res = scala1d_run_code_capacity(init);
      const int wf = res.final_state.weight();
      // Decoded state is a codeword matching the majority vote of the input.
      CHECK((wf == 0 || wf == d));
      CHECK((wf == d) == (w0 > d / 2));
    }
  }
}

TEST_CASE("erosion time and signal count laws hold exhaustively") {
  for (int d : {3, 5, 7, 9, 11, 13}) {
    for (std::uint64_t mask = 0; mask < (1ull << d); ++mask) {
      const RepetitionState init = state_from_mask(d, mask);
      const int w0 = init.weight();
      const auto res = scala1d_run_code_capacity(init);
      CHECK(res.erosion_steps <= d - 2);
      CHECK(res.n_sigs == 4 * std::min(w0, d - w0));
    }
  }
}

TEST_CASE("stepping is deterministic") {
  Rng rng(11, 0);
  const int d = 11;
  for (int trial = 0; trial < 50; ++trial) {
    Scala1D a(d), b(d);
    const std::uint64_t err = rng.next_u64() & ((1ull << d) - 1);
    a.set_errors(err);
    b.set_errors(err);
    for (int t = 0; t < 2 * d; ++t) {
      a.step(a.syndrome());
      b.step(b.syndrome());
    }
    CHECK(a.errors() == b.errors());
    CHECK(a.sig_left() == b.sig_left());
    CHECK(a.sig_right() == b.sig_right());
  }
}

TEST_CASE("one-step updates are local") {
  // Flipping one input qubit changes, after one step, only qubits within
  // distance 1 of it (the flip itself plus the reach of the rule).
  Rng rng(12, 0);
  const int d = 15;
  for (int trial = 0; trial < 200; ++trial) {
    const std::uint64_t err = rng.next_u64() & ((1ull << d) - 1);
    const int j = static_cast<int>(rng.below(d));
    Scala1D a(d), b(d);
    a.set_errors(err);
    b.set_errors(err ^ (1ull << j));
    a.step(a.syndrome());
    b.step(b.syndrome());
    const std::uint64_t diff = a.errors() ^ b.errors();
    for (int i = 0; i < d; ++i) {
      const int dist = std::min((i - j + d) % d, (j - i + d) % d);
      if (dist > 1) CHECK(((diff >> i) & 1u) == 0);
    }
  }
}

TEST_CASE("each step flips at most one qubit per defective cell") {
  Rng rng(13, 0);
  const int d = 13;
  for (int trial = 0; trial < 200; ++trial) {
    Scala1D ca(d);
    ca.set_errors(rng.next_u64() & ((1ull << d) - 1));
    for (int t = 0; t < d; ++t) {
      const std::uint64_t syn = ca.syndrome();
      const std::uint64_t before = ca.errors();
      ca.step(syn);
      const int flips = std::popcount(before ^ ca.errors());
      CHECK(flips <= std::popcount(syn));
    }
  }
}

TEST_CASE("signal registers respect capacity and grow monotonically") {
  Rng rng(14, 0);
  const int d = 13;
  for (int trial = 0; trial < 100; ++trial) {
    Scala1D ca(d);
    ca.set_errors(rng.next_u64() & ((1ull << d) - 1));
    int prev = ca.n_signals();
    for (int t = 0; t < d - 2; ++t) {
      ca.step(ca.syndrome());
      const int now = ca.n_signals();
      CHECK(now <= 2 * d);
      CHECK(now >= prev);  // without resets the broadcast only accumulates
      prev = now;
    }
  }
}

TEST_CASE("reset clears the signal registers and only them") {
  Scala1D ca(9);
  ca.set_errors((1ull << 2) | (1ull << 3));
  for (int t = 0; t < 3; ++t) ca.step(ca.syndrome());
  CHECK(ca.n_signals() > 0);
  const std::uint64_t errors_before = ca.errors();
  ca.reset_signals();
  CHECK(ca.n_signals() == 0);
  CHECK(ca.errors() == errors_before);
}

TEST_CASE("exhaustive failure weighting reproduces the closed-form rate") {
  // After d-2 steps the residual is a codeword, so weighting failures by the
  // binomial input distribution must reproduce the exact majority-vote rate.
  const int d = 7;
  const double p = 0.2;
  double pl = 0.0;
  for (std::uint64_t mask = 0; mask < (1ull << d); ++mask) {
    const RepetitionState init = state_from_mask(d, mask);
    const auto res = scala1d_run_code_capacity(init);
    if (logical_failure_repetition(res.final_state)) {
      const int w = init.weight();
      double prob = 1.0;
      for (int i = 0; i < w; ++i) prob *= p;
      for (int i = 0; i < d - w; ++i) prob *= 1 - p;
      pl += prob;
    }
  }
  CHECK(pl == doctest::Approx(ml_pl_repetition(p, d)).epsilon(1e-12));
}
