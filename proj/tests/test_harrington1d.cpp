#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <bit>
#include <cstdint>
#include <map>

#include "cadec/harrington1d.hpp"
#include "cadec/rng.hpp"

using namespace cadec;

TEST_CASE("level count recognises exact powers of three") {
  CHECK(level_count_for_distance(3) == 1);
  CHECK(level_count_for_distance(9) == 2);
  CHECK(level_count_for_distance(27) == 3);
  CHECK_THROWS_AS(level_count_for_distance(5), InvalidDistance);
  CHECK_THROWS_AS(level_count_for_distance(12), InvalidDistance);
  CHECK_THROWS_AS(Harrington1D(81), InvalidDistance);
}

TEST_CASE("integer power helper") {
  CHECK(ipow(10, 0) == 1);
  CHECK(ipow(10, 3) == 1000);
  CHECK(ipow(3, 3) == 27);
}

TEST_CASE("movement rule truth table") {
  // No action without an own defect, and centre cells never act.
  for (int l = 0; l < 2; ++l)
    for (int r = 0; r < 2; ++r) {
      for (int addr = 0; addr < 3; ++addr) CHECK(correct_1d(l, false, r, addr) == 0);
      CHECK(correct_1d(l, true, r, 1) == 0);
    }
  // L cells: pair with a defective left neighbour, otherwise drift right.
  CHECK(correct_1d(true, true, false, 0) == -1);
  CHECK(correct_1d(true, true, true, 0) == -1);
  CHECK(correct_1d(false, true, false, 0) == +1);
  CHECK(correct_1d(false, true, true, 0) == +1);
  // R cells: defer to the right neighbour's L cell, otherwise drift left.
  CHECK(correct_1d(false, true, true, 2) == 0);
  CHECK(correct_1d(true, true, true, 2) == 0);
  CHECK(correct_1d(false, true, false, 2) == -1);
  CHECK(correct_1d(true, true, false, 2) == -1);
}

TEST_CASE("cycle lengths combine level periods") {
  CHECK(Harrington1D(3).cycle_length() == 13);        // 10 + 3
  CHECK(Harrington1D(9).cycle_length() == 13 * 109);  // lcm(13, 109)
  CHECK(Harrington1D(27).cycle_length() == 111943);   // lcm(13, 109, 1027)
}

TEST_CASE("per-cell state grows with the level count") {
  CHECK(Harrington1D(3).levels() == 1);
  CHECK(Harrington1D(9).levels() == 2);
  CHECK(Harrington1D(27).levels() == 3);
}

TEST_CASE("distance 3 reproduces majority voting exhaustively") {
  for (std::uint32_t e = 0; e < 8; ++e) {
    const auto res = har1d_run_code_capacity(3, e);
    const int expect = std::popcount(e) >= 2 ? 1 : 0;
    CHECK(res.logical_class == expect);
  }
}

TEST_CASE("distance 3 inputs complete to the majority codeword in one step") {
  for (std::uint32_t pat = 0; pat < 8; ++pat) {
    Harrington1D ca(3);
    ca.set_errors(pat);
    ca.step(ca.syndrome());
    const std::uint32_t expect = std::popcount(pat) >= 2 ? 7u : 0u;
    CHECK(ca.errors() == expect);
  }
}

TEST_CASE("distance 9 single errors are cleaned in one level-0 step") {
  for (int q = 0; q < 9; ++q) {
    Harrington1D ca(9);
    ca.set_errors(1u << q);
    ca.step(ca.syndrome());
    CHECK(ca.errors() == 0u);
  }
}

TEST_CASE("distance 9 exhaustive failure enumerator equals the two-level majority law") {
  // Individual patterns may fail differently from a literal majority-of-block-
  // majorities vote (cross-block border pairings shuffle same-weight inputs),
  // but the number of failing inputs at each weight is fixed by the two-level
  // law, which makes the exhaustive failure rate equal to p_maj(p_maj(p)) at
  // every p.
  std::map<int, int> failures_by_weight;
  for (std::uint32_t e = 0; e < 512; ++e) {
    const auto res = har1d_run_code_capacity(9, e);
    CHECK(res.logical_class != 2);  // every noiseless input converges
    CHECK((res.logical_class == 0 || res.logical_class == 1));
    // Weight <= 1 inputs can never fail; weight >= 8 always do.
    if (std::popcount(e) <= 1) CHECK(res.logical_class == 0);
    if (std::popcount(e) >= 8) CHECK(res.logical_class == 1);
    if (res.logical_class == 1) ++failures_by_weight[std::popcount(e)];
  }
  const std::map<int, int> expected = {{4, 27}, {5, 99}, {6, 84},
                                       {7, 36}, {8, 9},  {9, 1}};
  CHECK(failures_by_weight == expected);
}

TEST_CASE("fresh machines are quiescent and success runs end quiescent") {
  Harrington1D ca(9);
  CHECK(ca.quiescent());
  ca.set_errors(0b000000011u);
  CHECK_FALSE(ca.quiescent());
  const auto res = har1d_run_code_capacity(9, 0b000000011u);
  CHECK(res.logical_class == 0);
}

TEST_CASE("stepping is deterministic and the hash fingerprints full state") {
  Rng rng(31, 0);
  for (int trial = 0; trial < 10; ++trial) {
    const std::uint32_t e = static_cast<std::uint32_t>(rng.next_u64()) & 0x1FFu;
    Harrington1D a(9), b(9);
    a.set_errors(e);
    b.set_errors(e);
    for (int t = 0; t < 250; ++t) {
      a.step(a.syndrome());
      b.step(b.syndrome());
      CHECK(a.state_hash() == b.state_hash());
    }
    CHECK(a.errors() == b.errors());
  }
}

TEST_CASE("signal corruption hooks use XOR semantics") {
  Harrington1D ca(9);
  ca.set_errors(0b010010010u);
  for (int t = 0; t < 25; ++t) ca.step(ca.syndrome());
  const std::uint64_t h = ca.state_hash();
  ca.corrupt_count_signals(1, 0x0A5u, 0x143u);
  ca.corrupt_flip_signals(1, 0x050u, 0x0F0u);
  CHECK(ca.state_hash() != h);
  ca.corrupt_flip_signals(1, 0x050u, 0x0F0u);
  ca.corrupt_count_signals(1, 0x0A5u, 0x143u);
  CHECK(ca.state_hash() == h);
}

TEST_CASE("count-signal injection shows up in the signal census") {
  Harrington1D ca(9);
  CHECK(ca.n_active_signals() == 0);
  ca.corrupt_count_signals(2, 1u, 0u);
  CHECK(ca.n_active_signals() == 1);
  ca.corrupt_count_signals(2, 1u, 0u);
  CHECK(ca.n_active_signals() == 0);
}
