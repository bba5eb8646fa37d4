// Copyright 2026 The pseudotherm Authors
// SPDX-License-Identifier: Apache-2.0

#include <doctest.h>

#include <bit>
#include <cmath>
#include <set>

#include "pseudotherm/gates.hpp"
#include "pseudotherm/io.hpp"
#include "pseudotherm/subset_index.hpp"
#include "test_support.hpp"

using namespace pseudotherm;

TEST_CASE("family sizes and domains") {
  CHECK(GateFamily::local_ccx(5).size() == 20);
  CHECK(GateFamily::all_to_all_cnx(3).size() == 12);
  CHECK(GateFamily::not_cnot(3).size() == 3 + 12);
  CHECK(GateFamily::simple_perm_w2(4).size() == 4 * 3 * 15);
  CHECK_THROWS_AS(GateFamily::local_ccx(2), std::invalid_argument);
  CHECK(!GateFamily::from_name("bogus", 4).has_value());
  CHECK(GateFamily::from_name("local", 4)->kind() == GateKind::kLocalCcx);
}

TEST_CASE("controlled-flip semantics") {
  const auto f = GateFamily::local_ccx(3);
  // index = 4 i + 2 a + b; controls (a, b) sit on sites i-1, i+1.
  const std::uint64_t g111 = 4 * 1 + 2 * 1 + 1;
  CHECK(f.apply(g111, Word{0b101}) == 0b111);
  const std::uint64_t g101 = 4 * 1 + 2 * 0 + 1;
  CHECK(f.apply(g101, Word{0b101}) == 0b101);

  const auto a2 = GateFamily::all_to_all_cnx(2);
  // index = i * 2^(n-1) + control word; target 0, control 1 on the other qubit.
  CHECK(a2.apply(0 * 2 + 1, Word{0b10}) == 0b11);
  CHECK(a2.apply(0 * 2 + 1, Word{0b00}) == 0b00);

  const auto nc = GateFamily::not_cnot(3);
  CHECK(nc.apply(0, Word{0b000}) == 0b001);  // NOT on qubit 0
  // CNOT block: index = n + 2 * (c * (n-1) + t') + a, target skips the control.
  const std::uint64_t cnot_0_to_1_on1 = 3 + 2 * (0 * 2 + 0) + 1;
  CHECK(nc.apply(cnot_0_to_1_on1, Word{0b001}) == 0b011);
  CHECK(nc.apply(cnot_0_to_1_on1, Word{0b000}) == 0b000);
  const std::uint64_t cnot_0_to_1_on0 = 3 + 2 * (0 * 2 + 0) + 0;
  CHECK(nc.apply(cnot_0_to_1_on0, Word{0b000}) == 0b010);
}

TEST_CASE("simple permutations flip one target off two controls") {
  const auto f = GateFamily::simple_perm_w2(5);
  CounterRng rng(11, 0);
  for (int trial = 0; trial < 200; ++trial) {
    const std::uint64_t g = f.sample(rng);
    int flipped_bit = -1;
    for (Word z = 0; z < 32; ++z) {
      const Word w = f.apply(g, z);
      const Word diff = w ^ z;
      CHECK(std::popcount(diff) <= 1);
      if (diff != 0) {
        const int b = std::countr_zero(diff);
        if (flipped_bit < 0) flipped_bit = b;
        CHECK(b == flipped_bit);  // single fixed target per gate
      }
    }
    CHECK(flipped_bit >= 0);  // the all-zero truth table is excluded
  }
}

TEST_CASE("subset images preserve cardinality") {
  const auto f = GateFamily::local_ccx(3);
  const Subset full = full_subset(3);
  for (std::uint64_t g = 0; g < f.size(); ++g) {
    CHECK(f.apply_to_subset(g, full) == full);
  }
  CHECK(f.apply_to_subset(4 * 1 + 2 * 1 + 1, Subset({0b101, 0b001}, 3)) ==
        Subset({0b111, 0b001}, 3));

  const auto f4 = GateFamily::local_ccx(4);
  SubsetIndexer idx(4, 5);
  CounterRng rng(3, 1);
  for (int trial = 0; trial < 10'000; ++trial) {
    const auto s = idx.unrank_subset(rng.uniform_below(idx.dimension()));
    const auto image = f4.apply_to_subset(f4.sample(rng), s);
    CHECK(image.size() == s.size());
  }
}

TEST_CASE("gate sampling is uniform and replayable") {
  const auto f = GateFamily::local_ccx(4);
  const int draws = 1'000'000;
  std::vector<int> counts(f.size(), 0);
  CounterRng rng(99, 0);
  for (int i = 0; i < draws; ++i) ++counts[f.sample(rng)];
  const double p = 1.0 / static_cast<double>(f.size());
  const double sigma = std::sqrt(draws * p * (1 - p));
  for (int c : counts) CHECK(std::abs(c - draws * p) <= 3 * sigma);

  CounterRng a(123, 5), b(123, 5);
  for (int i = 0; i < 1000; ++i) CHECK(f.sample(a) == f.sample(b));

  const auto f3 = GateFamily::all_to_all_cnx(3);
  CounterRng rng2(17, 0);
  for (int i = 0; i < 1000; ++i) CHECK(f3.sample(rng2) < 12);
}

TEST_CASE("involutions") {
  const auto f = GateFamily::local_ccx(3);
  for (std::uint64_t g = 0; g < f.size(); ++g) {
    CHECK(f.is_involution(g));
    for (Word z = 0; z < 8; ++z) CHECK(f.apply(g, f.apply(g, z)) == z);
  }
  const auto x0 = GateFamily::all_to_all_cnx(1);  // single gate: NOT on qubit 0
  CHECK(x0.size() == 1);
  CHECK(x0.is_involution(0));
  const auto a2 = GateFamily::all_to_all_cnx(2);
  for (std::uint64_t g = 0; g < a2.size(); ++g) CHECK(a2.is_involution(g));
  const auto sp = GateFamily::simple_perm_w2(4);
  for (std::uint64_t g = 0; g < sp.size(); ++g) CHECK(sp.is_involution(g));
}

TEST_CASE("every gate is a bijection on the basis") {
  for (int n = 3; n <= 4; ++n) {
    for (const auto& f : {GateFamily::local_ccx(n), GateFamily::all_to_all_cnx(n),
                          GateFamily::not_cnot(n), GateFamily::simple_perm_w2(n)}) {
      for (std::uint64_t g = 0; g < f.size(); ++g) {
        std::set<Word> image;
        for (Word z = 0; z < (Word{1} << n); ++z) image.insert(f.apply(g, z));
        CHECK(image.size() == (Word{1} << n));
      }
    }
  }
}

TEST_CASE("controlled flips generate only even permutations for n >= 4") {
  // Each gate moves the 2^(n-2) states whose controls match, pairing them
  // into 2^(n-3) transpositions: even for n >= 4. At n = 3 a gate is a
  // single transposition, so evenness starts at four sites.
  for (int n = 4; n <= 5; ++n) {
    const auto f = GateFamily::local_ccx(n);
    for (std::uint64_t g = 0; g < f.size(); ++g) {
      CHECK(testing::permutation_parity(f, g) == 1);
    }
  }
  const auto f3 = GateFamily::local_ccx(3);
  for (std::uint64_t g = 0; g < f3.size(); ++g) {
    CHECK(testing::permutation_parity(f3, g) == -1);
  }
  // Parity is multiplicative, so random products stay even; spot-check by
  // composing applications and decomposing the product permutation.
  const auto f = GateFamily::local_ccx(4);
  CounterRng rng(5, 0);
  for (int trial = 0; trial < 100; ++trial) {
    std::vector<Word> perm(16);
    for (Word z = 0; z < 16; ++z) perm[z] = z;
    for (int step = 0; step < 13; ++step) {
      const std::uint64_t g = f.sample(rng);
      for (Word z = 0; z < 16; ++z) perm[z] = f.apply(g, perm[z]);
    }
    std::vector<bool> seen(16, false);
    int transpositions = 0;
    for (Word z = 0; z < 16; ++z) {
      if (seen[z]) continue;
      Word w = z;
      int len = 0;
      while (!seen[w]) {
        seen[w] = true;
        w = perm[w];
        ++len;
      }
      transpositions += len - 1;
    }
    CHECK(transpositions % 2 == 0);
  }
  // Contrast: each globally-controlled NOT is a single transposition (odd).
  const auto a3 = GateFamily::all_to_all_cnx(3);
  for (std::uint64_t g = 0; g < a3.size(); ++g) {
    CHECK(testing::permutation_parity(a3, g) == -1);
  }
}

TEST_CASE("circuit JSON round trip") {
  const auto f = GateFamily::local_ccx(4);
  std::vector<GateId> circuit{{f, 0}, {f, 7}, {f, 15}};
  const auto j = circuit_to_json(circuit);
  const auto back = circuit_from_json(j, 4);
  REQUIRE(back.size() == 3);
  for (std::size_t i = 0; i < 3; ++i) {
    CHECK(back[i].family == circuit[i].family);
    CHECK(back[i].index == circuit[i].index);
  }
  CHECK_THROWS(circuit_from_json(nlohmann::json::parse("[[\"local_ccx\", 99]]"), 4));
}
