// Copyright 2026 The pseudotherm Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "pseudotherm/rng.hpp"

namespace pseudotherm {

/// Basis-state label. Qubit i is bit i of the word (qubit 0 = least
/// significant); all bits at positions >= n are zero.
using Word = std::uint64_t;

inline constexpr int kMaxQubits = 64;

inline bool bit_at(Word z, int i) { return (z >> i) & 1; }

/// Mask of the n low bits. Valid for 1 <= n <= 64.
inline Word full_mask(int n) {
  return n >= 64 ? ~Word{0} : (Word{1} << n) - 1;
}

/// An n-qubit computational-basis label with its qubit count.
struct Bitstring {
  Word bits = 0;
  int n = 0;
};

/// Validates the Bitstring invariants (1 <= n <= 64, no bits above n-1).
Bitstring make_bitstring(Word bits, int n);

/// A canonical subset of the n-qubit computational basis: strictly
/// increasing elements, 1 <= size <= 2^n. Immutable after construction.
class Subset {
 public:
  /// Sorts the elements; throws std::invalid_argument on duplicates,
  /// out-of-range values, or empty input.
  Subset(std::vector<Word> elements, int n);

  int qubits() const noexcept { return n_; }
  std::size_t size() const noexcept { return elements_.size(); }
  std::span<const Word> elements() const noexcept { return elements_; }
  Word operator[](std::size_t i) const { return elements_[i]; }

  bool contains(Word z) const;

  friend bool operator==(const Subset&, const Subset&) = default;

 private:
  std::vector<Word> elements_;
  int n_;
};

/// The full basis {0, ..., 2^n - 1}. Requires n small enough to materialize.
Subset full_subset(int n);

/// XOR of the two elements of a size-2 subset. Never zero.
Bitstring relative_coordinate(const Subset& s);

/// All C(|s|, m) sub-subsets of s with cardinality m, each exactly once,
/// in colexicographic order of the chosen index combination.
std::vector<Subset> sub_subsets(const Subset& s, int m);

/// `count` i.i.d. uniform size-m sub-subsets of s. Deterministic under rng.
std::vector<Subset> sub_subsets_sample(const Subset& s, int m, int count, CounterRng& rng);

/// Keeps a small span of words sorted ascending (adaptive insertion sort;
/// falls back to std::sort for long inputs).
void sort_elements(std::span<Word> v);

}  // namespace pseudotherm
