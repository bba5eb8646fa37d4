// Copyright 2026 The pseudotherm Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <span>

#include "pseudotherm/binomial.hpp"
#include "pseudotherm/subset.hpp"

namespace pseudotherm {

/// Ceiling on the dimension of any densely indexed subset space.
inline constexpr std::uint64_t kDefaultIndexBudget = 20'000'000;

/// Budget sentinel for rank/unrank-only indexers (no dense vectors). The
/// ground-set row table must still fit in memory.
inline constexpr std::uint64_t kUnlimitedIndexBudget = ~std::uint64_t{0};

/// Colexicographic rank in [0, C(ground, m)) for a size-m subset.
struct SubsetRank {
  std::uint64_t rank = 0;
  int m = 0;
  int n = 0;
};

/// Dense colexicographic indexing of the size-m subsets of a ground set
/// {0, ..., ground-1}. rank(S) = sum_i C(s_i, i+1) over the sorted elements;
/// rank increments localize to the largest changed element, so re-ranking a
/// slightly perturbed subset is cheap. Construction is budget-gated.
class SubsetIndexer {
 public:
  /// Ground set {0, ..., 2^n - 1}.
  SubsetIndexer(int n, int m, std::uint64_t budget = kDefaultIndexBudget);
  /// Arbitrary ground size (used internally, e.g. for multiset indexing).
  SubsetIndexer(std::uint64_t ground, int m, std::uint64_t budget);

  std::uint64_t dimension() const noexcept { return dim_; }
  int subset_size() const noexcept { return m_; }
  std::uint64_t ground_size() const noexcept { return ground_; }
  int qubits() const noexcept { return n_; }  // -1 when ground is not 2^n

  /// elems strictly increasing, values < ground.
  std::uint64_t rank(std::span<const Word> elems) const;
  SubsetRank rank(const Subset& s) const;

  /// Inverse of rank (greedy colex decoding from the largest element down).
  /// Throws std::out_of_range when r >= dimension().
  void unrank(std::uint64_t r, std::span<Word> out) const;
  Subset unrank_subset(std::uint64_t r) const;

  /// Advances a strictly increasing combination to its colex successor
  /// (rank + 1). Returns false (and leaves elems at rank 0) after the last.
  static bool next_combination(std::span<Word> elems, std::uint64_t ground);

 private:
  std::uint64_t ground_;
  int n_;
  int m_;
  std::uint64_t dim_;
  BinomialRows rows_;
};

}  // namespace pseudotherm
