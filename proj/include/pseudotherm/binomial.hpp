// Copyright 2026 The pseudotherm Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <vector>

namespace pseudotherm {

/// Sentinel returned when a binomial coefficient does not fit the 63-bit
/// saturation cap. Saturated values compare correctly against any budget.
inline constexpr std::uint64_t kBinomialOverflow = ~std::uint64_t{0};

/// C(n, k) computed with 128-bit intermediates; returns kBinomialOverflow on
/// saturation, never a wrapped value.
std::uint64_t binomial_saturating(std::uint64_t n, std::uint64_t k) noexcept;

/// C(n, k); throws std::overflow_error instead of saturating.
std::uint64_t binomial_checked(std::uint64_t n, std::uint64_t k);

/// Pascal-style rows C(s, j) for s in [0, max_s], j in [0, max_j], built once
/// and used for O(1) lookups on the ranking hot path. Rows j = 0, 1 are
/// analytic (1 and s); rows j >= 2 are stored with saturating addition.
class BinomialRows {
 public:
  BinomialRows(std::uint64_t max_s, unsigned max_j);

  std::uint64_t operator()(std::uint64_t s, unsigned j) const {
    if (j == 0) return 1;
    if (j > s) return 0;
    if (j == 1) return s;
    return rows_[j - 2][s];
  }

  std::uint64_t max_s() const noexcept { return max_s_; }
  unsigned max_j() const noexcept { return max_j_; }

 private:
  std::uint64_t max_s_;
  unsigned max_j_;
  std::vector<std::vector<std::uint64_t>> rows_;  // rows_[j-2][s] = C(s, j)
};

}  // namespace pseudotherm
