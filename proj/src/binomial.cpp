// Copyright 2026 The pseudotherm Authors
// SPDX-License-Identifier: Apache-2.0

#include "pseudotherm/binomial.hpp"

#include <stdexcept>
#include <string>

namespace pseudotherm {

namespace {

// Saturation cap well below 2^64 so budget comparisons stay exact.
constexpr std::uint64_t kCap = std::uint64_t{1} << 62;

}  // namespace

std::uint64_t binomial_saturating(std::uint64_t n, std::uint64_t k) noexcept {
  if (k > n) return 0;
  if (k > n - k) k = n - k;
  unsigned __int128 r = 1;
  for (std::uint64_t i = 1; i <= k; ++i) {
    r = r * (n - k + i);  // divisible by i! after i consecutive factors
    r /= i;
    if (r > kCap) return kBinomialOverflow;
  }
  return static_cast<std::uint64_t>(r);
}

std::uint64_t binomial_checked(std::uint64_t n, std::uint64_t k) {
  const std::uint64_t r = binomial_saturating(n, k);
  if (r == kBinomialOverflow) {
    throw std::overflow_error("binomial(" + std::to_string(n) + ", " + std::to_string(k) +
                              ") exceeds 64-bit range");
  }
  return r;
}

BinomialRows::BinomialRows(std::uint64_t max_s, unsigned max_j)
    : max_s_(max_s), max_j_(max_j) {
  if (max_j < 2) return;
  rows_.resize(max_j - 1);
  // C(s, j) = C(s-1, j-1) + C(s-1, j), with saturating addition.
  std::vector<std::uint64_t> prev(max_s + 1);  // row j-1
  for (std::uint64_t s = 0; s <= max_s; ++s) prev[s] = s;
  for (unsigned j = 2; j <= max_j; ++j) {
    auto& row = rows_[j - 2];
    row.assign(max_s + 1, 0);
    for (std::uint64_t s = j; s <= max_s; ++s) {
      const std::uint64_t a = prev[s - 1];
      const std::uint64_t b = row[s - 1];
      if (a == kBinomialOverflow || b == kBinomialOverflow || a + b > kCap) {
        row[s] = kBinomialOverflow;
      } else {
        row[s] = a + b;
      }
    }
    prev = row;
  }
}

}  // namespace pseudotherm
