// Copyright 2026 The pseudotherm Authors
// SPDX-License-Identifier: Apache-2.0

#include "pseudotherm/subset_index.hpp"

#include <stdexcept>
#include <string>

#include "pseudotherm/errors.hpp"

namespace pseudotherm {

namespace {

std::uint64_t checked_dim(std::uint64_t ground, int m, std::uint64_t budget) {
  if (m < 1 || static_cast<std::uint64_t>(m) > ground) {
    throw std::invalid_argument("subset size must be in [1, ground]");
  }
  // The row table itself must stay reasonable even when the budget is lifted.
  if (ground > (std::uint64_t{1} << 31) / static_cast<std::uint64_t>(m > 1 ? m : 1)) {
    throw CapacityError("rank table for ground set too large", ground, std::uint64_t{1} << 31);
  }
  const std::uint64_t dim = binomial_saturating(ground, static_cast<std::uint64_t>(m));
  if (budget != kUnlimitedIndexBudget && (dim == kBinomialOverflow || dim > budget)) {
    throw CapacityError("subset space C(" + std::to_string(ground) + ", " + std::to_string(m) +
                            ") exceeds the dense-index budget",
                        dim, budget);
  }
  return dim;
}

std::uint64_t qubit_ground(int n) {
  if (n < 1 || n > kMaxQubits - 1) {
    throw std::invalid_argument("qubit count must be in [1, 63] for dense indexing");
  }
  return Word{1} << n;
}

}  // namespace

SubsetIndexer::SubsetIndexer(int n, int m, std::uint64_t budget)
    : SubsetIndexer(qubit_ground(n), m, budget) {
  n_ = n;
}

SubsetIndexer::SubsetIndexer(std::uint64_t ground, int m, std::uint64_t budget)
    : ground_(ground),
      n_(-1),
      m_(m),
      dim_(checked_dim(ground, m, budget)),
      rows_(ground, static_cast<unsigned>(m)) {}

std::uint64_t SubsetIndexer::rank(std::span<const Word> elems) const {
  if (elems.size() != static_cast<std::size_t>(m_)) {
    throw std::invalid_argument("rank: expected " + std::to_string(m_) + " elements");
  }
  std::uint64_t r = 0;
  for (int i = 0; i < m_; ++i) {
    const std::uint64_t c = rows_(elems[static_cast<std::size_t>(i)], static_cast<unsigned>(i + 1));
    if (c == kBinomialOverflow) {
      throw std::overflow_error("rank: binomial overflow (element out of indexed range)");
    }
    r += c;
  }
  return r;
}

SubsetRank SubsetIndexer::rank(const Subset& s) const {
  if (n_ >= 0 && s.qubits() != n_) {
    throw std::invalid_argument("rank: qubit count mismatch");
  }
  return SubsetRank{rank(s.elements()), m_, n_};
}

void SubsetIndexer::unrank(std::uint64_t r, std::span<Word> out) const {
  if (r >= dim_) {
    throw std::out_of_range("unrank: rank " + std::to_string(r) + " >= dimension " +
                            std::to_string(dim_));
  }
  if (out.size() != static_cast<std::size_t>(m_)) {
    throw std::invalid_argument("unrank: output span has wrong size");
  }
  std::uint64_t hi = ground_;  // exclusive upper bound for the next element
  for (int j = m_; j >= 1; --j) {
    // Largest s in [j-1, hi) with C(s, j) <= r.
    std::uint64_t lo = static_cast<std::uint64_t>(j - 1);
    std::uint64_t hi_search = hi;
    while (lo + 1 < hi_search) {
      const std::uint64_t mid = lo + (hi_search - lo) / 2;
      const std::uint64_t c = rows_(mid, static_cast<unsigned>(j));
      if (c != kBinomialOverflow && c <= r) {
        lo = mid;
      } else {
        hi_search = mid;
      }
    }
    out[static_cast<std::size_t>(j - 1)] = lo;
    r -= rows_(lo, static_cast<unsigned>(j));
    hi = lo;
  }
}

Subset SubsetIndexer::unrank_subset(std::uint64_t r) const {
  std::vector<Word> elems(static_cast<std::size_t>(m_));
  unrank(r, elems);
  return Subset(std::move(elems), n_ >= 0 ? n_ : kMaxQubits);
}

bool SubsetIndexer::next_combination(std::span<Word> elems, std::uint64_t ground) {
  const std::size_t m = elems.size();
  std::size_t i = 0;
  while (i < m) {
    const Word limit = (i + 1 < m) ? elems[i + 1] : static_cast<Word>(ground);
    if (elems[i] + 1 < limit) break;
    ++i;
  }
  if (i == m) {
    for (std::size_t j = 0; j < m; ++j) elems[j] = static_cast<Word>(j);
    return false;
  }
  ++elems[i];
  for (std::size_t j = 0; j < i; ++j) elems[j] = static_cast<Word>(j);
  return true;
}

}  // namespace pseudotherm
