// Copyright 2026 The pseudotherm Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "pseudotherm/subset_index.hpp"

namespace pseudotherm {

/// A probability distribution over the size-m subsets of the n-qubit basis,
/// indexed by colex SubsetRank. Dense storage for in-budget spaces; sparse
/// (sorted rank -> probability pairs) otherwise. Entries are nonnegative and
/// sum to 1 within 1e-12 after normalize().
class SubsetDistribution {
 public:
  static SubsetDistribution dense_uniform(int n, int m,
                                          std::uint64_t budget = kDefaultIndexBudget);
  static SubsetDistribution dense_delta(int n, int m, std::uint64_t rank,
                                        std::uint64_t budget = kDefaultIndexBudget);
  static SubsetDistribution from_dense(int n, int m, std::vector<double> probs);
  /// entries need not be sorted; duplicates are accumulated.
  static SubsetDistribution from_sparse(int n, int m,
                                        std::vector<std::pair<std::uint64_t, double>> entries);

  int qubits() const noexcept { return n_; }
  int subset_size() const noexcept { return m_; }
  bool is_dense() const noexcept { return dense_storage_; }

  /// C(2^n, m); saturates to kBinomialOverflow for huge spaces.
  std::uint64_t dimension() const noexcept { return dim_; }

  const std::vector<double>& dense() const;
  std::vector<double>& dense();
  const std::vector<std::pair<std::uint64_t, double>>& sparse() const;

  double probability(std::uint64_t rank) const;
  double sum() const;
  void normalize();

 private:
  SubsetDistribution(int n, int m);

  int n_;
  int m_;
  std::uint64_t dim_;
  bool dense_storage_ = true;
  std::vector<double> dense_;
  std::vector<std::pair<std::uint64_t, double>> sparse_;  // sorted by rank
};

/// Half the L1 difference. Requires matching (n, m).
double tv_distance(const SubsetDistribution& p, const SubsetDistribution& q);

/// TV distance to the uniform distribution on the same space, computed
/// without materializing it.
double tv_to_uniform(const SubsetDistribution& p);

/// TV between two raw dense vectors of equal length.
double tv_distance_dense(const std::vector<double>& p, const std::vector<double>& q);

/// TV of a raw dense vector to uniform.
double tv_to_uniform_dense(const std::vector<double>& p);

}  // namespace pseudotherm
