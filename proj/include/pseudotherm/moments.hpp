// Copyright 2026 The pseudotherm Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <optional>
#include <vector>

#include "pseudotherm/distribution.hpp"
#include "pseudotherm/subset.hpp"

namespace pseudotherm {

/// Ceiling on the dimension of the m-copy symmetric subspace used for exact
/// moment operators.
inline constexpr std::uint64_t kDefaultTypeBudget = 20'000;

/// Orthonormal basis of the m-copy symmetric subspace over a D-dimensional
/// single-copy space, indexed by multiplicity vectors ("types"). A type is
/// stored as a non-decreasing m-tuple of basis labels; its rank is the colex
/// rank of the strictly increasing tuple (z_i + i). Types with all distinct
/// labels ("unique types") correspond exactly to size-m subsets.
class TypeBasis {
 public:
  TypeBasis(std::uint64_t d, int m, std::uint64_t budget = kDefaultTypeBudget);

  std::uint64_t single_copy_dim() const noexcept { return d_; }
  int copies() const noexcept { return m_; }
  std::uint64_t dimension() const noexcept { return dim_; }

  std::uint64_t rank(std::span<const Word> type) const;
  void unrank(std::uint64_t r, std::span<Word> out) const;

  static bool is_unique(std::span<const Word> type);

  /// Multinomial m! / prod(multiplicities!) of the type, as a double.
  static double tuple_multinomial(std::span<const Word> type);

 private:
  std::uint64_t d_;
  int m_;
  std::uint64_t dim_;
  SubsetIndexer strict_;  // combinations of {0, ..., d+m-2} of size m
};

/// Exact m-copy moment operator in the type basis, with its metadata.
struct MomentOperator {
  std::uint64_t d = 0;  // single-copy dimension
  int m = 0;            // copy count
  Eigen::MatrixXd mat;  // dimension C(d+m-1, m), symmetric PSD, unit trace
};

/// Maximally mixed state on the symmetric subspace (diagonal in types).
MomentOperator haar_moment(std::uint64_t d, int m,
                           std::uint64_t budget = kDefaultTypeBudget);

/// Moment of the ensemble of equal-weight superpositions over S ~ p with
/// i.i.d. uniform sign functions. The sign average is exact: a matrix
/// element between two m-tuples survives iff every basis label appears an
/// even number of times in their concatenation.
MomentOperator subset_phase_moment(const SubsetDistribution& p, int m,
                                   std::uint64_t budget = kDefaultTypeBudget);

/// Moment of the ensemble of phaseless equal-weight superpositions, S ~ p.
MomentOperator subset_moment(const SubsetDistribution& p, int m,
                             std::uint64_t budget = kDefaultTypeBudget);

/// Trace norm of the difference, via symmetric eigendecomposition.
double trace_distance(const MomentOperator& a, const MomentOperator& b);

double trace_norm(const Eigen::MatrixXd& a);

/// The subset-overlap deviation matrix over pairs (S', S'') of size-m
/// subsets: entry = C(K,m)^{-1} C(K,m+delta) * (pushforward deviation from
/// uniform at S' union S''), delta = |S' \ S''|. Its trace norm tracks the
/// distinguishability of the phaseless ensemble; its diagonal reproduces
/// twice the TV distance of the size-m pushforward. Requires m <= K/2.
struct MMatrixResult {
  Eigen::MatrixXd mat;
  double trace_norm = 0.0;
};

MMatrixResult m_matrix(const SubsetDistribution& p, int m,
                       std::uint64_t budget = kDefaultIndexBudget);

/// Von Neumann entropy (bits) of the reduced state of the equal-weight
/// superposition over S (optional per-element signs) across the given site
/// bipartition. cut_mask selects the A sites; both sides must be nonempty.
/// Bounded by min(|A|, |B|, log2 |S|); singular values below 1e-14 are
/// dropped.
double entanglement_entropy(const Subset& s, Word cut_mask,
                            const std::vector<int>* signs = nullptr);

}  // namespace pseudotherm
