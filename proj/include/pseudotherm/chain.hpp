// Copyright 2026 The pseudotherm Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <Eigen/SparseCore>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "pseudotherm/distribution.hpp"
#include "pseudotherm/gates.hpp"
#include "pseudotherm/subset_index.hpp"

namespace pseudotherm {

/// Matrix-free symmetric operator: y = A x on length-`dim` vectors.
struct LinearOperator {
  std::uint64_t dim = 0;
  std::function<void(std::span<const double>, std::span<double>)> apply;
};

/// Soft cap on the optional gather-table acceleration structure.
inline constexpr std::uint64_t kDefaultCacheBytes = 1'500'000'000;

/// The Markov transition operator induced by a gate family on the size-m
/// subset space: one step draws a gate uniformly and applies it to every
/// element. Column-stochastic and symmetric for involutive families.
/// Matrix-free by default; an explicit sparse form is available below the
/// index budget, and a precomputed neighbor table can accelerate apply().
class TransitionOperator {
 public:
  TransitionOperator(GateFamily family, int m,
                     std::uint64_t index_budget = kDefaultIndexBudget);

  const GateFamily& family() const noexcept { return family_; }
  int subset_size() const noexcept { return m_; }
  int qubits() const noexcept { return family_.qubits(); }
  std::uint64_t dimension() const noexcept { return indexer_.dimension(); }
  const SubsetIndexer& indexer() const noexcept { return indexer_; }

  /// out = Gamma * in. Uses the neighbor table when built.
  void apply(std::span<const double> in, std::span<double> out) const;

  /// Dense-distribution step with output renormalized against drift.
  SubsetDistribution step(const SubsetDistribution& p) const;

  /// Builds the rank gather table (dimension * |G| u32 entries) if it fits
  /// max_bytes; returns whether the table is present afterwards.
  bool build_neighbor_cache(std::uint64_t max_bytes = kDefaultCacheBytes);
  bool has_neighbor_cache() const noexcept { return !neighbors_.empty(); }

  /// Explicit sparse form, rank-indexed both ways; per-column nonzeros
  /// <= |G| + 1 (all gate images plus the aggregated self-loop).
  Eigen::SparseMatrix<double> to_sparse() const;

  /// True iff some gate maps S to itself as a set.
  bool has_self_loop(const Subset& s) const;

  LinearOperator linear_operator() const;

 private:
  GateFamily family_;
  int m_;
  SubsetIndexer indexer_;
  std::vector<std::uint32_t> neighbors_;  // [rank * |G| + g] when built
};

/// Connected component of the subset graph under all gates of the family,
/// from BFS. `members` is filled (sorted ranks) when keep_members is set.
struct ComponentResult {
  std::uint64_t size = 0;
  std::uint64_t dimension = 0;
  bool spans_all = false;
  std::optional<std::vector<std::uint64_t>> members;
};

ComponentResult reachable_component(const GateFamily& family, const Subset& start,
                                    std::uint64_t index_budget = kDefaultIndexBudget,
                                    bool keep_members = false);

/// The reduced pair walk on nonzero n-bit words: each step draws a site i
/// uniformly; if both neighbors i-1, i+1 carry 0 the word is unchanged,
/// otherwise bit i flips with probability 1/2. Symmetric and stochastic on
/// the 2^n - 1 nonzero words; its second eigenvalue matches the leading
/// nontrivial eigenvalue of the full m = 2 subset chain.
class RelativeCoordinateChain {
 public:
  explicit RelativeCoordinateChain(int n);  // n in [3, 30]

  int qubits() const noexcept { return n_; }
  std::uint64_t dimension() const noexcept { return (Word{1} << n_) - 1; }

  void apply(std::span<const double> in, std::span<double> out) const;
  LinearOperator linear_operator() const;

 private:
  int n_;
};

/// Builds the parity-imbalance observable f_a(S) = (1/m) sum_{z in S}
/// (-1)^{a.z} over the subset space and returns ||Gamma f_a - lambda_a f_a||_inf
/// with lambda_a = 1 - |a| / (2n). LocalCcx families only.
double multipole_residual(const TransitionOperator& op, Word a);

}  // namespace pseudotherm
