// Copyright 2026 The pseudotherm Authors
// SPDX-License-Identifier: Apache-2.0

#include "pseudotherm/phi.hpp"

#include <stdexcept>

#include "pseudotherm/binomial.hpp"
#include "pseudotherm/subset_index.hpp"

namespace pseudotherm {

namespace {

// Adds w/C(K,m) at every size-m sub-subset of `elems` (strictly increasing,
// length K) to the dense output vector.
void scatter_sub_subsets(std::span<const Word> elems, int m, double weight,
                         const SubsetIndexer& out_idx, std::vector<double>& out) {
  const int k = static_cast<int>(elems.size());
  std::vector<int> pick(static_cast<std::size_t>(m));
  std::vector<Word> sub(static_cast<std::size_t>(m));
  for (int i = 0; i < m; ++i) pick[static_cast<std::size_t>(i)] = i;
  for (;;) {
    for (int i = 0; i < m; ++i) {
      sub[static_cast<std::size_t>(i)] = elems[static_cast<std::size_t>(pick[i])];
    }
    out[out_idx.rank(sub)] += weight;
    int i = 0;
    while (i < m && pick[i] + 1 == (i + 1 < m ? pick[i + 1] : k)) ++i;
    if (i == m) break;
    ++pick[i];
    for (int j = 0; j < i; ++j) pick[j] = j;
  }
}

}  // namespace

SubsetDistribution phi_map(const SubsetDistribution& p, int m, std::uint64_t budget) {
  const int k = p.subset_size();
  if (m < 1 || m > k) {
    throw std::invalid_argument("phi_map: target size must be in [1, K]");
  }
  const int n = p.qubits();
  SubsetIndexer out_idx(n, m, budget);
  std::vector<double> out(out_idx.dimension(), 0.0);
  const double inv = 1.0 / static_cast<double>(binomial_checked(static_cast<std::uint64_t>(k),
                                                                static_cast<std::uint64_t>(m)));
  if (p.is_dense()) {
    SubsetIndexer in_idx(n, k, budget);
    std::vector<Word> elems(static_cast<std::size_t>(k));
    for (int i = 0; i < k; ++i) elems[static_cast<std::size_t>(i)] = static_cast<Word>(i);
    const std::uint64_t ground = Word{1} << n;
    for (std::uint64_t r = 0; r < in_idx.dimension(); ++r) {
      const double w = p.dense()[r];
      if (w != 0.0) scatter_sub_subsets(elems, m, w * inv, out_idx, out);
      SubsetIndexer::next_combination(elems, ground);
    }
  } else {
    // Sparse inputs may live on a space far beyond the dense budget; only
    // unranking is needed there.
    SubsetIndexer in_idx(n, k, kUnlimitedIndexBudget);
    std::vector<Word> elems(static_cast<std::size_t>(k));
    for (const auto& [rank, w] : p.sparse()) {
      if (w == 0.0) continue;
      in_idx.unrank(rank, elems);
      scatter_sub_subsets(elems, m, w * inv, out_idx, out);
    }
  }
  auto result = SubsetDistribution::from_dense(n, m, std::move(out));
  result.normalize();
  return result;
}

SubsetDistribution induced_initial(const Subset& s0, int m, std::uint64_t budget) {
  const int k = static_cast<int>(s0.size());
  if (m < 1 || m > k) {
    throw std::invalid_argument("induced_initial: target size must be in [1, |S|]");
  }
  SubsetIndexer out_idx(s0.qubits(), m, budget);
  std::vector<double> out(out_idx.dimension(), 0.0);
  const double inv = 1.0 / static_cast<double>(binomial_checked(static_cast<std::uint64_t>(k),
                                                                static_cast<std::uint64_t>(m)));
  scatter_sub_subsets(s0.elements(), m, inv, out_idx, out);
  return SubsetDistribution::from_dense(s0.qubits(), m, std::move(out));
}

}  // namespace pseudotherm
