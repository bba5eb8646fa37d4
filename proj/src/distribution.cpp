// Copyright 2026 The pseudotherm Authors
// SPDX-License-Identifier: Apache-2.0

#include "pseudotherm/distribution.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace pseudotherm {

SubsetDistribution::SubsetDistribution(int n, int m) : n_(n), m_(m) {
  if (n < 1 || n > kMaxQubits - 1) {
    throw std::invalid_argument("distribution qubit count must be in [1, 63]");
  }
  if (m < 1 || static_cast<std::uint64_t>(m) > (Word{1} << n)) {
    throw std::invalid_argument("distribution subset size must be in [1, 2^n]");
  }
  dim_ = binomial_saturating(Word{1} << n, static_cast<std::uint64_t>(m));
}

SubsetDistribution SubsetDistribution::dense_uniform(int n, int m, std::uint64_t budget) {
  SubsetDistribution d(n, m);
  SubsetIndexer idx(n, m, budget);  // budget gate
  d.dense_.assign(idx.dimension(), 1.0 / static_cast<double>(idx.dimension()));
  return d;
}

SubsetDistribution SubsetDistribution::dense_delta(int n, int m, std::uint64_t rank,
                                                   std::uint64_t budget) {
  SubsetDistribution d(n, m);
  SubsetIndexer idx(n, m, budget);
  if (rank >= idx.dimension()) {
    throw std::out_of_range("delta rank out of range");
  }
  d.dense_.assign(idx.dimension(), 0.0);
  d.dense_[rank] = 1.0;
  return d;
}

SubsetDistribution SubsetDistribution::from_dense(int n, int m, std::vector<double> probs) {
  SubsetDistribution d(n, m);
  if (d.dim_ == kBinomialOverflow || probs.size() != d.dim_) {
    throw std::invalid_argument("dense vector length does not match C(2^n, m)");
  }
  d.dense_ = std::move(probs);
  return d;
}

SubsetDistribution SubsetDistribution::from_sparse(
    int n, int m, std::vector<std::pair<std::uint64_t, double>> entries) {
  SubsetDistribution d(n, m);
  d.dense_storage_ = false;
  std::sort(entries.begin(), entries.end());
  for (const auto& [rank, prob] : entries) {
    if (rank >= d.dim_) throw std::out_of_range("sparse rank out of range");
    if (prob < 0) throw std::invalid_argument("negative probability");
    if (!d.sparse_.empty() && d.sparse_.back().first == rank) {
      d.sparse_.back().second += prob;
    } else {
      d.sparse_.emplace_back(rank, prob);
    }
  }
  return d;
}

const std::vector<double>& SubsetDistribution::dense() const {
  if (!dense_storage_) throw std::logic_error("distribution is sparse");
  return dense_;
}

std::vector<double>& SubsetDistribution::dense() {
  if (!dense_storage_) throw std::logic_error("distribution is sparse");
  return dense_;
}

const std::vector<std::pair<std::uint64_t, double>>& SubsetDistribution::sparse() const {
  if (dense_storage_) throw std::logic_error("distribution is dense");
  return sparse_;
}

double SubsetDistribution::probability(std::uint64_t rank) const {
  if (dense_storage_) return dense_.at(rank);
  const auto it = std::lower_bound(sparse_.begin(), sparse_.end(),
                                   std::make_pair(rank, 0.0));
  return (it != sparse_.end() && it->first == rank) ? it->second : 0.0;
}

double SubsetDistribution::sum() const {
  double s = 0;
  if (dense_storage_) {
    for (double v : dense_) s += v;
  } else {
    for (const auto& [_, v] : sparse_) s += v;
  }
  return s;
}

void SubsetDistribution::normalize() {
  const double s = sum();
  if (s <= 0) throw std::domain_error("cannot normalize a zero distribution");
  if (dense_storage_) {
    for (double& v : dense_) v /= s;
  } else {
    for (auto& [_, v] : sparse_) v /= s;
  }
}

double tv_distance_dense(const std::vector<double>& p, const std::vector<double>& q) {
  if (p.size() != q.size()) throw std::invalid_argument("tv_distance: dimension mismatch");
  double acc = 0;
  for (std::size_t i = 0; i < p.size(); ++i) acc += std::abs(p[i] - q[i]);
  return 0.5 * acc;
}

double tv_to_uniform_dense(const std::vector<double>& p) {
  const double u = 1.0 / static_cast<double>(p.size());
  double acc = 0;
  for (double v : p) acc += std::abs(v - u);
  return 0.5 * acc;
}

double tv_distance(const SubsetDistribution& p, const SubsetDistribution& q) {
  if (p.qubits() != q.qubits() || p.subset_size() != q.subset_size()) {
    throw std::invalid_argument("tv_distance: (n, m) mismatch");
  }
  if (p.is_dense() && q.is_dense()) return tv_distance_dense(p.dense(), q.dense());
  if (!p.is_dense() && !q.is_dense()) {
    // Merge walk over the two sorted supports.
    const auto& a = p.sparse();
    const auto& b = q.sparse();
    double acc = 0;
    std::size_t i = 0, j = 0;
    while (i < a.size() || j < b.size()) {
      if (j == b.size() || (i < a.size() && a[i].first < b[j].first)) {
        acc += std::abs(a[i++].second);
      } else if (i == a.size() || b[j].first < a[i].first) {
        acc += std::abs(b[j++].second);
      } else {
        acc += std::abs(a[i++].second - b[j++].second);
      }
    }
    return 0.5 * acc;
  }
  // Mixed: iterate the dense side, correcting at the sparse support.
  const SubsetDistribution& dense = p.is_dense() ? p : q;
  const SubsetDistribution& sparse = p.is_dense() ? q : p;
  double acc = 0;
  for (double v : dense.dense()) acc += std::abs(v);
  for (const auto& [rank, v] : sparse.sparse()) {
    const double dv = dense.dense()[rank];
    acc += std::abs(dv - v) - std::abs(dv);
  }
  return 0.5 * acc;
}

double tv_to_uniform(const SubsetDistribution& p) {
  if (p.is_dense()) return tv_to_uniform_dense(p.dense());
  if (p.dimension() == kBinomialOverflow) {
    throw std::domain_error("tv_to_uniform: subset space too large to compare");
  }
  const double u = 1.0 / static_cast<double>(p.dimension());
  double acc = 0;
  std::uint64_t support = 0;
  for (const auto& [_, v] : p.sparse()) {
    acc += std::abs(v - u);
    ++support;
  }
  acc += static_cast<double>(p.dimension() - support) * u;
  return 0.5 * acc;
}

}  // namespace pseudotherm
