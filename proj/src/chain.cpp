// Copyright 2026 The pseudotherm Authors
// SPDX-License-Identifier: Apache-2.0

#include "pseudotherm/chain.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstring>
#include <deque>
#include <stdexcept>

#include "pseudotherm/errors.hpp"

namespace pseudotherm {

TransitionOperator::TransitionOperator(GateFamily family, int m, std::uint64_t index_budget)
    : family_(family), m_(m), indexer_(family.qubits(), m, index_budget) {}

void TransitionOperator::apply(std::span<const double> in, std::span<double> out) const {
  const std::uint64_t dim = indexer_.dimension();
  if (in.size() != dim || out.size() != dim) {
    throw std::invalid_argument("apply: vector length does not match C(2^n, m)");
  }
  const std::uint64_t gates = family_.size();
  const double inv = 1.0 / static_cast<double>(gates);

  if (!neighbors_.empty()) {
    const std::uint32_t* nbr = neighbors_.data();
    for (std::uint64_t r = 0; r < dim; ++r) {
      double acc = 0;
      const std::uint32_t* row = nbr + r * gates;
      for (std::uint64_t g = 0; g < gates; ++g) acc += in[row[g]];
      out[r] = acc * inv;
    }
    return;
  }

  const std::uint64_t ground = Word{1} << family_.qubits();
  std::vector<Word> cur(static_cast<std::size_t>(m_));
  std::vector<Word> tmp(static_cast<std::size_t>(m_));
  for (int i = 0; i < m_; ++i) cur[static_cast<std::size_t>(i)] = static_cast<Word>(i);
  for (std::uint64_t r = 0; r < dim; ++r) {
    double acc = 0;
    for (std::uint64_t g = 0; g < gates; ++g) {
      std::copy(cur.begin(), cur.end(), tmp.begin());
      family_.apply_to_elements(g, tmp);
      acc += in[indexer_.rank(tmp)];
    }
    out[r] = acc * inv;
    SubsetIndexer::next_combination(cur, ground);
  }
}

SubsetDistribution TransitionOperator::step(const SubsetDistribution& p) const {
  if (p.qubits() != family_.qubits() || p.subset_size() != m_) {
    throw std::invalid_argument("step: distribution (n, m) mismatch");
  }
  std::vector<double> out(indexer_.dimension());
  apply(p.dense(), out);
  auto q = SubsetDistribution::from_dense(p.qubits(), m_, std::move(out));
  q.normalize();
  return q;
}

bool TransitionOperator::build_neighbor_cache(std::uint64_t max_bytes) {
  if (!neighbors_.empty()) return true;
  const std::uint64_t dim = indexer_.dimension();
  const std::uint64_t gates = family_.size();
  const std::uint64_t bytes = dim * gates * sizeof(std::uint32_t);
  if (dim > std::uint64_t{1} << 32 || bytes > max_bytes) return false;
  neighbors_.resize(dim * gates);
  const std::uint64_t ground = Word{1} << family_.qubits();
  std::vector<Word> cur(static_cast<std::size_t>(m_));
  std::vector<Word> tmp(static_cast<std::size_t>(m_));
  for (int i = 0; i < m_; ++i) cur[static_cast<std::size_t>(i)] = static_cast<Word>(i);
  for (std::uint64_t r = 0; r < dim; ++r) {
    std::uint32_t* row = neighbors_.data() + r * gates;
    for (std::uint64_t g = 0; g < gates; ++g) {
      std::copy(cur.begin(), cur.end(), tmp.begin());
      family_.apply_to_elements(g, tmp);
      row[g] = static_cast<std::uint32_t>(indexer_.rank(tmp));
    }
    SubsetIndexer::next_combination(cur, ground);
  }
  return true;
}

Eigen::SparseMatrix<double> TransitionOperator::to_sparse() const {
  const std::uint64_t dim = indexer_.dimension();
  if (dim > std::uint64_t{1} << 31) {
    throw CapacityError("explicit sparse matrix too large", dim, std::uint64_t{1} << 31);
  }
  const std::uint64_t gates = family_.size();
  const double inv = 1.0 / static_cast<double>(gates);
  std::vector<Eigen::Triplet<double>> trips;
  trips.reserve(dim * std::min<std::uint64_t>(gates + 1, 64));
  const std::uint64_t ground = Word{1} << family_.qubits();
  std::vector<Word> cur(static_cast<std::size_t>(m_));
  std::vector<Word> tmp(static_cast<std::size_t>(m_));
  for (int i = 0; i < m_; ++i) cur[static_cast<std::size_t>(i)] = static_cast<Word>(i);
  for (std::uint64_t col = 0; col < dim; ++col) {
    for (std::uint64_t g = 0; g < gates; ++g) {
      std::copy(cur.begin(), cur.end(), tmp.begin());
      family_.apply_to_elements(g, tmp);
      trips.emplace_back(static_cast<Eigen::Index>(indexer_.rank(tmp)),
                         static_cast<Eigen::Index>(col), inv);
    }
    SubsetIndexer::next_combination(cur, ground);
  }
  Eigen::SparseMatrix<double> gamma(static_cast<Eigen::Index>(dim),
                                    static_cast<Eigen::Index>(dim));
  gamma.setFromTriplets(trips.begin(), trips.end());  // duplicates accumulate
  return gamma;
}

bool TransitionOperator::has_self_loop(const Subset& s) const {
  if (s.qubits() != family_.qubits() || static_cast<int>(s.size()) != m_) {
    throw std::invalid_argument("has_self_loop: subset (n, m) mismatch");
  }
  std::vector<Word> tmp(s.size());
  for (std::uint64_t g = 0; g < family_.size(); ++g) {
    std::copy(s.elements().begin(), s.elements().end(), tmp.begin());
    family_.apply_to_elements(g, tmp);
    if (std::equal(tmp.begin(), tmp.end(), s.elements().begin())) return true;
  }
  return false;
}

LinearOperator TransitionOperator::linear_operator() const {
  return LinearOperator{indexer_.dimension(),
                        [this](std::span<const double> in, std::span<double> out) {
                          apply(in, out);
                        }};
}

ComponentResult reachable_component(const GateFamily& family, const Subset& start,
                                    std::uint64_t index_budget, bool keep_members) {
  SubsetIndexer idx(family.qubits(), static_cast<int>(start.size()), index_budget);
  const std::uint64_t dim = idx.dimension();
  std::vector<bool> seen(dim, false);
  std::deque<std::uint64_t> frontier;
  const std::uint64_t r0 = idx.rank(start.elements());
  seen[r0] = true;
  frontier.push_back(r0);
  std::uint64_t count = 1;
  std::vector<Word> cur(start.size());
  std::vector<Word> tmp(start.size());
  while (!frontier.empty()) {
    const std::uint64_t r = frontier.front();
    frontier.pop_front();
    idx.unrank(r, cur);
    for (std::uint64_t g = 0; g < family.size(); ++g) {
      std::copy(cur.begin(), cur.end(), tmp.begin());
      family.apply_to_elements(g, tmp);
      const std::uint64_t t = idx.rank(tmp);
      if (!seen[t]) {
        seen[t] = true;
        ++count;
        frontier.push_back(t);
      }
    }
  }
  ComponentResult res;
  res.size = count;
  res.dimension = dim;
  res.spans_all = (count == dim);
  if (keep_members) {
    std::vector<std::uint64_t> members;
    members.reserve(count);
    for (std::uint64_t r = 0; r < dim; ++r) {
      if (seen[r]) members.push_back(r);
    }
    res.members = std::move(members);
  }
  return res;
}

RelativeCoordinateChain::RelativeCoordinateChain(int n) : n_(n) {
  if (n < 3 || n > 30) {
    throw std::invalid_argument("relative chain requires n in [3, 30]");
  }
}

void RelativeCoordinateChain::apply(std::span<const double> in, std::span<double> out) const {
  const std::uint64_t dim = dimension();
  if (in.size() != dim || out.size() != dim) {
    throw std::invalid_argument("apply: vector length does not match 2^n - 1");
  }
  const double invn = 1.0 / n_;
  // State r is stored at index r - 1 (the zero word is excluded).
  for (std::uint64_t r = 1; r <= dim; ++r) {
    double acc = 0;
    for (int i = 0; i < n_; ++i) {
      const int left = (i + n_ - 1) % n_;
      const int right = (i + 1) % n_;
      const bool active = ((r >> left) & 1) || ((r >> right) & 1);
      if (!active) {
        acc += in[r - 1];
      } else {
        const std::uint64_t flipped = r ^ (std::uint64_t{1} << i);
        acc += 0.5 * in[r - 1] + 0.5 * in[flipped - 1];
      }
    }
    out[r - 1] = acc * invn;
  }
}

LinearOperator RelativeCoordinateChain::linear_operator() const {
  return LinearOperator{dimension(),
                        [this](std::span<const double> in, std::span<double> out) {
                          apply(in, out);
                        }};
}

double multipole_residual(const TransitionOperator& op, Word a) {
  if (op.family().kind() != GateKind::kLocalCcx) {
    throw std::invalid_argument("multipole_residual requires a local_ccx family");
  }
  const int n = op.qubits();
  if ((a & ~full_mask(n)) != 0) {
    throw std::invalid_argument("multipole word has bits above n-1");
  }
  const std::uint64_t dim = op.dimension();
  const int m = op.subset_size();
  std::vector<double> f(dim);
  std::vector<Word> cur(static_cast<std::size_t>(m));
  for (int i = 0; i < m; ++i) cur[static_cast<std::size_t>(i)] = static_cast<Word>(i);
  const std::uint64_t ground = Word{1} << n;
  for (std::uint64_t r = 0; r < dim; ++r) {
    int signed_count = 0;
    for (Word z : cur) signed_count += (std::popcount(a & z) & 1) ? -1 : 1;
    f[r] = static_cast<double>(signed_count) / m;
    SubsetIndexer::next_combination(cur, ground);
  }
  std::vector<double> gf(dim);
  op.apply(f, gf);
  const double lambda = 1.0 - static_cast<double>(std::popcount(a)) / (2.0 * n);
  double worst = 0;
  for (std::uint64_t r = 0; r < dim; ++r) {
    worst = std::max(worst, std::abs(gf[r] - lambda * f[r]));
  }
  return worst;
}

}  // namespace pseudotherm
