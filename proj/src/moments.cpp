// Copyright 2026 The pseudotherm Authors
// SPDX-License-Identifier: Apache-2.0

#include "pseudotherm/moments.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <map>
#include <stdexcept>

#include "pseudotherm/binomial.hpp"
#include "pseudotherm/errors.hpp"
#include "pseudotherm/phi.hpp"

namespace pseudotherm {

TypeBasis::TypeBasis(std::uint64_t d, int m, std::uint64_t budget)
    : d_(d),
      m_(m),
      dim_(0),
      strict_(d + static_cast<std::uint64_t>(m) - 1, m, kUnlimitedIndexBudget) {
  if (d < 1 || m < 1) throw std::invalid_argument("type basis needs d >= 1, m >= 1");
  dim_ = binomial_saturating(d + static_cast<std::uint64_t>(m) - 1,
                             static_cast<std::uint64_t>(m));
  if (dim_ == kBinomialOverflow || dim_ > budget) {
    throw CapacityError("symmetric-subspace dimension C(d+m-1, m) exceeds the moment budget",
                        dim_, budget);
  }
}

std::uint64_t TypeBasis::rank(std::span<const Word> type) const {
  if (type.size() != static_cast<std::size_t>(m_)) {
    throw std::invalid_argument("type rank: wrong tuple length");
  }
  std::vector<Word> strict(type.size());
  for (std::size_t i = 0; i < type.size(); ++i) {
    strict[i] = type[i] + static_cast<Word>(i);
  }
  return strict_.rank(strict);
}

void TypeBasis::unrank(std::uint64_t r, std::span<Word> out) const {
  strict_.unrank(r, out);
  for (std::size_t i = 0; i < out.size(); ++i) out[i] -= static_cast<Word>(i);
}

bool TypeBasis::is_unique(std::span<const Word> type) {
  for (std::size_t i = 1; i < type.size(); ++i) {
    if (type[i] == type[i - 1]) return false;
  }
  return true;
}

double TypeBasis::tuple_multinomial(std::span<const Word> type) {
  double value = 1.0;
  std::size_t placed = 0;
  std::size_t i = 0;
  while (i < type.size()) {
    std::size_t j = i;
    while (j < type.size() && type[j] == type[i]) ++j;
    const std::size_t mult = j - i;
    // Multiply C(placed + mult, mult) into the running multinomial.
    for (std::size_t t = 1; t <= mult; ++t) {
      value *= static_cast<double>(placed + t) / static_cast<double>(t);
    }
    placed += mult;
    i = j;
  }
  return value;
}

MomentOperator haar_moment(std::uint64_t d, int m, std::uint64_t budget) {
  TypeBasis basis(d, m, budget);
  const auto dim = static_cast<Eigen::Index>(basis.dimension());
  MomentOperator op{d, m, Eigen::MatrixXd::Identity(dim, dim)};
  op.mat *= 1.0 / static_cast<double>(dim);
  return op;
}

namespace {

// Precomputed per-subset type data: all types supported on a size-K subset,
// their global type rank, sqrt-multinomial weight, and odd-multiplicity
// signature (the set of labels appearing an odd number of times).
struct SupportedType {
  std::uint64_t rank = 0;
  double weight = 0.0;        // sqrt(multinomial)
  std::vector<Word> odd_set;  // strictly increasing
};

std::vector<SupportedType> types_on_support(const TypeBasis& basis,
                                            std::span<const Word> elems, int m) {
  const int k = static_cast<int>(elems.size());
  std::vector<SupportedType> out;
  std::vector<int> pick(static_cast<std::size_t>(m), 0);  // non-decreasing indices
  std::vector<Word> type(static_cast<std::size_t>(m));
  for (;;) {
    for (int i = 0; i < m; ++i) type[static_cast<std::size_t>(i)] = elems[pick[i]];
    SupportedType st;
    st.rank = basis.rank(type);
    st.weight = std::sqrt(TypeBasis::tuple_multinomial(type));
    for (std::size_t i = 0; i < type.size();) {
      std::size_t j = i;
      while (j < type.size() && type[j] == type[i]) ++j;
      if ((j - i) % 2 == 1) st.odd_set.push_back(type[i]);
      i = j;
    }
    out.push_back(std::move(st));
    // Advance the non-decreasing index tuple (combinations with repetition).
    int i = m - 1;
    while (i >= 0 && pick[i] == k - 1) --i;
    if (i < 0) break;
    const int v = pick[i] + 1;
    for (int j = i; j < m; ++j) pick[j] = v;
  }
  return out;
}

// Iterates the support of a distribution as (elements, weight) pairs.
template <typename Fn>
void for_each_support(const SubsetDistribution& p, Fn&& fn) {
  const int n = p.qubits();
  const int k = p.subset_size();
  if (p.is_dense()) {
    SubsetIndexer idx(n, k);
    std::vector<Word> elems(static_cast<std::size_t>(k));
    for (int i = 0; i < k; ++i) elems[static_cast<std::size_t>(i)] = static_cast<Word>(i);
    const std::uint64_t ground = Word{1} << n;
    for (std::uint64_t r = 0; r < idx.dimension(); ++r) {
      const double w = p.dense()[r];
      if (w != 0.0) fn(std::span<const Word>(elems), w);
      SubsetIndexer::next_combination(elems, ground);
    }
  } else {
    SubsetIndexer idx(n, k, kUnlimitedIndexBudget);
    std::vector<Word> elems(static_cast<std::size_t>(k));
    for (const auto& [rank, w] : p.sparse()) {
      if (w == 0.0) continue;
      idx.unrank(rank, elems);
      fn(std::span<const Word>(elems), w);
    }
  }
}

}  // namespace

MomentOperator subset_phase_moment(const SubsetDistribution& p, int m,
                                   std::uint64_t budget) {
  const int k = p.subset_size();
  if (m < 1 || m > k) {
    throw std::invalid_argument("subset_phase_moment: copies must be in [1, K]");
  }
  const std::uint64_t d = Word{1} << p.qubits();
  TypeBasis basis(d, m, budget);
  const auto dim = static_cast<Eigen::Index>(basis.dimension());
  Eigen::MatrixXd rho = Eigen::MatrixXd::Zero(dim, dim);
  const double scale = std::pow(static_cast<double>(k), -m);
  for_each_support(p, [&](std::span<const Word> elems, double w) {
    const auto types = types_on_support(basis, elems, m);
    for (const auto& t1 : types) {
      for (const auto& t2 : types) {
        // The sign average keeps only pairs whose joint multiplicities are
        // all even, i.e. equal odd-multiplicity signatures.
        if (t1.odd_set != t2.odd_set) continue;
        rho(static_cast<Eigen::Index>(t1.rank), static_cast<Eigen::Index>(t2.rank)) +=
            w * scale * t1.weight * t2.weight;
      }
    }
  });
  return MomentOperator{d, m, std::move(rho)};
}

MomentOperator subset_moment(const SubsetDistribution& p, int m, std::uint64_t budget) {
  const int k = p.subset_size();
  if (m < 1) throw std::invalid_argument("subset_moment: copies must be >= 1");
  const std::uint64_t d = Word{1} << p.qubits();
  TypeBasis basis(d, m, budget);
  const auto dim = static_cast<Eigen::Index>(basis.dimension());
  Eigen::MatrixXd rho = Eigen::MatrixXd::Zero(dim, dim);
  const double scale = std::pow(static_cast<double>(k), -m);
  Eigen::VectorXd v(dim);
  for_each_support(p, [&](std::span<const Word> elems, double w) {
    const auto types = types_on_support(basis, elems, m);
    v.setZero();
    for (const auto& t : types) {
      v[static_cast<Eigen::Index>(t.rank)] = t.weight;
    }
    rho.noalias() += (w * scale) * (v * v.transpose());
  });
  return MomentOperator{d, m, std::move(rho)};
}

double trace_norm(const Eigen::MatrixXd& a) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(0.5 * (a + a.transpose()));
  if (es.info() != Eigen::Success) {
    throw std::runtime_error("trace_norm: eigensolver failed");
  }
  return es.eigenvalues().cwiseAbs().sum();
}

double trace_distance(const MomentOperator& a, const MomentOperator& b) {
  if (a.d != b.d || a.m != b.m || a.mat.rows() != b.mat.rows()) {
    throw std::invalid_argument("trace_distance: dimension mismatch");
  }
  return trace_norm(a.mat - b.mat);
}

MMatrixResult m_matrix(const SubsetDistribution& p, int m, std::uint64_t budget) {
  const int k = p.subset_size();
  const int n = p.qubits();
  if (m < 1 || 2 * m > k) {
    throw std::invalid_argument("m_matrix: requires 1 <= m <= K/2");
  }
  // Pushforward deviations from uniform for every union size m + delta.
  std::vector<std::vector<double>> deviation(static_cast<std::size_t>(m) + 1);
  std::vector<SubsetIndexer> union_idx;
  union_idx.reserve(static_cast<std::size_t>(m) + 1);
  for (int delta = 0; delta <= m; ++delta) {
    const auto pushed = phi_map(p, m + delta, budget);
    const double u = 1.0 / static_cast<double>(pushed.dimension());
    auto& dev = deviation[static_cast<std::size_t>(delta)];
    dev = pushed.dense();
    for (double& x : dev) x -= u;
    union_idx.emplace_back(n, m + delta, budget);
  }
  SubsetIndexer idx(n, m, budget);
  const auto dim = static_cast<Eigen::Index>(idx.dimension());
  Eigen::MatrixXd mat(dim, dim);
  std::vector<Word> a(static_cast<std::size_t>(m));
  std::vector<Word> b(static_cast<std::size_t>(m));
  std::vector<Word> u(2 * static_cast<std::size_t>(m));
  std::vector<double> prefactor(static_cast<std::size_t>(m) + 1);
  for (int delta = 0; delta <= m; ++delta) {
    prefactor[static_cast<std::size_t>(delta)] =
        static_cast<double>(binomial_checked(k, m + delta)) /
        static_cast<double>(binomial_checked(k, m));
  }
  for (Eigen::Index i = 0; i < dim; ++i) {
    idx.unrank(static_cast<std::uint64_t>(i), a);
    for (Eigen::Index j = i; j < dim; ++j) {
      idx.unrank(static_cast<std::uint64_t>(j), b);
      const auto end = std::set_union(a.begin(), a.end(), b.begin(), b.end(), u.begin());
      const int usize = static_cast<int>(end - u.begin());
      const int delta = usize - m;
      const std::uint64_t urank =
          union_idx[static_cast<std::size_t>(delta)].rank(std::span<const Word>(u.data(),
                                                          static_cast<std::size_t>(usize)));
      const double value = prefactor[static_cast<std::size_t>(delta)] *
                           deviation[static_cast<std::size_t>(delta)][urank];
      mat(i, j) = value;
      mat(j, i) = value;
    }
  }
  MMatrixResult res{std::move(mat), 0.0};
  res.trace_norm = trace_norm(res.mat);
  return res;
}

double entanglement_entropy(const Subset& s, Word cut_mask, const std::vector<int>* signs) {
  const int n = s.qubits();
  cut_mask &= full_mask(n);
  const int a_sites = std::popcount(cut_mask);
  if (a_sites == 0 || a_sites == n) {
    throw std::invalid_argument("entanglement_entropy: both sides of the cut must be nonempty");
  }
  if (signs != nullptr && signs->size() != s.size()) {
    throw std::invalid_argument("entanglement_entropy: sign table length mismatch");
  }
  // Compact (z_A, z_B) labels; each element lands in a distinct cell.
  std::map<Word, int> rows, cols;
  std::vector<std::pair<int, int>> cells(s.size());
  for (std::size_t e = 0; e < s.size(); ++e) {
    Word za = 0, zb = 0;
    int ia = 0, ib = 0;
    const Word z = s[e];
    for (int i = 0; i < n; ++i) {
      if ((cut_mask >> i) & 1) {
        za |= ((z >> i) & 1) << ia++;
      } else {
        zb |= ((z >> i) & 1) << ib++;
      }
    }
    const int r = static_cast<int>(rows.emplace(za, static_cast<int>(rows.size())).first->second);
    const int c = static_cast<int>(cols.emplace(zb, static_cast<int>(cols.size())).first->second);
    cells[e] = {r, c};
  }
  const double amp = 1.0 / std::sqrt(static_cast<double>(s.size()));
  Eigen::MatrixXd coeff = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(rows.size()),
                                                static_cast<Eigen::Index>(cols.size()));
  for (std::size_t e = 0; e < s.size(); ++e) {
    const double sign = signs ? static_cast<double>((*signs)[e]) : 1.0;
    coeff(cells[e].first, cells[e].second) = sign * amp;
  }
  // Schmidt weights from the Gram matrix of the smaller side.
  Eigen::MatrixXd gram;
  if (coeff.rows() <= coeff.cols()) {
    gram = coeff * coeff.transpose();
  } else {
    gram = coeff.transpose() * coeff;
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(gram);
  if (es.info() != Eigen::Success) {
    throw std::runtime_error("entanglement_entropy: eigensolver failed");
  }
  double entropy = 0;
  for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i) {
    const double w = es.eigenvalues()[i];  // squared singular value
    if (w <= 1e-28) continue;
    entropy -= w * std::log2(w);
  }
  return entropy;
}

}  // namespace pseudotherm
