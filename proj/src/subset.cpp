// Copyright 2026 The pseudotherm Authors
// SPDX-License-Identifier: Apache-2.0

#include "pseudotherm/subset.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>

namespace pseudotherm {

Bitstring make_bitstring(Word bits, int n) {
  if (n < 1 || n > kMaxQubits) {
    throw std::invalid_argument("qubit count must be in [1, 64], got " + std::to_string(n));
  }
  if ((bits & ~full_mask(n)) != 0) {
    throw std::invalid_argument("bitstring has bits set above position n-1");
  }
  return Bitstring{bits, n};
}

Subset::Subset(std::vector<Word> elements, int n) : elements_(std::move(elements)), n_(n) {
  if (n < 1 || n > kMaxQubits) {
    throw std::invalid_argument("qubit count must be in [1, 64], got " + std::to_string(n));
  }
  if (elements_.empty()) {
    throw std::invalid_argument("subset must be nonempty");
  }
  std::sort(elements_.begin(), elements_.end());
  const Word mask = full_mask(n);
  if ((elements_.back() & ~mask) != 0) {
    throw std::invalid_argument("subset element exceeds 2^n - 1");
  }
  if (std::adjacent_find(elements_.begin(), elements_.end()) != elements_.end()) {
    throw std::invalid_argument("subset elements must be distinct");
  }
}

bool Subset::contains(Word z) const {
  return std::binary_search(elements_.begin(), elements_.end(), z);
}

Subset full_subset(int n) {
  if (n < 1 || n > 26) {
    throw std::invalid_argument("full_subset supports n in [1, 26]");
  }
  std::vector<Word> all(Word{1} << n);
  for (Word z = 0; z < all.size(); ++z) all[z] = z;
  return Subset(std::move(all), n);
}

Bitstring relative_coordinate(const Subset& s) {
  if (s.size() != 2) {
    throw std::invalid_argument("relative_coordinate requires a subset of size 2");
  }
  return Bitstring{s[0] ^ s[1], s.qubits()};
}

std::vector<Subset> sub_subsets(const Subset& s, int m) {
  const int k = static_cast<int>(s.size());
  if (m < 1 || m > k) {
    throw std::invalid_argument("sub-subset size must be in [1, |S|]");
  }
  std::vector<Subset> out;
  std::vector<int> idx(m);
  for (int i = 0; i < m; ++i) idx[i] = i;
  for (;;) {
    std::vector<Word> elems(m);
    for (int i = 0; i < m; ++i) elems[i] = s[idx[i]];
    out.emplace_back(std::move(elems), s.qubits());
    // Advance the index combination in colex order.
    int i = 0;
    while (i < m && idx[i] + 1 == (i + 1 < m ? idx[i + 1] : k)) ++i;
    if (i == m) break;
    ++idx[i];
    for (int j = 0; j < i; ++j) idx[j] = j;
  }
  return out;
}

std::vector<Subset> sub_subsets_sample(const Subset& s, int m, int count, CounterRng& rng) {
  const int k = static_cast<int>(s.size());
  if (m < 1 || m > k) {
    throw std::invalid_argument("sub-subset size must be in [1, |S|]");
  }
  std::vector<Subset> out;
  out.reserve(static_cast<std::size_t>(count));
  std::vector<int> pool(k);
  for (int draw = 0; draw < count; ++draw) {
    for (int i = 0; i < k; ++i) pool[i] = i;
    std::vector<Word> elems(m);
    for (int i = 0; i < m; ++i) {  // partial Fisher-Yates
      const int j = i + static_cast<int>(rng.uniform_below(static_cast<std::uint64_t>(k - i)));
      std::swap(pool[i], pool[j]);
      elems[i] = s[static_cast<std::size_t>(pool[i])];
    }
    out.emplace_back(std::move(elems), s.qubits());
  }
  return out;
}

void sort_elements(std::span<Word> v) {
  if (v.size() > 24) {
    std::sort(v.begin(), v.end());
    return;
  }
  for (std::size_t i = 1; i < v.size(); ++i) {
    const Word x = v[i];
    std::size_t j = i;
    while (j > 0 && v[j - 1] > x) {
      v[j] = v[j - 1];
      --j;
    }
    v[j] = x;
  }
}

}  // namespace pseudotherm
