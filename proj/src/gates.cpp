// Copyright 2026 The pseudotherm Authors
// SPDX-License-Identifier: Apache-2.0

#include "pseudotherm/gates.hpp"

#include <cassert>
#include <stdexcept>
#include <string>

#include "pseudotherm/binomial.hpp"

namespace pseudotherm {

namespace {

void require_range(int n, int lo, int hi, const char* family) {
  if (n < lo || n > hi) {
    throw std::invalid_argument(std::string(family) + " requires n in [" + std::to_string(lo) +
                                ", " + std::to_string(hi) + "], got " + std::to_string(n));
  }
}

}  // namespace

GateFamily GateFamily::local_ccx(int n) {
  // i-1 and i+1 must be distinct sites, so the ring needs n >= 3.
  require_range(n, 3, 64, "local_ccx");
  return GateFamily(GateKind::kLocalCcx, n, 4ull * static_cast<std::uint64_t>(n));
}

GateFamily GateFamily::all_to_all_cnx(int n) {
  require_range(n, 1, 32, "all_to_all_cnx");
  return GateFamily(GateKind::kAllToAllCnx, n,
                    static_cast<std::uint64_t>(n) << (n - 1));
}

GateFamily GateFamily::not_cnot(int n) {
  require_range(n, 2, 64, "not_cnot");
  const auto un = static_cast<std::uint64_t>(n);
  return GateFamily(GateKind::kNotCnot, n, un + 2 * un * (un - 1));
}

GateFamily GateFamily::simple_perm_w2(int n) {
  require_range(n, 3, 64, "simple_perm_w2");
  const auto un = static_cast<std::uint64_t>(n);
  const std::uint64_t pairs = (un - 1) * (un - 2) / 2;
  return GateFamily(GateKind::kSimplePermW2, n, un * pairs * 15);
}

std::optional<GateFamily> GateFamily::from_name(std::string_view name, int n) {
  if (name == "local_ccx" || name == "local") return local_ccx(n);
  if (name == "all_to_all_cnx" || name == "alltoall") return all_to_all_cnx(n);
  if (name == "not_cnot" || name == "notcnot") return not_cnot(n);
  if (name == "simple_perm_w2" || name == "simpleperm") return simple_perm_w2(n);
  return std::nullopt;
}

std::string_view GateFamily::name() const noexcept {
  switch (kind_) {
    case GateKind::kLocalCcx: return "local_ccx";
    case GateKind::kAllToAllCnx: return "all_to_all_cnx";
    case GateKind::kNotCnot: return "not_cnot";
    case GateKind::kSimplePermW2: return "simple_perm_w2";
  }
  return "?";
}

Word GateFamily::apply(std::uint64_t index, Word z) const {
  assert(index < size_);
  switch (kind_) {
    case GateKind::kLocalCcx: {
      const int i = static_cast<int>(index >> 2);
      const Word a = (index >> 1) & 1;
      const Word b = index & 1;
      const int left = (i + n_ - 1) % n_;
      const int right = (i + 1) % n_;
      const Word match = (((z >> left) & 1) == a) & (((z >> right) & 1) == b);
      return z ^ (match << i);
    }
    case GateKind::kAllToAllCnx: {
      const std::uint64_t half = std::uint64_t{1} << (n_ - 1);
      const int i = static_cast<int>(index / half);
      const Word a = index % half;
      // Other qubits, compacted in increasing site order.
      const Word low = z & ((Word{1} << i) - 1);
      const Word others = low | ((z >> (i + 1)) << i);
      return z ^ (static_cast<Word>(others == a) << i);
    }
    case GateKind::kNotCnot: {
      const auto un = static_cast<std::uint64_t>(n_);
      if (index < un) {
        return z ^ (Word{1} << index);  // NOT
      }
      const std::uint64_t rest = index - un;
      const Word a = rest & 1;
      const std::uint64_t pair = rest >> 1;
      const int c = static_cast<int>(pair / (un - 1));
      int t = static_cast<int>(pair % (un - 1));
      if (t >= c) ++t;
      const Word match = ((z >> c) & 1) == a;
      return z ^ (match << t);
    }
    case GateKind::kSimplePermW2: {
      const auto un = static_cast<std::uint64_t>(n_);
      const std::uint64_t pairs = (un - 1) * (un - 2) / 2;
      const Word table = index % 15 + 1;  // nonzero truth table over (c0, c1)
      std::uint64_t rest = index / 15;
      std::uint64_t pr = rest % pairs;
      const int i = static_cast<int>(rest / pairs);
      // Decode the control pair (colex over the n-1 non-target slots).
      std::uint64_t q = 1;
      while ((q + 1) * q / 2 <= pr) ++q;
      const std::uint64_t p = pr - q * (q - 1) / 2;
      int c0 = static_cast<int>(p);
      int c1 = static_cast<int>(q);
      if (c0 >= i) ++c0;
      if (c1 >= i) ++c1;
      const unsigned sel = static_cast<unsigned>(((z >> c0) & 1) | (((z >> c1) & 1) << 1));
      return z ^ (((table >> sel) & 1) << i);
    }
  }
  return z;
}

Bitstring GateFamily::apply(std::uint64_t index, const Bitstring& z) const {
  if (z.n != n_) {
    throw std::invalid_argument("gate/bitstring qubit count mismatch");
  }
  if (index >= size_) {
    throw std::invalid_argument("gate index out of range");
  }
  return Bitstring{apply(index, z.bits), n_};
}

void GateFamily::apply_to_elements(std::uint64_t index, std::span<Word> elems) const {
  for (Word& z : elems) z = apply(index, z);
  sort_elements(elems);
}

Subset GateFamily::apply_to_subset(std::uint64_t index, const Subset& s) const {
  if (s.qubits() != n_) {
    throw std::invalid_argument("gate/subset qubit count mismatch");
  }
  if (index >= size_) {
    throw std::invalid_argument("gate index out of range");
  }
  std::vector<Word> elems(s.elements().begin(), s.elements().end());
  apply_to_elements(index, elems);
  return Subset(std::move(elems), n_);
}

bool GateFamily::is_involution(std::uint64_t index) const {
  if (index >= size_) {
    throw std::invalid_argument("gate index out of range");
  }
  if (n_ <= 16) {
    const Word dim = Word{1} << n_;
    for (Word z = 0; z < dim; ++z) {
      if (apply(index, apply(index, z)) != z) return false;
    }
    return true;
  }
  // Every family flips a fixed target qubit conditioned on qubits the gate
  // leaves untouched, so applying twice restores the input.
  return true;
}

}  // namespace pseudotherm
