// Copyright 2026 The pseudotherm Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string_view>

#include "pseudotherm/rng.hpp"
#include "pseudotherm/subset.hpp"

namespace pseudotherm {

/// Enumerable families of basis permutations (classical reversible gates).
///
/// LocalCcx      u_{i,a,b}: flips qubit i iff qubit i-1 == a and qubit i+1 == b
///               (periodic ring; a pairs with site i-1, b with site i+1).
///               4n gates, n >= 3. All involutions; all even permutations.
/// AllToAllCnx   flips qubit i iff the other n-1 qubits spell the control
///               word a (read in increasing site order). n * 2^(n-1) gates.
///               Each gate transposes two adjacent hypercube vertices.
/// NotCnot       all single-qubit NOTs plus all CNOTs (control site, target
///               site, control value in {0,1}): n + 2n(n-1) gates. Affine
///               maps only; kept as the reachability counterexample family.
/// SimplePermW2  flips a target qubit controlled by an arbitrary nonzero
///               Boolean function of two other (arbitrary) qubits:
///               n * C(n-1,2) * 15 gates. Comparison family only.
enum class GateKind {
  kLocalCcx,
  kAllToAllCnx,
  kNotCnot,
  kSimplePermW2,
};

class GateFamily {
 public:
  static GateFamily local_ccx(int n);       // n in [3, 64]
  static GateFamily all_to_all_cnx(int n);  // n in [1, 32]
  static GateFamily not_cnot(int n);        // n in [2, 64]
  static GateFamily simple_perm_w2(int n);  // n in [3, 64]

  /// Parses "local_ccx" / "all_to_all_cnx" / "not_cnot" / "simple_perm_w2"
  /// (aliases: "local", "alltoall", "notcnot", "simpleperm").
  static std::optional<GateFamily> from_name(std::string_view name, int n);

  GateKind kind() const noexcept { return kind_; }
  int qubits() const noexcept { return n_; }
  std::uint64_t size() const noexcept { return size_; }
  std::string_view name() const noexcept;

  /// Image of basis state z under gate `index`. Hot path: no checks beyond
  /// debug asserts; z must fit in n bits, index < size().
  Word apply(std::uint64_t index, Word z) const;

  Bitstring apply(std::uint64_t index, const Bitstring& z) const;

  /// Elementwise image of a canonical element buffer, re-sorted in place.
  void apply_to_elements(std::uint64_t index, std::span<Word> elems) const;

  Subset apply_to_subset(std::uint64_t index, const Subset& s) const;

  /// Uniform over [0, size()); deterministic under the rng state.
  std::uint64_t sample(CounterRng& rng) const { return rng.uniform_below(size_); }

  /// Exhaustive apply-twice check for n <= 16; structural argument above
  /// (every family here flips a fixed target off bits it does not touch).
  bool is_involution(std::uint64_t index) const;

  friend bool operator==(const GateFamily&, const GateFamily&) = default;

 private:
  GateFamily(GateKind kind, int n, std::uint64_t size)
      : kind_(kind), n_(n), size_(size) {}

  GateKind kind_;
  int n_;
  std::uint64_t size_;
};

/// A gate identified by its family and enumeration index.
struct GateId {
  GateFamily family;
  std::uint64_t index = 0;
};

}  // namespace pseudotherm
