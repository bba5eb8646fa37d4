// Copyright 2026 The pseudotherm Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace pseudotherm {

/// A requested object exceeds a configured size budget. Carries the offending
/// dimension so callers (and error messages) can name it.
class CapacityError : public std::runtime_error {
 public:
  CapacityError(const std::string& what, std::uint64_t requested, std::uint64_t budget)
      : std::runtime_error(what + " (requested " + std::to_string(requested) +
                           ", budget " + std::to_string(budget) + ")"),
        requested_(requested),
        budget_(budget) {}

  std::uint64_t requested() const noexcept { return requested_; }
  std::uint64_t budget() const noexcept { return budget_; }

 private:
  std::uint64_t requested_;
  std::uint64_t budget_;
};

/// The iterative eigensolver ran out of restarts. Carries the best residual
/// reached so the caller can decide whether the partial answer is usable.
class ConvergenceError : public std::runtime_error {
 public:
  ConvergenceError(const std::string& what, double best_residual)
      : std::runtime_error(what + " (best residual " + std::to_string(best_residual) + ")"),
        best_residual_(best_residual) {}

  double best_residual() const noexcept { return best_residual_; }

 private:
  double best_residual_;
};

}  // namespace pseudotherm
