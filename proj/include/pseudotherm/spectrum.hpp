// Copyright 2026 The pseudotherm Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <vector>

#include "pseudotherm/chain.hpp"

namespace pseudotherm {

enum class SpectrumMethod { kDense, kIterative };

/// Largest eigenvalues in descending order with per-pair backward-error
/// residuals ||A v - lambda v|| (unit v). Ties broken by residual.
struct SpectrumResult {
  std::vector<double> eigenvalues;
  std::vector<double> residuals;
  SpectrumMethod method = SpectrumMethod::kDense;
};

struct EigsOptions {
  int k = 6;
  double tol = 1e-10;
  int block = 4;
  int max_basis = 0;  // 0 -> max(40, 4k)
  int max_restarts = 800;
  std::uint64_t dense_threshold = 4096;
  std::uint64_t seed = 0x5eedULL;
};

/// k algebraically largest eigenvalues of a symmetric operator. Dense solve
/// below dense_threshold; restarted block Rayleigh-Ritz with full
/// reorthogonalization above. Degenerate multiplets are recovered by
/// injecting fresh random blocks after convergence until the top-k set is
/// stable. Throws ConvergenceError when restarts run out.
SpectrumResult top_eigenvalues(const LinearOperator& op, const EigsOptions& opt);

SpectrumResult top_eigenvalues(const TransitionOperator& op, int k, double tol = 1e-10);

/// 1 / (1 - lambda_1) from the top two eigenvalues of the chain.
double relaxation_time(const TransitionOperator& op, double tol = 1e-10);

double relaxation_time(const LinearOperator& op, const EigsOptions& opt);

}  // namespace pseudotherm
