// Copyright 2026 The pseudotherm Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include "pseudotherm/distribution.hpp"
#include "pseudotherm/subset.hpp"

namespace pseudotherm {

/// Pushforward of a distribution on size-K subsets to size-m subsets by
/// uniform sub-subset selection: out(S') = C(K, m)^{-1} * sum over S
/// containing S' of p(S). Stochastic; maps uniform to uniform; composes as a
/// semigroup across sizes. Requires m <= K; output is dense on the target
/// space (budget-gated).
SubsetDistribution phi_map(const SubsetDistribution& p, int m,
                           std::uint64_t budget = kDefaultIndexBudget);

/// phi_map applied to a point mass at s0: the uniform mixture over all
/// C(|s0|, m) sub-subsets. Evolving this on the size-m space commutes with
/// pushing forward the evolved size-K distribution.
SubsetDistribution induced_initial(const Subset& s0, int m,
                                   std::uint64_t budget = kDefaultIndexBudget);

}  // namespace pseudotherm
