// Copyright 2026 The pseudotherm Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "pseudotherm/chain.hpp"
#include "pseudotherm/distribution.hpp"

namespace pseudotherm {

/// Total-variation distance to the uniform distribution along an exact
/// evolution. t counts individual gates applied.
struct TvTrace {
  std::vector<std::int64_t> times;
  std::vector<double> tv;
};

struct EvolveOptions {
  std::int64_t t_max = 0;
  std::int64_t record_every = 1;
  double stop_below_tv = 0.0;  // stop early once TV drops below this
};

struct EvolveResult {
  TvTrace trace;
  std::vector<double> final_distribution;
  /// Largest single-step increase of the TV distance observed (should be
  /// nonpositive up to roundoff; the distance is monotone for a stationary
  /// target).
  double max_tv_rise = 0.0;
};

/// Repeated application of the transition operator to a dense distribution,
/// recording TV to uniform on the given schedule (t = 0 included).
EvolveResult evolve_exact(const TransitionOperator& op, const SubsetDistribution& p0,
                          const EvolveOptions& opt);

struct MixingResult {
  std::optional<std::int64_t> t;  // empty when t_cap was reached first
  double last_tv = 1.0;
};

/// First t with TV(p_t, uniform) <= eps.
MixingResult mixing_time(const TransitionOperator& op, const SubsetDistribution& p0,
                         double eps = 0.25, std::int64_t t_cap = 1'000'000);

/// Mixing time maximized over all point-mass initial conditions.
MixingResult worst_case_mixing_time(const TransitionOperator& op, double eps = 0.25,
                                    std::int64_t t_cap = 1'000'000);

/// Applies t uniformly sampled gates to s0, recording the subset every
/// record_every steps (t = 0 included). Deterministic under (seed, stream).
std::vector<Subset> sample_trajectory(const GateFamily& family, const Subset& s0,
                                      std::int64_t t, std::uint64_t seed,
                                      std::int64_t record_every = 1,
                                      std::uint64_t stream = 0);

/// Per-site averages over circuit realizations, row-major [snapshot][site]:
/// zbar is the mean of <Z_i>, z2bar the mean of <Z_i>^2, where <Z_i> is the
/// signed fraction (#zeros - #ones)/|S| of the current subset at site i.
struct ObservableTrace {
  std::vector<std::int64_t> times;
  int sites = 0;
  int realizations = 0;
  std::vector<double> zbar;   // times.size() * sites
  std::vector<double> z2bar;  // times.size() * sites
};

ObservableTrace observable_trace(const GateFamily& family, const Subset& s0,
                                 std::int64_t t_max, std::int64_t record_every,
                                 int realizations, std::uint64_t seed, int threads = 1);

/// Least-squares exponential fit of the trace tail: log tv = (t - offset) *
/// log(lambda), over samples with tv in (tv_lo, tv_hi]. Throws
/// std::domain_error when fewer than two usable samples fall in the window.
struct LateTimeFit {
  double lambda = 0.0;
  double offset = 0.0;
  double r2 = 0.0;
  int points = 0;
};

LateTimeFit fit_late_time(const TvTrace& trace, double tv_lo = 1e-8, double tv_hi = 1e-2);

}  // namespace pseudotherm
