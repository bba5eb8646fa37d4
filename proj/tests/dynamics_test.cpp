// Copyright 2026 The pseudotherm Authors
// SPDX-License-Identifier: Apache-2.0

#include <doctest.h>

#include <cmath>
#include <map>

#include "pseudotherm/dynamics.hpp"
#include "pseudotherm/io.hpp"
#include "pseudotherm/phi.hpp"
#include "pseudotherm/spectrum.hpp"
#include "test_support.hpp"

using namespace pseudotherm;

TEST_CASE("tv distance basics") {
  const auto p = SubsetDistribution::dense_uniform(3, 2);
  CHECK(tv_distance(p, p) == 0.0);
  const auto d = SubsetDistribution::dense_delta(3, 2, 5);
  CHECK(tv_to_uniform(d) == doctest::Approx(1.0 - 1.0 / 28).epsilon(1e-15));
  CHECK(tv_distance_dense({1.0, 0.0}, {0.0, 1.0}) == 1.0);
}

TEST_CASE("evolution from the stationary state stays at zero distance") {
  const TransitionOperator op(GateFamily::local_ccx(3), 2);
  const auto pi = SubsetDistribution::dense_uniform(3, 2);
  const auto res = evolve_exact(op, pi, EvolveOptions{.t_max = 20, .record_every = 5});
  for (double tv : res.trace.tv) CHECK(tv <= 1e-13);
}

TEST_CASE("tv to uniform is non-increasing along the evolution") {
  const TransitionOperator op(GateFamily::local_ccx(4), 2);
  const auto p0 = SubsetDistribution::dense_delta(4, 2, 17);
  const auto res = evolve_exact(op, p0, EvolveOptions{.t_max = 120, .record_every = 1});
  CHECK(res.max_tv_rise <= 1e-12);
  CHECK(res.trace.tv.front() > res.trace.tv.back());
}

TEST_CASE("mixing time definitions") {
  const TransitionOperator op(GateFamily::local_ccx(4), 1);
  const auto pi = SubsetDistribution::dense_uniform(4, 1);
  CHECK(mixing_time(op, pi).t.value() == 0);

  // From a point mass, the first-passage time below eps matches a scan of
  // the recorded trace.
  const auto p0 = SubsetDistribution::dense_delta(4, 1, 0);
  const auto mix = mixing_time(op, p0, 0.25, 10'000);
  REQUIRE(mix.t.has_value());
  const auto evo = evolve_exact(op, p0, EvolveOptions{.t_max = *mix.t, .record_every = 1});
  CHECK(evo.trace.tv.back() <= 0.25);
  CHECK(evo.trace.tv[static_cast<std::size_t>(*mix.t - 1)] > 0.25);

  // Point-mass starts are all equivalent under XOR translations at m = 1.
  CHECK(*worst_case_mixing_time(op, 0.25).t == *mix.t);

  // Cap reached: unreached marker carries the last distance.
  const auto capped = mixing_time(op, p0, 1e-9, 3);
  CHECK_FALSE(capped.t.has_value());
  CHECK(capped.last_tv > 1e-9);
}

TEST_CASE("single-walker mixing grows like n log n") {
  std::vector<double> x, y;
  for (int n = 4; n <= 9; ++n) {
    const TransitionOperator op(GateFamily::local_ccx(n), 1);
    const auto p0 = SubsetDistribution::dense_delta(n, 1, 0);
    const auto mix = mixing_time(op, p0, 0.25, 100'000);
    REQUIRE(mix.t.has_value());
    x.push_back(n * std::log(n));
    y.push_back(static_cast<double>(*mix.t));
  }
  const auto fit = testing::fit_line(x, y);
  CHECK(fit.slope > 0);
  CHECK(fit.r2 >= 0.97);
}

TEST_CASE("ball-counting floor on mixing time") {
  // A gate set of size 4n can only multiply the reachable-state count by 4n
  // per step, so mixing needs at least log(dim)/log(4n) steps.
  for (const auto& [n, m] : std::vector<std::pair<int, int>>{{3, 2}, {4, 2}, {5, 2}}) {
    const TransitionOperator op(GateFamily::local_ccx(n), m);
    const auto mix = worst_case_mixing_time(op, 0.25, 100'000);
    REQUIRE(mix.t.has_value());
    const double floor = std::log(static_cast<double>(op.dimension())) / std::log(4.0 * n);
    CHECK(static_cast<double>(*mix.t) >= floor);
  }
}

TEST_CASE("trajectories are reproducible and cardinality-preserving") {
  const auto family = GateFamily::local_ccx(4);
  const Subset s0({0b0001, 0b0111, 0b1000}, 4);
  const auto none = sample_trajectory(family, s0, 0, 9);
  REQUIRE(none.size() == 1);
  CHECK(none[0] == s0);

  const auto a = sample_trajectory(family, s0, 500, 123, 50);
  const auto b = sample_trajectory(family, s0, 500, 123, 50);
  REQUIRE(a.size() == b.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    CHECK(a[i] == b[i]);
    CHECK(a[i].size() == s0.size());
  }
}

TEST_CASE("trajectory ensemble matches the exact chain") {
  const auto family = GateFamily::local_ccx(3);
  const Subset s0({0b000, 0b011}, 3);
  const int t = 30;
  const TransitionOperator op(family, 2);
  auto p = SubsetDistribution::dense_delta(3, 2, op.indexer().rank(s0.elements()));
  std::vector<double> cur = p.dense(), nxt(cur.size());
  for (int step = 0; step < t; ++step) {
    op.apply(cur, nxt);
    cur.swap(nxt);
  }

  const int runs = 100'000;
  std::vector<int> counts(op.dimension(), 0);
  for (int r = 0; r < runs; ++r) {
    const auto traj = sample_trajectory(family, s0, t, 777, t, static_cast<std::uint64_t>(r));
    ++counts[op.indexer().rank(traj.back().elements())];
  }
  for (std::uint64_t rank = 0; rank < op.dimension(); ++rank) {
    const double expect = runs * cur[rank];
    const double sigma = std::sqrt(runs * cur[rank] * (1.0 - cur[rank]) + 1e-9);
    CHECK(std::abs(counts[rank] - expect) <= 3.5 * sigma + 1.0);
  }
}

TEST_CASE("observable traces") {
  const auto family = GateFamily::local_ccx(8);
  const Subset zero({0}, 8);

  // t = 0 snapshot reproduces the initial profile exactly.
  const auto single = observable_trace(family, zero, 0, 1, 1, 4);
  for (int i = 0; i < 8; ++i) {
    CHECK(single.zbar[static_cast<std::size_t>(i)] == 1.0);
    CHECK(single.z2bar[static_cast<std::size_t>(i)] == 1.0);
  }

  // Circuit-averaged site polarization decays at the single-site mode rate.
  const int realizations = 20'000;
  const auto trace = observable_trace(family, zero, 64, 16, realizations, 31);
  for (std::size_t k = 0; k < trace.times.size(); ++k) {
    const double expect = std::pow(1.0 - 1.0 / 16.0, static_cast<double>(trace.times[k]));
    for (int i = 0; i < 8; ++i) {
      const double got = trace.zbar[k * 8 + static_cast<std::size_t>(i)];
      CHECK(std::abs(got - expect) <= 4.0 / std::sqrt(static_cast<double>(realizations)));
    }
  }

  // Identical results for any worker count (fixed-chunk reduction).
  const auto t1 = observable_trace(family, zero, 32, 8, 500, 5, 1);
  const auto t3 = observable_trace(family, zero, 32, 8, 500, 5, 3);
  CHECK(t1.zbar == t3.zbar);
  CHECK(t1.z2bar == t3.z2bar);
}

TEST_CASE("late-time fit recovers a synthetic exponential") {
  TvTrace trace;
  for (int t = 0; t <= 400; ++t) {
    trace.times.push_back(t);
    trace.tv.push_back(std::min(1.0, std::pow(0.9, t - 10.0)));
  }
  const auto fit = fit_late_time(trace);
  CHECK(std::abs(fit.lambda - 0.9) <= 1e-10);
  CHECK(std::abs(fit.offset - 10.0) <= 1e-8);
  CHECK(fit.r2 >= 1.0 - 1e-12);

  TvTrace flat;
  flat.times = {0, 1, 2};
  flat.tv = {0.5, 0.5, 0.5};
  CHECK_THROWS_AS(fit_late_time(flat), std::domain_error);
}

TEST_CASE("fitted decay rate matches the spectral gap") {
  const auto family = GateFamily::local_ccx(4);
  const TransitionOperator op(family, 2);
  const auto p0 = induced_initial(parse_initial_state("00++", 4), 2);
  const auto evo = evolve_exact(op, p0,
                                EvolveOptions{.t_max = 4000, .record_every = 1,
                                              .stop_below_tv = 1e-8});
  const auto fit = fit_late_time(evo.trace);
  const auto spec = top_eigenvalues(op, 2);
  CHECK(std::abs(fit.lambda - spec.eigenvalues[1]) <= 0.01);
}

TEST_CASE("pushforward to smaller subsets") {
  CounterRng rng(6, 0);
  const auto p = testing::random_sparse(3, 4, 8, rng);

  // Same-size pushforward is the identity.
  const auto same = phi_map(p, 4);
  for (const auto& [rank, w] : p.sparse()) {
    CHECK(same.dense()[rank] == doctest::Approx(w).epsilon(1e-13));
  }

  // Uniform maps to uniform.
  const auto pi4 = SubsetDistribution::dense_uniform(3, 4);
  const auto pushed_uniform = phi_map(pi4, 2);
  for (double v : pushed_uniform.dense()) {
    CHECK(v == doctest::Approx(1.0 / 28).epsilon(1e-13));
  }

  // Composition across sizes matches the direct map.
  const auto via_3 = phi_map(phi_map(p, 3), 2);
  const auto direct = phi_map(p, 2);
  for (std::uint64_t r = 0; r < 28; ++r) {
    CHECK(std::abs(via_3.dense()[r] - direct.dense()[r]) <= 1e-12);
  }

  // Stochastic output.
  double sum = 0;
  for (double v : direct.dense()) {
    CHECK(v >= 0.0);
    sum += v;
  }
  CHECK(sum == doctest::Approx(1.0).epsilon(1e-12));
  CHECK_THROWS_AS(phi_map(p, 5), std::invalid_argument);
}

TEST_CASE("induced initial distributions") {
  const Subset s0({0b000, 0b011, 0b101, 0b110}, 3);
  const auto d = induced_initial(s0, 4);
  CHECK(tv_distance(d, SubsetDistribution::dense_delta(
                           3, 4, SubsetIndexer(3, 4).rank(s0.elements()))) <= 1e-15);

  // Evolving the induced distribution commutes with pushing forward the
  // evolved one.
  const auto family = GateFamily::local_ccx(3);
  const TransitionOperator op4(family, 4), op2(family, 2);
  const int t = 5;
  std::vector<double> big = SubsetDistribution::dense_delta(
                                3, 4, SubsetIndexer(3, 4).rank(s0.elements()))
                                .dense();
  std::vector<double> tmp(big.size());
  for (int step = 0; step < t; ++step) {
    op4.apply(big, tmp);
    big.swap(tmp);
  }
  const auto pushed = phi_map(SubsetDistribution::from_dense(3, 4, big), 2);

  std::vector<double> small = induced_initial(s0, 2).dense();
  std::vector<double> tmp2(small.size());
  for (int step = 0; step < t; ++step) {
    op2.apply(small, tmp2);
    small.swap(tmp2);
  }
  for (std::uint64_t r = 0; r < 28; ++r) {
    CHECK(std::abs(pushed.dense()[r] - small[r]) <= 1e-12);
  }
  CHECK_THROWS_AS(induced_initial(s0, 5), std::invalid_argument);
}

TEST_CASE("pushforward distances grow with the subset size") {
  CounterRng rng(14, 0);
  for (int trial = 0; trial < 100; ++trial) {
    const auto p = testing::random_sparse(3, 4, 6, rng);
    double prev = 0.0;
    for (int m = 1; m <= 4; ++m) {
      const double d = tv_to_uniform(phi_map(p, m));
      CHECK(d >= prev - 1e-12);
      prev = d;
    }
  }
}
