// Copyright 2026 The pseudotherm Authors
// SPDX-License-Identifier: Apache-2.0

#include "pseudotherm/dynamics.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <stdexcept>
#include <thread>

namespace pseudotherm {

EvolveResult evolve_exact(const TransitionOperator& op, const SubsetDistribution& p0,
                          const EvolveOptions& opt) {
  if (p0.qubits() != op.qubits() || p0.subset_size() != op.subset_size()) {
    throw std::invalid_argument("evolve_exact: distribution (n, m) mismatch");
  }
  if (opt.t_max < 0 || opt.record_every < 1) {
    throw std::invalid_argument("evolve_exact: bad schedule");
  }
  std::vector<double> cur = p0.dense();
  std::vector<double> nxt(cur.size());

  EvolveResult res;
  double last_tv = tv_to_uniform_dense(cur);
  res.trace.times.push_back(0);
  res.trace.tv.push_back(last_tv);

  for (std::int64_t t = 1; t <= opt.t_max; ++t) {
    op.apply(cur, nxt);
    cur.swap(nxt);
    const double tv = tv_to_uniform_dense(cur);
    res.max_tv_rise = std::max(res.max_tv_rise, tv - last_tv);
    last_tv = tv;
    if (t % opt.record_every == 0 || t == opt.t_max || tv < opt.stop_below_tv) {
      res.trace.times.push_back(t);
      res.trace.tv.push_back(tv);
    }
    if (tv < opt.stop_below_tv) break;
  }
  res.final_distribution = std::move(cur);
  return res;
}

MixingResult mixing_time(const TransitionOperator& op, const SubsetDistribution& p0,
                         double eps, std::int64_t t_cap) {
  if (p0.qubits() != op.qubits() || p0.subset_size() != op.subset_size()) {
    throw std::invalid_argument("mixing_time: distribution (n, m) mismatch");
  }
  std::vector<double> cur = p0.dense();
  std::vector<double> nxt(cur.size());
  double tv = tv_to_uniform_dense(cur);
  if (tv <= eps) return MixingResult{0, tv};
  for (std::int64_t t = 1; t <= t_cap; ++t) {
    op.apply(cur, nxt);
    cur.swap(nxt);
    tv = tv_to_uniform_dense(cur);
    if (tv <= eps) return MixingResult{t, tv};
  }
  return MixingResult{std::nullopt, tv};
}

MixingResult worst_case_mixing_time(const TransitionOperator& op, double eps,
                                    std::int64_t t_cap) {
  MixingResult worst{0, 0.0};
  for (std::uint64_t r = 0; r < op.dimension(); ++r) {
    const auto p0 = SubsetDistribution::dense_delta(op.qubits(), op.subset_size(), r);
    const MixingResult m = mixing_time(op, p0, eps, t_cap);
    if (!m.t.has_value()) return m;
    if (*m.t > *worst.t) worst = m;
  }
  return worst;
}

std::vector<Subset> sample_trajectory(const GateFamily& family, const Subset& s0,
                                      std::int64_t t, std::uint64_t seed,
                                      std::int64_t record_every, std::uint64_t stream) {
  if (s0.qubits() != family.qubits()) {
    throw std::invalid_argument("sample_trajectory: qubit count mismatch");
  }
  if (t < 0 || record_every < 1) {
    throw std::invalid_argument("sample_trajectory: bad schedule");
  }
  CounterRng rng(seed, stream);
  std::vector<Word> elems(s0.elements().begin(), s0.elements().end());
  std::vector<Subset> snapshots;
  snapshots.emplace_back(std::vector<Word>(elems), s0.qubits());
  for (std::int64_t step = 1; step <= t; ++step) {
    family.apply_to_elements(family.sample(rng), elems);
    if (step % record_every == 0 || step == t) {
      snapshots.emplace_back(std::vector<Word>(elems), s0.qubits());
    }
  }
  return snapshots;
}

namespace {

// One realization: evolve the element buffer, accumulating per-site signed
// fractions and their squares at each snapshot index.
void accumulate_realization(const GateFamily& family, const Subset& s0,
                            const std::vector<std::int64_t>& times, std::uint64_t seed,
                            std::uint64_t stream, std::vector<double>& zbar_acc,
                            std::vector<double>& z2bar_acc) {
  const int n = family.qubits();
  const int m = static_cast<int>(s0.size());
  CounterRng rng(seed, stream);
  std::vector<Word> elems(s0.elements().begin(), s0.elements().end());
  std::size_t snap = 0;
  std::int64_t t = 0;
  auto record = [&] {
    for (int i = 0; i < n; ++i) {
      int ones = 0;
      for (Word z : elems) ones += static_cast<int>((z >> i) & 1);
      const double zi = static_cast<double>(m - 2 * ones) / m;
      zbar_acc[snap * n + static_cast<std::size_t>(i)] += zi;
      z2bar_acc[snap * n + static_cast<std::size_t>(i)] += zi * zi;
    }
    ++snap;
  };
  record();
  while (snap < times.size()) {
    const std::int64_t target = times[snap];
    while (t < target) {
      const std::uint64_t g = family.sample(rng);
      for (Word& z : elems) z = family.apply(g, z);
      ++t;
    }
    record();
  }
}

}  // namespace

ObservableTrace observable_trace(const GateFamily& family, const Subset& s0,
                                 std::int64_t t_max, std::int64_t record_every,
                                 int realizations, std::uint64_t seed, int threads) {
  if (s0.qubits() != family.qubits()) {
    throw std::invalid_argument("observable_trace: qubit count mismatch");
  }
  if (t_max < 0 || record_every < 1 || realizations < 1) {
    throw std::invalid_argument("observable_trace: bad schedule");
  }
  const int n = family.qubits();
  ObservableTrace out;
  out.sites = n;
  out.realizations = realizations;
  for (std::int64_t t = 0; t <= t_max; t += record_every) out.times.push_back(t);
  if (out.times.back() != t_max) out.times.push_back(t_max);
  const std::size_t cells = out.times.size() * static_cast<std::size_t>(n);

  // Fixed-size realization chunks keep the reduction order independent of
  // the thread count, so results are bitwise reproducible.
  constexpr int kChunk = 64;
  const int chunks = (realizations + kChunk - 1) / kChunk;
  std::vector<std::vector<double>> zbar_parts(static_cast<std::size_t>(chunks));
  std::vector<std::vector<double>> z2bar_parts(static_cast<std::size_t>(chunks));

  auto run_chunk = [&](int chunk) {
    auto& zacc = zbar_parts[static_cast<std::size_t>(chunk)];
    auto& z2acc = z2bar_parts[static_cast<std::size_t>(chunk)];
    zacc.assign(cells, 0.0);
    z2acc.assign(cells, 0.0);
    const int lo = chunk * kChunk;
    const int hi = std::min(realizations, lo + kChunk);
    for (int rlz = lo; rlz < hi; ++rlz) {
      accumulate_realization(family, s0, out.times, seed,
                             static_cast<std::uint64_t>(rlz), zacc, z2acc);
    }
  };

  const int workers = std::max(1, threads);
  if (workers == 1) {
    for (int c = 0; c < chunks; ++c) run_chunk(c);
  } else {
    std::vector<std::thread> pool;
    std::atomic<int> next{0};
    for (int w = 0; w < workers; ++w) {
      pool.emplace_back([&] {
        for (;;) {
          const int c = next.fetch_add(1);
          if (c >= chunks) return;
          run_chunk(c);
        }
      });
    }
    for (auto& th : pool) th.join();
  }

  out.zbar.assign(cells, 0.0);
  out.z2bar.assign(cells, 0.0);
  for (int c = 0; c < chunks; ++c) {
    for (std::size_t i = 0; i < cells; ++i) {
      out.zbar[i] += zbar_parts[static_cast<std::size_t>(c)][i];
      out.z2bar[i] += z2bar_parts[static_cast<std::size_t>(c)][i];
    }
  }
  for (std::size_t i = 0; i < cells; ++i) {
    out.zbar[i] /= realizations;
    out.z2bar[i] /= realizations;
  }
  return out;
}

LateTimeFit fit_late_time(const TvTrace& trace, double tv_lo, double tv_hi) {
  if (tv_lo <= 0 || tv_hi <= tv_lo) {
    throw std::invalid_argument("fit_late_time: window must satisfy 0 < tv_lo < tv_hi");
  }
  double sx = 0, sy = 0, sxx = 0, sxy = 0, syy = 0;
  int npts = 0;
  for (std::size_t i = 0; i < trace.tv.size(); ++i) {
    const double tv = trace.tv[i];
    if (tv <= tv_lo || tv > tv_hi) continue;
    const double x = static_cast<double>(trace.times[i]);
    const double y = std::log(tv);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
    syy += y * y;
    ++npts;
  }
  if (npts < 2) {
    throw std::domain_error("fit_late_time: fewer than two samples in the fit window");
  }
  const double denom = npts * sxx - sx * sx;
  if (denom == 0) throw std::domain_error("fit_late_time: degenerate time axis");
  const double slope = (npts * sxy - sx * sy) / denom;
  const double intercept = (sy - slope * sx) / npts;
  if (slope >= 0) throw std::domain_error("fit_late_time: trace is not decaying");
  LateTimeFit fit;
  fit.lambda = std::exp(slope);
  fit.offset = -intercept / slope;
  fit.points = npts;
  const double ss_tot = syy - sy * sy / npts;
  const double ss_res = ss_tot - slope * (sxy - sx * sy / npts);
  fit.r2 = ss_tot > 0 ? 1.0 - ss_res / ss_tot : 1.0;
  return fit;
}

}  // namespace pseudotherm
