// Copyright 2026 The pseudotherm Authors
// SPDX-License-Identifier: Apache-2.0

#include "pseudotherm/run.hpp"

#include <algorithm>
#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <thread>

#include "pseudotherm/dynamics.hpp"
#include "pseudotherm/errors.hpp"
#include "pseudotherm/io.hpp"
#include "pseudotherm/phi.hpp"
#include "pseudotherm/spectrum.hpp"
#include "pseudotherm/version.hpp"

namespace pseudotherm {

namespace fs = std::filesystem;

namespace {

const char* const kExperiments[] = {"spectrum",       "tvdecay", "lightcone", "mixing",
                                    "irreducibility", "moments", "phimap"};

bool known_experiment(const std::string& e) {
  for (const char* x : kExperiments) {
    if (e == x) return true;
  }
  return false;
}

std::optional<GateFamily> make_family(const RunConfig& c) {
  try {
    return GateFamily::from_name(c.family, c.n);
  } catch (const std::invalid_argument&) {
    return std::nullopt;
  }
}

std::uint64_t subset_space_dim(int n, int m) {
  return binomial_saturating(Word{1} << n, static_cast<std::uint64_t>(m));
}

Subset resolve_initial(const RunConfig& c) {
  if (!c.initial.empty() && c.initial.front() == '@') {
    std::ifstream f(c.initial.substr(1));
    if (!f) throw std::runtime_error("cannot read initial subset file " + c.initial.substr(1));
    nlohmann::json j;
    f >> j;
    return subset_from_json(j, c.n);
  }
  return parse_initial_state(c.initial, c.n);
}

std::string centered_block(int n, int na) {
  std::string s(static_cast<std::size_t>(n), '0');
  const int start = (n - na) / 2;
  for (int i = 0; i < na; ++i) s[static_cast<std::size_t>(start + i)] = '+';
  return s;
}

// Random sparse distribution on the size-K subsets: `support` ranks drawn
// without replacement, exponential weights, normalized.
SubsetDistribution random_sparse_distribution(int n, int k, int support, CounterRng& rng) {
  const std::uint64_t dim = subset_space_dim(n, k);
  std::vector<std::pair<std::uint64_t, double>> entries;
  std::vector<std::uint64_t> seen;
  const auto want = std::min<std::uint64_t>(static_cast<std::uint64_t>(support), dim);
  while (seen.size() < want) {
    const std::uint64_t r = rng.uniform_below(dim);
    if (std::find(seen.begin(), seen.end(), r) == seen.end()) seen.push_back(r);
  }
  for (const std::uint64_t r : seen) {
    entries.emplace_back(r, -std::log(1.0 - rng.next_double()));
  }
  auto p = SubsetDistribution::from_sparse(n, k, std::move(entries));
  p.normalize();
  return p;
}

struct Artifacts {
  std::vector<std::string> files;
  void add(const fs::path& p) { files.push_back(p.filename().string()); }
};

void run_spectrum(const RunConfig& c, const fs::path& out, Artifacts& files) {
  if (c.relative) {
    RelativeCoordinateChain chain(c.n);
    EigsOptions opt;
    opt.k = c.eig_k;
    opt.tol = c.eig_tol;
    opt.seed = c.seed_set ? c.seed : 0x5eedULL;
    const auto spec = top_eigenvalues(chain.linear_operator(), opt);
    const fs::path p = out / "spectrum_relative.csv";
    write_spectrum_csv(p, spec);
    files.add(p);
    return;
  }
  const auto family = make_family(c);
  for (int m = c.m_lo; m <= c.m_hi; ++m) {
    TransitionOperator op(*family, m, c.index_budget);
    op.build_neighbor_cache(c.cache_bytes);
    EigsOptions opt;
    opt.k = c.eig_k;
    opt.tol = c.eig_tol;
    opt.seed = c.seed_set ? c.seed : 0x5eedULL;
    const auto spec = top_eigenvalues(op.linear_operator(), opt);
    const fs::path p = out / ("spectrum_m" + std::to_string(m) + ".csv");
    write_spectrum_csv(p, spec);
    files.add(p);
  }
}

void run_tvdecay(const RunConfig& c, const fs::path& out, Artifacts& files) {
  const auto family = make_family(c);
  const Subset s0 = resolve_initial(c);
  std::ofstream fits(out / "fits.csv", std::ios::trunc);
  fits << "m,lambda,offset,r2,points\n";
  for (int m = c.m_lo; m <= c.m_hi; ++m) {
    TransitionOperator op(*family, m, c.index_budget);
    op.build_neighbor_cache(c.cache_bytes);
    const auto p0 = induced_initial(s0, m, c.index_budget);
    EvolveOptions eopt;
    eopt.t_max = c.t_max >= 0 ? c.t_max : 100'000;
    eopt.record_every = c.record_every;
    eopt.stop_below_tv = c.fit_lo;
    const auto evo = evolve_exact(op, p0, eopt);
    const fs::path p = out / ("tv_m" + std::to_string(m) + ".csv");
    write_trace_csv(p, evo.trace);
    files.add(p);
    const auto fit = fit_late_time(evo.trace, c.fit_lo, c.fit_hi);
    fits << m << ',' << format_double(fit.lambda) << ',' << format_double(fit.offset) << ','
         << format_double(fit.r2) << ',' << fit.points << '\n';
  }
  files.files.push_back("fits.csv");
}

void run_lightcone(const RunConfig& c, const fs::path& out, Artifacts& files) {
  const auto family = make_family(c);
  const std::string spec = c.initial.empty() ? centered_block(c.n, c.na) : c.initial;
  const Subset s0 = parse_initial_state(spec, c.n);
  const std::int64_t t_max = c.t_max >= 0 ? c.t_max : 48LL * c.n;
  const std::int64_t every = c.record_every > 1 ? c.record_every : c.n;
  const int threads =
      c.threads > 0 ? c.threads : static_cast<int>(std::thread::hardware_concurrency());
  const auto trace =
      observable_trace(*family, s0, t_max, every, c.realizations, c.seed, std::max(1, threads));
  const fs::path p = out / "lightcone.csv";
  write_observables_csv(p, trace);
  files.add(p);
}

void run_mixing(const RunConfig& c, const fs::path& out, Artifacts& files) {
  const auto family = make_family(c);
  std::ofstream f(out / "mixing.csv", std::ios::trunc);
  f << "m,dim,t_rel,t_mix,lower,upper\n";
  for (int m = c.m_lo; m <= c.m_hi; ++m) {
    TransitionOperator op(*family, m, c.index_budget);
    op.build_neighbor_cache(c.cache_bytes);
    const double trel = relaxation_time(op, c.eig_tol);
    MixingResult mix;
    if (c.initial.empty()) {
      mix = worst_case_mixing_time(op, c.eps);
    } else {
      const Subset s0 = resolve_initial(c);
      mix = mixing_time(op, induced_initial(s0, m, c.index_budget), c.eps);
    }
    const double dim = static_cast<double>(op.dimension());
    const double lower = (trel - 1.0) * std::log(1.0 / (2.0 * c.eps));
    const double upper = trel * std::log(dim / c.eps);
    f << m << ',' << op.dimension() << ',' << format_double(trel) << ','
      << (mix.t ? std::to_string(*mix.t) : std::string("unreached")) << ','
      << format_double(lower) << ',' << format_double(upper) << '\n';
  }
  files.files.push_back("mixing.csv");
}

void run_irreducibility(const RunConfig& c, const fs::path& out, Artifacts& files) {
  const auto family = make_family(c);
  Subset start = c.initial.empty()
                     ? SubsetIndexer(c.n, c.m_lo, c.index_budget).unrank_subset(0)
                     : resolve_initial(c);
  const auto comp = reachable_component(*family, start, c.index_budget, false);
  nlohmann::json j{{"family", std::string(family->name())},
                   {"n", c.n},
                   {"m", start.size()},
                   {"start", subset_to_json(start)},
                   {"component_size", comp.size},
                   {"dimension", comp.dimension},
                   {"spans_all", comp.spans_all}};
  const fs::path p = out / "component.json";
  std::ofstream f(p, std::ios::trunc);
  f << j.dump(2) << '\n';
  files.add(p);
}

void run_moments(const RunConfig& c, const fs::path& out, Artifacts& files) {
  const int m = c.m_lo;
  const int k = c.k_subset;
  CounterRng rng(c.seed, 0x303);
  const auto haar = haar_moment(Word{1} << c.n, m, c.type_budget);
  std::ofstream f(out / "moments.csv", std::ios::trunc);
  f << "run,phase_trace_distance,phi_tv_times2,subset_trace_distance,m_matrix_trace_norm\n";
  for (int run = 0; run < c.runs; ++run) {
    const auto p = random_sparse_distribution(c.n, k, 8, rng);
    const auto phase = subset_phase_moment(p, m, c.type_budget);
    const double td_phase = trace_distance(phase, haar);
    const double two_tv = 2.0 * tv_to_uniform(phi_map(p, m, c.index_budget));
    const auto plain = subset_moment(p, m, c.type_budget);
    const double td_subset = trace_distance(plain, haar);
    const double mnorm = m_matrix(p, m, c.index_budget).trace_norm;
    f << run << ',' << format_double(td_phase) << ',' << format_double(two_tv) << ','
      << format_double(td_subset) << ',' << format_double(mnorm) << '\n';
  }
  files.files.push_back("moments.csv");
}

void run_phimap(const RunConfig& c, const fs::path& out, Artifacts& files) {
  const auto p = read_distribution_csv(c.input_path, c.n, c.k_subset);
  const auto pushed = phi_map(p, c.m_lo, c.index_budget);
  const fs::path path = out / "phi.csv";
  write_distribution_csv(path, pushed);
  files.add(path);
}

}  // namespace

RunConfig config_from_json(const nlohmann::json& j) {
  RunConfig c;
  auto get = [&j](const char* key, auto& slot) {
    if (j.contains(key)) slot = j.at(key).get<std::decay_t<decltype(slot)>>();
  };
  get("experiment", c.experiment);
  get("family", c.family);
  get("n", c.n);
  if (j.contains("m")) c.m_lo = c.m_hi = j.at("m").get<int>();
  get("m_lo", c.m_lo);
  get("m_hi", c.m_hi);
  get("k", c.k_subset);
  get("initial", c.initial);
  get("na", c.na);
  get("tmax", c.t_max);
  get("record_every", c.record_every);
  get("realizations", c.realizations);
  if (j.contains("seed")) {
    c.seed = j.at("seed").get<std::uint64_t>();
    c.seed_set = true;
  }
  get("runs", c.runs);
  get("eps", c.eps);
  get("fit_lo", c.fit_lo);
  get("fit_hi", c.fit_hi);
  get("eig_k", c.eig_k);
  get("eig_tol", c.eig_tol);
  get("relative", c.relative);
  get("input", c.input_path);
  get("out", c.out_dir);
  get("threads", c.threads);
  get("index_budget", c.index_budget);
  get("type_budget", c.type_budget);
  get("cache_bytes", c.cache_bytes);
  if (c.m_hi < c.m_lo) c.m_hi = c.m_lo;
  return c;
}

nlohmann::json config_to_json(const RunConfig& c) {
  nlohmann::json j{{"experiment", c.experiment},
                   {"family", c.family},
                   {"n", c.n},
                   {"m_lo", c.m_lo},
                   {"m_hi", c.m_hi},
                   {"k", c.k_subset},
                   {"initial", c.initial},
                   {"na", c.na},
                   {"tmax", c.t_max},
                   {"record_every", c.record_every},
                   {"realizations", c.realizations},
                   {"runs", c.runs},
                   {"eps", c.eps},
                   {"fit_lo", c.fit_lo},
                   {"fit_hi", c.fit_hi},
                   {"eig_k", c.eig_k},
                   {"eig_tol", c.eig_tol},
                   {"relative", c.relative},
                   {"input", c.input_path},
                   {"out", c.out_dir},
                   {"threads", c.threads},
                   {"index_budget", c.index_budget},
                   {"type_budget", c.type_budget},
                   {"cache_bytes", c.cache_bytes}};
  if (c.seed_set) j["seed"] = c.seed;
  return j;
}

std::vector<std::string> validate(const RunConfig& c) {
  std::vector<std::string> bad;
  if (!known_experiment(c.experiment)) {
    bad.push_back("unknown experiment '" + c.experiment + "'");
    return bad;
  }
  if (c.n < 1 || c.n > kMaxQubits) {
    bad.push_back("n must be in [1, 64]");
    return bad;
  }
  const bool needs_family = c.experiment == "spectrum" || c.experiment == "tvdecay" ||
                            c.experiment == "lightcone" || c.experiment == "mixing" ||
                            c.experiment == "irreducibility";
  if (needs_family && !c.relative && !make_family(c)) {
    bad.push_back("family '" + c.family + "' is not available at n=" + std::to_string(c.n) +
                  " (local_ccx needs n >= 3; not_cnot n >= 2; all_to_all_cnx n <= 32)");
  }
  const bool exact = (c.experiment == "spectrum" && !c.relative) || c.experiment == "tvdecay" ||
                     c.experiment == "mixing" || c.experiment == "irreducibility";
  if (exact) {
    const int m_hi = std::max(c.m_lo, c.m_hi);
    if (c.m_lo < 1) {
      bad.push_back("m must be >= 1");
    } else {
      for (int m = c.m_lo; m <= m_hi; ++m) {
        const std::uint64_t dim = subset_space_dim(c.n, m);
        if (dim == kBinomialOverflow || dim > c.index_budget) {
          bad.push_back("C(2^" + std::to_string(c.n) + ", " + std::to_string(m) +
                        ") exceeds the dense-index budget " + std::to_string(c.index_budget));
        }
      }
    }
  }
  if (c.experiment == "spectrum" && c.relative && (c.n < 3 || c.n > 30)) {
    bad.push_back("relative-chain spectrum needs n in [3, 30]");
  }
  if (c.experiment == "tvdecay" || (c.experiment == "mixing" && !c.initial.empty())) {
    try {
      const Subset s0 = resolve_initial(c);
      if (static_cast<std::size_t>(std::max(c.m_lo, c.m_hi)) > s0.size()) {
        bad.push_back("m exceeds the initial subset size K = " + std::to_string(s0.size()));
      }
    } catch (const std::exception& e) {
      bad.push_back(std::string("initial state: ") + e.what());
    }
  }
  if (c.experiment == "lightcone") {
    if (!c.seed_set) bad.push_back("lightcone requires --seed (stochastic experiment)");
    if (c.na < 1 || c.na > c.n) bad.push_back("na must be in [1, n]");
    if (c.realizations < 1) bad.push_back("realizations must be >= 1");
  }
  if (c.experiment == "moments") {
    if (!c.seed_set) bad.push_back("moments requires --seed (stochastic experiment)");
    if (c.k_subset < 1) bad.push_back("moments requires K >= 1 (--k)");
    if (c.m_lo < 1 || 2 * c.m_lo > c.k_subset) {
      bad.push_back("moments requires 1 <= m <= K/2");
    }
    const std::uint64_t d = Word{1} << c.n;
    const std::uint64_t tdim =
        binomial_saturating(d + static_cast<std::uint64_t>(c.m_lo) - 1,
                            static_cast<std::uint64_t>(c.m_lo));
    if (tdim == kBinomialOverflow || tdim > c.type_budget) {
      bad.push_back("C(2^n + m - 1, m) exceeds the moment budget " +
                    std::to_string(c.type_budget));
    }
    const std::uint64_t kdim = subset_space_dim(c.n, c.k_subset);
    if (kdim == kBinomialOverflow) bad.push_back("K too large for the subset space");
  }
  if (c.experiment == "phimap") {
    if (c.input_path.empty()) bad.push_back("phimap requires --input");
    if (c.k_subset < 1 || c.m_lo < 1 || c.m_lo > c.k_subset) {
      bad.push_back("phimap requires 1 <= m <= K");
    }
    const std::uint64_t dim = subset_space_dim(c.n, c.m_lo);
    if (dim == kBinomialOverflow || dim > c.index_budget) {
      bad.push_back("target subset space exceeds the dense-index budget");
    }
  }
  return bad;
}

int run_experiment(const RunConfig& c) {
  const auto violations = validate(c);
  if (!violations.empty()) {
    for (const auto& v : violations) std::cerr << "invalid config: " << v << '\n';
    return 2;
  }
  std::string out_name = c.out_dir;
  if (out_name.empty()) {
    const char* env = std::getenv("PSEUDOTHERM_OUT");
    out_name = env != nullptr ? env : ".";
  }
  const fs::path out(out_name);
  fs::create_directories(out);

  Artifacts files;
  const auto start = std::chrono::steady_clock::now();
  try {
    if (c.experiment == "spectrum") run_spectrum(c, out, files);
    else if (c.experiment == "tvdecay") run_tvdecay(c, out, files);
    else if (c.experiment == "lightcone") run_lightcone(c, out, files);
    else if (c.experiment == "mixing") run_mixing(c, out, files);
    else if (c.experiment == "irreducibility") run_irreducibility(c, out, files);
    else if (c.experiment == "moments") run_moments(c, out, files);
    else if (c.experiment == "phimap") run_phimap(c, out, files);
  } catch (const CapacityError& e) {
    std::cerr << "capacity: " << e.what() << '\n';
    return 3;
  } catch (const ConvergenceError& e) {
    std::cerr << "solver: " << e.what() << '\n';
    return 4;
  }
  const double wall =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

  nlohmann::json manifest{{"config", config_to_json(c)},
                          {"version", std::string(kVersion)},
                          {"wall_time_s", wall},
                          {"files", files.files}};
  std::ofstream mf(out / "manifest.json", std::ios::trunc);
  mf << manifest.dump(2) << '\n';
  return 0;
}

}  // namespace pseudotherm
