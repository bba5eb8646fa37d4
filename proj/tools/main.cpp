// Copyright 2026 The pseudotherm Authors
// SPDX-License-Identifier: Apache-2.0

#include <CLI11.hpp>
#include <fstream>
#include <iostream>

#include <json.hpp>

#include "pseudotherm/run.hpp"
#include "pseudotherm/version.hpp"

namespace {

using pseudotherm::RunConfig;

// Attaches the shared flag set to one experiment subcommand. Values land in
// the config only when the flag is actually passed, so a --config file keeps
// its settings unless overridden on the command line.
void attach_common(CLI::App* cmd, RunConfig& c, std::string& m_range, std::string& config_path) {
  cmd->add_option("--config", config_path, "JSON config file (same field names as flags)");
  cmd->add_option("--family", c.family, "gate family: local | alltoall | notcnot | simpleperm");
  cmd->add_option("--n", c.n, "number of qubits");
  cmd->add_option("--m", c.m_lo, "subset size");
  cmd->add_option("--mrange", m_range, "inclusive subset-size range, e.g. 1:8");
  cmd->add_option("--initial", c.initial, "site string over {0,1,+}, or @subset.json");
  cmd->add_option("--na", c.na, "width of the centered + block");
  cmd->add_option("--tmax", c.t_max, "gate-count horizon");
  cmd->add_option("--record-every", c.record_every, "snapshot period in gates");
  cmd->add_option("--realizations", c.realizations, "Monte Carlo circuit realizations");
  cmd->add_option("--runs", c.runs, "number of randomized check runs");
  cmd->add_option("--eps", c.eps, "mixing threshold on TV distance");
  cmd->add_option("--fit-lo", c.fit_lo, "lower edge of the TV fit window");
  cmd->add_option("--fit-hi", c.fit_hi, "upper edge of the TV fit window");
  cmd->add_option("--eig-tol", c.eig_tol, "eigensolver residual tolerance");
  cmd->add_flag("--relative", c.relative, "use the reduced pair walk");
  cmd->add_option("--input", c.input_path, "input distribution CSV (rank,probability)");
  cmd->add_option("--out", c.out_dir, "output directory (default $PSEUDOTHERM_OUT or .)");
  cmd->add_option("--threads", c.threads, "worker threads (0 = hardware)");
  cmd->add_option("--index-budget", c.index_budget, "dense subset-space budget");
  cmd->add_option("--type-budget", c.type_budget, "moment-space dimension budget");
  cmd->add_option("--cache-bytes", c.cache_bytes, "neighbor-table memory cap");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"pseudotherm: subset-chain dynamics, spectra, and moment diagnostics"};
  app.set_version_flag("--version", std::string(pseudotherm::kVersion));
  app.require_subcommand(1);

  RunConfig cli;
  std::string m_range;
  std::string config_path;
  std::uint64_t seed = 0;
  bool seed_passed = false;

  const char* names[] = {"spectrum",       "tvdecay", "lightcone", "mixing",
                         "irreducibility", "moments", "phimap"};
  const char* blurbs[] = {
      "top of the transition-operator spectrum",
      "exact TV-distance decay with late-time exponential fits",
      "circuit-averaged site observables over random realizations",
      "relaxation and mixing times with two-sided bounds",
      "BFS over the subset graph from a start subset",
      "moment-operator distances and pushforward diagnostics on random inputs",
      "pushforward of a subset distribution to smaller subsets",
  };
  for (std::size_t i = 0; i < std::size(names); ++i) {
    CLI::App* cmd = app.add_subcommand(names[i], blurbs[i]);
    attach_common(cmd, cli, m_range, config_path);
    cmd->add_option_function<std::uint64_t>(
        "--seed", [&seed, &seed_passed](std::uint64_t v) { seed = v; seed_passed = true; },
        "RNG seed (required for stochastic experiments)");
    // --k is the eigenvalue count for spectrum runs and the source subset
    // size everywhere else.
    if (std::string(names[i]) == "spectrum") {
      cmd->add_option("--k,--eig-k", cli.eig_k, "number of eigenvalues");
    } else {
      cmd->add_option("--k", cli.k_subset, "source subset size K");
      cmd->add_option("--eig-k", cli.eig_k, "number of eigenvalues");
    }
  }

  CLI11_PARSE(app, argc, argv);
  CLI::App* active = app.get_subcommands().front();

  RunConfig cfg;
  if (!config_path.empty()) {
    std::ifstream f(config_path);
    if (!f) {
      std::cerr << "cannot read config file " << config_path << '\n';
      return 2;
    }
    nlohmann::json j;
    try {
      f >> j;
      cfg = pseudotherm::config_from_json(j);
    } catch (const std::exception& e) {
      std::cerr << "bad config file: " << e.what() << '\n';
      return 2;
    }
  }
  cfg.experiment = active->get_name();

  // Explicit flags override config-file values.
  auto passed = [&](const char* flag) { return active->count(flag) > 0; };
  const bool is_spectrum = active->get_name() == "spectrum";
  if (passed("--family")) cfg.family = cli.family;
  if (passed("--n")) cfg.n = cli.n;
  if (passed("--m")) cfg.m_lo = cfg.m_hi = cli.m_lo;
  if (passed("--k") && is_spectrum) cfg.eig_k = cli.eig_k;
  if (passed("--k") && !is_spectrum) cfg.k_subset = cli.k_subset;
  if (passed("--initial")) cfg.initial = cli.initial;
  if (passed("--na")) cfg.na = cli.na;
  if (passed("--tmax")) cfg.t_max = cli.t_max;
  if (passed("--record-every")) cfg.record_every = cli.record_every;
  if (passed("--realizations")) cfg.realizations = cli.realizations;
  if (passed("--runs")) cfg.runs = cli.runs;
  if (passed("--eps")) cfg.eps = cli.eps;
  if (passed("--fit-lo")) cfg.fit_lo = cli.fit_lo;
  if (passed("--fit-hi")) cfg.fit_hi = cli.fit_hi;
  if (passed("--eig-k")) cfg.eig_k = cli.eig_k;
  if (passed("--eig-tol")) cfg.eig_tol = cli.eig_tol;
  if (passed("--relative")) cfg.relative = cli.relative;
  if (passed("--input")) cfg.input_path = cli.input_path;
  if (passed("--out")) cfg.out_dir = cli.out_dir;
  if (passed("--threads")) cfg.threads = cli.threads;
  if (passed("--index-budget")) cfg.index_budget = cli.index_budget;
  if (passed("--type-budget")) cfg.type_budget = cli.type_budget;
  if (passed("--cache-bytes")) cfg.cache_bytes = cli.cache_bytes;
  if (seed_passed) {
    cfg.seed = seed;
    cfg.seed_set = true;
  }
  if (passed("--mrange")) {
    const auto colon = m_range.find(':');
    if (colon == std::string::npos) {
      std::cerr << "--mrange expects lo:hi\n";
      return 2;
    }
    try {
      cfg.m_lo = std::stoi(m_range.substr(0, colon));
      cfg.m_hi = std::stoi(m_range.substr(colon + 1));
    } catch (const std::exception&) {
      std::cerr << "--mrange expects integers lo:hi\n";
      return 2;
    }
  }
  if (cfg.m_hi < cfg.m_lo) cfg.m_hi = cfg.m_lo;

  try {
    return pseudotherm::run_experiment(cfg);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
}
