// Copyright 2026 The pseudotherm Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

#include "pseudotherm/chain.hpp"
#include "pseudotherm/moments.hpp"

namespace pseudotherm {

/// One reproducible experiment run. Fields mirror the CLI flags; a JSON
/// config file uses the same names.
struct RunConfig {
  std::string experiment;  // spectrum | tvdecay | lightcone | mixing |
                           // irreducibility | moments | phimap
  std::string family = "local";
  int n = 0;
  int m_lo = 0;
  int m_hi = 0;               // inclusive; 0 -> same as m_lo
  int k_subset = 0;           // source subset size K
  std::string initial;        // site string over {0,1,+}, or "@file.json"
  int na = 4;                 // width of the centered + block (lightcone)
  std::int64_t t_max = -1;    // -1 -> experiment default
  std::int64_t record_every = 1;
  int realizations = 10'000;
  bool seed_set = false;
  std::uint64_t seed = 0;
  int runs = 50;              // randomized checks (moments)
  double eps = 0.25;          // mixing threshold
  double fit_lo = 1e-8;       // fit window on TV
  double fit_hi = 1e-2;
  int eig_k = 20;
  double eig_tol = 1e-10;
  bool relative = false;      // spectrum of the reduced pair walk
  std::string input_path;     // phimap source distribution
  std::string out_dir;        // empty -> $PSEUDOTHERM_OUT or "."
  int threads = 0;            // 0 -> hardware concurrency
  std::uint64_t index_budget = kDefaultIndexBudget;
  std::uint64_t type_budget = kDefaultTypeBudget;
  std::uint64_t cache_bytes = kDefaultCacheBytes;
};

RunConfig config_from_json(const nlohmann::json& j);
nlohmann::json config_to_json(const RunConfig& c);

/// Empty when the config is runnable; otherwise one message per violated
/// constraint (budgets, family/n compatibility, parse errors, ...).
std::vector<std::string> validate(const RunConfig& c);

/// Runs the experiment, writing CSV/JSON artifacts plus manifest.json into
/// the output directory. Exit-code convention: 0 success, 2 validation
/// failure, 3 capacity exceeded, 4 eigensolver non-convergence.
int run_experiment(const RunConfig& c);

}  // namespace pseudotherm
