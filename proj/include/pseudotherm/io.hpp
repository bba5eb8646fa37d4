// Copyright 2026 The pseudotherm Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

#include "pseudotherm/distribution.hpp"
#include "pseudotherm/dynamics.hpp"
#include "pseudotherm/gates.hpp"
#include "pseudotherm/moments.hpp"
#include "pseudotherm/spectrum.hpp"

namespace pseudotherm {

/// Shortest round-trip decimal form (printf %.17g, C locale).
std::string format_double(double v);

/// "index,eigenvalue,residual" rows.
void write_spectrum_csv(const std::filesystem::path& path, const SpectrumResult& s);

/// "rank,probability" rows (dense or sparse).
void write_distribution_csv(const std::filesystem::path& path, const SubsetDistribution& p);

/// Reads "rank,probability" rows into a sparse distribution on (n, m).
SubsetDistribution read_distribution_csv(const std::filesystem::path& path, int n, int m);

/// "t,tv" rows.
void write_trace_csv(const std::filesystem::path& path, const TvTrace& trace);

/// "t,site,zbar,z2bar" rows.
void write_observables_csv(const std::filesystem::path& path, const ObservableTrace& trace);

/// Subsets serialize as JSON arrays of integers.
nlohmann::json subset_to_json(const Subset& s);
Subset subset_from_json(const nlohmann::json& j, int n);

/// Gate sequences serialize as JSON arrays of [family, index] pairs.
nlohmann::json circuit_to_json(std::span<const GateId> circuit);
std::vector<GateId> circuit_from_json(const nlohmann::json& j, int n);

/// Binary matrix container: one-line JSON header {dim, m, d, basis} followed
/// by row-major little-endian doubles.
void write_moment_operator(const std::filesystem::path& path, const MomentOperator& op);
MomentOperator read_moment_operator(const std::filesystem::path& path);

/// Initial-state mini-language: one character per site over {0, 1, +},
/// site i = character i; '+' puts the site in even superposition, doubling
/// the subset. Example: "00+++" on five sites gives the 8 labels with sites
/// 0 and 1 fixed to 0.
Subset parse_initial_state(const std::string& spec, int n);

}  // namespace pseudotherm
