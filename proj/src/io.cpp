// Copyright 2026 The pseudotherm Authors
// SPDX-License-Identifier: Apache-2.0

#include "pseudotherm/io.hpp"

#include <cstdio>
#include <fstream>
#include <stdexcept>

namespace pseudotherm {

namespace {

std::ofstream open_out(const std::filesystem::path& path, std::ios::openmode mode = {}) {
  std::ofstream f(path, mode | std::ios::trunc);
  if (!f) throw std::runtime_error("cannot open for writing: " + path.string());
  return f;
}

std::ifstream open_in(const std::filesystem::path& path, std::ios::openmode mode = {}) {
  std::ifstream f(path, mode);
  if (!f) throw std::runtime_error("cannot open for reading: " + path.string());
  return f;
}

}  // namespace

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

void write_spectrum_csv(const std::filesystem::path& path, const SpectrumResult& s) {
  auto f = open_out(path);
  f << "index,eigenvalue,residual\n";
  for (std::size_t i = 0; i < s.eigenvalues.size(); ++i) {
    f << i << ',' << format_double(s.eigenvalues[i]) << ',' << format_double(s.residuals[i])
      << '\n';
  }
}

void write_distribution_csv(const std::filesystem::path& path, const SubsetDistribution& p) {
  auto f = open_out(path);
  f << "rank,probability\n";
  if (p.is_dense()) {
    for (std::size_t r = 0; r < p.dense().size(); ++r) {
      f << r << ',' << format_double(p.dense()[r]) << '\n';
    }
  } else {
    for (const auto& [rank, prob] : p.sparse()) {
      f << rank << ',' << format_double(prob) << '\n';
    }
  }
}

SubsetDistribution read_distribution_csv(const std::filesystem::path& path, int n, int m) {
  auto f = open_in(path);
  std::string line;
  if (!std::getline(f, line)) throw std::runtime_error("empty distribution file");
  std::vector<std::pair<std::uint64_t, double>> entries;
  while (std::getline(f, line)) {
    if (line.empty()) continue;
    const auto comma = line.find(',');
    if (comma == std::string::npos) {
      throw std::runtime_error("malformed distribution row: " + line);
    }
    entries.emplace_back(std::stoull(line.substr(0, comma)),
                         std::stod(line.substr(comma + 1)));
  }
  auto p = SubsetDistribution::from_sparse(n, m, std::move(entries));
  p.normalize();
  return p;
}

void write_trace_csv(const std::filesystem::path& path, const TvTrace& trace) {
  auto f = open_out(path);
  f << "t,tv\n";
  for (std::size_t i = 0; i < trace.times.size(); ++i) {
    f << trace.times[i] << ',' << format_double(trace.tv[i]) << '\n';
  }
}

void write_observables_csv(const std::filesystem::path& path, const ObservableTrace& trace) {
  auto f = open_out(path);
  f << "t,site,zbar,z2bar\n";
  for (std::size_t k = 0; k < trace.times.size(); ++k) {
    for (int i = 0; i < trace.sites; ++i) {
      const std::size_t cell = k * static_cast<std::size_t>(trace.sites) +
                               static_cast<std::size_t>(i);
      f << trace.times[k] << ',' << i << ',' << format_double(trace.zbar[cell]) << ','
        << format_double(trace.z2bar[cell]) << '\n';
    }
  }
}

nlohmann::json subset_to_json(const Subset& s) {
  nlohmann::json arr = nlohmann::json::array();
  for (Word z : s.elements()) arr.push_back(z);
  return arr;
}

Subset subset_from_json(const nlohmann::json& j, int n) {
  if (!j.is_array()) throw std::runtime_error("subset JSON must be an array of integers");
  std::vector<Word> elems;
  elems.reserve(j.size());
  for (const auto& v : j) elems.push_back(v.get<Word>());
  return Subset(std::move(elems), n);
}

nlohmann::json circuit_to_json(std::span<const GateId> circuit) {
  nlohmann::json arr = nlohmann::json::array();
  for (const GateId& g : circuit) {
    arr.push_back(nlohmann::json::array({std::string(g.family.name()), g.index}));
  }
  return arr;
}

std::vector<GateId> circuit_from_json(const nlohmann::json& j, int n) {
  if (!j.is_array()) throw std::runtime_error("circuit JSON must be an array of pairs");
  std::vector<GateId> out;
  out.reserve(j.size());
  for (const auto& pair : j) {
    if (!pair.is_array() || pair.size() != 2) {
      throw std::runtime_error("circuit entries must be [family, index] pairs");
    }
    const auto fam = GateFamily::from_name(pair[0].get<std::string>(), n);
    if (!fam) throw std::runtime_error("unknown gate family: " + pair[0].get<std::string>());
    const auto index = pair[1].get<std::uint64_t>();
    if (index >= fam->size()) throw std::runtime_error("gate index out of range in circuit");
    out.push_back(GateId{*fam, index});
  }
  return out;
}

void write_moment_operator(const std::filesystem::path& path, const MomentOperator& op) {
  auto f = open_out(path, std::ios::binary);
  nlohmann::json header{{"dim", op.mat.rows()}, {"m", op.m}, {"d", op.d},
                        {"basis", "type-colex"}};
  f << header.dump() << '\n';
  // Row-major little-endian doubles.
  for (Eigen::Index r = 0; r < op.mat.rows(); ++r) {
    for (Eigen::Index c = 0; c < op.mat.cols(); ++c) {
      const double v = op.mat(r, c);
      f.write(reinterpret_cast<const char*>(&v), sizeof(v));
    }
  }
}

MomentOperator read_moment_operator(const std::filesystem::path& path) {
  auto f = open_in(path, std::ios::binary);
  std::string header_line;
  if (!std::getline(f, header_line)) throw std::runtime_error("missing moment header");
  const auto header = nlohmann::json::parse(header_line);
  MomentOperator op;
  op.d = header.at("d").get<std::uint64_t>();
  op.m = header.at("m").get<int>();
  const auto dim = header.at("dim").get<Eigen::Index>();
  if (header.at("basis").get<std::string>() != "type-colex") {
    throw std::runtime_error("unsupported moment basis");
  }
  op.mat.resize(dim, dim);
  for (Eigen::Index r = 0; r < dim; ++r) {
    for (Eigen::Index c = 0; c < dim; ++c) {
      double v = 0;
      f.read(reinterpret_cast<char*>(&v), sizeof(v));
      if (!f) throw std::runtime_error("truncated moment payload");
      op.mat(r, c) = v;
    }
  }
  return op;
}

Subset parse_initial_state(const std::string& spec, int n) {
  if (static_cast<int>(spec.size()) != n) {
    throw std::invalid_argument("initial state must have exactly one character per site");
  }
  Word fixed = 0;
  std::vector<int> free_sites;
  for (int i = 0; i < n; ++i) {
    switch (spec[static_cast<std::size_t>(i)]) {
      case '0': break;
      case '1': fixed |= Word{1} << i; break;
      case '+': free_sites.push_back(i); break;
      default:
        throw std::invalid_argument("initial state characters must be 0, 1, or +");
    }
  }
  if (free_sites.size() > 26) {
    throw std::invalid_argument("too many + sites to materialize the subset");
  }
  std::vector<Word> elems;
  elems.reserve(std::size_t{1} << free_sites.size());
  for (Word combo = 0; combo < (Word{1} << free_sites.size()); ++combo) {
    Word z = fixed;
    for (std::size_t b = 0; b < free_sites.size(); ++b) {
      if ((combo >> b) & 1) z |= Word{1} << free_sites[b];
    }
    elems.push_back(z);
  }
  return Subset(std::move(elems), n);
}

}  // namespace pseudotherm
