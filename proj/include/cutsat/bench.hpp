// Copyright 2026 The cutsat Authors
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Benchmark rows, BKS tables and per-configuration metrics.
//
// CSV rows: instance,config,status,k,vars,clauses,ttb with raw variable and
// clause counts and ttb in seconds ("--" when the run timed out). status is
// opt (certified), feas (k matches the BKS without proof) or timeout.

#pragma once

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <istream>
#include <map>
#include <mutex>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "cutsat/model.hpp"
#include "cutsat/search.hpp"

namespace cutsat {

enum class RowStatus { kOpt, kFeas, kTimeout };

inline const char* to_string(RowStatus s) {
  switch (s) {
    case RowStatus::kOpt: return "opt";
    case RowStatus::kFeas: return "feas";
    case RowStatus::kTimeout: return "timeout";
  }
  return "?";
}

struct BenchRow {
  std::string instance;
  std::string config;
  RowStatus status = RowStatus::kTimeout;
  int k = 0;
  uint64_t vars = 0;
  uint64_t clauses = 0;
  std::optional<double> ttb;

  friend bool operator==(const BenchRow&, const BenchRow&) = default;
};

struct BenchMetrics {
  std::string config;
  int instances = 0;
  int n_opt = 0;
  int n_feas = 0;
  double avg_ttb = 0;        // over opt and feas rows only
  double total_vars = 0;     // x 10^3
  double total_clauses = 0;  // x 10^6
  double gap_percent = 0;    // mean over rows with a BKS
  int gap_instances = 0;
  std::vector<std::string> missing_bks;
};

using BksTable = std::map<std::string, int>;

namespace detail {

inline std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> out;
  std::string cell;
  std::istringstream in(line);
  while (std::getline(in, cell, ',')) {
    const auto b = cell.find_first_not_of(" \t\r");
    const auto e = cell.find_last_not_of(" \t\r");
    out.push_back(b == std::string::npos ? std::string() : cell.substr(b, e - b + 1));
  }
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

template <typename T>
T parse_cell(const std::string& s, int line, const char* what) {
  std::istringstream in(s);
  T v{};
  if (!(in >> v) || !(in >> std::ws).eof())
    throw InputError(line, std::string("bad ") + what + " '" + s + "'");
  return v;
}

}  // namespace detail

inline std::optional<RowStatus> parse_row_status(const std::string& s) {
  if (s == "opt") return RowStatus::kOpt;
  if (s == "feas") return RowStatus::kFeas;
  if (s == "timeout") return RowStatus::kTimeout;
  return std::nullopt;
}

inline void write_bench_header(std::ostream& out) {
  out << "instance,config,status,k,vars,clauses,ttb\n";
}

inline void write_bench_row(std::ostream& out, const BenchRow& r) {
  out << r.instance << ',' << r.config << ',' << to_string(r.status) << ',' << r.k << ','
      << r.vars << ',' << r.clauses << ',';
  if (r.ttb) {
    std::ostringstream t;
    t << std::fixed << std::setprecision(3) << *r.ttb;
    out << t.str();
  } else {
    out << "--";
  }
  out << '\n';
}

inline void write_bench_csv(std::ostream& out, const std::vector<BenchRow>& rows) {
  write_bench_header(out);
  for (const auto& r : rows) write_bench_row(out, r);
}

inline std::vector<BenchRow> read_bench_csv(std::istream& in) {
  std::vector<BenchRow> rows;
  std::string line;
  int no = 0;
  bool header = false;
  while (std::getline(in, line)) {
    ++no;
    if (line.find_first_not_of(" \t\r") == std::string::npos || line[0] == '#') continue;
    const auto cells = detail::split_csv(line);
    if (!header) {
      header = true;
      if (!cells.empty() && cells[0] == "instance") continue;
    }
    if (cells.size() != 7) throw InputError(no, "expected 7 columns");
    BenchRow r;
    r.instance = cells[0];
    r.config = cells[1];
    const auto st = parse_row_status(cells[2]);
    if (!st) throw InputError(no, "unknown status '" + cells[2] + "'");
    r.status = *st;
    r.k = detail::parse_cell<int>(cells[3], no, "k");
    r.vars = detail::parse_cell<uint64_t>(cells[4], no, "variable count");
    r.clauses = detail::parse_cell<uint64_t>(cells[5], no, "clause count");
    if (cells[6] != "--" && cells[6] != "-" && !cells[6].empty())
      r.ttb = detail::parse_cell<double>(cells[6], no, "ttb");
    rows.push_back(std::move(r));
  }
  return rows;
}

inline BksTable read_bks_csv(std::istream& in) {
  BksTable t;
  std::string line;
  int no = 0;
  bool header = false;
  while (std::getline(in, line)) {
    ++no;
    if (line.find_first_not_of(" \t\r") == std::string::npos || line[0] == '#') continue;
    const auto cells = detail::split_csv(line);
    if (!header) {
      header = true;
      if (!cells.empty() && cells[0] == "instance") continue;
    }
    if (cells.size() != 2) throw InputError(no, "expected instance,bks");
    const int b = detail::parse_cell<int>(cells[1], no, "bks");
    if (b < 1) throw InputError(no, "bks must be positive");
    t[cells[0]] = b;
  }
  return t;
}

// opt if certified; feas if k reaches the BKS without proof; else timeout.
inline RowStatus classify(const SolveOutcome& o, std::optional<int> bks) {
  if (o.status == OutcomeStatus::kOptimal) return RowStatus::kOpt;
  if (o.status == OutcomeStatus::kFeasible && bks && o.best_k <= *bks) return RowStatus::kFeas;
  return RowStatus::kTimeout;
}

inline BenchRow make_row(const std::string& instance, const SolveOutcome& o,
                         std::optional<int> bks) {
  BenchRow r;
  r.instance = instance;
  r.config = o.config;
  r.status = classify(o, bks);
  r.k = o.best_k;
  r.vars = o.vars;
  r.clauses = o.clauses;
  if (r.status != RowStatus::kTimeout) r.ttb = o.time_to_best;
  return r;
}

// Metrics per configuration, in order of first appearance. Instances without
// a BKS entry are left out of the gap and listed in missing_bks.
inline std::vector<BenchMetrics> aggregate(const std::vector<BenchRow>& rows, const BksTable& bks) {
  std::vector<BenchMetrics> out;
  std::map<std::string, size_t> index;
  std::vector<double> ttb_sum, gap_sum;
  std::vector<int> ttb_n;
  for (const auto& r : rows) {
    auto [it, fresh] = index.emplace(r.config, out.size());
    if (fresh) {
      out.emplace_back();
      out.back().config = r.config;
      ttb_sum.push_back(0);
      gap_sum.push_back(0);
      ttb_n.push_back(0);
    }
    const size_t i = it->second;
    BenchMetrics& m = out[i];
    ++m.instances;
    if (r.status == RowStatus::kOpt) ++m.n_opt;
    if (r.status == RowStatus::kFeas) ++m.n_feas;
    if (r.status != RowStatus::kTimeout && r.ttb) {
      ttb_sum[i] += *r.ttb;
      ++ttb_n[i];
    }
    m.total_vars += static_cast<double>(r.vars) / 1e3;
    m.total_clauses += static_cast<double>(r.clauses) / 1e6;
    const auto b = bks.find(r.instance);
    if (b == bks.end()) {
      m.missing_bks.push_back(r.instance);
      continue;
    }
    gap_sum[i] += static_cast<double>(r.k - b->second) / b->second * 100.0;
    ++m.gap_instances;
  }
  for (size_t i = 0; i < out.size(); ++i) {
    if (ttb_n[i] > 0) out[i].avg_ttb = ttb_sum[i] / ttb_n[i];
    if (out[i].gap_instances > 0) out[i].gap_percent = gap_sum[i] / out[i].gap_instances;
  }
  return out;
}

inline void write_metrics_table(std::ostream& out, const std::vector<BenchMetrics>& ms) {
  char buf[160];
  std::snprintf(buf, sizeof buf, "%-14s %5s %6s %12s %16s %16s %8s\n", "Config", "#Opt", "#Feas",
                "Avg TTB (s)", "Tot Vars (1e3)", "Tot Cls (1e6)", "Gap (%)");
  out << buf;
  for (const auto& m : ms) {
    char gap[32] = "--";
    if (m.gap_instances > 0) std::snprintf(gap, sizeof gap, "%.2f", m.gap_percent);
    std::snprintf(buf, sizeof buf, "%-14s %5d %6d %12.1f %16.1f %16.1f %8s\n",
                  m.config.c_str(), m.n_opt, m.n_feas, m.avg_ttb, m.total_vars,
                  m.total_clauses, gap);
    out << buf;
  }
}

struct BenchInstance {
  std::string name;
  std::string path;
};

// Regular files of `dir`, sorted by name; solution, CSV and SVG files and
// hidden files are skipped. The instance name is the file stem.
inline std::vector<BenchInstance> list_instances(const std::string& dir) {
  std::vector<BenchInstance> out;
  for (const auto& e : std::filesystem::directory_iterator(dir)) {
    if (!e.is_regular_file()) continue;
    const auto p = e.path();
    const std::string fname = p.filename().string();
    const std::string ext = p.extension().string();
    if (fname.empty() || fname[0] == '.') continue;
    if (ext == ".sol" || ext == ".csv" || ext == ".svg" || ext == ".md") continue;
    out.push_back({p.stem().string(), p.string()});
  }
  std::sort(out.begin(), out.end(),
            [](const BenchInstance& a, const BenchInstance& b) { return a.name < b.name; });
  return out;
}

struct BenchOptions {
  std::vector<SearchConfig> configs;
  int jobs = 1;
};

struct BenchResult {
  std::vector<BenchRow> rows;           // instance-major, configs in the given order
  std::vector<std::string> warnings;
};

// Runs every configuration on every instance. Workers take whole instances,
// so each run is sequential and rows come out in a fixed order.
inline BenchResult run_bench(const std::vector<BenchInstance>& instances, const BksTable& bks,
                             const BenchOptions& opts) {
  const size_t nc = opts.configs.size();
  std::vector<std::optional<BenchRow>> slots(instances.size() * nc);
  std::vector<std::string> errors(instances.size());
  std::atomic<size_t> next{0};

  auto worker = [&] {
    while (true) {
      const size_t i = next.fetch_add(1);
      if (i >= instances.size()) return;
      const auto& bi = instances[i];
      Instance inst;
      try {
        std::ifstream in(bi.path);
        if (!in) throw InputError(0, "cannot open " + bi.path);
        inst = parse_instance(in, true, bi.name);
      } catch (const std::exception& e) {
        errors[i] = bi.name + ": " + e.what();
        continue;
      }
      std::optional<int> bv;
      if (const auto b = bks.find(bi.name); b != bks.end()) bv.emplace(b->second);
      for (size_t c = 0; c < nc; ++c) {
        try {
          SearchConfig cfg = opts.configs[c];
          cfg.start.reset();
          slots[i * nc + c] = make_row(bi.name, solve(inst, cfg), bv);
        } catch (const std::exception& e) {
          errors[i] += (errors[i].empty() ? bi.name + ": " : std::string("; ")) +
                       config_label(opts.configs[c]) + " " + e.what();
        }
      }
    }
  };

  const int jobs = std::max(1, std::min<int>(opts.jobs, static_cast<int>(instances.size())));
  std::vector<std::thread> pool;
  for (int j = 1; j < jobs; ++j) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();

  BenchResult r;
  for (auto& s : slots)
    if (s) r.rows.push_back(std::move(*s));
  for (const auto& e : errors)
    if (!e.empty()) r.warnings.push_back(e);
  for (const auto& bi : instances)
    if (!bks.count(bi.name)) r.warnings.push_back(bi.name + ": no BKS entry, excluded from gap");
  return r;
}

}  // namespace cutsat
