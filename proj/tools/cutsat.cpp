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

// cutsat: solve, encode, verify, benchmark and render 2D cutting stock
// instances. Exit codes for solve: 0 optimal, 10 feasible, 20 unknown,
// 30 decoded model rejected, 2 bad input.

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "cutsat/cutsat.hpp"

namespace {

using namespace cutsat;

const auto kProcessStart = Clock::now();

constexpr int kExitOptimal = 0;
constexpr int kExitInvalid = 1;
constexpr int kExitInput = 2;
constexpr int kExitFeasible = 10;
constexpr int kExitUnknown = 20;
constexpr int kExitModelError = 30;

Instance load_instance(const std::string& path, bool rotation) {
  std::ifstream in(path);
  if (!in) throw InputError(0, "cannot open " + path);
  return parse_instance(in, rotation, std::filesystem::path(path).stem().string());
}

Solution load_solution(const std::string& path, const Instance& inst) {
  std::ifstream in(path);
  if (!in) throw InputError(0, "cannot open " + path);
  return read_solution(in, inst);
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  out << content;
  if (!out) throw std::runtime_error("cannot write " + path);
}

std::vector<std::string> write_svgs(const std::string& prefix, const Instance& inst,
                                    const Solution& sol, bool rotation) {
  std::vector<std::string> paths;
  const auto pages = render_svg(inst, sol, rotation);
  for (size_t i = 0; i < pages.size(); ++i) {
    paths.push_back(prefix + "-sheet" + std::to_string(i + 1) + ".svg");
    write_file(paths.back(), pages[i]);
  }
  return paths;
}

std::string fmt_seconds(double s) {
  std::ostringstream o;
  o << std::fixed << std::setprecision(6) << s;
  return o.str();
}

// ---- solve ----

struct SolveArgs {
  std::string input;
  std::string strategy = "sat";
  bool rotation = false;
  bool sb = false;
  double time_limit = 0;
  std::string solver_cmd;
  std::string out;
  std::string svg;
  uint64_t seed = sat::SolverOptions{}.seed;
  bool quiet_calls = false;
};

int cmd_solve(const SolveArgs& a) {
  const auto strategy = parse_strategy(a.strategy);
  if (!strategy) {
    std::cerr << "error: unknown strategy '" << a.strategy << "'\n";
    return kExitInput;
  }
  Instance inst;
  try {
    inst = load_instance(a.input, a.rotation);
  } catch (const InputError& e) {
    std::cerr << "error: " << a.input << ": " << e.what() << '\n';
    return kExitInput;
  }

  SearchConfig cfg;
  cfg.strategy = *strategy;
  cfg.rotation = a.rotation;
  cfg.symmetry_breaking = a.sb;
  if (a.time_limit > 0) cfg.time_limit = a.time_limit;
  cfg.external_command = a.solver_cmd.empty() ? sat::default_solver_command() : a.solver_cmd;
  cfg.solver.seed = a.seed;
  cfg.start = kProcessStart;

  const SolveOutcome o = solve(inst, cfg);

  std::cout << to_string(o.status) << " k=" << o.best_k << '\n';
  std::cout << "status=" << to_string(o.status) << " instance=" << inst.name << " k=" << o.best_k
            << " lb=" << o.lower << " ub=" << o.upper << " area_lb=" << o.area_bound
            << " ffd_ub=" << o.ffd_bound << " strategy=" << o.strategy << " config=" << o.config
            << " builds=" << o.formula_builds << " calls=" << o.solver_calls << " vars=" << o.vars
            << " clauses=" << o.clauses << " ttb=" << fmt_seconds(o.time_to_best)
            << " elapsed=" << fmt_seconds(o.elapsed);
  if (o.maxsat_cost) std::cout << " cost=" << *o.maxsat_cost;
  std::cout << '\n';
  if (!a.quiet_calls)
    for (const auto& c : o.calls)
      std::cout << "call k=" << c.k << " verdict=" << sat::to_string(c.verdict)
                << " seconds=" << fmt_seconds(c.seconds)
                << " engine=" << (c.external ? "external" : "embedded") << '\n';
  if (!o.diagnostic.empty()) std::cerr << "note: " << o.diagnostic << '\n';

  try {
    if (o.best_solution && !a.out.empty()) {
      std::ostringstream s;
      write_solution(s, *o.best_solution);
      write_file(a.out, s.str());
    }
    if (o.best_solution && !a.svg.empty()) write_svgs(a.svg, inst, *o.best_solution, a.rotation);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitInput;
  }

  switch (o.status) {
    case OutcomeStatus::kOptimal: return kExitOptimal;
    case OutcomeStatus::kFeasible: return kExitFeasible;
    case OutcomeStatus::kUnknown: return kExitUnknown;
    case OutcomeStatus::kInfeasibleModelError: return kExitModelError;
  }
  return kExitUnknown;
}

// ---- encode ----

struct EncodeArgs {
  std::string input;
  int sheets = 0;  // 0: FFD bound
  std::string format = "dimacs";
  bool rotation = false;
  bool sb = false;
  std::string out;
};

int cmd_encode(const EncodeArgs& a) {
  if (a.format != "dimacs" && a.format != "wcnf") {
    std::cerr << "error: unknown format '" << a.format << "'\n";
    return kExitInput;
  }
  Instance inst;
  try {
    inst = load_instance(a.input, a.rotation);
  } catch (const InputError& e) {
    std::cerr << "error: " << a.input << ": " << e.what() << '\n';
    return kExitInput;
  }
  const Bounds b = ffd_upper_bound(inst, a.rotation);
  const int k = a.sheets == 0 ? b.upper : a.sheets;
  if (k < 1) {
    std::cerr << "error: --sheets must be at least 1\n";
    return kExitInput;
  }

  EncodeConfig ec;
  ec.sheets = k;
  ec.rotation = a.rotation;
  ec.symmetry_breaking = a.sb;
  const auto copies = expand_demands(inst);
  const CnfFormula f = encode(copies, inst, ec);
  const VarMap vm = allocate_vars(copies, inst.sheet_width, inst.sheet_height, ec);

  std::string text;
  size_t soft = 0;
  if (a.format == "dimacs") {
    text = sat::export_dimacs(f.cnf);
  } else {
    const auto softs = sheet_soft_clauses(vm, b.lower);
    soft = softs.size();
    text = sat::export_wcnf(f.cnf, softs);
  }
  if (a.out.empty() || a.out == "-") {
    std::cout << text;
  } else {
    try {
      write_file(a.out, text);
    } catch (const std::exception& e) {
      std::cerr << "error: " << e.what() << '\n';
      return kExitInput;
    }
  }

  std::cerr << "c sheets=" << k << " vars=" << f.num_vars() << " clauses=" << f.num_clauses();
  if (a.format == "wcnf") std::cerr << " soft=" << soft;
  std::cerr << '\n';
  for (size_t i = 0; i < kFamilyCount; ++i)
    std::cerr << "c family " << to_string(static_cast<ClauseFamily>(i)) << ' '
              << f.family_counts[i] << '\n';
  return 0;
}

// ---- verify ----

struct CheckArgs {
  std::string input;
  std::string solution;
  bool rotation = false;
  std::string prefix;  // render only
};

int cmd_verify(const CheckArgs& a) {
  Instance inst;
  Solution sol;
  try {
    inst = load_instance(a.input, a.rotation);
    sol = load_solution(a.solution, inst);
  } catch (const InputError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitInput;
  }
  const VerifyReport r = verify_solution(inst, sol, a.rotation);
  if (r.ok()) {
    std::cout << "OK sheets=" << sol.sheets_used << " placements=" << sol.placements.size()
              << '\n';
    return 0;
  }
  for (const auto& v : r.violations) std::cout << to_string(v.kind) << ": " << v.detail << '\n';
  return kExitInvalid;
}

int cmd_render(const CheckArgs& a) {
  Instance inst;
  Solution sol;
  try {
    inst = load_instance(a.input, a.rotation);
    sol = load_solution(a.solution, inst);
  } catch (const InputError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitInput;
  }
  try {
    const std::string prefix =
        a.prefix.empty() ? std::filesystem::path(a.solution).replace_extension().string()
                         : a.prefix;
    for (const auto& p : write_svgs(prefix, inst, sol, a.rotation)) std::cout << p << '\n';
  } catch (const RenderError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitInvalid;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitInput;
  }
  return 0;
}

// ---- bench ----

struct BenchArgs {
  std::string dir;
  std::string bks;
  std::string configs;
  double time_limit = 60;
  int jobs = 1;
  std::string out;
  std::string from_csv;
  std::string solver_cmd;
};

int cmd_bench(const BenchArgs& a) {
  BksTable bks;
  if (!a.bks.empty()) {
    std::ifstream in(a.bks);
    if (!in) {
      std::cerr << "error: cannot open " << a.bks << '\n';
      return kExitInput;
    }
    try {
      bks = read_bks_csv(in);
    } catch (const InputError& e) {
      std::cerr << "error: " << a.bks << ": " << e.what() << '\n';
      return kExitInput;
    }
  }

  std::vector<BenchRow> rows;
  if (!a.from_csv.empty()) {
    std::ifstream in(a.from_csv);
    if (!in) {
      std::cerr << "error: cannot open " << a.from_csv << '\n';
      return kExitInput;
    }
    try {
      rows = read_bench_csv(in);
    } catch (const InputError& e) {
      std::cerr << "error: " << a.from_csv << ": " << e.what() << '\n';
      return kExitInput;
    }
  } else {
    if (a.dir.empty()) {
      std::cerr << "error: bench needs --dir or --from-csv\n";
      return kExitInput;
    }
    BenchOptions opts;
    opts.jobs = a.jobs;
    std::vector<std::string> labels;
    if (a.configs.empty()) {
      for (const auto& c : all_configs()) labels.push_back(config_label(c));
    } else {
      std::istringstream ls(a.configs);
      for (std::string l; std::getline(ls, l, ',');)
        if (!l.empty()) labels.push_back(l);
    }
    for (const auto& l : labels) {
      auto c = parse_config_label(l);
      if (!c) {
        std::cerr << "error: unknown configuration '" << l << "'\n";
        return kExitInput;
      }
      if (a.time_limit > 0) c->time_limit = a.time_limit;
      c->external_command = a.solver_cmd.empty() ? sat::default_solver_command() : a.solver_cmd;
      opts.configs.push_back(*c);
    }
    std::vector<BenchInstance> instances;
    try {
      instances = list_instances(a.dir);
    } catch (const std::exception& e) {
      std::cerr << "error: " << e.what() << '\n';
      return kExitInput;
    }
    const BenchResult r = run_bench(instances, bks, opts);
    for (const auto& w : r.warnings) std::cerr << "warning: " << w << '\n';
    rows = r.rows;
  }

  if (!a.out.empty()) {
    std::ostringstream s;
    write_bench_csv(s, rows);
    try {
      write_file(a.out, s.str());
    } catch (const std::exception& e) {
      std::cerr << "error: " << e.what() << '\n';
      return kExitInput;
    }
  }
  const auto metrics = aggregate(rows, bks);
  for (const auto& m : metrics)
    if (!m.missing_bks.empty())
      std::cerr << "warning: " << m.config << ": " << m.missing_bks.size()
                << " instance(s) without BKS excluded from gap\n";
  write_metrics_table(std::cout, metrics);
  return 0;
}

// ---- sat: a small conforming SAT / MaxSAT solver on DIMACS or WCNF ----

int cmd_sat(const std::string& path, double time_limit, uint64_t seed) {
  sat::Wcnf w;
  try {
    std::ifstream in(path);
    if (!in) throw InputError(0, "cannot open " + path);
    w = sat::parse_problem(in);
  } catch (const InputError& e) {
    std::cerr << "error: " << path << ": " << e.what() << '\n';
    return kExitInput;
  }
  sat::Budget budget;
  if (time_limit > 0) budget = sat::Budget::seconds(time_limit);
  sat::SolverOptions opts;
  opts.seed = seed;

  auto print_model = [&](const std::vector<bool>& m) {
    std::cout << 'v';
    for (int v = 1; v <= w.hard.num_vars; ++v)
      std::cout << ' ' << (m[static_cast<size_t>(v)] ? v : -v);
    std::cout << " 0\n";
  };

  if (w.soft.empty()) {
    sat::Solver s(w.hard.num_vars, opts);
    s.add_cnf(w.hard);
    const auto v = s.solve({}, budget);
    if (v.status == sat::Status::kSat) {
      std::cout << "s SATISFIABLE\n";
      print_model(v.model);
      return 10;
    }
    std::cout << (v.status == sat::Status::kUnsat ? "s UNSATISFIABLE\n" : "s UNKNOWN\n");
    return v.status == sat::Status::kUnsat ? 20 : 0;
  }

  sat::MaxSatResult r;
  try {
    r = sat::solve_maxsat(w, budget, opts);
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitInput;
  }
  if (r.status == sat::Status::kSat) {
    std::cout << "o " << r.cost << '\n';
    std::cout << (r.optimal ? "s OPTIMUM FOUND\n" : "s SATISFIABLE\n");
    print_model(r.model);
    return r.optimal ? 30 : 10;
  }
  std::cout << (r.status == sat::Status::kUnsat ? "s UNSATISFIABLE\n" : "s UNKNOWN\n");
  return r.status == sat::Status::kUnsat ? 20 : 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Exact 2D cutting stock solver over SAT and MaxSAT"};
  app.require_subcommand(1);

  SolveArgs sa;
  auto* solve_cmd = app.add_subcommand("solve", "Minimise the number of sheets");
  solve_cmd->add_option("--input,-i", sa.input, "Instance file")->required();
  solve_cmd->add_option("--strategy,-s", sa.strategy, "sat | inc | maxsat")
      ->capture_default_str();
  solve_cmd->add_flag("--rotation,-r", sa.rotation, "Allow 90-degree rotation");
  solve_cmd->add_flag("--sb", sa.sb, "Enable symmetry breaking");
  solve_cmd->add_option("--time-limit,-t", sa.time_limit, "Seconds, 0 for none");
  solve_cmd->add_option("--solver-cmd", sa.solver_cmd,
                        "External solver template with {input}; default from " +
                            std::string(sat::kSolverCommandEnv));
  solve_cmd->add_option("--out,-o", sa.out, "Write the best packing here");
  solve_cmd->add_option("--svg", sa.svg, "Write PREFIX-sheetN.svg drawings");
  solve_cmd->add_option("--seed", sa.seed, "Solver seed")->capture_default_str();
  solve_cmd->add_flag("--no-calls", sa.quiet_calls, "Omit the per-call log");

  EncodeArgs ea;
  auto* encode_cmd = app.add_subcommand("encode", "Export the formula for a sheet count");
  encode_cmd->add_option("--input,-i", ea.input, "Instance file")->required();
  encode_cmd->add_option("--sheets,-k", ea.sheets, "Sheet count (default: FFD bound)");
  encode_cmd->add_option("--format,-f", ea.format, "dimacs | wcnf")->capture_default_str();
  encode_cmd->add_flag("--rotation,-r", ea.rotation, "Allow 90-degree rotation");
  encode_cmd->add_flag("--sb", ea.sb, "Enable symmetry breaking");
  encode_cmd->add_option("--out,-o", ea.out, "Output file (default stdout)");
  bool sheets_given = false;
  encode_cmd->callback([&] { sheets_given = encode_cmd->count("--sheets") > 0; });

  CheckArgs va;
  auto* verify_cmd = app.add_subcommand("verify", "Check a packing");
  verify_cmd->add_option("--input,-i", va.input, "Instance file")->required();
  verify_cmd->add_option("--solution,-p", va.solution, "Solution file")->required();
  verify_cmd->add_flag("--rotation,-r", va.rotation, "Allow 90-degree rotation");

  CheckArgs ra;
  auto* render_cmd = app.add_subcommand("render", "Draw a packing as SVG, one file per sheet");
  render_cmd->add_option("--input,-i", ra.input, "Instance file")->required();
  render_cmd->add_option("--solution,-p", ra.solution, "Solution file")->required();
  render_cmd->add_flag("--rotation,-r", ra.rotation, "Allow 90-degree rotation");
  render_cmd->add_option("--prefix", ra.prefix, "Output prefix (default: solution path)");

  BenchArgs ba;
  auto* bench_cmd = app.add_subcommand("bench", "Run or aggregate a benchmark");
  bench_cmd->add_option("--dir,-d", ba.dir, "Directory of instance files");
  bench_cmd->add_option("--bks", ba.bks, "CSV instance,bks");
  bench_cmd->add_option("--configs,-c", ba.configs, "Comma-separated labels (default all 12)");
  bench_cmd->add_option("--time-limit,-t", ba.time_limit, "Seconds per run, 0 for none")
      ->capture_default_str();
  bench_cmd->add_option("--jobs,-j", ba.jobs, "Parallel instances")->capture_default_str();
  bench_cmd->add_option("--out,-o", ba.out, "Write per-instance rows as CSV");
  bench_cmd->add_option("--from-csv", ba.from_csv, "Aggregate an existing row CSV");
  bench_cmd->add_option("--solver-cmd", ba.solver_cmd, "External solver template");

  std::string sat_path;
  double sat_limit = 0;
  uint64_t sat_seed = sat::SolverOptions{}.seed;
  auto* sat_cmd = app.add_subcommand("sat", "Solve a DIMACS CNF or WCNF file");
  sat_cmd->add_option("file", sat_path, "Problem file")->required();
  sat_cmd->add_option("--time-limit,-t", sat_limit, "Seconds, 0 for none");
  sat_cmd->add_option("--seed", sat_seed, "Solver seed");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : kExitInput;
  }

  try {
    if (*solve_cmd) return cmd_solve(sa);
    if (*encode_cmd) {
      if (sheets_given && ea.sheets < 1) {
        std::cerr << "error: --sheets must be at least 1\n";
        return kExitInput;
      }
      return cmd_encode(ea);
    }
    if (*verify_cmd) return cmd_verify(va);
    if (*render_cmd) return cmd_render(ra);
    if (*bench_cmd) return cmd_bench(ba);
    if (*sat_cmd) return cmd_sat(sat_path, sat_limit, sat_seed);
  } catch (const InputError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitInput;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUnknown;
  }
  return kExitInput;
}
