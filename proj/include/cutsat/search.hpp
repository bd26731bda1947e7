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

// Sheet-count minimisation. All strategies start from the window
// [area bound, FFD] with the FFD packing as the incumbent:
//
//   kSat          binary search, a fresh formula and solver per probe
//   kIncremental  binary search on one solver holding the formula for UB,
//                 probing m by assuming sheets m+1..UB unused
//   kMaxSat       formula for UB plus soft units "sheet j unused" for
//                 j = LB..UB, minimised internally or by an external solver

#pragma once

#include <algorithm>
#include <chrono>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "cutsat/bounds.hpp"
#include "cutsat/encoding.hpp"
#include "cutsat/model.hpp"
#include "cutsat/sat/cnf.hpp"
#include "cutsat/sat/external.hpp"
#include "cutsat/sat/solver.hpp"
#include "cutsat/verify.hpp"

namespace cutsat {

using Clock = std::chrono::steady_clock;

enum class Strategy { kSat, kIncremental, kMaxSat };

inline const char* to_string(Strategy s) {
  switch (s) {
    case Strategy::kSat: return "sat";
    case Strategy::kIncremental: return "inc";
    case Strategy::kMaxSat: return "maxsat";
  }
  return "?";
}

inline std::optional<Strategy> parse_strategy(const std::string& s) {
  if (s == "sat") return Strategy::kSat;
  if (s == "inc") return Strategy::kIncremental;
  if (s == "maxsat") return Strategy::kMaxSat;
  return std::nullopt;
}

struct SearchConfig {
  Strategy strategy = Strategy::kSat;
  bool rotation = false;
  bool symmetry_breaking = false;
  std::optional<double> time_limit;  // seconds for the whole run
  // External solver template ("{input}" is the problem file). Used for the
  // per-probe CNF of kSat and the WCNF of kMaxSat; kIncremental always runs
  // the embedded engine.
  std::string external_command;
  sat::SolverOptions solver;
  // Reference point for time-to-best; defaults to the start of the run.
  std::optional<Clock::time_point> start;
};

// Labels such as CSP, CSP_INC_SB, CSP_MS_R_SB.
inline std::string config_label(const SearchConfig& c) {
  std::string s = "CSP";
  if (c.strategy == Strategy::kIncremental) s += "_INC";
  if (c.strategy == Strategy::kMaxSat) s += "_MS";
  if (c.rotation) s += "_R";
  if (c.symmetry_breaking) s += "_SB";
  return s;
}

inline std::optional<SearchConfig> parse_config_label(const std::string& label) {
  if (label.rfind("CSP", 0) != 0) return std::nullopt;
  SearchConfig c;
  std::string rest = label.substr(3);
  auto eat = [&](const std::string& tag) {
    if (rest.rfind(tag, 0) != 0) return false;
    rest.erase(0, tag.size());
    return true;
  };
  if (eat("_INC"))
    c.strategy = Strategy::kIncremental;
  else if (eat("_MS"))
    c.strategy = Strategy::kMaxSat;
  c.rotation = eat("_R");
  c.symmetry_breaking = eat("_SB");
  if (!rest.empty()) return std::nullopt;
  return c;
}

// All twelve labels, in the order strategy, rotation, symmetry breaking.
inline std::vector<SearchConfig> all_configs() {
  std::vector<SearchConfig> out;
  for (Strategy s : {Strategy::kSat, Strategy::kIncremental, Strategy::kMaxSat})
    for (bool r : {false, true})
      for (bool sb : {false, true}) {
        SearchConfig c;
        c.strategy = s;
        c.rotation = r;
        c.symmetry_breaking = sb;
        out.push_back(c);
      }
  return out;
}

enum class OutcomeStatus { kOptimal, kFeasible, kInfeasibleModelError, kUnknown };

inline const char* to_string(OutcomeStatus s) {
  switch (s) {
    case OutcomeStatus::kOptimal: return "OPTIMAL";
    case OutcomeStatus::kFeasible: return "FEASIBLE";
    case OutcomeStatus::kInfeasibleModelError: return "INFEASIBLE_MODEL_ERROR";
    case OutcomeStatus::kUnknown: return "UNKNOWN";
  }
  return "?";
}

struct CallRecord {
  int k = 0;  // sheets allowed by the probe
  sat::Status verdict = sat::Status::kUnknown;
  double seconds = 0;
  bool external = false;
};

struct SolveOutcome {
  OutcomeStatus status = OutcomeStatus::kUnknown;
  int best_k = 0;
  std::optional<Solution> best_solution;  // compacted, sheets_used == best_k
  double time_to_best = 0;
  double elapsed = 0;
  int lower = 0;  // proven lower bound at exit
  int upper = 0;  // best_k, or the FFD bound if nothing better was found
  int area_bound = 0;
  int ffd_bound = 0;
  std::vector<CallRecord> calls;
  std::string strategy;
  std::string config;
  int formula_builds = 0;
  int solver_calls = 0;
  // Size of the largest formula built; zero if none was needed.
  uint64_t vars = 0;
  uint64_t clauses = 0;
  std::optional<uint64_t> maxsat_cost;
  std::string diagnostic;
  sat::SolverStats solver_stats;
};

// Assumptions that leave only sheets 1..m usable in a formula for `vm`.
inline std::vector<int> sheet_limit_assumptions(const VarMap& vm, int m) {
  std::vector<int> a;
  for (int j = m + 1; j <= vm.sheets(); ++j) a.push_back(-vm.used(j));
  return a;
}

namespace detail {

class Run {
 public:
  Run(const Instance& inst, const SearchConfig& cfg)
      : inst_(inst), cfg_(cfg), origin_(cfg.start.value_or(Clock::now())), begin_(Clock::now()) {
    if (cfg.time_limit) deadline_ = begin_ + std::chrono::duration_cast<Clock::duration>(
                                                 std::chrono::duration<double>(*cfg.time_limit));
    out_.strategy = to_string(cfg.strategy);
    out_.config = config_label(cfg);
    copies_ = expand_demands(inst);

    const Bounds b = ffd_upper_bound(inst, cfg.rotation);
    out_.area_bound = lower_bound_area(inst);
    out_.ffd_bound = b.upper;
    lb_ = b.lower;
    ub_ = b.upper;
    record_witness(b.ffd_solution);
  }

  const std::vector<Copy>& copies() const { return copies_; }
  int lb() const { return lb_; }
  int ub() const { return ub_; }
  const Instance& instance() const { return inst_; }
  const SearchConfig& config() const { return cfg_; }
  SolveOutcome& outcome() { return out_; }

  bool expired() const { return deadline_ && Clock::now() >= *deadline_; }

  sat::Budget budget() const {
    sat::Budget b;
    b.deadline = deadline_;
    return b;
  }

  std::optional<double> remaining_seconds() const {
    if (!deadline_) return std::nullopt;
    return std::max(0.0, std::chrono::duration<double>(*deadline_ - Clock::now()).count());
  }

  EncodeConfig encode_config(int k) const {
    EncodeConfig e;
    e.sheets = k;
    e.rotation = cfg_.rotation;
    e.symmetry_breaking = cfg_.symmetry_breaking;
    return e;
  }

  CnfFormula build(int k) {
    CnfFormula f = encode(copies_, inst_, encode_config(k));
    ++out_.formula_builds;
    out_.vars = std::max<uint64_t>(out_.vars, static_cast<uint64_t>(f.num_vars()));
    out_.clauses = std::max<uint64_t>(out_.clauses, f.num_clauses());
    return f;
  }

  void log_call(int k, sat::Status st, Clock::time_point t0, bool external) {
    ++out_.solver_calls;
    out_.calls.push_back(
        {k, st, std::chrono::duration<double>(Clock::now() - t0).count(), external});
  }

  // Decodes and verifies a model. Returns false (and marks the outcome) when
  // the model does not describe a valid packing.
  bool accept_model(const std::vector<bool>& model, const VarMap& vm, int allowed) {
    Solution s;
    try {
      s = decode(model, vm, copies_);
    } catch (const EncodingError& e) {
      return model_error(std::string("decode failed: ") + e.what());
    } catch (const std::out_of_range&) {
      return model_error("model shorter than the variable map");
    }
    s = compact_sheets(std::move(s));
    const VerifyReport rep = verify_solution(inst_, s, cfg_.rotation);
    if (!rep.ok())
      return model_error(std::string("decoded packing rejected: ") +
                         to_string(rep.violations.front().kind) + " " +
                         rep.violations.front().detail);
    if (s.sheets_used > allowed)
      return model_error("decoded packing uses " + std::to_string(s.sheets_used) +
                         " sheets, probe allowed " + std::to_string(allowed));
    if (s.sheets_used < ub_) {
      ub_ = s.sheets_used;
      record_witness(std::move(s));
    }
    return true;
  }

  void raise_lower(int v) { lb_ = std::max(lb_, v); }

  SolveOutcome finish() {
    out_.elapsed = std::chrono::duration<double>(Clock::now() - origin_).count();
    out_.lower = lb_;
    out_.upper = ub_;
    if (out_.status == OutcomeStatus::kInfeasibleModelError) return out_;
    if (!out_.best_solution)
      out_.status = OutcomeStatus::kUnknown;
    else
      out_.status = lb_ >= ub_ ? OutcomeStatus::kOptimal : OutcomeStatus::kFeasible;
    return out_;
  }

 private:
  void record_witness(Solution s) {
    out_.best_k = s.sheets_used;
    out_.best_solution = std::move(s);
    out_.time_to_best = std::chrono::duration<double>(Clock::now() - origin_).count();
  }

  bool model_error(std::string why) {
    out_.status = OutcomeStatus::kInfeasibleModelError;
    out_.diagnostic = std::move(why);
    return false;
  }

  const Instance& inst_;
  const SearchConfig& cfg_;
  Clock::time_point origin_;
  Clock::time_point begin_;
  std::optional<Clock::time_point> deadline_;
  std::vector<Copy> copies_;
  int lb_ = 1;
  int ub_ = 1;
  SolveOutcome out_;
};

// One satisfiability probe of a standalone formula, externally if configured
// (falling back to the embedded engine when the external run fails).
inline sat::SolveVerdict probe(Run& run, const CnfFormula& f, int k) {
  const auto t0 = Clock::now();
  if (!run.config().external_command.empty()) {
    sat::TempFile file(".cnf");
    file.write(sat::export_dimacs(f.cnf));
    auto ext = sat::run_external(run.config().external_command, file.path(), f.num_vars(),
                                 run.remaining_seconds());
    if (ext.verdict.status != sat::Status::kUnknown || ext.timed_out) {
      run.log_call(k, ext.verdict.status, t0, true);
      return ext.verdict;
    }
    run.outcome().diagnostic = "external solver failed (" + ext.diagnostic + "); using embedded engine";
  }
  sat::Solver s(f.num_vars(), run.config().solver);
  s.add_cnf(f.cnf);
  auto v = s.solve({}, run.budget());
  run.log_call(k, v.status, t0, false);
  run.outcome().solver_stats = v.stats;
  return v;
}

}  // namespace detail

inline SolveOutcome solve_nonincremental(const Instance& inst, const SearchConfig& cfg) {
  validate_instance(inst, cfg.rotation);
  detail::Run run(inst, cfg);
  while (run.lb() < run.ub() && !run.expired()) {
    const int m = (run.lb() + run.ub()) / 2;
    const CnfFormula f = run.build(m);
    const VarMap vm = allocate_vars(run.copies(), inst.sheet_width, inst.sheet_height,
                                    run.encode_config(m));
    const auto v = detail::probe(run, f, m);
    if (v.status == sat::Status::kSat) {
      if (!run.accept_model(v.model, vm, m)) break;
    } else if (v.status == sat::Status::kUnsat) {
      run.raise_lower(m + 1);
    } else {
      break;
    }
  }
  return run.finish();
}

inline SolveOutcome solve_incremental(const Instance& inst, const SearchConfig& cfg) {
  validate_instance(inst, cfg.rotation);
  detail::Run run(inst, cfg);
  if (run.lb() >= run.ub()) return run.finish();

  const int top = run.ub();
  const CnfFormula f = run.build(top);
  const VarMap vm = allocate_vars(run.copies(), inst.sheet_width, inst.sheet_height,
                                  run.encode_config(top));
  sat::Solver solver(f.num_vars(), cfg.solver);
  solver.add_cnf(f.cnf);
  while (run.lb() < run.ub() && !run.expired()) {
    const int m = (run.lb() + run.ub()) / 2;
    const auto assumptions = sheet_limit_assumptions(vm, m);
    const auto t0 = Clock::now();
    const auto v = solver.solve(assumptions, run.budget());
    run.log_call(m, v.status, t0, false);
    run.outcome().solver_stats = v.stats;
    if (v.status == sat::Status::kSat) {
      if (!run.accept_model(v.model, vm, m)) break;
    } else if (v.status == sat::Status::kUnsat) {
      run.raise_lower(m + 1);
    } else {
      break;
    }
  }
  return run.finish();
}

// Soft units "sheet j unused" for j = LB..UB, weight 1 each.
inline std::vector<sat::SoftClause> sheet_soft_clauses(const VarMap& vm, int lb) {
  std::vector<sat::SoftClause> soft;
  for (int j = std::max(1, lb); j <= vm.sheets(); ++j) soft.push_back({{-vm.used(j)}, 1});
  return soft;
}

inline SolveOutcome solve_maxsat(const Instance& inst, const SearchConfig& cfg) {
  validate_instance(inst, cfg.rotation);
  detail::Run run(inst, cfg);
  const int lb0 = run.lb();
  auto finish = [&] {
    SolveOutcome out = run.finish();
    if (out.status == OutcomeStatus::kOptimal)
      out.maxsat_cost = static_cast<uint64_t>(out.best_k - lb0 + 1);
    return out;
  };
  if (run.lb() >= run.ub()) return finish();

  const int top = run.ub();
  const CnfFormula f = run.build(top);
  const VarMap vm = allocate_vars(run.copies(), inst.sheet_width, inst.sheet_height,
                                  run.encode_config(top));

  if (!cfg.external_command.empty()) {
    const auto t0 = Clock::now();
    sat::TempFile file(".wcnf");
    file.write(sat::export_wcnf(f.cnf, sheet_soft_clauses(vm, lb0)));
    auto ext = sat::run_external(cfg.external_command, file.path(), f.num_vars(),
                                 run.remaining_seconds());
    if (ext.verdict.status != sat::Status::kUnknown || ext.timed_out) {
      run.log_call(top, ext.verdict.status, t0, true);
      if (ext.verdict.status == sat::Status::kSat) {
        if (!run.accept_model(ext.verdict.model, vm, top)) return finish();
        if (ext.optimum) run.raise_lower(run.ub());
      } else if (ext.verdict.status == sat::Status::kUnsat) {
        // The FFD packing satisfies the hard part, so this is a solver fault.
        run.outcome().diagnostic = "external solver reported the hard clauses unsatisfiable";
      }
      return finish();
    }
    run.outcome().diagnostic =
        "external solver failed (" + ext.diagnostic + "); using embedded engine";
  }

  // Linear search: each model bounds the sheet count from above; forbid its
  // last sheet and resolve until unsatisfiable.
  sat::Solver solver(f.num_vars(), cfg.solver);
  solver.add_cnf(f.cnf);
  int allowed = top;
  while (run.lb() < run.ub() && !run.expired()) {
    const auto t0 = Clock::now();
    const auto v = solver.solve({}, run.budget());
    run.log_call(allowed, v.status, t0, false);
    run.outcome().solver_stats = v.stats;
    if (v.status == sat::Status::kSat) {
      if (!run.accept_model(v.model, vm, allowed)) break;
      for (int j = run.ub(); j <= top; ++j) solver.add_clause({-vm.used(j)});
      allowed = run.ub() - 1;
    } else if (v.status == sat::Status::kUnsat) {
      run.raise_lower(allowed + 1);
    } else {
      break;
    }
  }
  return finish();
}

inline SolveOutcome solve(const Instance& inst, const SearchConfig& cfg) {
  switch (cfg.strategy) {
    case Strategy::kSat: return solve_nonincremental(inst, cfg);
    case Strategy::kIncremental: return solve_incremental(inst, cfg);
    case Strategy::kMaxSat: return solve_maxsat(inst, cfg);
  }
  throw std::logic_error("unknown strategy");
}

}  // namespace cutsat
