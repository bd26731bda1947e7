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

// Weighted partial MaxSAT by SAT-UNSAT linear search over a totalizer.
// Soft weights are expanded into unit-weight inputs, so this is only meant for
// problems with a small total soft weight.

#pragma once

#include <cstdint>
#include <stdexcept>
#include <vector>

#include "cutsat/sat/cnf.hpp"
#include "cutsat/sat/solver.hpp"

namespace cutsat::sat {

struct MaxSatResult {
  Status status = Status::kUnknown;  // kSat once any model of the hard part is known
  bool optimal = false;
  uint64_t cost = 0;
  std::vector<bool> model;  // indexed by original variable
  uint64_t solver_calls = 0;
};

inline uint64_t soft_cost(const std::vector<SoftClause>& soft, const std::vector<bool>& model) {
  uint64_t cost = 0;
  for (const auto& s : soft) {
    bool sat = false;
    for (int l : s.literals) {
      const bool v = model.at(static_cast<size_t>(std::abs(l)));
      if (l > 0 ? v : !v) {
        sat = true;
        break;
      }
    }
    if (!sat) cost += s.weight;
  }
  return cost;
}

namespace detail {

// Unary counter: out[i] is implied when at least i+1 inputs are true.
inline std::vector<int> build_totalizer(Solver& s, const std::vector<int>& inputs, size_t lo,
                                        size_t hi) {
  if (hi - lo == 1) return {inputs[lo]};
  const size_t mid = lo + (hi - lo) / 2;
  const auto a = build_totalizer(s, inputs, lo, mid);
  const auto b = build_totalizer(s, inputs, mid, hi);
  std::vector<int> out(a.size() + b.size());
  for (auto& v : out) v = s.new_var();
  for (size_t i = 0; i <= a.size(); ++i) {
    for (size_t j = 0; j <= b.size(); ++j) {
      if (i + j == 0) continue;
      std::vector<int> c;
      if (i > 0) c.push_back(-a[i - 1]);
      if (j > 0) c.push_back(-b[j - 1]);
      c.push_back(out[i + j - 1]);
      s.add_clause(c);
    }
  }
  return out;
}

}  // namespace detail

inline MaxSatResult solve_maxsat(const Wcnf& problem, Budget budget = {},
                                 SolverOptions options = {}, uint64_t max_total_weight = 1 << 16) {
  MaxSatResult r;
  uint64_t total = 0;
  for (const auto& s : problem.soft) total += s.weight;
  if (total > max_total_weight)
    throw std::invalid_argument("total soft weight " + std::to_string(total) +
                                " exceeds the linear-search limit");

  const int n = problem.hard.num_vars;
  Solver solver(n, options);
  solver.add_cnf(problem.hard);
  std::vector<int> relax;
  for (const auto& s : problem.soft) {
    const int b = solver.new_var();
    std::vector<int> c = s.literals;
    c.push_back(b);
    solver.add_clause(c);
    for (uint64_t w = 0; w < s.weight; ++w) relax.push_back(b);
  }

  auto take = [&](const SolveVerdict& v) {
    r.model.assign(v.model.begin(), v.model.begin() + n + 1);
    r.cost = soft_cost(problem.soft, r.model);
    r.status = Status::kSat;
  };

  ++r.solver_calls;
  const auto first = solver.solve({}, budget);
  if (first.status != Status::kSat) {
    r.status = first.status;
    return r;
  }
  take(first);
  if (r.cost == 0) {
    r.optimal = true;
    return r;
  }

  const auto counter = detail::build_totalizer(solver, relax, 0, relax.size());
  while (r.cost > 0) {
    const int bound = -counter[r.cost - 1];  // fewer than `cost` relaxed units
    ++r.solver_calls;
    const auto v = solver.solve({bound}, budget);
    if (v.status == Status::kSat) {
      take(v);
    } else {
      if (v.status == Status::kUnsat) r.optimal = true;
      return r;
    }
  }
  r.optimal = true;
  return r;
}

}  // namespace cutsat::sat
