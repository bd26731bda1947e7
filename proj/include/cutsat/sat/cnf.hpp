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

// Plain clause sets and the DIMACS CNF / classic WCNF text formats.

#pragma once

#include <cstdint>
#include <cstdlib>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "cutsat/model.hpp"

namespace cutsat::sat {

// DIMACS-style literals: +v / -v for variable v >= 1.
using Clause = std::vector<int>;

struct Cnf {
  int num_vars = 0;
  std::vector<Clause> clauses;
};

struct SoftClause {
  Clause literals;
  uint64_t weight = 1;
};

struct Wcnf {
  Cnf hard;
  std::vector<SoftClause> soft;

  uint64_t top() const {
    uint64_t sum = 1;
    for (const auto& s : soft) sum += s.weight;
    return sum;
  }
};

inline void write_clause(std::ostream& out, const Clause& c) {
  for (int lit : c) out << lit << ' ';
  out << "0\n";
}

inline void export_dimacs(std::ostream& out, const Cnf& f) {
  out << "p cnf " << f.num_vars << ' ' << f.clauses.size() << '\n';
  for (const auto& c : f.clauses) write_clause(out, c);
}

inline std::string export_dimacs(const Cnf& f) {
  std::ostringstream ss;
  export_dimacs(ss, f);
  return ss.str();
}

// Classic header "p wcnf V C TOP"; hard clauses carry weight TOP, which is one
// more than the sum of the soft weights.
inline void export_wcnf(std::ostream& out, const Cnf& hard,
                        const std::vector<SoftClause>& soft) {
  uint64_t top = 1;
  for (const auto& s : soft) top += s.weight;
  out << "p wcnf " << hard.num_vars << ' ' << hard.clauses.size() + soft.size() << ' ' << top
      << '\n';
  for (const auto& c : hard.clauses) {
    out << top << ' ';
    write_clause(out, c);
  }
  for (const auto& s : soft) {
    out << s.weight << ' ';
    write_clause(out, s.literals);
  }
}

inline std::string export_wcnf(const Cnf& hard, const std::vector<SoftClause>& soft) {
  std::ostringstream ss;
  export_wcnf(ss, hard, soft);
  return ss.str();
}

namespace detail {

inline long long read_number(std::istream& in, int& line, const char* what) {
  long long v = 0;
  if (!(in >> v)) throw InputError(line, std::string("expected ") + what);
  return v;
}

}  // namespace detail

// Reads "p cnf" or "p wcnf" problems. For CNF input every clause is hard.
// Comment lines ('c') before and between clauses are skipped.
inline Wcnf parse_problem(std::istream& in) {
  Wcnf out;
  std::string line;
  int no = 0;
  bool weighted = false;
  bool header = false;
  long long declared = 0;
  uint64_t top = 0;
  std::string pending;
  while (std::getline(in, line)) {
    ++no;
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos || line[first] == 'c' || line[first] == '%') continue;
    std::istringstream ls(line);
    if (line[first] == 'p') {
      if (header) throw InputError(no, "duplicate problem line");
      std::string p, fmt;
      ls >> p >> fmt;
      if (fmt == "cnf") {
        weighted = false;
      } else if (fmt == "wcnf") {
        weighted = true;
      } else {
        throw InputError(no, "unknown problem format '" + fmt + "'");
      }
      out.hard.num_vars = static_cast<int>(detail::read_number(ls, no, "variable count"));
      declared = detail::read_number(ls, no, "clause count");
      if (weighted) {
        long long t = 0;
        top = (ls >> t) ? static_cast<uint64_t>(t) : UINT64_MAX;
      }
      header = true;
      continue;
    }
    if (!header) throw InputError(no, "clause before problem line");
    pending += line;
    pending += ' ';
  }
  if (!header) throw InputError(0, "missing problem line");

  // Clauses may span lines; terminate on 0.
  std::istringstream cs(pending);
  long long count = 0;
  while (true) {
    uint64_t weight = 0;
    if (weighted) {
      long long w = 0;
      if (!(cs >> w)) break;
      if (w < 1) throw InputError(0, "clause weight must be positive");
      weight = static_cast<uint64_t>(w);
    }
    Clause c;
    long long lit = 0;
    bool terminated = false;
    while (cs >> lit) {
      if (lit == 0) {
        terminated = true;
        break;
      }
      if (std::llabs(lit) > out.hard.num_vars)
        throw InputError(0, "literal " + std::to_string(lit) + " exceeds variable count");
      c.push_back(static_cast<int>(lit));
    }
    if (!terminated) {
      if (c.empty() && !weighted) break;
      throw InputError(0, "unterminated clause");
    }
    ++count;
    if (weighted && weight < top)
      out.soft.push_back({std::move(c), weight});
    else
      out.hard.clauses.push_back(std::move(c));
  }
  if (count != declared)
    throw InputError(0, "problem line declares " + std::to_string(declared) +
                            " clauses, found " + std::to_string(count));
  return out;
}

inline Wcnf parse_problem(const std::string& text) {
  std::istringstream in(text);
  return parse_problem(in);
}

}  // namespace cutsat::sat
