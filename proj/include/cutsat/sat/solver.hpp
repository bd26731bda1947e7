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

// Incremental CDCL SAT solver.
//
// The engine follows the usual MiniSat/Glucose architecture: two watched
// literals with blockers, first-UIP learning with local minimisation,
// non-chronological backjumping, VSIDS branching over a binary heap, phase
// saving, Luby restarts and periodic reduction of learned clauses that keeps
// low-LBD ("glue") clauses.
//
// Assumptions occupy the first decision levels of every call, one level per
// assumption. A conflict that involves them therefore only ever produces
// clauses implied by the clause database, and an UNSAT answer under
// assumptions leaves the solver usable: learned clauses are kept for the next
// call and only a conflict at level 0 marks the solver permanently UNSAT.

#pragma once

#include <algorithm>
#include <chrono>
#include <cstdint>
#include <cstdlib>
#include <limits>
#include <optional>
#include <random>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "cutsat/sat/cnf.hpp"

namespace cutsat::sat {

// Internal literal: 2 * var + negated, var 0-based.
struct Lit {
  uint32_t code = std::numeric_limits<uint32_t>::max();

  static Lit make(int var, bool negated) {
    return Lit{static_cast<uint32_t>(var) * 2u + (negated ? 1u : 0u)};
  }
  static Lit from_dimacs(int lit) { return make(std::abs(lit) - 1, lit < 0); }

  int var() const { return static_cast<int>(code >> 1); }
  bool negated() const { return code & 1u; }
  int to_dimacs() const { return negated() ? -(var() + 1) : var() + 1; }
  Lit operator~() const { return Lit{code ^ 1u}; }
  bool valid() const { return code != std::numeric_limits<uint32_t>::max(); }

  friend bool operator==(Lit, Lit) = default;
  friend auto operator<=>(Lit, Lit) = default;
};

enum class Status { kSat, kUnsat, kUnknown };

inline const char* to_string(Status s) {
  switch (s) {
    case Status::kSat: return "SAT";
    case Status::kUnsat: return "UNSAT";
    case Status::kUnknown: return "UNKNOWN";
  }
  return "?";
}

struct SolverOptions {
  double var_decay = 0.95;
  double clause_decay = 0.999;
  int restart_unit = 100;        // conflicts per Luby unit
  int reduce_first = 2000;       // conflicts before the first reduction
  int reduce_increment = 300;
  uint32_t keep_lbd = 2;         // learned clauses at or below are never deleted
  double random_branch_freq = 0.0;
  uint64_t seed = 91648253;
};

// Per-call resource limits. Unset fields mean unlimited.
struct Budget {
  std::optional<uint64_t> conflicts;
  std::optional<std::chrono::steady_clock::time_point> deadline;

  static Budget seconds(double s) {
    Budget b;
    b.deadline = std::chrono::steady_clock::now() +
                 std::chrono::duration_cast<std::chrono::steady_clock::duration>(
                     std::chrono::duration<double>(s));
    return b;
  }
};

struct SolverStats {
  uint64_t solves = 0;
  uint64_t conflicts = 0;
  uint64_t decisions = 0;
  uint64_t propagations = 0;
  uint64_t restarts = 0;
  uint64_t learned_total = 0;  // learned clauses ever derived
  uint64_t learned_units = 0;
  uint64_t learned_current = 0;  // learned clauses currently in the database
  uint64_t reductions = 0;
  uint64_t deleted = 0;

  friend bool operator==(const SolverStats&, const SolverStats&) = default;
};

struct SolveVerdict {
  Status status = Status::kUnknown;
  // Indexed by DIMACS variable; entry 0 unused. Empty unless status is kSat.
  std::vector<bool> model;
  SolverStats stats;

  bool value(int dimacs_lit) const {
    const bool v = model.at(static_cast<size_t>(std::abs(dimacs_lit)));
    return dimacs_lit > 0 ? v : !v;
  }
};

class Solver {
 public:
  explicit Solver(int num_vars = 0, SolverOptions options = {})
      : options_(options), rng_(options.seed) {
    reserve_vars(num_vars);
  }

  int num_vars() const { return static_cast<int>(assigns_.size()); }

  // Grows the variable set to at least n variables.
  void reserve_vars(int n) {
    while (num_vars() < n) new_var();
  }

  int new_var() {
    const int v = num_vars();
    assigns_.push_back(kUndef);
    level_.push_back(0);
    reason_.push_back(kNoRef);
    activity_.push_back(0.0);
    polarity_.push_back(1);
    seen_.push_back(0);
    watches_.emplace_back();
    watches_.emplace_back();
    heap_index_.push_back(-1);
    heap_insert(v);
    return v + 1;
  }

  bool okay() const { return ok_; }
  const SolverStats& stats() const { return stats_; }

  // Adds a clause of DIMACS literals. Returns false once the clause set is
  // known to be unsatisfiable. Throws std::out_of_range on a zero literal or
  // a variable beyond num_vars().
  bool add_clause(std::span<const int> dimacs) {
    std::vector<Lit> lits;
    lits.reserve(dimacs.size());
    for (int l : dimacs) {
      if (l == 0 || std::abs(l) > num_vars())
        throw std::out_of_range("literal " + std::to_string(l) + " outside 1.." +
                                std::to_string(num_vars()));
      lits.push_back(Lit::from_dimacs(l));
    }
    return add_clause(std::move(lits));
  }

  bool add_clause(std::initializer_list<int> dimacs) {
    return add_clause(std::span<const int>(dimacs.begin(), dimacs.size()));
  }

  void add_cnf(const Cnf& f) {
    reserve_vars(f.num_vars);
    for (const auto& c : f.clauses) add_clause(std::span<const int>(c));
  }

  SolveVerdict solve(std::span<const int> assumptions = {}, Budget budget = {}) {
    ++stats_.solves;
    SolveVerdict out;
    assumptions_.clear();
    for (int l : assumptions) {
      if (l == 0 || std::abs(l) > num_vars())
        throw std::out_of_range("assumption " + std::to_string(l) + " outside 1.." +
                                std::to_string(num_vars()));
      assumptions_.push_back(Lit::from_dimacs(l));
    }
    if (!ok_) {
      out.status = Status::kUnsat;
      out.stats = stats_;
      return out;
    }

    const uint64_t start_conflicts = stats_.conflicts;
    Status status = Status::kUnknown;
    for (int round = 0; status == Status::kUnknown; ++round) {
      const auto limit =
          static_cast<uint64_t>(luby(2.0, round) * options_.restart_unit);
      status = search(limit, budget, start_conflicts);
      if (status == Status::kUnknown && exhausted(budget, start_conflicts)) break;
      if (status == Status::kUnknown) ++stats_.restarts;
    }

    if (status == Status::kSat) {
      out.model.assign(static_cast<size_t>(num_vars()) + 1, false);
      for (int v = 0; v < num_vars(); ++v)
        out.model[static_cast<size_t>(v) + 1] = assigns_[static_cast<size_t>(v)] == kTrue;
    }
    cancel_until(0);
    out.status = status;
    stats_.learned_current = learnts_.size();
    out.stats = stats_;
    return out;
  }

  SolveVerdict solve(std::initializer_list<int> assumptions, Budget budget = {}) {
    return solve(std::span<const int>(assumptions.begin(), assumptions.size()), budget);
  }

 private:
  static constexpr int8_t kTrue = 1;
  static constexpr int8_t kFalse = -1;
  static constexpr int8_t kUndef = 0;
  static constexpr uint32_t kNoRef = std::numeric_limits<uint32_t>::max();

  struct ClauseData {
    std::vector<Lit> lits;
    double activity = 0.0;
    uint32_t lbd = 0;
    bool learnt = false;
    bool deleted = false;
  };

  struct Watcher {
    uint32_t cref;
    Lit blocker;
  };

  int8_t value(Lit p) const {
    const int8_t v = assigns_[static_cast<size_t>(p.var())];
    return p.negated() ? static_cast<int8_t>(-v) : v;
  }
  int decision_level() const { return static_cast<int>(trail_lim_.size()); }

  static double luby(double y, int x) {
    int size = 1;
    int seq = 0;
    while (size < x + 1) {
      ++seq;
      size = 2 * size + 1;
    }
    while (size - 1 != x) {
      size = (size - 1) >> 1;
      --seq;
      x = x % size;
    }
    double r = 1.0;
    for (int i = 0; i < seq; ++i) r *= y;
    return r;
  }

  bool exhausted(const Budget& b, uint64_t start_conflicts) const {
    if (b.conflicts && stats_.conflicts - start_conflicts >= *b.conflicts) return true;
    if (b.deadline && std::chrono::steady_clock::now() >= *b.deadline) return true;
    return false;
  }

  bool add_clause(std::vector<Lit> lits) {
    if (!ok_) return false;
    std::sort(lits.begin(), lits.end());
    std::vector<Lit> kept;
    Lit prev;
    for (Lit p : lits) {
      if (value(p) == kTrue || (prev.valid() && p == ~prev)) return true;
      if (value(p) == kFalse || p == prev) continue;
      kept.push_back(p);
      prev = p;
    }
    if (kept.empty()) return ok_ = false;
    if (kept.size() == 1) {
      enqueue(kept[0], kNoRef);
      if (propagate() != kNoRef) ok_ = false;
      return ok_;
    }
    const uint32_t cref = alloc_clause(std::move(kept), false);
    attach(cref);
    return true;
  }

  uint32_t alloc_clause(std::vector<Lit> lits, bool learnt) {
    uint32_t cref;
    if (!free_slots_.empty()) {
      cref = free_slots_.back();
      free_slots_.pop_back();
      db_[cref] = ClauseData{};
    } else {
      cref = static_cast<uint32_t>(db_.size());
      db_.emplace_back();
    }
    db_[cref].lits = std::move(lits);
    db_[cref].learnt = learnt;
    return cref;
  }

  void attach(uint32_t cref) {
    const auto& c = db_[cref].lits;
    watches_[(~c[0]).code].push_back({cref, c[1]});
    watches_[(~c[1]).code].push_back({cref, c[0]});
  }

  void enqueue(Lit p, uint32_t from) {
    const auto v = static_cast<size_t>(p.var());
    assigns_[v] = p.negated() ? kFalse : kTrue;
    level_[v] = decision_level();
    reason_[v] = from;
    trail_.push_back(p);
  }

  uint32_t propagate() {
    uint32_t confl = kNoRef;
    while (qhead_ < trail_.size()) {
      const Lit p = trail_[qhead_++];
      ++stats_.propagations;
      auto& ws = watches_[p.code];
      size_t i = 0;
      size_t j = 0;
      const Lit false_lit = ~p;
      while (i < ws.size()) {
        const Watcher w = ws[i];
        if (value(w.blocker) == kTrue) {
          ws[j++] = ws[i++];
          continue;
        }
        auto& c = db_[w.cref].lits;
        if (c[0] == false_lit) std::swap(c[0], c[1]);
        ++i;
        const Lit first = c[0];
        if (first != w.blocker && value(first) == kTrue) {
          ws[j++] = {w.cref, first};
          continue;
        }
        bool moved = false;
        for (size_t k = 2; k < c.size(); ++k) {
          if (value(c[k]) != kFalse) {
            std::swap(c[1], c[k]);
            watches_[(~c[1]).code].push_back({w.cref, first});
            moved = true;
            break;
          }
        }
        if (moved) continue;
        ws[j++] = {w.cref, first};
        if (value(first) == kFalse) {
          confl = w.cref;
          qhead_ = trail_.size();
          while (i < ws.size()) ws[j++] = ws[i++];
        } else {
          enqueue(first, w.cref);
        }
      }
      ws.resize(j);
      if (confl != kNoRef) break;
    }
    return confl;
  }

  void cancel_until(int lvl) {
    if (decision_level() <= lvl) return;
    const size_t stop = trail_lim_[static_cast<size_t>(lvl)];
    for (size_t c = trail_.size(); c-- > stop;) {
      const int v = trail_[c].var();
      assigns_[static_cast<size_t>(v)] = kUndef;
      reason_[static_cast<size_t>(v)] = kNoRef;
      polarity_[static_cast<size_t>(v)] = trail_[c].negated() ? 1 : 0;
      if (heap_index_[static_cast<size_t>(v)] < 0) heap_insert(v);
    }
    trail_.resize(stop);
    qhead_ = stop;
    trail_lim_.resize(static_cast<size_t>(lvl));
  }

  // First-UIP analysis. Returns the learned clause with the asserting literal
  // first and a literal of the backjump level second.
  std::vector<Lit> analyze(uint32_t confl, int& backjump) {
    std::vector<Lit> learnt(1);
    int pending = 0;
    Lit p;
    size_t index = trail_.size();
    do {
      auto& c = db_[confl];
      if (c.learnt) bump_clause(c);
      for (size_t k = p.valid() ? 1 : 0; k < c.lits.size(); ++k) {
        const Lit q = c.lits[k];
        const auto v = static_cast<size_t>(q.var());
        if (!seen_[v] && level_[v] > 0) {
          bump_var(q.var());
          seen_[v] = 1;
          if (level_[v] >= decision_level())
            ++pending;
          else
            learnt.push_back(q);
        }
      }
      while (!seen_[static_cast<size_t>(trail_[--index].var())]) {
      }
      p = trail_[index];
      confl = reason_[static_cast<size_t>(p.var())];
      seen_[static_cast<size_t>(p.var())] = 0;
      --pending;
    } while (pending > 0);
    learnt[0] = ~p;

    // Drop literals whose reason is subsumed by the rest of the clause.
    std::vector<Lit> to_clear(learnt.begin() + 1, learnt.end());
    size_t j = 1;
    for (size_t i = 1; i < learnt.size(); ++i) {
      const auto r = reason_[static_cast<size_t>(learnt[i].var())];
      bool keep = r == kNoRef;
      if (!keep) {
        const auto& rc = db_[r].lits;
        for (size_t k = 1; k < rc.size(); ++k) {
          const auto v = static_cast<size_t>(rc[k].var());
          if (!seen_[v] && level_[v] > 0) {
            keep = true;
            break;
          }
        }
      }
      if (keep) learnt[j++] = learnt[i];
    }
    learnt.resize(j);
    for (Lit q : to_clear) seen_[static_cast<size_t>(q.var())] = 0;

    if (learnt.size() == 1) {
      backjump = 0;
    } else {
      size_t max_i = 1;
      for (size_t i = 2; i < learnt.size(); ++i)
        if (level_[static_cast<size_t>(learnt[i].var())] >
            level_[static_cast<size_t>(learnt[max_i].var())])
          max_i = i;
      std::swap(learnt[1], learnt[max_i]);
      backjump = level_[static_cast<size_t>(learnt[1].var())];
    }
    return learnt;
  }

  uint32_t compute_lbd(const std::vector<Lit>& lits) {
    ++lbd_stamp_;
    if (lbd_seen_.size() < static_cast<size_t>(decision_level()) + 1)
      lbd_seen_.resize(static_cast<size_t>(decision_level()) + 1, 0);
    uint32_t n = 0;
    for (Lit q : lits) {
      const auto l = static_cast<size_t>(level_[static_cast<size_t>(q.var())]);
      if (lbd_seen_[l] != lbd_stamp_) {
        lbd_seen_[l] = lbd_stamp_;
        ++n;
      }
    }
    return n;
  }

  void bump_var(int v) {
    auto& a = activity_[static_cast<size_t>(v)];
    if ((a += var_inc_) > 1e100) {
      for (auto& x : activity_) x *= 1e-100;
      var_inc_ *= 1e-100;
    }
    if (heap_index_[static_cast<size_t>(v)] >= 0) heap_up(heap_index_[static_cast<size_t>(v)]);
  }

  void bump_clause(ClauseData& c) {
    if ((c.activity += clause_inc_) > 1e20) {
      for (uint32_t cref : learnts_) db_[cref].activity *= 1e-20;
      clause_inc_ *= 1e-20;
    }
  }

  bool locked(uint32_t cref) const {
    const Lit first = db_[cref].lits[0];
    return reason_[static_cast<size_t>(first.var())] == cref && value(first) == kTrue;
  }

  void reduce_learnts() {
    ++stats_.reductions;
    std::vector<uint32_t> order = learnts_;
    std::sort(order.begin(), order.end(), [this](uint32_t a, uint32_t b) {
      if (db_[a].lbd != db_[b].lbd) return db_[a].lbd > db_[b].lbd;
      return db_[a].activity < db_[b].activity;
    });
    size_t budget = order.size() / 2;
    for (uint32_t cref : order) {
      if (budget == 0) break;
      auto& c = db_[cref];
      if (c.lbd <= options_.keep_lbd || c.lits.size() <= 2 || locked(cref)) continue;
      c.deleted = true;
      --budget;
    }
    for (auto& ws : watches_)
      ws.erase(std::remove_if(ws.begin(), ws.end(),
                              [this](const Watcher& w) { return db_[w.cref].deleted; }),
               ws.end());
    std::vector<uint32_t> kept;
    for (uint32_t cref : learnts_) {
      if (db_[cref].deleted) {
        db_[cref].lits.clear();
        db_[cref].lits.shrink_to_fit();
        free_slots_.push_back(cref);
        ++stats_.deleted;
      } else {
        kept.push_back(cref);
      }
    }
    learnts_ = std::move(kept);
  }

  Lit pick_branch() {
    if (options_.random_branch_freq > 0.0 && !heap_.empty()) {
      std::uniform_real_distribution<double> coin(0.0, 1.0);
      if (coin(rng_) < options_.random_branch_freq) {
        std::uniform_int_distribution<size_t> pick(0, heap_.size() - 1);
        const int v = heap_[pick(rng_)];
        if (assigns_[static_cast<size_t>(v)] == kUndef)
          return Lit::make(v, polarity_[static_cast<size_t>(v)] != 0);
      }
    }
    while (!heap_.empty()) {
      const int v = heap_pop();
      if (assigns_[static_cast<size_t>(v)] == kUndef)
        return Lit::make(v, polarity_[static_cast<size_t>(v)] != 0);
    }
    return Lit{};
  }

  Status search(uint64_t restart_limit, const Budget& budget, uint64_t start_conflicts) {
    uint64_t local_conflicts = 0;
    while (true) {
      const uint32_t confl = propagate();
      if (confl != kNoRef) {
        ++stats_.conflicts;
        ++local_conflicts;
        if (decision_level() == 0) {
          ok_ = false;
          return Status::kUnsat;
        }
        int backjump = 0;
        auto learnt = analyze(confl, backjump);
        const uint32_t lbd = compute_lbd(learnt);
        cancel_until(backjump);
        ++stats_.learned_total;
        if (learnt.size() == 1) {
          ++stats_.learned_units;
          enqueue(learnt[0], kNoRef);
        } else {
          const uint32_t cref = alloc_clause(std::move(learnt), true);
          db_[cref].lbd = lbd;
          learnts_.push_back(cref);
          attach(cref);
          bump_clause(db_[cref]);
          enqueue(db_[cref].lits[0], cref);
        }
        var_inc_ /= options_.var_decay;
        clause_inc_ /= options_.clause_decay;
        if ((stats_.conflicts & 63u) == 0 || budget.conflicts) check_budget_ = true;
        continue;
      }

      if (check_budget_) {
        check_budget_ = false;
        if (exhausted(budget, start_conflicts)) {
          cancel_until(0);
          return Status::kUnknown;
        }
      }
      if (local_conflicts >= restart_limit) {
        cancel_until(0);
        return Status::kUnknown;
      }
      if (stats_.conflicts >= next_reduce_) {
        ++reduce_rounds_;
        next_reduce_ = stats_.conflicts + static_cast<uint64_t>(options_.reduce_first) +
                       static_cast<uint64_t>(options_.reduce_increment) * reduce_rounds_;
        reduce_learnts();
      }

      Lit next;
      while (decision_level() < static_cast<int>(assumptions_.size())) {
        const Lit a = assumptions_[static_cast<size_t>(decision_level())];
        if (value(a) == kTrue) {
          trail_lim_.push_back(trail_.size());
        } else if (value(a) == kFalse) {
          cancel_until(0);
          return Status::kUnsat;
        } else {
          next = a;
          break;
        }
      }
      if (!next.valid()) {
        ++stats_.decisions;
        if ((stats_.decisions & 1023u) == 0 && exhausted(budget, start_conflicts)) {
          cancel_until(0);
          return Status::kUnknown;
        }
        next = pick_branch();
        if (!next.valid()) return Status::kSat;
      }
      trail_lim_.push_back(trail_.size());
      enqueue(next, kNoRef);
    }
  }

  // Max-heap on activity.
  bool heap_less(int a, int b) const {
    return activity_[static_cast<size_t>(a)] > activity_[static_cast<size_t>(b)];
  }
  void heap_up(int i) {
    const int v = heap_[static_cast<size_t>(i)];
    while (i > 0) {
      const int parent = (i - 1) / 2;
      if (!heap_less(v, heap_[static_cast<size_t>(parent)])) break;
      heap_[static_cast<size_t>(i)] = heap_[static_cast<size_t>(parent)];
      heap_index_[static_cast<size_t>(heap_[static_cast<size_t>(i)])] = i;
      i = parent;
    }
    heap_[static_cast<size_t>(i)] = v;
    heap_index_[static_cast<size_t>(v)] = i;
  }
  void heap_down(int i) {
    const int v = heap_[static_cast<size_t>(i)];
    const int n = static_cast<int>(heap_.size());
    while (2 * i + 1 < n) {
      int child = 2 * i + 1;
      if (child + 1 < n &&
          heap_less(heap_[static_cast<size_t>(child) + 1], heap_[static_cast<size_t>(child)]))
        ++child;
      if (!heap_less(heap_[static_cast<size_t>(child)], v)) break;
      heap_[static_cast<size_t>(i)] = heap_[static_cast<size_t>(child)];
      heap_index_[static_cast<size_t>(heap_[static_cast<size_t>(i)])] = i;
      i = child;
    }
    heap_[static_cast<size_t>(i)] = v;
    heap_index_[static_cast<size_t>(v)] = i;
  }
  void heap_insert(int v) {
    heap_.push_back(v);
    heap_index_[static_cast<size_t>(v)] = static_cast<int>(heap_.size()) - 1;
    heap_up(static_cast<int>(heap_.size()) - 1);
  }
  int heap_pop() {
    const int top = heap_[0];
    heap_index_[static_cast<size_t>(top)] = -1;
    const int last = heap_.back();
    heap_.pop_back();
    if (!heap_.empty()) {
      heap_[0] = last;
      heap_index_[static_cast<size_t>(last)] = 0;
      heap_down(0);
    }
    return top;
  }

  SolverOptions options_;
  std::mt19937_64 rng_;
  bool ok_ = true;

  std::vector<ClauseData> db_;
  std::vector<uint32_t> learnts_;
  std::vector<uint32_t> free_slots_;
  std::vector<std::vector<Watcher>> watches_;

  std::vector<int8_t> assigns_;
  std::vector<int> level_;
  std::vector<uint32_t> reason_;
  std::vector<double> activity_;
  std::vector<uint8_t> polarity_;  // 1 = branch negative
  std::vector<uint8_t> seen_;
  std::vector<Lit> trail_;
  std::vector<size_t> trail_lim_;
  size_t qhead_ = 0;
  std::vector<Lit> assumptions_;

  std::vector<int> heap_;
  std::vector<int> heap_index_;

  std::vector<uint64_t> lbd_seen_;
  uint64_t lbd_stamp_ = 0;
  double var_inc_ = 1.0;
  double clause_inc_ = 1.0;
  uint64_t next_reduce_ = static_cast<uint64_t>(options_.reduce_first);
  bool check_budget_ = false;
  uint64_t reduce_rounds_ = 0;

  SolverStats stats_;
};

// Whether `model` satisfies every clause of `f`.
inline bool satisfies(const Cnf& f, const std::vector<bool>& model) {
  for (const auto& c : f.clauses) {
    bool sat = false;
    for (int l : c) {
      const bool v = model.at(static_cast<size_t>(std::abs(l)));
      if (l > 0 ? v : !v) {
        sat = true;
        break;
      }
    }
    if (!sat) return false;
  }
  return true;
}

}  // namespace cutsat::sat
