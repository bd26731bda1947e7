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

// Propositional encoding of "the copies fit on k sheets".
//
// Per copy c and sheet j there is an assignment variable s(c,j). Coordinates
// are order encoded: px(c,e) <=> x_c <= e for e in 0..W-2, and py likewise;
// px(c,e) for e >= W-1 is the constant TRUE and for e < 0 the constant FALSE,
// folded away when clauses are emitted. For each ordered pair of distinct
// copies, left(c,c') means "c lies left of c'" and below(c,c') "c lies below
// c'". used(j) is implied by any copy on sheet j, and with rotation enabled
// rot(c) means c is turned by 90 degrees.
//
// Non-overlap is conditional: the separation disjunction of a pair is only
// enforced on a sheet that holds both copies, and the clauses linking
// left/below to coordinates carry the same per-sheet guard.

#pragma once

#include <algorithm>
#include <array>
#include <cstdint>
#include <cstdlib>
#include <initializer_list>
#include <stdexcept>
#include <string>
#include <vector>

#include "cutsat/model.hpp"
#include "cutsat/sat/cnf.hpp"

namespace cutsat {

class EncodingError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

struct EncodeConfig {
  int sheets = 1;
  bool rotation = false;
  bool symmetry_breaking = false;  // large items, same-type order, orientation, sheet order
};

enum class ClauseFamily : int {
  kAtLeastOneSheet,
  kAtMostOneSheet,
  kOrderAxiom,
  kNonOverlap,
  kLinkHorizontal,
  kLinkVertical,
  kDomain,
  kSheetUsage,
  kLargeItems,     // symmetry breaking
  kSameTypeOrder,  // symmetry breaking
  kOrientation,    // symmetry breaking
  kSheetOrder,     // symmetry breaking
  kCount,
};

inline constexpr size_t kFamilyCount = static_cast<size_t>(ClauseFamily::kCount);

inline const char* to_string(ClauseFamily f) {
  switch (f) {
    case ClauseFamily::kAtLeastOneSheet: return "at_least_one_sheet";
    case ClauseFamily::kAtMostOneSheet: return "at_most_one_sheet";
    case ClauseFamily::kOrderAxiom: return "order_axiom";
    case ClauseFamily::kNonOverlap: return "non_overlap";
    case ClauseFamily::kLinkHorizontal: return "link_horizontal";
    case ClauseFamily::kLinkVertical: return "link_vertical";
    case ClauseFamily::kDomain: return "domain";
    case ClauseFamily::kSheetUsage: return "sheet_usage";
    case ClauseFamily::kLargeItems: return "sb_large_items";
    case ClauseFamily::kSameTypeOrder: return "sb_same_type_order";
    case ClauseFamily::kOrientation: return "sb_orientation";
    case ClauseFamily::kSheetOrder: return "sb_sheet_order";
    case ClauseFamily::kCount: break;
  }
  return "?";
}

// Variable numbering is kind-major (s, px, py, left, below, used, rot), then
// copy-major, then index, so identical inputs always give identical files.
class VarMap {
 public:
  enum class Kind { kSheet, kPosX, kPosY, kLeft, kBelow, kUsed, kRot };

  struct Entry {
    Kind kind;
    int first;   // copy index, or sheet for kUsed
    int second;  // sheet, threshold or second copy; unused otherwise
  };

  VarMap(int copies, int sheet_width, int sheet_height, const EncodeConfig& cfg)
      : n_(copies), k_(cfg.sheets), w_(sheet_width), h_(sheet_height), rotation_(cfg.rotation) {
    if (copies < 1) throw EncodingError("at least one copy is required");
    if (cfg.sheets < 1) throw EncodingError("sheet count must be at least 1");
    int next = 1;
    sheet_base_ = next;
    next += n_ * k_;
    px_base_ = next;
    next += n_ * (w_ - 1);
    py_base_ = next;
    next += n_ * (h_ - 1);
    left_base_ = next;
    next += n_ * (n_ - 1);
    below_base_ = next;
    next += n_ * (n_ - 1);
    used_base_ = next;
    next += k_;
    rot_base_ = next;
    if (rotation_) next += n_;
    total_ = next - 1;
  }

  int copies() const { return n_; }
  int sheets() const { return k_; }
  int sheet_width() const { return w_; }
  int sheet_height() const { return h_; }
  bool rotation() const { return rotation_; }
  int total() const { return total_; }

  // j is 1-based.
  int sheet(int c, int j) const { return sheet_base_ + c * k_ + (j - 1); }
  // Valid for 0 <= e <= W-2 only; see the constant folding in the encoder.
  int px(int c, int e) const { return px_base_ + c * (w_ - 1) + e; }
  int py(int c, int f) const { return py_base_ + c * (h_ - 1) + f; }
  int left(int c, int other) const { return left_base_ + pair_index(c, other); }
  int below(int c, int other) const { return below_base_ + pair_index(c, other); }
  int used(int j) const { return used_base_ + (j - 1); }
  int rot(int c) const {
    if (!rotation_) throw EncodingError("no rotation variables without rotation");
    return rot_base_ + c;
  }

  // Inverse of the accessors above.
  Entry describe(int var) const {
    if (var < 1 || var > total_) throw std::out_of_range("variable outside the map");
    if (var < px_base_) {
      const int i = var - sheet_base_;
      return {Kind::kSheet, i / k_, i % k_ + 1};
    }
    if (var < py_base_) {
      const int i = var - px_base_;
      return {Kind::kPosX, i / (w_ - 1), i % (w_ - 1)};
    }
    if (var < left_base_) {
      const int i = var - py_base_;
      return {Kind::kPosY, i / (h_ - 1), i % (h_ - 1)};
    }
    if (var < used_base_) {
      const bool is_left = var < below_base_;
      const int i = var - (is_left ? left_base_ : below_base_);
      const int c = i / (n_ - 1);
      int other = i % (n_ - 1);
      if (other >= c) ++other;
      return {is_left ? Kind::kLeft : Kind::kBelow, c, other};
    }
    if (var < rot_base_) return {Kind::kUsed, var - used_base_ + 1, 0};
    return {Kind::kRot, var - rot_base_, 0};
  }

 private:
  int pair_index(int c, int other) const {
    return c * (n_ - 1) + (other < c ? other : other - 1);
  }

  int n_, k_, w_, h_;
  bool rotation_;
  int sheet_base_ = 0, px_base_ = 0, py_base_ = 0, left_base_ = 0, below_base_ = 0,
      used_base_ = 0, rot_base_ = 0, total_ = 0;
};

inline VarMap allocate_vars(const std::vector<Copy>& copies, int sheet_width, int sheet_height,
                            const EncodeConfig& cfg) {
  return VarMap(static_cast<int>(copies.size()), sheet_width, sheet_height, cfg);
}

struct CnfFormula {
  sat::Cnf cnf;
  std::array<uint64_t, kFamilyCount> family_counts{};

  int num_vars() const { return cnf.num_vars; }
  size_t num_clauses() const { return cnf.clauses.size(); }
  uint64_t count(ClauseFamily f) const { return family_counts[static_cast<size_t>(f)]; }
};

namespace detail {

// A literal that may have been folded to a constant.
struct Term {
  int lit = 0;  // 0 when constant
  bool value = false;

  static Term of(int l) { return {l, false}; }
  static Term constant(bool v) { return {0, v}; }
  Term operator!() const { return lit != 0 ? Term{-lit, false} : Term{0, !value}; }
};

class ClauseSink {
 public:
  explicit ClauseSink(CnfFormula& out) : out_(out) {}

  // Drops FALSE terms, drops the clause on a TRUE term or a tautology, and
  // removes duplicate literals.
  void emit(ClauseFamily family, std::initializer_list<Term> terms) {
    buf_.clear();
    for (const Term& t : terms) {
      if (t.lit == 0) {
        if (t.value) return;
        continue;
      }
      buf_.push_back(t.lit);
    }
    std::sort(buf_.begin(), buf_.end(), [](int a, int b) {
      return std::abs(a) != std::abs(b) ? std::abs(a) < std::abs(b) : a < b;
    });
    for (size_t i = 1; i < buf_.size(); ++i)
      if (buf_[i] == -buf_[i - 1]) return;
    buf_.erase(std::unique(buf_.begin(), buf_.end()), buf_.end());
    out_.cnf.clauses.push_back(buf_);
    ++out_.family_counts[static_cast<size_t>(family)];
  }

 private:
  CnfFormula& out_;
  sat::Clause buf_;
};

struct Orientation {
  Term guard;  // clause literal that switches the orientation off
  int width;
  int height;
  bool rotated;
};

// Orientations considered by the link clauses: just the natural one without
// rotation; both, each guarded by the rotation literal, with rotation.
inline std::vector<Orientation> link_orientations(const VarMap& vm, const Copy& c, int idx) {
  if (!vm.rotation()) return {{Term::constant(false), c.width, c.height, false}};
  return {{Term::of(vm.rot(idx)), c.width, c.height, false},
          {Term::of(-vm.rot(idx)), c.height, c.width, true}};
}

// Orientations a copy can actually take on the sheet; squares count once.
inline std::vector<Orientation> feasible_orientations(const Instance& inst, bool rotation,
                                                      const Copy& c) {
  std::vector<Orientation> out;
  if (c.width <= inst.sheet_width && c.height <= inst.sheet_height)
    out.push_back({Term::constant(false), c.width, c.height, false});
  if (rotation && c.width != c.height && c.height <= inst.sheet_width &&
      c.width <= inst.sheet_height)
    out.push_back({Term::constant(false), c.height, c.width, true});
  return out;
}

}  // namespace detail

// Threshold literals with constant folding.
inline detail::Term px_term(const VarMap& vm, int c, int e) {
  if (e < 0) return detail::Term::constant(false);
  if (e >= vm.sheet_width() - 1) return detail::Term::constant(true);
  return detail::Term::of(vm.px(c, e));
}
inline detail::Term py_term(const VarMap& vm, int c, int f) {
  if (f < 0) return detail::Term::constant(false);
  if (f >= vm.sheet_height() - 1) return detail::Term::constant(true);
  return detail::Term::of(vm.py(c, f));
}

// Large-item, same-type, orientation and sheet-order rules. Appends to `out`.
inline void encode_symmetry_breaking(const std::vector<Copy>& copies, const Instance& inst,
                                     const EncodeConfig& cfg, const VarMap& vm,
                                     CnfFormula& out) {
  using detail::Term;
  detail::ClauseSink sink(out);
  const int n = static_cast<int>(copies.size());

  // Orientation: fix the rotation variable whenever only one orientation is
  // possible; squares keep their natural orientation.
  if (cfg.rotation) {
    for (int c = 0; c < n; ++c) {
      const Copy& cp = copies[static_cast<size_t>(c)];
      const bool natural = cp.width <= inst.sheet_width && cp.height <= inst.sheet_height;
      const bool turned = cp.height <= inst.sheet_width && cp.width <= inst.sheet_height;
      if (!natural && !turned)
        throw EncodingError("copy of type " + std::to_string(cp.type_index + 1) +
                            " fits in no orientation");
      if (!turned || cp.width == cp.height)
        sink.emit(ClauseFamily::kOrientation, {Term::of(-vm.rot(c))});
      else if (!natural)
        sink.emit(ClauseFamily::kOrientation, {Term::of(vm.rot(c))});
    }
  }

  // Large items: if two copies cannot sit side by side in any permitted
  // orientation, neither is left of the other; likewise vertically.
  std::vector<std::vector<detail::Orientation>> orients;
  for (const auto& cp : copies) orients.push_back(detail::feasible_orientations(inst, cfg.rotation, cp));
  for (int c = 0; c < n; ++c) {
    for (int d = c + 1; d < n; ++d) {
      bool wide = true;
      bool tall = true;
      for (const auto& oc : orients[static_cast<size_t>(c)]) {
        for (const auto& od : orients[static_cast<size_t>(d)]) {
          if (oc.width + od.width <= inst.sheet_width) wide = false;
          if (oc.height + od.height <= inst.sheet_height) tall = false;
        }
      }
      if (wide) {
        sink.emit(ClauseFamily::kLargeItems, {Term::of(-vm.left(c, d))});
        sink.emit(ClauseFamily::kLargeItems, {Term::of(-vm.left(d, c))});
      }
      if (tall) {
        sink.emit(ClauseFamily::kLargeItems, {Term::of(-vm.below(c, d))});
        sink.emit(ClauseFamily::kLargeItems, {Term::of(-vm.below(d, c))});
      }
    }
  }

  // Same type: a later copy is never strictly left of an earlier one.
  for (int c = 0; c < n; ++c)
    for (int d = c + 1; d < n; ++d)
      if (copies[static_cast<size_t>(c)].type_index == copies[static_cast<size_t>(d)].type_index)
        sink.emit(ClauseFamily::kSameTypeOrder, {Term::of(-vm.left(d, c))});

  // Sheets are used in index order.
  for (int j = 1; j < cfg.sheets; ++j)
    sink.emit(ClauseFamily::kSheetOrder, {Term::of(-vm.used(j + 1)), Term::of(vm.used(j))});
}

inline CnfFormula encode(const std::vector<Copy>& copies, const Instance& inst,
                         const EncodeConfig& cfg) {
  using detail::Term;
  const VarMap vm = allocate_vars(copies, inst.sheet_width, inst.sheet_height, cfg);
  const int n = vm.copies();
  const int k = vm.sheets();
  const int W = inst.sheet_width;
  const int H = inst.sheet_height;

  if (!cfg.rotation) {
    for (const auto& c : copies)
      if (c.width > W || c.height > H)
        throw EncodingError("copy of type " + std::to_string(c.type_index + 1) +
                            " does not fit the sheet unrotated");
  }

  CnfFormula out;
  out.cnf.num_vars = vm.total();
  detail::ClauseSink sink(out);

  // Exactly one sheet per copy: one at-least-one clause, pairwise at-most-one.
  std::vector<int> alo;
  for (int c = 0; c < n; ++c) {
    alo.clear();
    for (int j = 1; j <= k; ++j) alo.push_back(vm.sheet(c, j));
    out.cnf.clauses.push_back(alo);
    ++out.family_counts[static_cast<size_t>(ClauseFamily::kAtLeastOneSheet)];
    for (int j1 = 1; j1 <= k; ++j1)
      for (int j2 = j1 + 1; j2 <= k; ++j2)
        sink.emit(ClauseFamily::kAtMostOneSheet,
                  {Term::of(-vm.sheet(c, j1)), Term::of(-vm.sheet(c, j2))});
  }

  // Order axioms: x <= e implies x <= e+1.
  for (int c = 0; c < n; ++c) {
    for (int e = 0; e + 1 <= W - 2; ++e)
      sink.emit(ClauseFamily::kOrderAxiom, {Term::of(-vm.px(c, e)), Term::of(vm.px(c, e + 1))});
    for (int f = 0; f + 1 <= H - 2; ++f)
      sink.emit(ClauseFamily::kOrderAxiom, {Term::of(-vm.py(c, f)), Term::of(vm.py(c, f + 1))});
  }

  // Conditional non-overlap.
  for (int c = 0; c < n; ++c)
    for (int d = c + 1; d < n; ++d)
      for (int j = 1; j <= k; ++j)
        sink.emit(ClauseFamily::kNonOverlap,
                  {Term::of(-vm.sheet(c, j)), Term::of(-vm.sheet(d, j)), Term::of(vm.left(c, d)),
                   Term::of(vm.left(d, c)), Term::of(vm.below(c, d)), Term::of(vm.below(d, c))});

  // Links between relative position and coordinates, per ordered pair, sheet
  // and orientation of the first copy. left(c,d) forces x_d >= w and
  // x_c >= e+1 => x_d >= e+1+w, i.e. x_c + w <= x_d.
  for (int c = 0; c < n; ++c) {
    const auto orients = detail::link_orientations(vm, copies[static_cast<size_t>(c)], c);
    for (int d = 0; d < n; ++d) {
      if (d == c) continue;
      const Term not_left = Term::of(-vm.left(c, d));
      const Term not_below = Term::of(-vm.below(c, d));
      for (int j = 1; j <= k; ++j) {
        const Term gc = Term::of(-vm.sheet(c, j));
        const Term gd = Term::of(-vm.sheet(d, j));
        for (const auto& o : orients) {
          const int w = o.width;
          sink.emit(ClauseFamily::kLinkHorizontal, {gc, gd, o.guard, not_left, !px_term(vm, d, w - 1)});
          for (int e = 0; e <= W - w - 1; ++e)
            sink.emit(ClauseFamily::kLinkHorizontal,
                      {gc, gd, o.guard, not_left, px_term(vm, c, e), !px_term(vm, d, e + w)});
          const int h = o.height;
          sink.emit(ClauseFamily::kLinkVertical, {gc, gd, o.guard, not_below, !py_term(vm, d, h - 1)});
          for (int f = 0; f <= H - h - 1; ++f)
            sink.emit(ClauseFamily::kLinkVertical,
                      {gc, gd, o.guard, not_below, py_term(vm, c, f), !py_term(vm, d, f + h)});
        }
      }
    }
  }

  // Domain: the copy fits inside the sheet in its orientation.
  for (int c = 0; c < n; ++c) {
    const Copy& cp = copies[static_cast<size_t>(c)];
    if (cfg.rotation) {
      const Term r = Term::of(vm.rot(c));
      sink.emit(ClauseFamily::kDomain, {r, px_term(vm, c, W - cp.width)});
      sink.emit(ClauseFamily::kDomain, {!r, px_term(vm, c, W - cp.height)});
      sink.emit(ClauseFamily::kDomain, {r, py_term(vm, c, H - cp.height)});
      sink.emit(ClauseFamily::kDomain, {!r, py_term(vm, c, H - cp.width)});
    } else {
      sink.emit(ClauseFamily::kDomain, {px_term(vm, c, W - cp.width)});
      sink.emit(ClauseFamily::kDomain, {py_term(vm, c, H - cp.height)});
    }
  }

  // Sheet usage.
  for (int c = 0; c < n; ++c)
    for (int j = 1; j <= k; ++j)
      sink.emit(ClauseFamily::kSheetUsage, {Term::of(-vm.sheet(c, j)), Term::of(vm.used(j))});

  if (cfg.symmetry_breaking) encode_symmetry_breaking(copies, inst, cfg, vm, out);
  return out;
}

// Reads a packing off a model of the formula for `vm`. Throws EncodingError
// if a copy is not on exactly one sheet.
inline Solution decode(const std::vector<bool>& model, const VarMap& vm,
                       const std::vector<Copy>& copies) {
  auto val = [&](int var) { return model.at(static_cast<size_t>(var)); };
  Solution s;
  for (int c = 0; c < vm.copies(); ++c) {
    const Copy& cp = copies[static_cast<size_t>(c)];
    int sheet = 0;
    for (int j = 1; j <= vm.sheets(); ++j) {
      if (!val(vm.sheet(c, j))) continue;
      if (sheet != 0)
        throw EncodingError("copy assigned to sheets " + std::to_string(sheet) + " and " +
                            std::to_string(j));
      sheet = j;
    }
    if (sheet == 0) throw EncodingError("copy assigned to no sheet");
    int x = vm.sheet_width() - 1;
    for (int e = 0; e <= vm.sheet_width() - 2; ++e)
      if (val(vm.px(c, e))) {
        x = e;
        break;
      }
    int y = vm.sheet_height() - 1;
    for (int f = 0; f <= vm.sheet_height() - 2; ++f)
      if (val(vm.py(c, f))) {
        y = f;
        break;
      }
    const bool rotated = vm.rotation() && val(vm.rot(c));
    s.placements.push_back({cp.type_index, cp.ordinal, sheet, x, y, rotated});
    s.sheets_used = std::max(s.sheets_used, sheet);
  }
  return s;
}

// The formula and its variable map for a whole instance.
struct Encoding {
  std::vector<Copy> copies;
  VarMap vars;
  CnfFormula formula;
};

inline Encoding build_encoding(const Instance& inst, const EncodeConfig& cfg) {
  auto copies = expand_demands(inst);
  VarMap vars = allocate_vars(copies, inst.sheet_width, inst.sheet_height, cfg);
  CnfFormula formula = encode(copies, inst, cfg);
  return {std::move(copies), vars, std::move(formula)};
}

}  // namespace cutsat
