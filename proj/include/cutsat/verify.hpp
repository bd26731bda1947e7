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

// Geometric solution checker and a brute-force optimum for tiny instances.
// Nothing here depends on the SAT encoding.

#pragma once

#include <algorithm>
#include <bit>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "cutsat/model.hpp"

namespace cutsat {

enum class ViolationKind { kBoundary, kOverlap, kDemand, kSheetIndex, kRotationForbidden };

inline const char* to_string(ViolationKind k) {
  switch (k) {
    case ViolationKind::kBoundary: return "BOUNDARY";
    case ViolationKind::kOverlap: return "OVERLAP";
    case ViolationKind::kDemand: return "DEMAND";
    case ViolationKind::kSheetIndex: return "SHEET_INDEX";
    case ViolationKind::kRotationForbidden: return "ROTATION_FORBIDDEN";
  }
  return "?";
}

struct Violation {
  ViolationKind kind;
  std::string detail;
};

struct VerifyReport {
  std::vector<Violation> violations;

  bool ok() const { return violations.empty(); }
  bool has(ViolationKind k) const {
    return std::any_of(violations.begin(), violations.end(),
                       [k](const Violation& v) { return v.kind == k; });
  }
};

namespace detail {

inline std::string copy_label(const Placement& p) {
  return "c(" + std::to_string(p.type_index + 1) + "," + std::to_string(p.ordinal) + ")";
}

}  // namespace detail

// Rectangles are half-open, so placements sharing an edge do not overlap.
inline VerifyReport verify_solution(const Instance& inst, const Solution& sol,
                                    bool rotation_allowed) {
  VerifyReport report;
  auto add = [&](ViolationKind k, std::string d) {
    report.violations.push_back({k, std::move(d)});
  };

  std::vector<std::vector<int>> seen(inst.types.size());
  for (size_t t = 0; t < inst.types.size(); ++t)
    seen[t].assign(static_cast<size_t>(inst.types[t].demand) + 1, 0);

  int max_sheet = 0;
  for (const auto& p : sol.placements) {
    const std::string label = detail::copy_label(p);
    if (p.type_index < 0 || p.type_index >= static_cast<int>(inst.types.size())) {
      add(ViolationKind::kDemand, label + " refers to an unknown item type");
      continue;
    }
    const auto& t = inst.types[static_cast<size_t>(p.type_index)];
    if (p.ordinal < 1 || p.ordinal > t.demand)
      add(ViolationKind::kDemand, label + " exceeds the demand of its type");
    else
      ++seen[static_cast<size_t>(p.type_index)][static_cast<size_t>(p.ordinal)];

    if (p.sheet < 1 || p.sheet > sol.sheets_used)
      add(ViolationKind::kSheetIndex, label + " on sheet " + std::to_string(p.sheet) +
                                          " outside 1.." + std::to_string(sol.sheets_used));
    max_sheet = std::max(max_sheet, p.sheet);

    if (p.rotated && !rotation_allowed)
      add(ViolationKind::kRotationForbidden, label + " is rotated");

    const int w = effective_width(t, p.rotated);
    const int h = effective_height(t, p.rotated);
    if (p.x < 0 || p.y < 0 || p.x + w > inst.sheet_width || p.y + h > inst.sheet_height)
      add(ViolationKind::kBoundary,
          label + " at (" + std::to_string(p.x) + "," + std::to_string(p.y) + ") size " +
              std::to_string(w) + "x" + std::to_string(h) + " leaves the " +
              std::to_string(inst.sheet_width) + "x" + std::to_string(inst.sheet_height) +
              " sheet");
  }
  if (max_sheet != sol.sheets_used)
    add(ViolationKind::kSheetIndex, "sheet count " + std::to_string(sol.sheets_used) +
                                        " but highest sheet used is " +
                                        std::to_string(max_sheet));

  for (size_t t = 0; t < inst.types.size(); ++t) {
    for (int i = 1; i <= inst.types[t].demand; ++i) {
      const int n = seen[t][static_cast<size_t>(i)];
      if (n != 1)
        add(ViolationKind::kDemand, "c(" + std::to_string(t + 1) + "," + std::to_string(i) +
                                        ") placed " + std::to_string(n) + " times");
    }
  }

  const auto& ps = sol.placements;
  for (size_t i = 0; i < ps.size(); ++i) {
    if (ps[i].type_index < 0 || ps[i].type_index >= static_cast<int>(inst.types.size()))
      continue;
    const auto& ti = inst.types[static_cast<size_t>(ps[i].type_index)];
    for (size_t j = i + 1; j < ps.size(); ++j) {
      if (ps[j].sheet != ps[i].sheet) continue;
      if (ps[j].type_index < 0 || ps[j].type_index >= static_cast<int>(inst.types.size()))
        continue;
      const auto& tj = inst.types[static_cast<size_t>(ps[j].type_index)];
      const bool separated =
          ps[i].x + effective_width(ti, ps[i].rotated) <= ps[j].x ||
          ps[j].x + effective_width(tj, ps[j].rotated) <= ps[i].x ||
          ps[i].y + effective_height(ti, ps[i].rotated) <= ps[j].y ||
          ps[j].y + effective_height(tj, ps[j].rotated) <= ps[i].y;
      if (!separated)
        add(ViolationKind::kOverlap, detail::copy_label(ps[i]) + " and " +
                                         detail::copy_label(ps[j]) + " overlap on sheet " +
                                         std::to_string(ps[i].sheet));
    }
  }
  return report;
}

class OracleLimitError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct OracleLimits {
  int max_copies = 7;
  int max_sheet_area = 64;
};

namespace detail {

// Depth-first packing over sheet, position and orientation with a 64-bit
// occupancy mask per sheet. Canonical form: sheets are opened in order of
// first use, copies of one type take non-decreasing sheets, and copies of
// one type on one sheet take strictly increasing (y, x).
class BruteForcePacker {
 public:
  BruteForcePacker(const Instance& inst, bool rotation, int sheets)
      : inst_(inst), rotation_(rotation), sheets_(sheets) {
    for (size_t t = 0; t < inst.types.size(); ++t)
      for (int i = 1; i <= inst.types[t].demand; ++i)
        items_.push_back({static_cast<int>(t), i});
    occupied_.assign(static_cast<size_t>(sheets), 0);
    placed_.resize(items_.size());
    remaining_area_ = 0;
    for (const auto& it : items_) remaining_area_ += area(it.type);
  }

  std::optional<Solution> run() {
    if (!place(0, 0, static_cast<int64_t>(sheets_) * inst_.sheet_area()))
      return std::nullopt;
    Solution s;
    for (size_t i = 0; i < items_.size(); ++i) s.placements.push_back(placed_[i]);
    return compact_sheets(std::move(s));
  }

 private:
  struct Item {
    int type;
    int ordinal;
  };

  int64_t area(int type) const {
    const auto& t = inst_.types[static_cast<size_t>(type)];
    return static_cast<int64_t>(t.width) * t.height;
  }

  uint64_t rect_mask(int x, int y, int w, int h) const {
    uint64_t m = 0;
    for (int yy = y; yy < y + h; ++yy)
      for (int xx = x; xx < x + w; ++xx)
        m |= uint64_t{1} << (yy * inst_.sheet_width + xx);
    return m;
  }

  bool place(size_t idx, int opened, int64_t free_area) {
    if (idx == items_.size()) return true;
    if (remaining_area_ > free_area) return false;
    const Item& it = items_[idx];
    const auto& t = inst_.types[static_cast<size_t>(it.type)];
    const Placement* prev = (idx > 0 && items_[idx - 1].type == it.type) ? &placed_[idx - 1]
                                                                          : nullptr;
    const int first_sheet = prev ? prev->sheet : 1;
    const int last_sheet = std::min(sheets_, opened + 1);
    const int64_t a = area(it.type);

    for (int sheet = first_sheet; sheet <= last_sheet; ++sheet) {
      for (int rot = 0; rot <= 1; ++rot) {
        const bool rotated = rot == 1;
        if (rotated && (!rotation_ || t.width == t.height)) continue;
        const int w = effective_width(t, rotated);
        const int h = effective_height(t, rotated);
        if (w > inst_.sheet_width || h > inst_.sheet_height) continue;
        for (int y = 0; y + h <= inst_.sheet_height; ++y) {
          for (int x = 0; x + w <= inst_.sheet_width; ++x) {
            if (prev && prev->sheet == sheet &&
                (y < prev->y || (y == prev->y && x <= prev->x)))
              continue;
            const uint64_t m = rect_mask(x, y, w, h);
            uint64_t& occ = occupied_[static_cast<size_t>(sheet - 1)];
            if (occ & m) continue;
            occ |= m;
            placed_[idx] = {it.type, it.ordinal, sheet, x, y, rotated};
            remaining_area_ -= a;
            const bool ok = place(idx + 1, std::max(opened, sheet), free_area - a);
            remaining_area_ += a;
            occ &= ~m;
            if (ok) return true;
          }
        }
      }
    }
    return false;
  }

  const Instance& inst_;
  bool rotation_;
  int sheets_;
  std::vector<Item> items_;
  std::vector<uint64_t> occupied_;
  std::vector<Placement> placed_;
  int64_t remaining_area_;
};

inline void check_oracle_limits(const Instance& inst, const OracleLimits& limits) {
  if (inst.num_copies() > limits.max_copies)
    throw OracleLimitError("brute force refuses " + std::to_string(inst.num_copies()) +
                           " copies (limit " + std::to_string(limits.max_copies) + ")");
  if (inst.sheet_area() > limits.max_sheet_area || inst.sheet_area() > 64)
    throw OracleLimitError("brute force refuses sheet area " +
                           std::to_string(inst.sheet_area()) + " (limit " +
                           std::to_string(std::min(limits.max_sheet_area, 64)) + ")");
}

}  // namespace detail

// A packing on at most `sheets` sheets, or nullopt if none exists.
inline std::optional<Solution> brute_force_pack(const Instance& inst, bool rotation,
                                                int sheets, OracleLimits limits = {}) {
  detail::check_oracle_limits(inst, limits);
  validate_instance(inst, rotation);
  return detail::BruteForcePacker(inst, rotation, sheets).run();
}

inline int brute_force_optimal(const Instance& inst, bool rotation, OracleLimits limits = {}) {
  detail::check_oracle_limits(inst, limits);
  validate_instance(inst, rotation);
  const int n = inst.num_copies();
  for (int k = 1; k <= n; ++k)
    if (detail::BruteForcePacker(inst, rotation, k).run()) return k;
  throw std::logic_error("no packing with one copy per sheet");
}

}  // namespace cutsat
