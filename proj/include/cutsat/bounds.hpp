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

#pragma once

#include <algorithm>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "cutsat/model.hpp"

namespace cutsat {

// Sheet-count window [lower, upper] and a packing that achieves `upper`.
struct Bounds {
  int lower = 1;
  int upper = 1;
  Solution ffd_solution;
};

// ceil(total copy area / sheet area), at least 1.
inline int lower_bound_area(const Instance& inst) {
  int64_t total = 0;
  for (const auto& t : inst.types)
    total += static_cast<int64_t>(t.width) * t.height * t.demand;
  const int64_t sheet = inst.sheet_area();
  return static_cast<int>(std::max<int64_t>(1, (total + sheet - 1) / sheet));
}

// Shelf-based first-fit decreasing.
//
// Copies are sorted by non-increasing height, then non-increasing width, then
// type and ordinal. Each copy goes on the first shelf (sheets in opening
// order, shelves bottom-up) with enough remaining width; otherwise a new shelf
// opens on the first sheet with enough remaining height; otherwise a new
// sheet opens. A shelf is as tall as its first copy. Copies are placed
// unrotated, except that with rotation enabled a copy that only fits rotated
// is rotated once up front.
inline Bounds ffd_upper_bound(const Instance& inst, bool rotation) {
  struct Item {
    int type;
    int ordinal;
    int w;
    int h;
    bool rotated;
  };
  std::vector<Item> items;
  for (const auto& c : expand_demands(inst)) {
    const auto& t = inst.types[static_cast<size_t>(c.type_index)];
    if (inst.fits_unrotated(t)) {
      items.push_back({c.type_index, c.ordinal, t.width, t.height, false});
    } else if (rotation && inst.fits_rotated(t)) {
      items.push_back({c.type_index, c.ordinal, t.height, t.width, true});
    } else {
      throw std::invalid_argument("item type " + std::to_string(c.type_index + 1) +
                                  " fits the sheet in no permitted orientation");
    }
  }
  std::stable_sort(items.begin(), items.end(), [](const Item& a, const Item& b) {
    if (a.h != b.h) return a.h > b.h;
    if (a.w != b.w) return a.w > b.w;
    if (a.type != b.type) return a.type < b.type;
    return a.ordinal < b.ordinal;
  });

  struct Shelf {
    int y;
    int height;
    int used_width;
  };
  struct Sheet {
    std::vector<Shelf> shelves;
    int used_height = 0;
  };
  std::vector<Sheet> sheets;
  Bounds b;

  for (const auto& it : items) {
    bool placed = false;
    for (size_t s = 0; s < sheets.size() && !placed; ++s) {
      for (auto& shelf : sheets[s].shelves) {
        if (it.h <= shelf.height && shelf.used_width + it.w <= inst.sheet_width) {
          b.ffd_solution.placements.push_back({it.type, it.ordinal, static_cast<int>(s) + 1,
                                               shelf.used_width, shelf.y, it.rotated});
          shelf.used_width += it.w;
          placed = true;
          break;
        }
      }
    }
    for (size_t s = 0; s < sheets.size() && !placed; ++s) {
      auto& sheet = sheets[s];
      if (sheet.used_height + it.h <= inst.sheet_height) {
        sheet.shelves.push_back({sheet.used_height, it.h, it.w});
        b.ffd_solution.placements.push_back(
            {it.type, it.ordinal, static_cast<int>(s) + 1, 0, sheet.used_height, it.rotated});
        sheet.used_height += it.h;
        placed = true;
      }
    }
    if (!placed) {
      sheets.emplace_back();
      sheets.back().shelves.push_back({0, it.h, it.w});
      sheets.back().used_height = it.h;
      b.ffd_solution.placements.push_back(
          {it.type, it.ordinal, static_cast<int>(sheets.size()), 0, 0, it.rotated});
    }
  }

  // Report placements in copy order.
  std::sort(b.ffd_solution.placements.begin(), b.ffd_solution.placements.end(),
            [](const Placement& a, const Placement& c) {
              return a.type_index != c.type_index ? a.type_index < c.type_index
                                                  : a.ordinal < c.ordinal;
            });
  b.ffd_solution.sheets_used = static_cast<int>(sheets.size());
  b.upper = b.ffd_solution.sheets_used;
  b.lower = std::min(lower_bound_area(inst), b.upper);
  return b;
}

inline Bounds compute_bounds(const Instance& inst, bool rotation) {
  return ffd_upper_bound(inst, rotation);
}

}  // namespace cutsat
