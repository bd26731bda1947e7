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

// Problem representation for the two-dimensional single stock size cutting
// stock problem: item types with demands, identical W x H sheets, demand
// expansion into copies, and the text formats for instances and solutions.

#pragma once

#include <algorithm>
#include <cstdint>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace cutsat {

// Raised for malformed or invalid instance/solution text. `line()` is the
// 1-based line of the offending input, or 0 when no single line is to blame.
class InputError : public std::runtime_error {
 public:
  InputError(int line, const std::string& what)
      : std::runtime_error(line > 0 ? "line " + std::to_string(line) + ": " + what
                                    : what),
        line_(line) {}
  int line() const { return line_; }

 private:
  int line_;
};

struct ItemType {
  int width = 0;
  int height = 0;
  int demand = 0;

  friend bool operator==(const ItemType&, const ItemType&) = default;
};

struct Instance {
  int sheet_width = 0;
  int sheet_height = 0;
  std::vector<ItemType> types;
  std::string name;

  int64_t sheet_area() const {
    return static_cast<int64_t>(sheet_width) * sheet_height;
  }

  int num_copies() const {
    int n = 0;
    for (const auto& t : types) n += t.demand;
    return n;
  }

  bool fits_unrotated(const ItemType& t) const {
    return t.width <= sheet_width && t.height <= sheet_height;
  }
  bool fits_rotated(const ItemType& t) const {
    return t.height <= sheet_width && t.width <= sheet_height;
  }

  // Geometry and demands only; the name is a label.
  friend bool operator==(const Instance& a, const Instance& b) {
    return a.sheet_width == b.sheet_width && a.sheet_height == b.sheet_height &&
           a.types == b.types;
  }
};

// One demanded unit of an item type. Ordinals run 1..demand.
struct Copy {
  int type_index = 0;
  int ordinal = 1;
  int width = 0;
  int height = 0;

  friend bool operator==(const Copy&, const Copy&) = default;
};

// Sheets are 1-based; (x, y) is the bottom-left corner.
struct Placement {
  int type_index = 0;
  int ordinal = 1;
  int sheet = 1;
  int x = 0;
  int y = 0;
  bool rotated = false;

  friend bool operator==(const Placement&, const Placement&) = default;
};

inline int effective_width(const ItemType& t, bool rotated) {
  return rotated ? t.height : t.width;
}
inline int effective_height(const ItemType& t, bool rotated) {
  return rotated ? t.width : t.height;
}

struct Solution {
  std::vector<Placement> placements;
  int sheets_used = 0;

  friend bool operator==(const Solution&, const Solution&) = default;
};

// Throws InputError if the instance violates an invariant. With rotation
// disabled every type must fit unrotated; with rotation enabled either
// orientation is enough.
inline void validate_instance(const Instance& inst, bool rotation = true) {
  if (inst.sheet_width < 1 || inst.sheet_height < 1)
    throw InputError(0, "sheet dimensions must be positive");
  if (inst.types.empty()) throw InputError(0, "instance has no item types");
  for (size_t t = 0; t < inst.types.size(); ++t) {
    const auto& it = inst.types[t];
    const std::string label = "item type " + std::to_string(t + 1);
    if (it.width < 1 || it.height < 1)
      throw InputError(0, label + ": dimensions must be positive");
    if (it.demand < 1) throw InputError(0, label + ": demand must be positive");
    const bool ok = rotation ? (inst.fits_unrotated(it) || inst.fits_rotated(it))
                             : inst.fits_unrotated(it);
    if (!ok)
      throw InputError(0, label + " does not fit the sheet" +
                              (rotation ? " in any orientation"
                                        : " without rotation"));
  }
}

namespace detail {

// Splits into (line number, non-empty non-comment content) pairs.
inline std::vector<std::pair<int, std::string>> content_lines(std::istream& in) {
  std::vector<std::pair<int, std::string>> out;
  std::string line;
  int no = 0;
  while (std::getline(in, line)) {
    ++no;
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos || line[first] == '#') continue;
    out.emplace_back(no, line);
  }
  return out;
}

inline std::vector<long long> parse_ints(int line_no, const std::string& text,
                                         size_t expected) {
  std::istringstream ss(text);
  std::vector<long long> vals;
  std::string tok;
  while (ss >> tok) {
    size_t pos = 0;
    long long v = 0;
    try {
      v = std::stoll(tok, &pos);
    } catch (const std::exception&) {
      throw InputError(line_no, "expected integer, got '" + tok + "'");
    }
    if (pos != tok.size())
      throw InputError(line_no, "expected integer, got '" + tok + "'");
    if (v > (1LL << 30) || v < -(1LL << 30))
      throw InputError(line_no, "integer out of range: " + tok);
    vals.push_back(v);
  }
  if (vals.size() != expected)
    throw InputError(line_no, "expected " + std::to_string(expected) +
                                  " integers, got " + std::to_string(vals.size()));
  return vals;
}

}  // namespace detail

// Canonical format: "W H", then the type count n, then n lines "w h d".
// Lines starting with '#' and blank lines are ignored.
inline Instance parse_instance(std::istream& in, bool rotation = true,
                               std::string name = {}) {
  const auto lines = detail::content_lines(in);
  if (lines.empty()) throw InputError(0, "empty instance");
  Instance inst;
  inst.name = std::move(name);

  const auto head = detail::parse_ints(lines[0].first, lines[0].second, 2);
  if (head[0] < 1 || head[1] < 1)
    throw InputError(lines[0].first, "sheet dimensions must be positive");
  inst.sheet_width = static_cast<int>(head[0]);
  inst.sheet_height = static_cast<int>(head[1]);

  if (lines.size() < 2) throw InputError(0, "missing item type count");
  const auto count = detail::parse_ints(lines[1].first, lines[1].second, 1)[0];
  if (count < 1) throw InputError(lines[1].first, "type count must be positive");
  if (lines.size() != static_cast<size_t>(count) + 2)
    throw InputError(lines.size() < static_cast<size_t>(count) + 2
                         ? 0
                         : lines[static_cast<size_t>(count) + 2].first,
                     "expected " + std::to_string(count) + " item type lines, got " +
                         std::to_string(lines.size() - 2));

  for (size_t i = 2; i < lines.size(); ++i) {
    const int no = lines[i].first;
    const auto v = detail::parse_ints(no, lines[i].second, 3);
    if (v[0] < 1 || v[1] < 1) throw InputError(no, "item dimensions must be positive");
    if (v[2] < 1) throw InputError(no, "demand must be positive");
    ItemType t{static_cast<int>(v[0]), static_cast<int>(v[1]), static_cast<int>(v[2])};
    const bool ok = rotation ? (inst.fits_unrotated(t) || inst.fits_rotated(t))
                             : inst.fits_unrotated(t);
    if (!ok)
      throw InputError(no, rotation ? "item fits the sheet in no orientation"
                                    : "item does not fit the sheet unrotated");
    inst.types.push_back(t);
  }
  return inst;
}

inline Instance parse_instance(std::string_view text, bool rotation = true,
                               std::string name = {}) {
  std::istringstream in{std::string(text)};
  return parse_instance(in, rotation, std::move(name));
}

inline void write_instance(std::ostream& out, const Instance& inst) {
  out << inst.sheet_width << ' ' << inst.sheet_height << '\n'
      << inst.types.size() << '\n';
  for (const auto& t : inst.types)
    out << t.width << ' ' << t.height << ' ' << t.demand << '\n';
}

inline std::string to_string(const Instance& inst) {
  std::ostringstream ss;
  write_instance(ss, inst);
  return ss.str();
}

// Type-major, ascending ordinal. Encoder variable numbering and same-type
// ordering both rely on this order.
inline std::vector<Copy> expand_demands(const Instance& inst) {
  std::vector<Copy> copies;
  copies.reserve(static_cast<size_t>(inst.num_copies()));
  for (size_t t = 0; t < inst.types.size(); ++t) {
    const auto& it = inst.types[t];
    for (int i = 1; i <= it.demand; ++i)
      copies.push_back({static_cast<int>(t), i, it.width, it.height});
  }
  return copies;
}

// Relabels the used sheets to 1..count preserving their relative order.
inline Solution compact_sheets(Solution s) {
  std::map<int, int> relabel;
  for (const auto& p : s.placements) relabel[p.sheet] = 0;
  int next = 0;
  for (auto& [from, to] : relabel) to = ++next;
  for (auto& p : s.placements) p.sheet = relabel[p.sheet];
  s.sheets_used = next;
  return s;
}

// "k N" then one line per placement: type copy sheet x y rotated, with
// 1-based type, copy and sheet numbers.
inline void write_solution(std::ostream& out, const Solution& s) {
  out << s.sheets_used << ' ' << s.placements.size() << '\n';
  for (const auto& p : s.placements)
    out << (p.type_index + 1) << ' ' << p.ordinal << ' ' << p.sheet << ' ' << p.x
        << ' ' << p.y << ' ' << (p.rotated ? 1 : 0) << '\n';
}

inline std::string to_string(const Solution& s) {
  std::ostringstream ss;
  write_solution(ss, s);
  return ss.str();
}

// Structural checks only: indices in range and every placement inside the
// sheet. Demand coverage and overlap are left to verify_solution.
inline Solution read_solution(std::istream& in, const Instance& inst) {
  const auto lines = detail::content_lines(in);
  if (lines.empty()) throw InputError(0, "empty solution");
  const auto head = detail::parse_ints(lines[0].first, lines[0].second, 2);
  if (head[0] < 1) throw InputError(lines[0].first, "sheet count must be positive");
  if (head[1] < 1) throw InputError(lines[0].first, "placement count must be positive");
  if (lines.size() != static_cast<size_t>(head[1]) + 1)
    throw InputError(0, "header announces " + std::to_string(head[1]) +
                            " placements, found " + std::to_string(lines.size() - 1));
  Solution s;
  s.sheets_used = static_cast<int>(head[0]);
  for (size_t i = 1; i < lines.size(); ++i) {
    const int no = lines[i].first;
    const auto v = detail::parse_ints(no, lines[i].second, 6);
    if (v[0] < 1 || v[0] > static_cast<long long>(inst.types.size()))
      throw InputError(no, "type index out of range");
    const auto& t = inst.types[static_cast<size_t>(v[0] - 1)];
    if (v[1] < 1 || v[1] > t.demand) throw InputError(no, "copy ordinal out of range");
    if (v[2] < 1) throw InputError(no, "sheet index must be positive");
    if (v[3] < 0 || v[4] < 0) throw InputError(no, "coordinates must be non-negative");
    if (v[5] != 0 && v[5] != 1) throw InputError(no, "rotated flag must be 0 or 1");
    Placement p{static_cast<int>(v[0] - 1), static_cast<int>(v[1]), static_cast<int>(v[2]),
                static_cast<int>(v[3]),     static_cast<int>(v[4]), v[5] == 1};
    if (p.x + effective_width(t, p.rotated) > inst.sheet_width)
      throw InputError(no, "placement exceeds sheet width");
    if (p.y + effective_height(t, p.rotated) > inst.sheet_height)
      throw InputError(no, "placement exceeds sheet height");
    s.placements.push_back(p);
  }
  return s;
}

inline Solution read_solution(std::string_view text, const Instance& inst) {
  std::istringstream in{std::string(text)};
  return read_solution(in, inst);
}

}  // namespace cutsat
