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

// One SVG 1.1 drawing per sheet. Sheet coordinates have the origin at the
// bottom-left corner, so y is flipped on output.

#pragma once

#include <algorithm>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "cutsat/model.hpp"
#include "cutsat/verify.hpp"

namespace cutsat {

class RenderError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

namespace detail {

inline const char* type_color(int type) {
  static const char* palette[] = {"#4e79a7", "#f28e2b", "#e15759", "#76b7b2", "#59a14f",
                                  "#edc948", "#b07aa1", "#ff9da7", "#9c755f", "#bab0ac"};
  return palette[static_cast<size_t>(type) % (sizeof palette / sizeof *palette)];
}

}  // namespace detail

// Throws RenderError if the solution does not verify.
inline std::vector<std::string> render_svg(const Instance& inst, const Solution& sol,
                                           bool rotation_allowed, double max_side_px = 480) {
  const VerifyReport rep = verify_solution(inst, sol, rotation_allowed);
  if (!rep.ok())
    throw RenderError(std::string("refusing to render an invalid solution: ") +
                      to_string(rep.violations.front().kind) + " " +
                      rep.violations.front().detail);

  const double unit = max_side_px / std::max(inst.sheet_width, inst.sheet_height);
  const double margin = 10;
  const double w = inst.sheet_width * unit;
  const double h = inst.sheet_height * unit;

  std::vector<std::string> out;
  for (int sheet = 1; sheet <= sol.sheets_used; ++sheet) {
    std::ostringstream s;
    s << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
      << "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"" << w + 2 * margin
      << "\" height=\"" << h + 2 * margin << "\" viewBox=\"0 0 " << w + 2 * margin << ' '
      << h + 2 * margin << "\">\n"
      << "  <title>" << (inst.name.empty() ? "sheet" : inst.name) << " sheet " << sheet
      << "</title>\n"
      << "  <rect class=\"sheet\" x=\"" << margin << "\" y=\"" << margin << "\" width=\"" << w
      << "\" height=\"" << h << "\" fill=\"none\" stroke=\"black\" stroke-width=\"2\"/>\n";
    for (const auto& p : sol.placements) {
      if (p.sheet != sheet) continue;
      const auto& t = inst.types[static_cast<size_t>(p.type_index)];
      const double pw = effective_width(t, p.rotated) * unit;
      const double ph = effective_height(t, p.rotated) * unit;
      const double px = margin + p.x * unit;
      const double py = margin + h - p.y * unit - ph;
      s << "  <rect class=\"item\" x=\"" << px << "\" y=\"" << py << "\" width=\"" << pw
        << "\" height=\"" << ph << "\" fill=\"" << detail::type_color(p.type_index)
        << "\" stroke=\"black\"/>\n"
        << "  <text x=\"" << px + pw / 2 << "\" y=\"" << py + ph / 2
        << "\" text-anchor=\"middle\" dominant-baseline=\"middle\" font-family=\"sans-serif\" "
           "font-size=\""
        << std::max(8.0, std::min(pw, ph) / 4) << "\">c<tspan baseline-shift=\"sub\" "
        << "font-size=\"70%\">" << p.type_index + 1 << ',' << p.ordinal << "</tspan>"
        << (p.rotated ? " (R)" : "") << "</text>\n";
    }
    s << "</svg>\n";
    out.push_back(s.str());
  }
  return out;
}

}  // namespace cutsat
