// Output writers: run tables as CSV, solution fields as legacy VTK, and a
// small self-contained SVG line plot for quick looks at sweeps.
//
// All writers land atomically: content goes to <path>.tmp in full and is
// renamed over the target, so readers never observe a half-written file.
#pragma once

#include <array>
#include <string>
#include <vector>

#include "stokeseg/analysis.hpp"

namespace stokeseg {

// Column order is fixed; every numeric field is printed with %.6e and
// missing values come out as nan.
std::string csv_header();
std::string csv_line(const RunRecord& rec);
void write_csv(const std::string& path, const std::vector<RunRecord>& records);

// Legacy ASCII VTK (version 3.0, UNSTRUCTURED_GRID). Point data: the
// continuous velocity part (VECTORS u_continuous). Cell data: SCALARS
// enrichment_coeff, pressure, weak_div_u.
void write_vtk(const std::string& path, const WeakGradient& wg, const EGField& u,
               const PressureField& p);

struct PlotSeries {
  std::string label;
  std::vector<std::array<double, 2>> points;  // (x, y)
};

// Log-log line plot; points with a nonpositive coordinate on a log axis are
// dropped. Axes are labeled at powers of ten.
void write_svg_plot(const std::string& path, const std::string& title,
                    const std::string& xlabel, const std::string& ylabel,
                    const std::vector<PlotSeries>& series);

}  // namespace stokeseg
