// Copyright 2026 The ghostlight Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <functional>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "ghostlight/csv.hpp"
#include "ghostlight/fock.hpp"
#include "ghostlight/snr.hpp"

namespace ghostlight {

/// Per-frame SNR of (t·â_s + r·â_s†)|TMSS(s)> from the closed-form moments.
double snr_coherent(double s, double r, const SnrModel& model = {});

struct SweepGrid {
    std::vector<double> s_values;
    std::vector<double> r_values;
    std::vector<double> snr;  // row-major: s index major, r index minor

    double at(std::size_t i_s, std::size_t i_r) const { return snr[i_s * r_values.size() + i_r]; }
};

/// Exhaustive evaluation over s × r. The point (0, 0) is degenerate and
/// raises DegenerateState.
SweepGrid snr_grid(std::span<const double> s_values, std::span<const double> r_values, const SnrModel& model = {});

enum class BoundaryFlag { interior, r0, r1 };
std::string_view to_string(BoundaryFlag flag);

struct ROptimum {
    double s = 0.0;
    double r_star = 0.0;
    double snr_star = 0.0;
    BoundaryFlag flag = BoundaryFlag::interior;
    double snr_r0 = 0.0;
    double snr_r1 = 0.0;
    /// r = 0 and r = 1 agree within the tie tolerance and beat any interior point.
    bool boundary_tie = false;
};

/// Maximizer of a unimodal function on [a, b]; returns the abscissa.
double golden_section_maximize(const std::function<double(double)>& f, double a, double b, double tol);

inline constexpr double kCoarseStep = 1e-3;
inline constexpr double kTieTolerance = 1e-9;

/**
 * Optimal r at fixed s: scan r on a 1e-3 grid, refine the best bracket by
 * golden section to `tol`, and compare with the endpoints r = 0 and r = 1.
 * Endpoint ties (within 1e-9) resolve to r = 0; snr_star is then the larger
 * of the two endpoint values.
 */
ROptimum optimize_r(double s, const SnrModel& model = {}, double tol = 1e-8);

struct OptimumBranch {
    std::vector<ROptimum> records;
    std::optional<double> s_crit;
};

OptimumBranch optimum_branch(std::span<const double> s_values, const SnrModel& model = {}, double tol = 1e-8);

struct Bifurcation {
    double s_crit = 0.0;
    double s_lo = 0.0;  // final bracket, interior side
    double s_hi = 0.0;  // final bracket, boundary side
    ROptimum below;
    ROptimum above;
    /// |r_star(above) − r_star(below)| using the r = 0 tie-break.
    double r_jump = 0.0;
    /// Largest distance from the interior optimum to the set of boundary
    /// optima above s_crit ({0}, {1} or {0, 1} when tied).
    double branch_jump = 0.0;
};

/**
 * Bisection on "optimize_r is interior" between s_lo and s_hi down to a
 * bracket of width tol_s. Throws NoTransition if the predicate agrees at
 * both ends.
 */
Bifurcation locate_bifurcation(double s_lo, double s_hi, const SnrModel& model = {}, double tol_s = 1e-6,
                               double tol_r = 1e-8);

std::vector<double> linear_axis(double lo, double hi, int points);
std::vector<double> log_axis(double lo, double hi, int points);
/// Log-spaced below 0.1, linear from 0.1 upward; `points` split evenly.
std::vector<double> s_axis(double lo, double hi, int points);

enum class Figure { fig2a, fig2b, fig3 };
Figure parse_figure(std::string_view name);

struct FigureOptions {
    std::vector<double> s_values;  // fig2b, fig3
    std::vector<double> r_values;  // fig2a, fig2b
    SnrModel model{};
    double tol = 1e-8;
    int cutoff = kDefaultCutoff;

    static FigureOptions defaults(Figure figure);
};

/**
 * CSV tables behind the figures:
 *   fig2a: {"fig2a": s, r, snr, curve_tag} at s = 0.01 and 0.35, curves
 *          "coherent" and "add";
 *   fig2b: {"fig2b": s, r, snr} and {"ridge": s, r_star, snr_star, boundary_flag};
 *   fig3:  {"fig3": s, snr_tmss, snr_sub, snr_add, snr_opt, r_star}. The
 *          TMSS column comes from Fock-space moments at `cutoff`; the other
 *          curves share the closed-form path, so snr_opt >= snr_sub, snr_add
 *          holds exactly.
 */
std::map<std::string, CsvTable> figure_data(Figure figure, const FigureOptions& options);

}  // namespace ghostlight
