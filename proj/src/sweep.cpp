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

#include "ghostlight/sweep.hpp"

#include <algorithm>
#include <cmath>

#include <fmt/format.h>

#include "ghostlight/errors.hpp"
#include "ghostlight/moments.hpp"
#include "ghostlight/sources.hpp"

namespace ghostlight {
namespace {

bool ties(double a, double b) { return std::abs(a - b) <= kTieTolerance * std::max(1.0, std::max(a, b)); }


}  // namespace

double snr_coherent(double s, double r, const SnrModel& model) {
    return snr_from_moments(analytic_moments(s, r), model).value;
}

SweepGrid snr_grid(std::span<const double> s_values, std::span<const double> r_values, const SnrModel& model) {
    if (s_values.empty() || r_values.empty()) {
        throw BadParams("sweep axes must be nonempty");
    }
    SweepGrid grid{{s_values.begin(), s_values.end()}, {r_values.begin(), r_values.end()}, {}};
    grid.snr.reserve(s_values.size() * r_values.size());
    for (double s : s_values) {
        for (double r : r_values) {
            grid.snr.push_back(snr_coherent(s, r, model));
        }
    }
    return grid;
}

std::string_view to_string(BoundaryFlag flag) {
    switch (flag) {
        case BoundaryFlag::interior:
            return "interior";
        case BoundaryFlag::r0:
            return "r0";
        case BoundaryFlag::r1:
            return "r1";
    }
    return "?";
}

double golden_section_maximize(const std::function<double(double)>& f, double a, double b, double tol) {
    const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
    double c = b - inv_phi * (b - a);
    double d = a + inv_phi * (b - a);
    double fc = f(c);
    double fd = f(d);
    while (b - a > tol) {
        if (fc >= fd) {
            b = d;
            d = c;
            fd = fc;
            c = b - inv_phi * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + inv_phi * (b - a);
            fd = f(d);
        }
    }
    return fc >= fd ? c : d;
}

ROptimum optimize_r(double s, const SnrModel& model, double tol) {
    if (!(s > 0.0)) {
        throw BadParams(fmt::format("optimize_r needs s > 0, got {}", s));
    }
    if (!(tol >= 1e-8)) {
        throw BadParams(fmt::format("optimize_r tolerance must be >= 1e-8, got {}", tol));
    }
    auto f = [&](double r) { return snr_coherent(s, r, model); };

    const int steps = static_cast<int>(std::lround(1.0 / kCoarseStep));
    int best = 0;
    double best_value = -1.0;
    double v0 = 0.0;
    double v1 = 0.0;
    for (int i = 0; i <= steps; ++i) {
        const double v = f(static_cast<double>(i) / steps);
        if (i == 0) {
            v0 = v;
        }
        if (i == steps) {
            v1 = v;
        }
        if (v > best_value) {
            best_value = v;
            best = i;
        }
    }

    const double lo = static_cast<double>(std::max(best - 1, 0)) / steps;
    const double hi = static_cast<double>(std::min(best + 1, steps)) / steps;
    double r_int = golden_section_maximize(f, lo, hi, tol);
    double v_int = f(r_int);
    if (v_int < best_value) {
        r_int = static_cast<double>(best) / steps;
        v_int = best_value;
    }

    ROptimum out;
    out.s = s;
    out.snr_r0 = v0;
    out.snr_r1 = v1;
    const bool endpoint_tie = ties(v0, v1);
    const bool prefer_r1 = !endpoint_tie && v1 > v0;
    const double v_boundary = prefer_r1 ? v1 : v0;

    const bool interior = r_int > 0.0 && r_int < 1.0 && v_int > v_boundary * (1.0 + 1e-12);
    if (interior) {
        out.r_star = r_int;
        out.snr_star = v_int;
        out.flag = BoundaryFlag::interior;
    } else {
        out.r_star = prefer_r1 ? 1.0 : 0.0;
        out.snr_star = endpoint_tie ? std::max(v0, v1) : v_boundary;
        out.flag = prefer_r1 ? BoundaryFlag::r1 : BoundaryFlag::r0;
        out.boundary_tie = endpoint_tie;
    }
    return out;
}

OptimumBranch optimum_branch(std::span<const double> s_values, const SnrModel& model, double tol) {
    OptimumBranch branch;
    for (double s : s_values) {
        branch.records.push_back(optimize_r(s, model, tol));
    }
    for (std::size_t i = 1; i < branch.records.size(); ++i) {
        const bool was_interior = branch.records[i - 1].flag == BoundaryFlag::interior;
        const bool is_interior = branch.records[i].flag == BoundaryFlag::interior;
        if (was_interior && !is_interior) {
            branch.s_crit = 0.5 * (branch.records[i - 1].s + branch.records[i].s);
            break;
        }
    }
    return branch;
}

Bifurcation locate_bifurcation(double s_lo, double s_hi, const SnrModel& model, double tol_s, double tol_r) {
    if (!(s_lo > 0.0) || !(s_hi > s_lo) || !(tol_s > 0.0)) {
        throw BadParams(fmt::format("bad bifurcation bracket [{}, {}] / tol {}", s_lo, s_hi, tol_s));
    }
    auto interior = [&](double s) { return optimize_r(s, model, tol_r).flag == BoundaryFlag::interior; };
    const bool at_lo = interior(s_lo);
    const bool at_hi = interior(s_hi);
    if (at_lo == at_hi) {
        throw NoTransition(fmt::format("optimum is {} on both ends of [{}, {}]", at_lo ? "interior" : "boundary",
                                       s_lo, s_hi));
    }
    double lo = s_lo;
    double hi = s_hi;
    while (hi - lo > tol_s) {
        const double mid = 0.5 * (lo + hi);
        (interior(mid) == at_lo ? lo : hi) = mid;
    }

    Bifurcation out;
    out.s_crit = 0.5 * (lo + hi);
    const double s_int = at_lo ? lo : hi;
    const double s_bnd = at_lo ? hi : lo;
    out.s_lo = s_int;
    out.s_hi = s_bnd;
    out.below = optimize_r(s_int, model, tol_r);
    out.above = optimize_r(s_bnd, model, tol_r);
    out.r_jump = std::abs(out.above.r_star - out.below.r_star);
    const double r_int = out.below.r_star;
    if (out.above.boundary_tie) {
        out.branch_jump = std::max(r_int, 1.0 - r_int);
    } else {
        out.branch_jump = out.r_jump;
    }
    return out;
}

std::vector<double> linear_axis(double lo, double hi, int points) {
    if (points < 1 || !(hi >= lo)) {
        throw BadParams(fmt::format("bad linear axis [{}, {}] x {}", lo, hi, points));
    }
    if (points == 1) {
        return {lo};
    }
    std::vector<double> axis;
    for (int i = 0; i < points; ++i) {
        axis.push_back(i == points - 1 ? hi : lo + (hi - lo) * i / (points - 1));
    }
    return axis;
}

std::vector<double> log_axis(double lo, double hi, int points) {
    if (!(lo > 0.0) || !(hi >= lo) || points < 1) {
        throw BadParams(fmt::format("bad log axis [{}, {}] x {}", lo, hi, points));
    }
    std::vector<double> axis;
    for (double x : linear_axis(std::log(lo), std::log(hi), points)) {
        axis.push_back(std::exp(x));
    }
    axis.front() = lo;
    axis.back() = hi;
    return axis;
}

std::vector<double> s_axis(double lo, double hi, int points) {
    constexpr double kSplit = 0.1;
    if (!(lo > 0.0) || !(hi > lo) || points < 2) {
        throw BadParams(fmt::format("bad s axis [{}, {}] x {}", lo, hi, points));
    }
    if (hi <= kSplit) {
        return log_axis(lo, hi, points);
    }
    if (lo >= kSplit) {
        return linear_axis(lo, hi, points);
    }
    const int n_log = points / 2;
    std::vector<double> axis = log_axis(lo, kSplit, n_log + 1);
    axis.pop_back();
    for (double s : linear_axis(kSplit, hi, points - n_log)) {
        axis.push_back(s);
    }
    return axis;
}

Figure parse_figure(std::string_view name) {
    if (name == "2a" || name == "fig2a") return Figure::fig2a;
    if (name == "2b" || name == "fig2b") return Figure::fig2b;
    if (name == "3" || name == "fig3") return Figure::fig3;
    throw ParseError(fmt::format("unknown figure '{}' (expected 2a, 2b or 3)", name));
}

FigureOptions FigureOptions::defaults(Figure figure) {
    FigureOptions o;
    switch (figure) {
        case Figure::fig2a:
            o.r_values = linear_axis(0.0, 1.0, 1001);
            break;
        case Figure::fig2b:
            o.s_values = s_axis(0.01, 0.75, 100);
            o.r_values = linear_axis(0.0, 1.0, 201);
            break;
        case Figure::fig3:
            o.s_values = s_axis(0.01, 0.75, 120);
            break;
    }
    return o;
}

std::map<std::string, CsvTable> figure_data(Figure figure, const FigureOptions& options) {
    std::map<std::string, CsvTable> out;
    switch (figure) {
        case Figure::fig2a: {
            CsvTable t{{"s", "r", "snr", "curve_tag"}, {}};
            for (double s : {0.01, 0.35}) {
                const double add = snr_coherent(s, 1.0, options.model);
                for (double r : options.r_values) {
                    t.add_row({s, r, snr_coherent(s, r, options.model), std::string("coherent")});
                }
                for (double r : options.r_values) {
                    t.add_row({s, r, add, std::string("add")});
                }
            }
            out.emplace("fig2a", std::move(t));
            break;
        }
        case Figure::fig2b: {
            const SweepGrid grid = snr_grid(options.s_values, options.r_values, options.model);
            CsvTable t{{"s", "r", "snr"}, {}};
            for (std::size_t i = 0; i < grid.s_values.size(); ++i) {
                for (std::size_t j = 0; j < grid.r_values.size(); ++j) {
                    t.add_row({grid.s_values[i], grid.r_values[j], grid.at(i, j)});
                }
            }
            CsvTable ridge{{"s", "r_star", "snr_star", "boundary_flag"}, {}};
            for (const ROptimum& o : optimum_branch(options.s_values, options.model, options.tol).records) {
                ridge.add_row({o.s, o.r_star, o.snr_star, std::string(to_string(o.flag))});
            }
            out.emplace("fig2b", std::move(t));
            out.emplace("ridge", std::move(ridge));
            break;
        }
        case Figure::fig3: {
            CsvTable t{{"s", "snr_tmss", "snr_sub", "snr_add", "snr_opt", "r_star"}, {}};
            for (double s : options.s_values) {
                const double tmss = snr_from_moments(numeric_moments(build_tmss(s, options.cutoff)), options.model).value;
                const double sub = snr_coherent(s, 0.0, options.model);
                const double add = snr_coherent(s, 1.0, options.model);
                const ROptimum opt = optimize_r(s, options.model, options.tol);
                t.add_row({s, tmss, sub, add, opt.snr_star, opt.r_star});
            }
            out.emplace("fig3", std::move(t));
            break;
        }
    }
    return out;
}

}  // namespace ghostlight
