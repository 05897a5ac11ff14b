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

#include "ghostlight/moments.hpp"

#include <algorithm>
#include <cmath>

#include <fmt/format.h>

#include "ghostlight/csv.hpp"
#include "ghostlight/errors.hpp"
#include "ghostlight/sources.hpp"

namespace ghostlight {

MomentSet MomentSet::from_array(const std::array<double, 8>& v) {
    return {v[0], v[1], v[2], v[3], v[4], v[5], v[6], v[7]};
}

bool MomentSet::satisfies_invariants(double slack) const {
    const auto v = as_array();
    if (!std::all_of(v.begin(), v.end(), [](double x) { return std::isfinite(x); })) {
        return false;
    }
    return m20 >= m10 * m10 - slack && m02 >= m01 * m01 - slack && m22 >= -slack;
}

MomentSet analytic_moments(double s, double r) {
    const double sh2 = std::sinh(s) * std::sinh(s);
    const double sh4 = sh2 * sh2;
    const double r2 = r * r;
    const double denom = r2 + sh2;
    if (!(denom > 0.0)) {
        throw DegenerateState(fmt::format("closed-form moments undefined at s={}, r={}", s, r));
    }
    const double c2 = std::cosh(2.0 * s);
    const double c4 = std::cosh(4.0 * s);
    const double c6 = std::cosh(6.0 * s);

    MomentSet m;
    m.m10 = ((6.0 * r2 - 4.0) * c2 - 2.0 * r2 + c4 + 3.0) / (4.0 * denom);
    m.m01 = sh2 * (r2 + c2) / denom;
    m.m20 = sh2 * (4.0 * (5.0 * r2 - 3.0) * c2 - 4.0 * r2 + 3.0 * c4 + 9.0) / (4.0 * denom) + m.m10;
    m.m02 = sh4 * (2.0 * r2 + 3.0 * c2 + 1.0) / denom + m.m01;
    m.m11 = sh2 * (3.0 * c2 + 1.0);
    m.m21 = sh2 * ((9.0 - 4.0 * r2) * c2 + 3.0 * (5.0 * r2 - 3.0) * c4 + 5.0 * r2 + 3.0 * c6 - 3.0) / (4.0 * denom) +
            m.m11;
    m.m12 = sh4 * (9.0 * r2 * c2 + 5.0 * r2 + 3.0 * c4 + 1.0) / denom + m.m11;
    m.m22 = 3.0 * sh4 * (4.0 * c2 + 5.0 * c4 + 3.0) + m.m21 + m.m12 - m.m11;
    return m;
}

MomentSet numeric_moments(const FockState& state) {
    const JointPnd pnd = joint_pnd(state);
    std::array<double, 8> v{};
    for (std::size_t k = 0; k < v.size(); ++k) {
        v[k] = moment(pnd, MomentSet::kOrders[k][0], MomentSet::kOrders[k][1]);
    }
    return MomentSet::from_array(v);
}

MomentComparison compare_moments(double s, double r, int cutoff, double threshold) {
    MomentComparison cmp;
    cmp.s = s;
    cmp.r = r;
    cmp.cutoff = cutoff;
    cmp.threshold = threshold;
    cmp.analytic = analytic_moments(s, r);
    cmp.numeric = numeric_moments(build_source(SourceKind::coherent, s, r, cutoff));
    const auto a = cmp.analytic.as_array();
    const auto n = cmp.numeric.as_array();
    for (std::size_t k = 0; k < a.size(); ++k) {
        cmp.abs_dev[k] = std::abs(a[k] - n[k]);
        const double scale = std::max(std::abs(a[k]), std::abs(n[k]));
        cmp.rel_dev[k] = scale > 0.0 ? cmp.abs_dev[k] / scale : 0.0;
        cmp.max_rel_dev = std::max(cmp.max_rel_dev, cmp.rel_dev[k]);
        if (!(cmp.rel_dev[k] <= threshold)) {
            cmp.flagged.emplace_back(MomentSet::kNames[k]);
        }
    }
    return cmp;
}

void write_moments_csv_header(std::ostream& out) { out << "s,r,m10,m01,m20,m02,m11,m21,m12,m22,source\n"; }

void write_moments_csv_row(std::ostream& out, double s, double r, const MomentSet& m, std::string_view source) {
    out << format_double(s) << ',' << format_double(r);
    for (double v : m.as_array()) {
        out << ',' << format_double(v);
    }
    out << ',' << source << '\n';
}

}  // namespace ghostlight
