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

#include <array>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

#include "ghostlight/fock.hpp"

namespace ghostlight {

/// The eight photon-number moments <n_s^p n_i^q>, p, q in {0, 1, 2}, that
/// enter the covariance-protocol SNR.
struct MomentSet {
    double m10 = 0.0;
    double m01 = 0.0;
    double m20 = 0.0;
    double m02 = 0.0;
    double m11 = 0.0;
    double m21 = 0.0;
    double m12 = 0.0;
    double m22 = 0.0;

    static constexpr std::array<std::string_view, 8> kNames{"m10", "m01", "m20", "m02", "m11", "m21", "m12", "m22"};
    static constexpr std::array<std::array<int, 2>, 8> kOrders{
        {{1, 0}, {0, 1}, {2, 0}, {0, 2}, {1, 1}, {2, 1}, {1, 2}, {2, 2}}};

    std::array<double, 8> as_array() const { return {m10, m01, m20, m02, m11, m21, m12, m22}; }
    static MomentSet from_array(const std::array<double, 8>& v);

    /// m20 >= m10^2, m02 >= m01^2, m22 >= 0 (each up to `slack`), all finite.
    bool satisfies_invariants(double slack = 1e-12) const;
};

/**
 * Closed-form moments of (t·â_s + r·â_s†)|TMSS(s)>, evaluated term by term.
 *
 * m22 comes from the published fourth-order relation read as an equation
 * for <n_s^2 n_i^2>:
 *   m22 = 3 sinh^4 s (4 cosh 2s + 5 cosh 4s + 3) + m21 + m12 - m11.
 * Agreement with numeric_moments is enforced by the test suite.
 *
 * Throws DegenerateState when r^2 + sinh^2 s = 0.
 */
MomentSet analytic_moments(double s, double r);

/// Moments of a normalized two-mode state from its joint photon-number
/// distribution.
MomentSet numeric_moments(const FockState& state);

struct MomentComparison {
    double s = 0.0;
    double r = 0.0;
    int cutoff = 0;
    MomentSet analytic;
    MomentSet numeric;
    std::array<double, 8> abs_dev{};
    std::array<double, 8> rel_dev{};
    double max_rel_dev = 0.0;
    /// Names of entries whose relative deviation exceeds `threshold`.
    std::vector<std::string> flagged;
    double threshold = 1e-8;

    bool passed() const { return flagged.empty(); }
};

/// Closed form vs the Fock-space oracle at one (s, r).
MomentComparison compare_moments(double s, double r, int cutoff = kDefaultCutoff, double threshold = 1e-8);

/// CSV header: s,r,m10,m01,m20,m02,m11,m21,m12,m22,source
void write_moments_csv_header(std::ostream& out);
void write_moments_csv_row(std::ostream& out, double s, double r, const MomentSet& m, std::string_view source);

}  // namespace ghostlight
