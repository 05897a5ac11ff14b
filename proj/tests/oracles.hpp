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

// Reference values computed without the library: photon-number series of the
// operated two-mode squeezed vacuum and plain central statistics.

#include <array>
#include <cmath>
#include <vector>

namespace oracle {

struct Cell {
    int ns;
    int ni;
    double p;
};

/// P(n, n) of the two-mode squeezed vacuum.
inline double tmss_probability(double s, int n) {
    const double th = std::tanh(s);
    const double ch = std::cosh(s);
    return std::pow(th, 2 * n) / (ch * ch);
}

/// Joint photon-number distribution of (t a + r a†)|TMSS(s)> on the signal
/// arm, t^2 = 1 - r^2. The image of |n, n> is t√n |n-1, n> + r√(n+1) |n+1, n>;
/// the two branches never overlap, so probabilities add.
inline std::vector<Cell> coherent_pnd(double s, double r, int n_max = 400) {
    const double t2 = 1.0 - r * r;
    std::vector<Cell> cells;
    double total = 0.0;
    for (int n = 0; n <= n_max; ++n) {
        const double c2 = tmss_probability(s, n);
        if (c2 < 1e-300) {
            break;
        }
        if (n > 0 && t2 > 0.0) {
            cells.push_back({n - 1, n, t2 * n * c2});
            total += t2 * n * c2;
        }
        if (r != 0.0) {
            cells.push_back({n + 1, n, r * r * (n + 1) * c2});
            total += r * r * (n + 1) * c2;
        }
    }
    for (auto& c : cells) {
        c.p /= total;
    }
    return cells;
}

inline std::vector<Cell> tmss_pnd(double s, int n_max = 400) {
    std::vector<Cell> cells;
    for (int n = 0; n <= n_max; ++n) {
        const double p = tmss_probability(s, n);
        if (p < 1e-300) {
            break;
        }
        cells.push_back({n, n, p});
    }
    return cells;
}

/// {m10, m01, m20, m02, m11, m21, m12, m22}.
inline std::array<double, 8> raw_moments(const std::vector<Cell>& cells) {
    std::array<double, 8> m{};
    for (const auto& c : cells) {
        const double x = c.ns;
        const double y = c.ni;
        m[0] += c.p * x;
        m[1] += c.p * y;
        m[2] += c.p * x * x;
        m[3] += c.p * y * y;
        m[4] += c.p * x * y;
        m[5] += c.p * x * x * y;
        m[6] += c.p * x * y * y;
        m[7] += c.p * x * x * y * y;
    }
    return m;
}

/// |Cov| / sqrt(E[(X-μx)^2 (Y-μy)^2] + Var X Var Y - Cov^2), from central
/// sums rather than raw moments.
inline double snr(const std::vector<Cell>& cells) {
    double mx = 0.0;
    double my = 0.0;
    for (const auto& c : cells) {
        mx += c.p * c.ns;
        my += c.p * c.ni;
    }
    double cov = 0.0;
    double vx = 0.0;
    double vy = 0.0;
    double q = 0.0;
    for (const auto& c : cells) {
        const double dx = c.ns - mx;
        const double dy = c.ni - my;
        cov += c.p * dx * dy;
        vx += c.p * dx * dx;
        vy += c.p * dy * dy;
        q += c.p * dx * dx * dy * dy;
    }
    return std::abs(cov) / std::sqrt(q + vx * vy - cov * cov);
}

inline double coherent_snr(double s, double r) { return snr(coherent_pnd(s, r)); }

/// Mean photon number of one TMSS arm.
inline double tmss_mean(double s) { return std::sinh(s) * std::sinh(s); }

}  // namespace oracle
