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

#include "ghostlight/snr.hpp"

#include <algorithm>
#include <cmath>

#include <fmt/format.h>

#include "ghostlight/errors.hpp"
#include "ghostlight/sources.hpp"

namespace ghostlight {

std::string SnrModel::name() const {
    return tag == SnrModelTag::shared_bucket_difference ? "shared_bucket_difference" : "custom";
}

void SnrModel::validate() const {
    if (frames < 1) {
        throw BadParams(fmt::format("frames must be >= 1, got {}", frames));
    }
    if (tag == SnrModelTag::custom && !custom) {
        throw BadParams("custom SNR model needs a reduction function");
    }
}

CentralStats central_stats(const MomentSet& m) {
    const double a = m.m10;
    const double b = m.m01;
    CentralStats c;
    c.covariance = m.m11 - a * b;
    c.var_signal = m.m20 - a * a;
    c.var_idler = m.m02 - b * b;
    c.fourth = m.m22 - 2.0 * b * m.m21 - 2.0 * a * m.m12 + b * b * m.m20 + a * a * m.m02 + 4.0 * a * b * m.m11 -
               3.0 * a * a * b * b;
    return c;
}

SnrEstimate snr_from_moments(const MomentSet& m, const SnrModel& model) {
    model.validate();
    double per_frame = 0.0;
    if (model.tag == SnrModelTag::custom) {
        per_frame = model.custom(m);
    } else {
        const CentralStats c = central_stats(m);
        const double variance = c.fourth + c.var_signal * c.var_idler - c.covariance * c.covariance;
        const double scale = std::max(c.fourth + c.var_signal * c.var_idler, c.covariance * c.covariance);
        if (!(variance > 1e-12 * scale) || !(variance > 0.0)) {
            throw DegenerateStatistics("contrast estimator has zero variance (deterministic photon numbers)");
        }
        per_frame = std::abs(c.covariance) / std::sqrt(variance);
    }
    if (!std::isfinite(per_frame) || per_frame < 0.0) {
        throw DegenerateStatistics(fmt::format("SNR model '{}' returned {}", model.name(), per_frame));
    }
    return {per_frame * std::sqrt(static_cast<double>(model.frames)), model, std::nullopt};
}

double snr_curve_tmss(double s, int cutoff) { return snr_from_moments(numeric_moments(build_tmss(s, cutoff))).value; }

double snr_bell() { return snr_from_moments(numeric_moments(bell_state(2))).value; }

}  // namespace ghostlight
