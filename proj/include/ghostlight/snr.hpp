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
#include <optional>
#include <string>

#include "ghostlight/fock.hpp"
#include "ghostlight/moments.hpp"

namespace ghostlight {

enum class SnrModelTag { shared_bucket_difference, custom };

/**
 * How a MomentSet is reduced to a ghost-imaging SNR.
 *
 * The default, shared_bucket_difference, uses the per-frame statistic
 *   Δ = (N_s − <N_s>)(N_i^in − N_i^out),
 * where N_i^out is an independent draw from the idler marginal (the T = 0
 * pixel sees the same bucket value). Then E[Δ] = C and
 * Var[Δ] = Q + Vs·Vi − C^2, so the per-frame SNR is |C| / sqrt(Q + Vs·Vi − C^2).
 *
 * `custom` evaluates a user-supplied per-frame reduction. Either way the
 * reported value is multiplied by sqrt(frames).
 */
struct SnrModel {
    SnrModelTag tag = SnrModelTag::shared_bucket_difference;
    int frames = 1;
    std::function<double(const MomentSet&)> custom;

    std::string name() const;
    void validate() const;
};

struct SnrEstimate {
    double value = 0.0;
    SnrModel model;
    std::optional<double> mc_stderr;
};

/// Central statistics of a MomentSet.
struct CentralStats {
    double covariance = 0.0;  // C = <n_s n_i> − <n_s><n_i>
    double var_signal = 0.0;  // Vs
    double var_idler = 0.0;   // Vi
    double fourth = 0.0;      // Q = E[(n_s − <n_s>)^2 (n_i − <n_i>)^2]
};

CentralStats central_stats(const MomentSet& m);

/// Throws DegenerateStatistics when the default model's variance vanishes.
SnrEstimate snr_from_moments(const MomentSet& m, const SnrModel& model = {});

/// Per-frame SNR of TMSS(s) from Fock-space moments.
double snr_curve_tmss(double s, int cutoff = kDefaultCutoff);
/// Per-frame SNR of (|1,0> + |0,1>)/√2.
double snr_bell();

}  // namespace ghostlight
