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

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "ghostlight/fock.hpp"

namespace ghostlight {

/// Parameters of the heralded map t·â_s + r·â_s†, with t^2 + r^2 = 1.
struct CoherentOpParams {
    double t = 1.0;
    double r = 0.0;

    /// t = ±sqrt(1 - r^2). The sign of t never changes photon-number
    /// statistics of operated TMSS (the two branches are orthogonal), so
    /// sweeps use the positive branch.
    static CoherentOpParams from_r(double r, bool negative_t = false);

    /// Throws BadParams unless t^2 + r^2 = 1 within 1e-12.
    void validate() const;
};

FockState build_tmss(double s, int cutoff = kDefaultCutoff);

struct OperatedState {
    FockState state;        // normalized
    double success_weight;  // ||(t·â + r·â†)|ψ>||^2 before normalization
};

/// Applies t·â + r·â† to `mode` (signal = 0) and renormalizes.
/// Throws NullStateError when the image vanishes.
OperatedState apply_coherent_op(const FockState& state, const CoherentOpParams& params, int mode = 0,
                                double leak_tolerance = kDefaultLeakTolerance);

enum class Detector { PD1, PD2 };

/// Heralding circuit settings: parametric amplifier squeezing s0, beam
/// splitters BS1 (t1, r1) and BS2 (t2, r2), and which detector clicks.
struct HeraldSpec {
    double s0 = 0.0;
    double t1 = 1.0;
    double r1 = 0.0;
    double t2 = 1.0;
    double r2 = 0.0;
    Detector detector = Detector::PD1;

    /// Fills r1, r2 as sqrt(1 - t^2).
    static HeraldSpec from_transmissivities(double s0, double t1, double t2, Detector detector);

    void validate() const;
    /// Soft warnings for regimes where the first-order picture degrades.
    std::vector<std::string> warnings() const;
};

/// First-order herald map before normalization:
///   PD1: (-t2·r1/t1, s0·r2),   PD2: (r2·r1/t1, s0·t2).
CoherentOpParams raw_herald_params(const HeraldSpec& spec);

/// Normalized herald map with r >= 0 (and t >= 0 when r = 0).
/// Throws DegenerateHerald if both raw components vanish.
CoherentOpParams herald_params(const HeraldSpec& spec);

struct HeraldOptions {
    /// Per-mode cutoff of the four-mode simulation.
    int cutoff = 12;
    TruncationConfig truncation{};
};

struct HeraldResult {
    FockState conditional_state;  // (signal, idler), normalized, canonical phase
    double success_probability = 0.0;
    /// ||(t_raw·â + r_raw·â†)|ψ>||^2, the first-order prediction.
    double first_order_probability = 0.0;
    CoherentOpParams target_params;
    double fidelity_to_target = 0.0;
    std::vector<std::string> warnings;
};

/**
 * Exact four-mode simulation of the heralding circuit on (signal, idler)
 * input: modes are (signal, idler, b, c) with b and c starting in vacuum.
 *
 *   1. squeezer(s0) on (signal, c)
 *   2. BS1(t1, r1) on (signal, b)
 *   3. BS2(t2, r2) on (b, c)
 *   4. project (b, c) onto (1, 0) for PD1 or (0, 1) for PD2
 *
 * The conditional state is compared with apply_coherent_op(input,
 * herald_params(spec)). Throws NullStateError on an impossible herald.
 */
HeraldResult simulate_herald_circuit(const FockState& input, const HeraldSpec& spec, const HeraldOptions& options = {});

enum class SourceKind { tmss, subtract, add, coherent };

/// Factory over the four compared light sources: subtract = coherent(r=0),
/// add = coherent(r=1); coherent requires `r`.
FockState build_source(SourceKind kind, double s, std::optional<double> r = std::nullopt,
                       int cutoff = kDefaultCutoff);

/**
 * Parsed source descriptor, e.g. "tmss:s=0.35", "coherent:s=0.01,r=0.01",
 * "subtract:s=0.2", "add:s=0.2". Two test-state kinds are also accepted:
 * "bell" ((|1,0>+|0,1>)/√2) and "fock:ns=1,ni=0".
 */
struct SourceDescriptor {
    enum class Kind { tmss, subtract, add, coherent, bell, fock };

    Kind kind = Kind::tmss;
    double s = 0.0;
    std::optional<double> r;
    bool negative_t = false;
    int ns = 0;
    int ni = 0;

    static SourceDescriptor parse(std::string_view text);
    std::string to_string() const;
};

struct BuiltSource {
    FockState state;
    /// Set for heralded sources (subtract, add, coherent).
    std::optional<double> success_weight;
};

BuiltSource build_source(const SourceDescriptor& descriptor, int cutoff = kDefaultCutoff);

FockState bell_state(int cutoff = kDefaultCutoff);

}  // namespace ghostlight
