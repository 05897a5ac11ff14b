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

#include <complex>
#include <cstddef>
#include <initializer_list>
#include <map>
#include <span>
#include <vector>

#include "json.hpp"

namespace ghostlight {

using Complex = std::complex<double>;

inline constexpr int kDefaultCutoff = 40;
inline constexpr int kDefaultBuffer = 10;
inline constexpr double kDefaultLeakTolerance = 1e-10;
inline constexpr int kMaxModes = 4;

/// Truncation settings shared by every operation that can push amplitude
/// past the cutoff.
struct TruncationConfig {
    int buffer = kDefaultBuffer;
    double leak_tolerance = kDefaultLeakTolerance;
};

/**
 * Dense amplitude grid over the truncated Fock basis |n_0, ..., n_{M-1}>.
 *
 * Photon numbers run 0..cutoff in every mode. Amplitudes are stored
 * row-major with mode 0 most significant. `leaked_norm` accumulates the
 * squared amplitude discarded by truncation during the operations that
 * produced this state.
 *
 * One- to four-mode states are supported; most of the library works on the
 * two-mode (signal, idler) case, the four-mode case exists for the heralding
 * circuit.
 */
class FockState {
  public:
    /// The zero vector on `mode_count` modes.
    FockState(int mode_count, int cutoff);

    static FockState basis(std::initializer_list<int> photons, int cutoff);
    static FockState basis(std::span<const int> photons, int cutoff);

    int mode_count() const { return mode_count_; }
    int cutoff() const { return cutoff_; }
    /// Per-mode extent, cutoff + 1.
    int extent() const { return cutoff_ + 1; }
    std::size_t size() const { return amplitudes_.size(); }
    std::size_t stride(int mode) const;

    std::span<const Complex> amplitudes() const { return amplitudes_; }
    std::span<Complex> amplitudes() { return amplitudes_; }

    std::size_t index_of(std::span<const int> photons) const;
    std::vector<int> photons_at(std::size_t index) const;
    /// Photon number of `mode` in the basis state at flat `index`.
    int photon_in_mode(std::size_t index, int mode) const;

    Complex amplitude(std::initializer_list<int> photons) const;
    void set_amplitude(std::initializer_list<int> photons, Complex value);

    double leaked_norm() const { return leaked_norm_; }
    void add_leak(double mass);

    double norm_sq() const;
    /// True when the squared norm is 1 within 1e-12.
    bool is_normalized() const;
    /// True when every amplitude is exactly zero.
    bool is_null() const;

  private:
    int mode_count_;
    int cutoff_;
    std::vector<Complex> amplitudes_;
    double leaked_norm_ = 0.0;
};

FockState vacuum(int mode_count, int cutoff);

/// â on `mode`; unnormalized, norm^2 equals <n_mode> of the input.
FockState annihilate(const FockState& state, int mode);

/// â† on `mode`; unnormalized. Amplitude pushed past the cutoff is recorded
/// in leaked_norm; throws TruncationOverflow above `leak_tolerance`.
FockState create(const FockState& state, int mode, double leak_tolerance = kDefaultLeakTolerance);

/**
 * exp(s e^{iφ} â†ĉ† − s e^{−iφ} âĉ) on modes (mode_a, mode_c).
 *
 * The generator conserves n_a − n_c, so the exponential is taken blockwise on
 * the buffered cutoff (cutoff + buffer) and re-truncated; the discarded mass
 * goes to leaked_norm.
 */
FockState apply_two_mode_squeezer(const FockState& state, int mode_a, int mode_c, double s, double phase = 0.0,
                                  const TruncationConfig& config = {});

/**
 * Beam splitter on modes (mode_b, mode_c).
 *
 * Convention, used everywhere in the library: the creation operators map as
 *   b† -> t b† − r* c†,   c† -> t* c† + r b†,
 * i.e. the annihilation-operator substitutions b -> t* b − r c, c -> t c + r* b.
 * A single photon in mode_b on a 50:50 splitter becomes (|1,0> − |0,1>)/√2.
 *
 * Requires |t|^2 + |r|^2 = 1 within 1e-12 (BadParams otherwise). Each
 * fixed-total-photon block is transformed exactly; only outputs landing past
 * the cutoff in either mode leak.
 */
FockState apply_beam_splitter(const FockState& state, int mode_b, int mode_c, Complex t, Complex r,
                              double leak_tolerance = kDefaultLeakTolerance);

/// Result of conditioning on a photon-count pattern. `null` marks a
/// zero-probability outcome, in which case `state` is the zero vector.
struct Projection {
    FockState state;
    double probability = 0.0;
    bool null = false;
};

/// Probabilities at or below this are treated as an impossible herald.
inline constexpr double kNullProbability = 1e-24;

/// Slices `state` at the given photon counts. The returned state lives on the
/// remaining modes (original order) and is normalized unless null.
Projection project_photon_pattern(const FockState& state, const std::map<int, int>& pattern);

double norm_sq(const FockState& state);
/// Throws NullStateError on the zero vector.
FockState normalize(const FockState& state);
Complex inner_product(const FockState& bra, const FockState& ket);
/// |<a|b>|^2 for normalized states of identical shape.
double fidelity(const FockState& a, const FockState& b);

/// Multiplies by a global phase so the first nonzero amplitude is real positive.
FockState canonicalize_phase(const FockState& state);

/// Re-expresses the state with a different cutoff. Shrinking moves the
/// dropped mass into leaked_norm.
FockState with_cutoff(const FockState& state, int cutoff);

/// |a> ⊗ |b>, both at the same cutoff.
FockState tensor_product(const FockState& a, const FockState& b);

/// Joint photon-number distribution of a two-mode state.
struct JointPnd {
    int cutoff = 0;
    std::vector<double> probabilities;  // (cutoff+1)^2, row-major in (n_s, n_i)

    int extent() const { return cutoff + 1; }
    double at(int n_s, int n_i) const { return probabilities[static_cast<std::size_t>(n_s) * extent() + n_i]; }
};

JointPnd joint_pnd(const FockState& state);

/// <n_s^p n_i^q> of a two-mode state, via its joint photon-number distribution.
double moment(const FockState& state, int p, int q);
double moment(const JointPnd& pnd, int p, int q);

/// <n_mode> for any mode count.
double mean_photon_number(const FockState& state, int mode);

nlohmann::json to_json(const FockState& state);
FockState state_from_json(const nlohmann::json& json);

}  // namespace ghostlight
