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
#include <cstdint>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "ghostlight/csv.hpp"
#include "ghostlight/fock.hpp"
#include "ghostlight/moments.hpp"
#include "ghostlight/snr.hpp"

namespace ghostlight {

/// Binary transmission object: true = inside the profile (T = 1).
class ObjectMask {
  public:
    explicit ObjectMask(std::vector<bool> inside);
    /// "0011" -> [out, out, in, in].
    static ObjectMask parse(std::string_view pattern);

    std::size_t size() const { return inside_.size(); }
    bool inside(std::size_t pixel) const { return inside_[pixel]; }
    const std::vector<bool>& pixels() const { return inside_; }
    std::string str() const;

  private:
    std::vector<bool> inside_;
};

/**
 * Counter-based uniform stream. Draw k of stream (seed, id) is a SplitMix64
 * hash of the stream key advanced k steps, so any (seed, stream, counter)
 * triple is reproducible without replaying earlier draws.
 */
class RngStream {
  public:
    RngStream(std::uint64_t seed, std::uint64_t stream);

    /// Uniform in [0, 1) at an absolute counter.
    double at(std::uint64_t counter) const;
    /// Uniform in [0, 1) at the current counter, then advances it.
    double next() { return at(counter_++); }
    std::uint64_t counter() const { return counter_; }

  private:
    std::uint64_t key_;
    std::uint64_t counter_ = 0;
};

/// Inverse-CDF sampler over a joint photon-number distribution and its
/// marginals. Zero-probability cells are dropped from the tables.
class PndSampler {
  public:
    explicit PndSampler(const JointPnd& pnd);

    std::pair<int, int> sample(double u) const;
    int sample_signal(double u) const;
    int sample_idler(double u) const;

  private:
    std::vector<double> joint_cdf_;
    std::vector<std::pair<int, int>> joint_cells_;
    std::vector<double> signal_cdf_;
    std::vector<int> signal_values_;
    std::vector<double> idler_cdf_;
    std::vector<int> idler_values_;
};

/// One correlated (n_s, n_i) draw; consumes one uniform from `rng`.
std::pair<int, int> sample_frame(const PndSampler& sampler, RngStream& rng);

struct GhostImage {
    std::vector<double> covariance;
    std::vector<bool> inside;
    std::int64_t frames = 0;
    std::uint64_t seed = 0;

    /// mean(inside) − mean(outside).
    double contrast() const;
    /// pixel_index, inside_flag, covariance_estimate
    CsvTable table() const;
};

/**
 * Covariance-protocol ghost imaging with the source replicated per pixel.
 *
 * Every pixel owns an independent (signal, idler) replica. Signal photons of
 * inside pixels pass the object and are summed by the bucket detector;
 * outside pixels are blocked, so their CCD reading is an idler-marginal draw.
 * Each pixel value is the sample covariance of its CCD count with the bucket.
 * Pixel j consumes draw f of stream (seed, j) in frame f.
 */
GhostImage run_ghost_imaging(const FockState& source, const ObjectMask& mask, std::int64_t frames,
                             std::uint64_t seed);

/**
 * Monte-Carlo estimate of the per-frame shared-bucket SNR. Each replica draws
 * `frames` correlated pairs plus independent idler-marginal draws and forms
 * |mean(Δ)| / sd(Δ); the result is the mean over replicas with its standard
 * error.
 */
SnrEstimate empirical_snr(const FockState& source, std::int64_t frames, std::uint64_t seed, int replicas);

struct EmpiricalMoments {
    MomentSet mean;
    std::array<double, 8> stderr_of_mean{};
    std::int64_t frames = 0;
};

EmpiricalMoments empirical_moments(const FockState& source, std::int64_t frames, std::uint64_t seed);

}  // namespace ghostlight
