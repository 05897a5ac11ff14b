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

#include "ghostlight/ghost_imaging.hpp"

#include <algorithm>
#include <cmath>

#include <fmt/format.h>

#include "ghostlight/errors.hpp"

namespace ghostlight {
namespace {

constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ULL;

std::uint64_t mix64(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

// Neumaier-compensated running sum.
class CompensatedSum {
  public:
    void add(double x) {
        const double t = sum_ + x;
        if (std::abs(sum_) >= std::abs(x)) {
            carry_ += (sum_ - t) + x;
        } else {
            carry_ += (x - t) + sum_;
        }
        sum_ = t;
    }
    double value() const { return sum_ + carry_; }

  private:
    double sum_ = 0.0;
    double carry_ = 0.0;
};

std::size_t pick(const std::vector<double>& cdf, double u) {
    const double target = u * cdf.back();
    const auto it = std::upper_bound(cdf.begin(), cdf.end(), target);
    return std::min(static_cast<std::size_t>(it - cdf.begin()), cdf.size() - 1);
}

void build_marginal(const std::vector<double>& probs, std::vector<double>& cdf, std::vector<int>& values) {
    double running = 0.0;
    for (std::size_t n = 0; n < probs.size(); ++n) {
        if (probs[n] > 0.0) {
            running += probs[n];
            cdf.push_back(running);
            values.push_back(static_cast<int>(n));
        }
    }
}

void check_source(const FockState& source) {
    if (source.mode_count() != 2 || !source.is_normalized()) {
        throw BadParams("ghost imaging needs a normalized two-mode source");
    }
}

}  // namespace

ObjectMask::ObjectMask(std::vector<bool> inside) : inside_(std::move(inside)) {
    if (inside_.size() < 2) {
        throw BadParams("object mask needs at least two pixels");
    }
    const bool any_in = std::find(inside_.begin(), inside_.end(), true) != inside_.end();
    const bool any_out = std::find(inside_.begin(), inside_.end(), false) != inside_.end();
    if (!any_in || !any_out) {
        throw BadParams("object mask needs at least one inside and one outside pixel");
    }
}

ObjectMask ObjectMask::parse(std::string_view pattern) {
    std::vector<bool> inside;
    for (char c : pattern) {
        if (c != '0' && c != '1') {
            throw ParseError(fmt::format("mask '{}' must contain only 0 and 1", pattern));
        }
        inside.push_back(c == '1');
    }
    if (inside.size() < 2) {
        throw ParseError("mask needs at least two pixels");
    }
    return ObjectMask(std::move(inside));
}

std::string ObjectMask::str() const {
    std::string out;
    for (bool b : inside_) {
        out += b ? '1' : '0';
    }
    return out;
}

RngStream::RngStream(std::uint64_t seed, std::uint64_t stream) : key_(mix64(seed ^ mix64(stream + kGolden))) {}

double RngStream::at(std::uint64_t counter) const {
    return static_cast<double>(mix64(key_ + (counter + 1) * kGolden) >> 11) * 0x1.0p-53;
}

PndSampler::PndSampler(const JointPnd& pnd) {
    const int extent = pnd.extent();
    std::vector<double> signal(static_cast<std::size_t>(extent), 0.0);
    std::vector<double> idler(static_cast<std::size_t>(extent), 0.0);
    double running = 0.0;
    for (int ns = 0; ns < extent; ++ns) {
        for (int ni = 0; ni < extent; ++ni) {
            const double p = pnd.at(ns, ni);
            if (p > 0.0) {
                running += p;
                joint_cdf_.push_back(running);
                joint_cells_.emplace_back(ns, ni);
                signal[static_cast<std::size_t>(ns)] += p;
                idler[static_cast<std::size_t>(ni)] += p;
            }
        }
    }
    if (joint_cdf_.empty()) {
        throw NullStateError("cannot sample from an empty distribution");
    }
    build_marginal(signal, signal_cdf_, signal_values_);
    build_marginal(idler, idler_cdf_, idler_values_);
}

std::pair<int, int> PndSampler::sample(double u) const { return joint_cells_[pick(joint_cdf_, u)]; }

int PndSampler::sample_signal(double u) const { return signal_values_[pick(signal_cdf_, u)]; }

int PndSampler::sample_idler(double u) const { return idler_values_[pick(idler_cdf_, u)]; }

std::pair<int, int> sample_frame(const PndSampler& sampler, RngStream& rng) { return sampler.sample(rng.next()); }

double GhostImage::contrast() const {
    double in = 0.0;
    double out = 0.0;
    int n_in = 0;
    int n_out = 0;
    for (std::size_t j = 0; j < covariance.size(); ++j) {
        if (inside[j]) {
            in += covariance[j];
            ++n_in;
        } else {
            out += covariance[j];
            ++n_out;
        }
    }
    return in / n_in - out / n_out;
}

CsvTable GhostImage::table() const {
    CsvTable t{{"pixel_index", "inside_flag", "covariance_estimate"}, {}};
    for (std::size_t j = 0; j < covariance.size(); ++j) {
        t.add_row({static_cast<std::int64_t>(j), static_cast<std::int64_t>(inside[j] ? 1 : 0), covariance[j]});
    }
    return t;
}

GhostImage run_ghost_imaging(const FockState& source, const ObjectMask& mask, std::int64_t frames,
                             std::uint64_t seed) {
    check_source(source);
    if (frames < 100) {
        throw BadParams(fmt::format("ghost imaging needs at least 100 frames, got {}", frames));
    }
    const PndSampler sampler(joint_pnd(source));
    const std::size_t pixels = mask.size();
    std::vector<RngStream> streams;
    streams.reserve(pixels);
    for (std::size_t j = 0; j < pixels; ++j) {
        streams.emplace_back(seed, j);
    }

    // Counts are integers, so exact integer accumulation makes the result
    // independent of summation order.
    std::int64_t sum_bucket = 0;
    std::vector<std::int64_t> sum_pixel(pixels, 0);
    std::vector<std::int64_t> sum_cross(pixels, 0);
    std::vector<int> reading(pixels, 0);
    for (std::int64_t f = 0; f < frames; ++f) {
        std::int64_t bucket = 0;
        for (std::size_t j = 0; j < pixels; ++j) {
            const double u = streams[j].at(static_cast<std::uint64_t>(f));
            if (mask.inside(j)) {
                const auto [ns, ni] = sampler.sample(u);
                bucket += ns;
                reading[j] = ni;
            } else {
                reading[j] = sampler.sample_idler(u);
            }
        }
        sum_bucket += bucket;
        for (std::size_t j = 0; j < pixels; ++j) {
            sum_pixel[j] += reading[j];
            sum_cross[j] += bucket * reading[j];
        }
    }

    GhostImage image;
    image.inside = mask.pixels();
    image.frames = frames;
    image.seed = seed;
    const long double n = static_cast<long double>(frames);
    for (std::size_t j = 0; j < pixels; ++j) {
        const long double cov =
            (static_cast<long double>(sum_cross[j]) - static_cast<long double>(sum_bucket) * sum_pixel[j] / n) /
            (n - 1.0L);
        image.covariance.push_back(static_cast<double>(cov));
    }
    return image;
}

SnrEstimate empirical_snr(const FockState& source, std::int64_t frames, std::uint64_t seed, int replicas) {
    check_source(source);
    if (replicas < 30) {
        throw BadParams(fmt::format("empirical SNR needs at least 30 replicas, got {}", replicas));
    }
    if (frames < 2) {
        throw BadParams("empirical SNR needs at least 2 frames");
    }
    const PndSampler sampler(joint_pnd(source));

    std::vector<double> per_replica;
    per_replica.reserve(static_cast<std::size_t>(replicas));
    for (int k = 0; k < replicas; ++k) {
        const RngStream inside(seed, 2 * static_cast<std::uint64_t>(k));
        const RngStream outside(seed, 2 * static_cast<std::uint64_t>(k) + 1);
        // a = bucket count, d = N_i^in − N_i^out.
        std::int64_t sa = 0, sd = 0, sad = 0, sd2 = 0, sad2 = 0, sa2d2 = 0;
        for (std::int64_t f = 0; f < frames; ++f) {
            const auto [a, ni] = sampler.sample(inside.at(static_cast<std::uint64_t>(f)));
            const std::int64_t d = ni - sampler.sample_idler(outside.at(static_cast<std::uint64_t>(f)));
            sa += a;
            sd += d;
            sad += a * d;
            sd2 += d * d;
            sad2 += a * d * d;
            sa2d2 += static_cast<std::int64_t>(a) * a * d * d;
        }
        const long double n = static_cast<long double>(frames);
        const long double abar = sa / n;
        const long double mean = sad / n - abar * (sd / n);
        const long double second = sa2d2 / n - 2.0L * abar * (sad2 / n) + abar * abar * (sd2 / n);
        const long double var = second - mean * mean;
        if (!(var > 0.0L)) {
            throw DegenerateStatistics("sampled contrast statistic has zero variance");
        }
        per_replica.push_back(static_cast<double>(std::fabs(mean) / std::sqrt(var)));
    }

    CompensatedSum total;
    for (double v : per_replica) {
        total.add(v);
    }
    const double mean = total.value() / replicas;
    CompensatedSum spread;
    for (double v : per_replica) {
        spread.add((v - mean) * (v - mean));
    }
    const double sd = std::sqrt(spread.value() / (replicas - 1));
    return {mean, SnrModel{}, sd / std::sqrt(static_cast<double>(replicas))};
}

EmpiricalMoments empirical_moments(const FockState& source, std::int64_t frames, std::uint64_t seed) {
    check_source(source);
    if (frames < 2) {
        throw BadParams("empirical moments need at least 2 frames");
    }
    const PndSampler sampler(joint_pnd(source));
    RngStream rng(seed, 0);
    std::array<CompensatedSum, 8> sum{};
    std::array<CompensatedSum, 8> sum_sq{};
    for (std::int64_t f = 0; f < frames; ++f) {
        const auto [ns, ni] = sample_frame(sampler, rng);
        for (std::size_t k = 0; k < 8; ++k) {
            const double x = std::pow(static_cast<double>(ns), MomentSet::kOrders[k][0]) *
                             std::pow(static_cast<double>(ni), MomentSet::kOrders[k][1]);
            sum[k].add(x);
            sum_sq[k].add(x * x);
        }
    }
    EmpiricalMoments out;
    out.frames = frames;
    std::array<double, 8> mean{};
    const double n = static_cast<double>(frames);
    for (std::size_t k = 0; k < 8; ++k) {
        mean[k] = sum[k].value() / n;
        const double var = std::max(0.0, (sum_sq[k].value() - n * mean[k] * mean[k]) / (n - 1.0));
        out.stderr_of_mean[k] = std::sqrt(var / n);
    }
    out.mean = MomentSet::from_array(mean);
    return out;
}

}  // namespace ghostlight
