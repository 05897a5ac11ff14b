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

#include <cmath>
#include <set>

#include <gtest/gtest.h>

#include "ghostlight/errors.hpp"
#include "ghostlight/ghost_imaging.hpp"
#include "ghostlight/moments.hpp"
#include "ghostlight/snr.hpp"
#include "ghostlight/sources.hpp"

namespace gl = ghostlight;

TEST(Mask, ParseAndValidate) {
    const auto mask = gl::ObjectMask::parse("0011");
    EXPECT_EQ(mask.size(), 4u);
    EXPECT_FALSE(mask.inside(0));
    EXPECT_TRUE(mask.inside(3));
    EXPECT_EQ(mask.str(), "0011");
    EXPECT_THROW(gl::ObjectMask::parse("1111"), gl::BadParams);
    EXPECT_THROW(gl::ObjectMask::parse("1"), gl::ParseError);
    EXPECT_THROW(gl::ObjectMask::parse("01x"), gl::ParseError);
}

TEST(Rng, CounterBasedAndReproducible) {
    gl::RngStream a(7, 3);
    const gl::RngStream b(7, 3);
    for (std::uint64_t k = 0; k < 100; ++k) {
        const double u = a.next();
        EXPECT_EQ(u, b.at(k));
        EXPECT_GE(u, 0.0);
        EXPECT_LT(u, 1.0);
    }
    EXPECT_EQ(a.counter(), 100u);
    EXPECT_NE(gl::RngStream(7, 4).at(0), b.at(0));
    EXPECT_NE(gl::RngStream(8, 3).at(0), b.at(0));
}

TEST(Rng, RoughlyUniform) {
    const gl::RngStream rng(1, 0);
    double sum = 0.0;
    double sum_sq = 0.0;
    const int n = 200000;
    for (int k = 0; k < n; ++k) {
        const double u = rng.at(static_cast<std::uint64_t>(k));
        sum += u;
        sum_sq += u * u;
    }
    EXPECT_NEAR(sum / n, 0.5, 0.005);
    EXPECT_NEAR(sum_sq / n - (sum / n) * (sum / n), 1.0 / 12.0, 0.002);
}

TEST(Sampler, OnlyProducesSupportedCells) {
    const auto source = gl::build_source(gl::SourceKind::coherent, 0.35, 0.5);
    const gl::PndSampler sampler(gl::joint_pnd(source));
    gl::RngStream rng(3, 0);
    for (int k = 0; k < 10000; ++k) {
        const auto [ns, ni] = gl::sample_frame(sampler, rng);
        EXPECT_EQ(std::abs(ns - ni), 1);
    }
    EXPECT_EQ(sampler.sample(0.0), std::make_pair(0, 1));
}

TEST(Sampler, BellStateMarginals) {
    const gl::PndSampler sampler(gl::joint_pnd(gl::bell_state(2)));
    EXPECT_EQ(sampler.sample(0.25), std::make_pair(0, 1));
    EXPECT_EQ(sampler.sample(0.75), std::make_pair(1, 0));
    EXPECT_EQ(sampler.sample_idler(0.25), 0);
    EXPECT_EQ(sampler.sample_idler(0.75), 1);
}

TEST(EmpiricalMoments, WithinFiveStandardErrors) {
    const auto source = gl::build_source(gl::SourceKind::coherent, 0.35, 0.4);
    const auto exact = gl::numeric_moments(source).as_array();
    const auto est = gl::empirical_moments(source, 200000, 11);
    const auto mean = est.mean.as_array();
    for (std::size_t k = 0; k < 8; ++k) {
        EXPECT_LT(std::abs(mean[k] - exact[k]), 5.0 * est.stderr_of_mean[k]) << gl::MomentSet::kNames[k];
    }
}

TEST(GhostImaging, RecoversMask) {
    const auto source = gl::build_tmss(0.35);
    const auto mask = gl::ObjectMask::parse("0110");
    const auto image = gl::run_ghost_imaging(source, mask, 200000, 5);
    ASSERT_EQ(image.covariance.size(), 4u);
    const double expected = 0.14386230817414253;
    for (std::size_t j = 0; j < 4; ++j) {
        if (mask.inside(j)) {
            EXPECT_NEAR(image.covariance[j], expected, 0.1 * expected);
        } else {
            EXPECT_NEAR(image.covariance[j], 0.0, 0.1 * expected);
        }
    }
    EXPECT_GT(image.contrast(), 0.5 * expected);
}

TEST(GhostImaging, DeterministicForSeed) {
    const auto source = gl::build_tmss(0.35);
    const auto mask = gl::ObjectMask::parse("0011");
    const auto a = gl::run_ghost_imaging(source, mask, 5000, 9).table().str();
    const auto b = gl::run_ghost_imaging(source, mask, 5000, 9).table().str();
    const auto c = gl::run_ghost_imaging(source, mask, 5000, 10).table().str();
    EXPECT_EQ(a, b);
    EXPECT_NE(a, c);
    EXPECT_EQ(a.substr(0, a.find('\n')), "pixel_index,inside_flag,covariance_estimate");
}

TEST(GhostImaging, RejectsBadInput) {
    const auto mask = gl::ObjectMask::parse("01");
    EXPECT_THROW(gl::run_ghost_imaging(gl::build_tmss(0.3), mask, 10, 1), gl::BadParams);
    EXPECT_THROW(gl::run_ghost_imaging(gl::FockState(2, 3), mask, 1000, 1), gl::BadParams);
}

TEST(EmpiricalSnr, MatchesFormulaForSubtracted) {
    const auto source = gl::build_source(gl::SourceKind::subtract, 0.2);
    const auto est = gl::empirical_snr(source, 20000, 3, 30);
    ASSERT_TRUE(est.mc_stderr.has_value());
    const double exact = gl::snr_from_moments(gl::numeric_moments(source)).value;
    EXPECT_LT(std::abs(est.value - exact), 4.0 * *est.mc_stderr);
}

TEST(EmpiricalSnr, NeedsReplicas) {
    EXPECT_THROW(gl::empirical_snr(gl::build_tmss(0.3), 1000, 1, 10), gl::BadParams);
}

TEST(EmpiricalSnr, FixedPhotonNumbersAreDegenerate) {
    EXPECT_THROW(gl::empirical_snr(gl::FockState::basis({1, 1}, 2), 1000, 1, 30), gl::DegenerateStatistics);
}
