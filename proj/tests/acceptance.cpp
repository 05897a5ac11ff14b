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

// Runs the acceptance criteria end to end and prints one line per criterion.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <algorithm>
#include <functional>
#include <limits>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <unistd.h>

#include <fmt/format.h>

#include "ghostlight/errors.hpp"
#include "ghostlight/fock.hpp"
#include "ghostlight/ghost_imaging.hpp"
#include "ghostlight/moments.hpp"
#include "ghostlight/snr.hpp"
#include "ghostlight/sources.hpp"
#include "ghostlight/sweep.hpp"
#include "oracles.hpp"

namespace gl = ghostlight;
namespace fs = std::filesystem;

namespace {

struct Outcome {
    bool pass = true;
    std::string detail;

    void require(bool ok, const std::string& what) {
        if (!ok) {
            pass = false;
            detail += (detail.empty() ? "" : "; ") + what;
        }
    }
};

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

Outcome ac1_moments() {
    Outcome out;
    const std::vector<double> s_grid{0.01, 0.05, 0.09, 0.2, 0.35, 0.5, 0.75};
    const std::vector<double> r_grid{0.0, 0.01, 0.1, 0.5, 0.9, 1.0};
    double worst = 0.0;
    for (double s : s_grid) {
        const double m11_ref = gl::analytic_moments(s, 0.0).m11;
        for (double r : r_grid) {
            const auto cmp = gl::compare_moments(s, r);
            worst = std::max(worst, cmp.max_rel_dev);
            out.require(cmp.passed(), fmt::format("s={} r={} flagged", s, r));
            out.require(std::abs(cmp.numeric.m11 - m11_ref) <= 1e-8 * m11_ref, fmt::format("m11 varies at r={}", r));
        }
        const auto m0 = gl::analytic_moments(s, 0.0);
        out.require(std::abs(m0.m10 - 2.0 * std::sinh(s) * std::sinh(s)) <= 1e-8 * m0.m10, fmt::format("m10 closed form at s={}", s));
        out.require(std::abs(m0.m01 - std::cosh(2.0 * s)) <= 1e-8 * m0.m01, fmt::format("m01 closed form at s={}", s));
    }
    out.detail = fmt::format("max rel dev {:.3g} over 7x6 grid{}{}", worst, out.detail.empty() ? "" : "; ", out.detail);
    return out;
}

Outcome ac2_herald() {
    Outcome out;
    const int cutoff = 12;
    std::vector<std::pair<std::string, gl::FockState>> inputs{
        {"|0>", gl::vacuum(2, cutoff)},
        {"|1>", gl::FockState::basis({1, 0}, cutoff)},
        {"TMSS(0.1)", gl::build_tmss(0.1, cutoff)},
    };
    double worst = 1.0;
    int null_cases = 0;
    for (double t2 : {0.6, 0.8, 1.0}) {
        for (auto det : {gl::Detector::PD1, gl::Detector::PD2}) {
            const auto spec = gl::HeraldSpec::from_transmissivities(0.05, 0.99, t2, det);
            const auto params = gl::herald_params(spec);
            if (t2 == 1.0) {
                const bool reduces = det == gl::Detector::PD1 ? (params.r == 0.0 && std::abs(params.t) == 1.0)
                                                              : (params.r == 1.0 && params.t == 0.0);
                out.require(reduces, fmt::format("t2=1 {} is not a pure subtraction/addition",
                                                 det == gl::Detector::PD1 ? "PD1" : "PD2"));
            }
            for (const auto& [name, input] : inputs) {
                bool circuit_null = false;
                bool target_null = false;
                try {
                    const auto result = gl::simulate_herald_circuit(input, spec);
                    worst = std::min(worst, result.fidelity_to_target);
                    out.require(result.fidelity_to_target >= 0.995,
                                fmt::format("fidelity {} for t2={} input {}", result.fidelity_to_target, t2, name));
                } catch (const gl::NullStateError&) {
                    circuit_null = true;
                }
                try {
                    gl::apply_coherent_op(input, params);
                } catch (const gl::NullStateError&) {
                    target_null = true;
                }
                if (circuit_null || target_null) {
                    ++null_cases;
                    out.require(circuit_null && target_null, fmt::format("null mismatch t2={} input {}", t2, name));
                }
            }
        }
    }
    out.detail = fmt::format("min fidelity {:.6f} over 18 cases ({} impossible heralds, null on both sides){}{}", worst,
                             null_cases, out.detail.empty() ? "" : "; ", out.detail);
    return out;
}

Outcome ac3_monte_carlo() {
    Outcome out;
    const std::int64_t frames = 1000000;
    const int replicas = 30;
    const std::vector<std::pair<std::string, gl::FockState>> sources{
        {"coherent(0.01,0.01)", gl::build_source(gl::SourceKind::coherent, 0.01, 0.01)},
        {"tmss(0.35)", gl::build_tmss(0.35)},
        {"subtract(0.35)", gl::build_source(gl::SourceKind::subtract, 0.35)},
        {"add(0.35)", gl::build_source(gl::SourceKind::add, 0.35)},
    };
    std::uint64_t seed = 2026;
    for (const auto& [name, state] : sources) {
        const auto est = gl::empirical_snr(state, frames, seed++, replicas);
        const double exact = gl::snr_from_moments(gl::numeric_moments(state)).value;
        const double z = (est.value - exact) / *est.mc_stderr;
        out.detail += fmt::format("{}{} mc={:.5f} formula={:.5f} z={:+.2f}", out.detail.empty() ? "" : "; ", name,
                                  est.value, exact, z);
        if (std::abs(z) > 3.0) {
            out.pass = false;
            out.detail += " (outside 3 stderr)";
        }
    }
    return out;
}

Outcome ac4_weak_squeezing() {
    Outcome out;
    const double s = 0.01;
    const auto o = gl::optimize_r(s);
    out.require(o.flag == gl::BoundaryFlag::interior, "optimum not interior");
    out.require(o.r_star >= 0.005 && o.r_star <= 0.02, "r_star outside [0.005, 0.02]");
    out.require(o.snr_star > o.snr_r0 && o.snr_star > o.snr_r1, "endpoints not beaten");
    const auto state = gl::build_source(gl::SourceKind::coherent, s, o.r_star);
    const double fid = gl::fidelity(state, gl::bell_state(state.cutoff()));
    out.require(fid >= 0.99, "fidelity to Bell state below 0.99");
    out.detail = fmt::format("r_star={:.6f} snr_star={:.6f} snr(r=0)={:.6f} snr(r=1)={:.6f} F_bell={:.6f}{}{}",
                             o.r_star, o.snr_star, o.snr_r0, o.snr_r1, fid, out.detail.empty() ? "" : "; ", out.detail);
    return out;
}

Outcome ac5_bifurcation() {
    Outcome out;
    const auto b = gl::locate_bifurcation(0.01, 0.5);
    out.require(b.s_crit > 0.01 && b.s_crit < 0.5, "s_crit outside (0.01, 0.5)");
    out.require(b.branch_jump > 0.5, "r_star jump not above 0.5");
    double lo_ratio = 1e9;
    double hi_ratio = 0.0;
    for (double s : gl::log_axis(0.01, b.s_crit / 2.0, 25)) {
        const auto o = gl::optimize_r(s);
        const double ratio = o.r_star / s;
        lo_ratio = std::min(lo_ratio, ratio);
        hi_ratio = std::max(hi_ratio, ratio);
        out.require(o.flag == gl::BoundaryFlag::interior && ratio >= 0.5 && ratio <= 2.0,
                    fmt::format("interior law fails at s={}", s));
    }
    out.detail = fmt::format(
        "s_crit={:.6f} (reference value 0.09, soft); r_star {:.4f} -> {{0, 1}} tied={} so jump to farthest branch "
        "{:.4f} (to r=0 alone {:.4f}); r_star/s in [{:.3f}, {:.3f}] below s_crit/2{}{}",
        b.s_crit, b.below.r_star, b.above.boundary_tie ? "yes" : "no", b.branch_jump, b.r_jump, lo_ratio, hi_ratio,
        out.detail.empty() ? "" : "; ", out.detail);
    return out;
}

Outcome ac6_fig3() {
    Outcome out;
    auto options = gl::FigureOptions::defaults(gl::Figure::fig3);
    options.s_values = gl::linear_axis(0.01, 0.75, 75);
    const auto t = gl::figure_data(gl::Figure::fig3, options).at("fig3");
    double prev_step = std::numeric_limits<double>::infinity();
    double plateau = 0.0;
    for (std::size_t i = 0; i < t.rows.size(); ++i) {
        const double tmss = t.number(i, "snr_tmss");
        if (i > 0) {
            const double step = tmss - t.number(i - 1, "snr_tmss");
            out.require(step > 0.0, fmt::format("TMSS not increasing at row {}", i));
            out.require(step < prev_step, fmt::format("TMSS increments not decreasing at row {}", i));
            prev_step = step;
        }
        out.require(t.number(i, "snr_sub") >= tmss, fmt::format("subtract below TMSS at row {}", i));
        out.require(t.number(i, "snr_add") >= tmss, fmt::format("add below TMSS at row {}", i));
        out.require(t.number(i, "snr_opt") >= t.number(i, "snr_sub"), fmt::format("opt below subtract at row {}", i));
        out.require(t.number(i, "snr_opt") >= t.number(i, "snr_add"), fmt::format("opt below add at row {}", i));
        plateau = std::max(plateau, t.number(i, "snr_opt"));
    }
    const double strong = gl::snr_curve_tmss(0.75);
    out.require(plateau > strong, "optimized plateau does not exceed TMSS(0.75)");
    out.detail = fmt::format("75-point grid; plateau {:.5f} > TMSS(0.75) {:.5f}; TMSS at 0.75 vs add {:.5f}{}{}",
                             plateau, strong, t.number(t.rows.size() - 1, "snr_add"), out.detail.empty() ? "" : "; ",
                             out.detail);
    return out;
}

gl::FockState random_state(int modes, int cutoff, int max_photons, std::mt19937& rng) {
    std::normal_distribution<double> g;
    gl::FockState state(modes, cutoff);
    for (std::size_t i = 0; i < state.size(); ++i) {
        int total = 0;
        for (int m = 0; m < modes; ++m) {
            total += state.photon_in_mode(i, m);
        }
        if (total <= max_photons) {
            state.amplitudes()[i] = gl::Complex(g(rng), g(rng));
        }
    }
    return gl::normalize(state);
}

Outcome ac7_properties() {
    Outcome out;
    std::mt19937 rng(42);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    int checks = 0;
    for (int trial = 0; trial < 50; ++trial) {
        const auto phi = random_state(2, 30, 4, rng);
        const auto psi = random_state(2, 30, 4, rng);
        const int mode = trial % 2;
        const auto lhs = gl::inner_product(phi, gl::annihilate(psi, mode));
        const auto rhs = gl::inner_product(gl::create(phi, mode), psi);
        out.require(std::abs(lhs - rhs) <= 1e-12, "adjointness");

        const double s = 0.5 * u(rng);
        const auto sq = gl::apply_two_mode_squeezer(psi, 0, 1, s, 2.0 * M_PI * u(rng));
        out.require(std::abs(gl::norm_sq(sq) + sq.leaked_norm() - 1.0) <= 1e-12, "squeezer norm + leak");
        out.require(sq.leaked_norm() <= gl::kDefaultLeakTolerance, "squeezer leak bound");

        const double theta = 0.5 * M_PI * u(rng);
        const auto bs = gl::apply_beam_splitter(psi, 0, 1, std::cos(theta), std::polar(std::sin(theta), u(rng)));
        out.require(std::abs(gl::norm_sq(bs) + bs.leaked_norm() - 1.0) <= 1e-12, "beam splitter norm + leak");

        const double ss = 0.01 + 0.74 * u(rng);
        const double r = u(rng);
        const auto op = gl::apply_coherent_op(gl::build_tmss(ss), gl::CoherentOpParams::from_r(r));
        const double expected = std::sinh(ss) * std::sinh(ss) + r * r;
        out.require(std::abs(op.success_weight - expected) <= 1e-12 * std::max(1.0, expected), "success weight");
        for (std::size_t i = 0; i < op.state.size(); ++i) {
            if (std::norm(op.state.amplitudes()[i]) > 0.0) {
                out.require(std::abs(op.state.photon_in_mode(i, 0) - op.state.photon_in_mode(i, 1)) == 1,
                            "support law");
            }
        }
        checks += 5;
    }
    out.detail = fmt::format("{} randomized property checks{}{}", checks, out.detail.empty() ? "" : "; ", out.detail);
    return out;
}

std::string slurp(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

Outcome ac8_determinism() {
    Outcome out;
    const std::vector<std::pair<std::string, std::string>> commands{
        {"state", "state build tmss:s=0.35"},
        {"moments", "moments check --s 0.01,0.35,0.75 --r 0,0.5,1"},
        {"scan", "--s-range 0.05:0.75:15 --r-range 0:1:21 snr scan"},
        {"optimize", "--s-range 0.01:0.75:30 snr optimize"},
        {"fig2a", "snr figure --fig 2a"},
        {"fig2b", "snr figure --fig 2b"},
        {"fig3", "snr figure --fig 3"},
        {"bifurcation", "snr bifurcation"},
        {"herald", "herald verify --s0 0.05 --t1 0.99 --t2 0.8 --detector PD1"},
        {"mc_run", "--frames 1000000 --seed 7 mc run --source tmss:s=0.35 --mask 0011"},
        {"mc_snr", "--frames 20000 --seed 3 mc snr --source subtract:s=0.35 --replicas 30"},
    };
    const fs::path root = fs::temp_directory_path() / fmt::format("ghostlight_ac8_{}", ::getpid());
    fs::remove_all(root);
    int compared = 0;
    for (const auto& [name, args] : commands) {
        std::vector<std::string> snapshots;
        for (int run = 0; run < 2; ++run) {
            const fs::path dir = root / name / std::to_string(run);
            fs::create_directories(dir);
            const std::string cmd = fmt::format("cd '{}' && '{}' {} > stdout.txt 2> stderr.txt", dir.string(),
                                                GHOSTLIGHT_CLI, args);
            const int status = std::system(cmd.c_str());
            out.require(status == 0, fmt::format("'{}' exited with {}", args, status));
            std::string snapshot;
            std::vector<fs::path> files;
            for (const auto& entry : fs::directory_iterator(dir)) {
                if (entry.path().filename() != "stderr.txt") {
                    files.push_back(entry.path());
                }
            }
            std::sort(files.begin(), files.end());
            for (const auto& f : files) {
                snapshot += "== " + f.filename().string() + "\n" + slurp(f);
            }
            snapshots.push_back(snapshot);
        }
        out.require(snapshots[0] == snapshots[1], fmt::format("'{}' output differs between runs", args));
        out.require(snapshots[0].find(',') != std::string::npos || name == "state" || name == "herald",
                    fmt::format("'{}' wrote no CSV", args));
        ++compared;
    }
    fs::remove_all(root);
    out.detail = fmt::format("{} commands run twice, outputs byte-identical{}{}", compared,
                             out.detail.empty() ? "" : "; ", out.detail);
    if (!out.pass) {
        out.detail = "mismatch: " + out.detail;
    }
    return out;
}

}  // namespace

int main() {
    struct Criterion {
        const char* id;
        const char* title;
        double time_limit;
        std::function<Outcome()> run;
    };
    const std::vector<Criterion> criteria{
        {"AC1", "moment oracle equivalence", 10.0, ac1_moments},
        {"AC2", "herald circuit fidelity", 30.0, ac2_herald},
        {"AC3", "Monte-Carlo vs formula", 120.0, ac3_monte_carlo},
        {"AC4", "weak-squeezing optimum", 0.0, ac4_weak_squeezing},
        {"AC5", "bifurcation", 0.0, ac5_bifurcation},
        {"AC6", "SNR curve ordering", 0.0, ac6_fig3},
        {"AC7", "engine properties", 30.0, ac7_properties},
        {"AC8", "CLI determinism", 0.0, ac8_determinism},
    };
    int failures = 0;
    for (const auto& c : criteria) {
        const auto t0 = std::chrono::steady_clock::now();
        Outcome outcome;
        try {
            outcome = c.run();
        } catch (const std::exception& e) {
            outcome.pass = false;
            outcome.detail = fmt::format("exception: {}", e.what());
        }
        const double elapsed = seconds_since(t0);
        if (c.time_limit > 0.0 && elapsed > c.time_limit) {
            outcome.pass = false;
            outcome.detail += fmt::format("; took {:.1f} s, limit {:.0f} s", elapsed, c.time_limit);
        }
        failures += outcome.pass ? 0 : 1;
        fmt::print("{} {} [{}] ({:.2f} s) {}\n", c.id, outcome.pass ? "PASS" : "FAIL", c.title, elapsed, outcome.detail);
        std::fflush(stdout);
    }
    fmt::print("{} of {} acceptance criteria passed\n", criteria.size() - failures, criteria.size());
    return failures == 0 ? 0 : 1;
}
