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

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <fmt/format.h>
#include <fmt/ostream.h>
#include <json.hpp>

#include "ghostlight/csv.hpp"
#include "ghostlight/errors.hpp"
#include "ghostlight/fock.hpp"
#include "ghostlight/ghost_imaging.hpp"
#include "ghostlight/moments.hpp"
#include "ghostlight/snr.hpp"
#include "ghostlight/sources.hpp"
#include "ghostlight/sweep.hpp"

namespace gl = ghostlight;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitParse = 2;
constexpr int kExitDegenerate = 3;
constexpr int kExitValidation = 4;

struct Range {
    double lo = 0.0;
    double hi = 0.0;
    int points = 0;
};

Range parse_range(const std::string& text, const char* what) {
    Range range;
    char tail = 0;
    if (std::sscanf(text.c_str(), "%lf:%lf:%d%c", &range.lo, &range.hi, &range.points, &tail) != 3 ||
        range.points < 1 || range.hi < range.lo) {
        throw gl::ParseError(fmt::format("--{} expects lo:hi:n with lo <= hi and n >= 1, got '{}'", what, text));
    }
    return range;
}

struct RunConfig {
    int cutoff = gl::kDefaultCutoff;
    int buffer = gl::kDefaultBuffer;
    double leak_tolerance = gl::kDefaultLeakTolerance;
    std::string s_range = "0.01:0.75:120";
    std::string r_range = "0:1:201";
    std::int64_t frames = 100000;
    std::uint64_t seed = 1;
    std::string snr_variant = "shared_bucket_difference";
    std::string output_dir;
    std::string meta_path;

    gl::SnrModel model() const {
        if (snr_variant != "shared_bucket_difference") {
            throw gl::ParseError(fmt::format("unknown SNR model '{}'", snr_variant));
        }
        return {};
    }
};

class Metadata {
  public:
    explicit Metadata(std::string command) : start_(std::chrono::steady_clock::now()) { json_["command"] = command; }

    nlohmann::json& operator[](const char* key) { return json_[key]; }
    void leak(double value) { leaked_ = std::max(leaked_, value); }

    void write(const std::string& path) {
        if (path.empty()) {
            return;
        }
        json_["leaked_norm"] = leaked_;
        json_["elapsed"] = std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
        std::ofstream out(path);
        if (!out) {
            throw gl::Error(fmt::format("cannot write {}", path));
        }
        out << json_.dump(2) << '\n';
    }

  private:
    nlohmann::json json_;
    double leaked_ = 0.0;
    std::chrono::steady_clock::time_point start_;
};

/// Writes `table` to <output_dir>/<name>.csv, or to stdout when no directory is set.
void emit(const RunConfig& config, const std::string& name, const gl::CsvTable& table) {
    if (config.output_dir.empty()) {
        table.write(std::cout);
        return;
    }
    std::filesystem::create_directories(config.output_dir);
    const auto path = std::filesystem::path(config.output_dir) / (name + ".csv");
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw gl::Error(fmt::format("cannot write {}", path.string()));
    }
    table.write(out);
    std::cerr << "wrote " << path.string() << '\n';
}

gl::CsvTable optimum_table(const std::vector<gl::ROptimum>& records) {
    gl::CsvTable t{{"s", "r_star", "snr_star", "boundary_flag", "snr_r0", "snr_r1"}, {}};
    for (const auto& o : records) {
        t.add_row({o.s, o.r_star, o.snr_star, std::string(gl::to_string(o.flag)), o.snr_r0, o.snr_r1});
    }
    return t;
}

gl::Detector parse_detector(const std::string& text) {
    if (text == "PD1" || text == "pd1") return gl::Detector::PD1;
    if (text == "PD2" || text == "pd2") return gl::Detector::PD2;
    throw gl::ParseError(fmt::format("unknown detector '{}' (expected PD1 or PD2)", text));
}

int state_build(const RunConfig& config, const std::string& descriptor, const std::string& json_path) {
    Metadata meta("state build");
    const auto parsed = gl::SourceDescriptor::parse(descriptor);
    const gl::BuiltSource built = gl::build_source(parsed, config.cutoff);
    const gl::FockState& state = built.state;
    meta.leak(state.leaked_norm());

    fmt::print("source {}\n", parsed.to_string());
    fmt::print("cutoff {}\n", state.cutoff());
    fmt::print("norm {}\n", gl::format_double(std::sqrt(gl::norm_sq(state))));
    fmt::print("mean_n_signal {}\n", gl::format_double(gl::mean_photon_number(state, 0)));
    fmt::print("mean_n_idler {}\n", gl::format_double(gl::mean_photon_number(state, 1)));
    if (built.success_weight) {
        fmt::print("success_weight {}\n", gl::format_double(*built.success_weight));
    }
    fmt::print("leaked_norm {}\n", gl::format_double(state.leaked_norm()));

    if (!json_path.empty()) {
        std::ofstream out(json_path);
        if (!out) {
            throw gl::Error(fmt::format("cannot write {}", json_path));
        }
        out << gl::to_json(state).dump() << '\n';
    }
    meta["source"] = parsed.to_string();
    meta["cutoff"] = config.cutoff;
    meta.write(config.meta_path);
    return kExitOk;
}

int moments_check(const RunConfig& config, const std::vector<double>& s_values, const std::vector<double>& r_values,
                  double threshold) {
    Metadata meta("moments check");
    gl::CsvTable t{{"s", "r", "moment", "analytic", "numeric", "rel_dev"}, {}};
    double worst = 0.0;
    bool passed = true;
    for (double s : s_values) {
        for (double r : r_values) {
            const gl::MomentComparison cmp = gl::compare_moments(s, r, config.cutoff, threshold);
            for (std::size_t k = 0; k < 8; ++k) {
                t.add_row({s, r, std::string(gl::MomentSet::kNames[k]), cmp.analytic.as_array()[k],
                           cmp.numeric.as_array()[k], cmp.rel_dev[k]});
            }
            worst = std::max(worst, cmp.max_rel_dev);
            passed = passed && cmp.passed();
        }
    }
    emit(config, "moments", t);
    std::cerr << "max_rel_dev " << gl::format_double(worst) << (passed ? " ok" : " EXCEEDS threshold") << '\n';
    meta["max_rel_dev"] = worst;
    meta["cutoff"] = config.cutoff;
    meta.write(config.meta_path);
    return passed ? kExitOk : kExitValidation;
}

int snr_scan(const RunConfig& config) {
    Metadata meta("snr scan");
    const Range sr = parse_range(config.s_range, "s-range");
    const Range rr = parse_range(config.r_range, "r-range");
    const auto grid = gl::snr_grid(gl::linear_axis(sr.lo, sr.hi, sr.points), gl::linear_axis(rr.lo, rr.hi, rr.points),
                                   config.model());
    gl::CsvTable t{{"s", "r", "snr"}, {}};
    for (std::size_t i = 0; i < grid.s_values.size(); ++i) {
        for (std::size_t j = 0; j < grid.r_values.size(); ++j) {
            t.add_row({grid.s_values[i], grid.r_values[j], grid.at(i, j)});
        }
    }
    emit(config, "scan", t);
    meta.write(config.meta_path);
    return kExitOk;
}

int snr_optimize(const RunConfig& config, double tol) {
    Metadata meta("snr optimize");
    const Range sr = parse_range(config.s_range, "s-range");
    const auto s_values = sr.lo > 0.0 && sr.hi > sr.lo ? gl::s_axis(sr.lo, sr.hi, std::max(sr.points, 2))
                                                        : gl::linear_axis(sr.lo, sr.hi, sr.points);
    const auto branch = gl::optimum_branch(s_values, config.model(), tol);
    emit(config, "ridge", optimum_table(branch.records));
    if (branch.s_crit) {
        std::cerr << "interior optimum ends near s = " << gl::format_double(*branch.s_crit) << '\n';
    }
    meta.write(config.meta_path);
    return kExitOk;
}

int snr_figure(const RunConfig& config, const std::string& which, bool custom_s) {
    Metadata meta("snr figure");
    const gl::Figure figure = gl::parse_figure(which);
    gl::FigureOptions options = gl::FigureOptions::defaults(figure);
    options.model = config.model();
    options.cutoff = config.cutoff;
    if (custom_s && figure != gl::Figure::fig2a) {
        const Range sr = parse_range(config.s_range, "s-range");
        options.s_values = gl::s_axis(sr.lo, sr.hi, sr.points);
    }
    RunConfig out_config = config;
    if (out_config.output_dir.empty()) {
        out_config.output_dir = ".";
    }
    for (const auto& [name, table] : gl::figure_data(figure, options)) {
        emit(out_config, name, table);
    }
    meta["figure"] = which;
    meta["cutoff"] = config.cutoff;
    meta.write(config.meta_path);
    return kExitOk;
}

int snr_bifurcation(const RunConfig& config, double s_lo, double s_hi, double tol_s) {
    Metadata meta("snr bifurcation");
    const gl::Bifurcation b = gl::locate_bifurcation(s_lo, s_hi, config.model(), tol_s);
    gl::CsvTable t{{"s_crit", "s_interior", "s_boundary", "r_star_below", "r_star_above", "r_jump", "branch_jump",
                    "boundary_tie"},
                   {}};
    t.add_row({b.s_crit, b.s_lo, b.s_hi, b.below.r_star, b.above.r_star, b.r_jump, b.branch_jump,
               static_cast<std::int64_t>(b.above.boundary_tie)});
    emit(config, "bifurcation", t);
    meta.write(config.meta_path);
    return kExitOk;
}

int herald_verify(const RunConfig& config, double s0, double t1, double t2, const std::string& detector,
                  const std::string& input, int herald_cutoff, double threshold) {
    Metadata meta("herald verify");
    const auto spec = gl::HeraldSpec::from_transmissivities(s0, t1, t2, parse_detector(detector));
    const auto source = gl::build_source(gl::SourceDescriptor::parse(input), herald_cutoff);
    gl::HeraldOptions options;
    options.cutoff = herald_cutoff;
    options.truncation = {config.buffer, config.leak_tolerance};
    const gl::HeraldResult result = gl::simulate_herald_circuit(source.state, spec, options);
    meta.leak(result.conditional_state.leaked_norm());

    for (const auto& w : result.warnings) {
        std::cerr << "warning: " << w << '\n';
    }
    const auto raw = gl::raw_herald_params(spec);
    fmt::print("t {}\n", gl::format_double(result.target_params.t));
    fmt::print("r {}\n", gl::format_double(result.target_params.r));
    fmt::print("raw_t {}\n", gl::format_double(raw.t));
    fmt::print("raw_r {}\n", gl::format_double(raw.r));
    fmt::print("success_probability {}\n", gl::format_double(result.success_probability));
    fmt::print("first_order_probability {}\n", gl::format_double(result.first_order_probability));
    fmt::print("fidelity {}\n", gl::format_double(result.fidelity_to_target));
    fmt::print("leaked_norm {}\n", gl::format_double(result.conditional_state.leaked_norm()));
    const bool ok = result.fidelity_to_target >= threshold;
    fmt::print("{}\n", ok ? "ok" : "FIDELITY BELOW THRESHOLD");
    meta["fidelity"] = result.fidelity_to_target;
    meta.write(config.meta_path);
    return ok ? kExitOk : kExitValidation;
}

int mc_run(const RunConfig& config, const std::string& source_text, const std::string& mask_text,
           const std::string& out_path) {
    Metadata meta("mc run");
    const auto descriptor = gl::SourceDescriptor::parse(source_text);
    const auto mask = gl::ObjectMask::parse(mask_text);
    const auto source = gl::build_source(descriptor, config.cutoff);
    meta.leak(source.state.leaked_norm());
    const gl::GhostImage image = gl::run_ghost_imaging(source.state, mask, config.frames, config.seed);
    const gl::CsvTable table = image.table();
    if (!out_path.empty()) {
        std::ofstream out(out_path, std::ios::binary);
        if (!out) {
            throw gl::Error(fmt::format("cannot write {}", out_path));
        }
        table.write(out);
    } else {
        emit(config, "ghost_image", table);
    }
    std::cerr << "contrast " << gl::format_double(image.contrast()) << '\n';
    meta["source"] = descriptor.to_string();
    meta["mask"] = mask.str();
    meta["frames"] = config.frames;
    meta["seed"] = config.seed;
    meta.write(config.meta_path);
    return kExitOk;
}

int mc_snr(const RunConfig& config, const std::string& source_text, int replicas) {
    Metadata meta("mc snr");
    const auto descriptor = gl::SourceDescriptor::parse(source_text);
    const auto source = gl::build_source(descriptor, config.cutoff);
    meta.leak(source.state.leaked_norm());
    const auto empirical = gl::empirical_snr(source.state, config.frames, config.seed, replicas);
    const auto formula = gl::snr_from_moments(gl::numeric_moments(source.state), config.model());
    const double stderr_value = empirical.mc_stderr.value_or(0.0);
    gl::CsvTable t{{"source", "frames", "replicas", "seed", "snr_mc", "stderr", "snr_formula", "z"}, {}};
    t.add_row({descriptor.to_string(), config.frames, static_cast<std::int64_t>(replicas),
               static_cast<std::int64_t>(config.seed), empirical.value, stderr_value, formula.value,
               stderr_value > 0.0 ? (empirical.value - formula.value) / stderr_value : 0.0});
    emit(config, "mc_snr", t);
    meta["source"] = descriptor.to_string();
    meta["frames"] = config.frames;
    meta["seed"] = config.seed;
    meta.write(config.meta_path);
    return kExitOk;
}

std::vector<double> parse_list(const std::vector<std::string>& items) {
    std::vector<double> out;
    for (const auto& item : items) {
        std::stringstream ss(item);
        std::string piece;
        while (std::getline(ss, piece, ',')) {
            try {
                std::size_t used = 0;
                out.push_back(std::stod(piece, &used));
                if (used != piece.size()) {
                    throw std::invalid_argument(piece);
                }
            } catch (const std::exception&) {
                throw gl::ParseError(fmt::format("not a number: '{}'", piece));
            }
        }
    }
    return out;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"ghostlight: ghost imaging with non-Gaussian light"};
    app.require_subcommand(1);
    app.option_defaults()->always_capture_default();
    app.set_config("--config", "", "Flat key=value configuration file; flags take precedence");

    RunConfig config;
    app.add_option("--cutoff", config.cutoff, "Per-mode Fock cutoff")->envname("GHOSTLIGHT_CUTOFF");
    app.add_option("--buffer", config.buffer, "Extra levels used inside squeezer blocks")
        ->envname("GHOSTLIGHT_BUFFER");
    app.add_option("--leak-tolerance", config.leak_tolerance, "Largest tolerated truncation leak")
        ->envname("GHOSTLIGHT_LEAK_TOLERANCE");
    app.add_option("--s-range", config.s_range, "Squeezing axis lo:hi:n")->envname("GHOSTLIGHT_S_RANGE");
    app.add_option("--r-range", config.r_range, "Coefficient axis lo:hi:n")->envname("GHOSTLIGHT_R_RANGE");
    app.add_option("--frames", config.frames, "Monte-Carlo frames")->envname("GHOSTLIGHT_FRAMES");
    app.add_option("--seed", config.seed, "Monte-Carlo seed")->envname("GHOSTLIGHT_SEED");
    app.add_option("--model", config.snr_variant, "SNR model")->envname("GHOSTLIGHT_MODEL");
    app.add_option("--output-dir", config.output_dir, "Directory for CSV files (stdout if empty)")
        ->envname("GHOSTLIGHT_OUTPUT_DIR");
    app.add_option("--meta", config.meta_path, "Write run metadata JSON here")->envname("GHOSTLIGHT_META");
    app.fallthrough();

    auto* state = app.add_subcommand("state", "Source construction")->require_subcommand(1);
    auto* state_build_cmd = state->add_subcommand("build", "Build a source and print a summary");
    std::string descriptor;
    std::string json_path;
    state_build_cmd->add_option("descriptor", descriptor, "e.g. tmss:s=0.35 or coherent:s=0.01,r=0.01")->required();
    state_build_cmd->add_option("--json", json_path, "Write the state as JSON");

    auto* moments = app.add_subcommand("moments", "Moment validation")->require_subcommand(1);
    auto* moments_check_cmd = moments->add_subcommand("check", "Closed form vs Fock-space moments");
    std::vector<std::string> s_list{"0.35"};
    std::vector<std::string> r_list{"0.5"};
    double moment_threshold = 1e-8;
    moments_check_cmd->add_option("--s", s_list, "Squeezing values (comma separated)");
    moments_check_cmd->add_option("--r", r_list, "Coefficient values (comma separated)");
    moments_check_cmd->add_option("--threshold", moment_threshold, "Relative deviation limit");

    auto* snr = app.add_subcommand("snr", "SNR scans and optimization")->require_subcommand(1);
    auto* scan_cmd = snr->add_subcommand("scan", "SNR over the s x r grid");
    auto* optimize_cmd = snr->add_subcommand("optimize", "Optimal r along the s axis");
    double opt_tol = 1e-8;
    optimize_cmd->add_option("--tol", opt_tol, "Golden-section tolerance");
    auto* figure_cmd = snr->add_subcommand("figure", "Figure data as CSV");
    std::string figure_name;
    figure_cmd->add_option("--fig", figure_name, "2a, 2b or 3")->required();
    auto* bif_cmd = snr->add_subcommand("bifurcation", "Locate the interior-to-boundary transition");
    double bif_lo = 0.01;
    double bif_hi = 0.5;
    double bif_tol = 1e-6;
    bif_cmd->add_option("--s-lo", bif_lo, "Lower bracket");
    bif_cmd->add_option("--s-hi", bif_hi, "Upper bracket");
    bif_cmd->add_option("--tol-s", bif_tol, "Bracket width");

    auto* herald = app.add_subcommand("herald", "Heralding circuit")->require_subcommand(1);
    auto* verify_cmd = herald->add_subcommand("verify", "Exact circuit vs first-order map");
    double s0 = 0.05;
    double t1 = 0.99;
    double t2 = 0.8;
    std::string detector = "PD1";
    std::string input = "tmss:s=0.1";
    int herald_cutoff = 12;
    double fid_threshold = 0.995;
    verify_cmd->add_option("--s0", s0, "Amplifier squeezing");
    verify_cmd->add_option("--t1", t1, "BS1 transmissivity");
    verify_cmd->add_option("--t2", t2, "BS2 transmissivity");
    verify_cmd->add_option("--detector", detector, "PD1 or PD2");
    verify_cmd->add_option("--input", input, "Two-mode input descriptor");
    verify_cmd->add_option("--herald-cutoff", herald_cutoff, "Per-mode cutoff of the circuit");
    verify_cmd->add_option("--threshold", fid_threshold, "Minimum fidelity");

    auto* mc = app.add_subcommand("mc", "Monte-Carlo ghost imaging")->require_subcommand(1);
    auto* run_cmd = mc->add_subcommand("run", "Covariance ghost image of a mask");
    std::string source_text = "tmss:s=0.35";
    std::string mask_text = "0011";
    std::string out_path;
    run_cmd->add_option("--source", source_text, "Source descriptor");
    run_cmd->add_option("--mask", mask_text, "Object pattern, 1 = transmitting");
    run_cmd->add_option("--out", out_path, "Ghost image CSV path");
    auto* mc_snr_cmd = mc->add_subcommand("snr", "Empirical per-frame SNR");
    int replicas = 30;
    mc_snr_cmd->add_option("--source", source_text, "Source descriptor");
    mc_snr_cmd->add_option("--replicas", replicas, "Independent replicas");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kExitOk : kExitParse;
    }

    try {
        if (config.cutoff < 1 || config.buffer < 0 || !(config.leak_tolerance > 0.0) || config.frames < 1) {
            throw gl::BadParams("cutoff, buffer, leak tolerance and frames must be positive");
        }
        if (state_build_cmd->parsed()) return state_build(config, descriptor, json_path);
        if (moments_check_cmd->parsed()) {
            return moments_check(config, parse_list(s_list), parse_list(r_list), moment_threshold);
        }
        if (scan_cmd->parsed()) return snr_scan(config);
        if (optimize_cmd->parsed()) return snr_optimize(config, opt_tol);
        if (figure_cmd->parsed()) {
            return snr_figure(config, figure_name, app.get_option("--s-range")->count() > 0 ||
                                                       std::getenv("GHOSTLIGHT_S_RANGE") != nullptr);
        }
        if (bif_cmd->parsed()) return snr_bifurcation(config, bif_lo, bif_hi, bif_tol);
        if (verify_cmd->parsed()) {
            return herald_verify(config, s0, t1, t2, detector, input, herald_cutoff, fid_threshold);
        }
        if (run_cmd->parsed()) return mc_run(config, source_text, mask_text, out_path);
        if (mc_snr_cmd->parsed()) return mc_snr(config, source_text, replicas);
    } catch (const gl::ParseError& e) {
        std::cerr << "parse error: " << e.what() << '\n';
        return kExitParse;
    } catch (const gl::BadParams& e) {
        std::cerr << "invalid parameters: " << e.what() << '\n';
        return kExitParse;
    } catch (const gl::NullStateError& e) {
        std::cerr << "null state: " << e.what() << '\n';
        return kExitDegenerate;
    } catch (const gl::DegenerateHerald& e) {
        std::cerr << "degenerate herald: " << e.what() << '\n';
        return kExitDegenerate;
    } catch (const gl::DegenerateState& e) {
        std::cerr << "degenerate state: " << e.what() << '\n';
        return kExitDegenerate;
    } catch (const gl::DegenerateStatistics& e) {
        std::cerr << "degenerate statistics: " << e.what() << '\n';
        return kExitDegenerate;
    } catch (const gl::NoTransition& e) {
        std::cerr << "no transition: " << e.what() << '\n';
        return kExitDegenerate;
    } catch (const gl::TruncationOverflow& e) {
        std::cerr << "truncation: " << e.what() << '\n';
        return kExitValidation;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return kExitParse;
}
