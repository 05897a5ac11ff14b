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

#include "ghostlight/sources.hpp"

#include <charconv>
#include <cmath>
#include <map>

#include <fmt/format.h>

#include "ghostlight/errors.hpp"

namespace ghostlight {
namespace {

void check_unit(double a, double b, const char* what) {
    if (!std::isfinite(a) || !std::isfinite(b) || std::abs(a * a + b * b - 1.0) > 1e-12) {
        throw BadParams(fmt::format("{} needs t^2 + r^2 = 1, got t={} r={}", what, a, b));
    }
}

void check_squeezing(double s) {
    if (!std::isfinite(s) || s < 0.0) {
        throw BadParams(fmt::format("squeezing parameter must be finite and >= 0, got {}", s));
    }
}

// (t·â + r·â†)|ψ> without normalization.
FockState coherent_op_image(const FockState& state, double t, double r, int mode, double leak_tolerance) {
    FockState out(state.mode_count(), state.cutoff());
    if (t != 0.0) {
        const FockState lowered = annihilate(state, mode);
        auto src = lowered.amplitudes();
        auto dst = out.amplitudes();
        for (std::size_t i = 0; i < dst.size(); ++i) {
            dst[i] += t * src[i];
        }
    }
    double leak = 0.0;
    if (r != 0.0) {
        const FockState raised = create(state, mode, leak_tolerance / (r * r));
        leak = (raised.leaked_norm() - state.leaked_norm()) * r * r;
        auto src = raised.amplitudes();
        auto dst = out.amplitudes();
        for (std::size_t i = 0; i < dst.size(); ++i) {
            dst[i] += r * src[i];
        }
    }
    out.add_leak(state.leaked_norm() + leak);
    return out;
}

double parse_number(std::string_view text, std::string_view key) {
    double value = 0.0;
    const char* first = text.data();
    const char* last = text.data() + text.size();
    auto [ptr, ec] = std::from_chars(first, last, value);
    if (ec != std::errc{} || ptr != last || text.empty()) {
        throw ParseError(fmt::format("bad numeric value '{}' for key '{}'", text, key));
    }
    return value;
}

}  // namespace

CoherentOpParams CoherentOpParams::from_r(double r, bool negative_t) {
    if (!std::isfinite(r) || r < 0.0 || r > 1.0) {
        throw BadParams(fmt::format("r must lie in [0, 1], got {}", r));
    }
    const double t = std::sqrt(std::max(0.0, 1.0 - r * r));
    return {negative_t ? -t : t, r};
}

void CoherentOpParams::validate() const { check_unit(t, r, "coherent operation"); }

FockState build_tmss(double s, int cutoff) {
    check_squeezing(s);
    FockState state(2, cutoff);
    const double x = std::tanh(s);
    const double c = std::cosh(s);
    double amp = 1.0 / c;
    for (int k = 0; k <= cutoff; ++k) {
        state.set_amplitude({k, k}, amp);
        amp *= x;
    }
    // Geometric tail beyond the cutoff: sum_{k>N} tanh^{2k}/cosh^2 = tanh^{2(N+1)}.
    const double tail = std::pow(x * x, cutoff + 1);
    FockState out = normalize(state);
    out.add_leak(tail);
    return out;
}

OperatedState apply_coherent_op(const FockState& state, const CoherentOpParams& params, int mode,
                                double leak_tolerance) {
    params.validate();
    FockState image = coherent_op_image(state, params.t, params.r, mode, leak_tolerance);
    const double weight = image.norm_sq();
    if (weight <= kNullProbability) {
        throw NullStateError(
            fmt::format("coherent operation (t={}, r={}) annihilates the input state", params.t, params.r));
    }
    return {normalize(image), weight};
}

HeraldSpec HeraldSpec::from_transmissivities(double s0, double t1, double t2, Detector detector) {
    if (!(t1 > 0.0 && t1 <= 1.0) || !(t2 >= 0.0 && t2 <= 1.0)) {
        throw BadParams(fmt::format("transmissivities must satisfy 0 < t1 <= 1, 0 <= t2 <= 1 (t1={}, t2={})", t1, t2));
    }
    return {s0, t1, std::sqrt(1.0 - t1 * t1), t2, std::sqrt(1.0 - t2 * t2), detector};
}

void HeraldSpec::validate() const {
    check_squeezing(s0);
    check_unit(t1, r1, "BS1");
    check_unit(t2, r2, "BS2");
    if (t1 == 0.0) {
        throw BadParams("BS1 transmissivity must be nonzero");
    }
}

std::vector<std::string> HeraldSpec::warnings() const {
    std::vector<std::string> out;
    if (s0 > 0.2) {
        out.push_back(fmt::format("s0 = {} is not small; first-order heralding is inaccurate", s0));
    }
    if (t1 != 0.0 && std::abs(r1 / t1) > 0.3) {
        out.push_back(fmt::format("r1/t1 = {} is not small; BS1 subtracts multiple photons", r1 / t1));
    }
    return out;
}

CoherentOpParams raw_herald_params(const HeraldSpec& spec) {
    spec.validate();
    if (spec.detector == Detector::PD1) {
        return {-spec.t2 * spec.r1 / spec.t1, spec.s0 * spec.r2};
    }
    return {spec.r2 * spec.r1 / spec.t1, spec.s0 * spec.t2};
}

CoherentOpParams herald_params(const HeraldSpec& spec) {
    const CoherentOpParams raw = raw_herald_params(spec);
    const double norm = std::hypot(raw.t, raw.r);
    if (norm == 0.0) {
        throw DegenerateHerald("herald map has both components zero");
    }
    CoherentOpParams out{raw.t / norm, raw.r / norm};
    if (out.r < 0.0 || (out.r == 0.0 && out.t < 0.0)) {
        out.t = -out.t;
        out.r = -out.r;
    }
    return out;
}

HeraldResult simulate_herald_circuit(const FockState& input, const HeraldSpec& spec, const HeraldOptions& options) {
    spec.validate();
    if (input.mode_count() != 2) {
        throw BadParams("herald circuit input must be a (signal, idler) state");
    }
    if (!input.is_normalized()) {
        throw BadParams("herald circuit input must be normalized");
    }
    constexpr int kSignal = 0;
    constexpr int kAncillaB = 2;
    constexpr int kAncillaC = 3;

    const FockState in = with_cutoff(input, options.cutoff);
    FockState circuit = tensor_product(in, vacuum(2, options.cutoff));
    circuit = apply_two_mode_squeezer(circuit, kSignal, kAncillaC, spec.s0, 0.0, options.truncation);
    circuit = apply_beam_splitter(circuit, kSignal, kAncillaB, spec.t1, spec.r1, options.truncation.leak_tolerance);
    circuit = apply_beam_splitter(circuit, kAncillaB, kAncillaC, spec.t2, spec.r2, options.truncation.leak_tolerance);

    const std::map<int, int> pattern = spec.detector == Detector::PD1
                                           ? std::map<int, int>{{kAncillaB, 1}, {kAncillaC, 0}}
                                           : std::map<int, int>{{kAncillaB, 0}, {kAncillaC, 1}};
    Projection projection = project_photon_pattern(circuit, pattern);
    if (projection.null) {
        throw NullStateError(fmt::format("herald pattern on {} has zero probability",
                                         spec.detector == Detector::PD1 ? "PD1" : "PD2"));
    }

    HeraldResult result{canonicalize_phase(projection.state), projection.probability, 0.0, {}, 0.0, {}};
    result.target_params = herald_params(spec);
    const CoherentOpParams raw = raw_herald_params(spec);
    result.first_order_probability =
        coherent_op_image(in, raw.t, raw.r, kSignal, options.truncation.leak_tolerance).norm_sq();
    const OperatedState target = apply_coherent_op(in, result.target_params, kSignal, options.truncation.leak_tolerance);
    result.fidelity_to_target = fidelity(result.conditional_state, target.state);
    result.warnings = spec.warnings();
    return result;
}

FockState bell_state(int cutoff) {
    FockState state(2, cutoff);
    state.set_amplitude({1, 0}, 1.0 / std::sqrt(2.0));
    state.set_amplitude({0, 1}, 1.0 / std::sqrt(2.0));
    return state;
}

FockState build_source(SourceKind kind, double s, std::optional<double> r, int cutoff) {
    const FockState tmss = build_tmss(s, cutoff);
    switch (kind) {
        case SourceKind::tmss:
            return tmss;
        case SourceKind::subtract:
            return apply_coherent_op(tmss, {1.0, 0.0}).state;
        case SourceKind::add:
            return apply_coherent_op(tmss, {0.0, 1.0}).state;
        case SourceKind::coherent:
            if (!r) {
                throw BadParams("coherent source requires r");
            }
            return apply_coherent_op(tmss, CoherentOpParams::from_r(*r)).state;
    }
    throw BadParams("unknown source kind");
}

BuiltSource build_source(const SourceDescriptor& d, int cutoff) {
    using Kind = SourceDescriptor::Kind;
    switch (d.kind) {
        case Kind::bell:
            return {bell_state(cutoff), std::nullopt};
        case Kind::fock: {
            FockState state(2, cutoff);
            state.set_amplitude({d.ns, d.ni}, 1.0);
            return {std::move(state), std::nullopt};
        }
        case Kind::tmss:
            return {build_tmss(d.s, cutoff), std::nullopt};
        default:
            break;
    }
    CoherentOpParams params{1.0, 0.0};
    if (d.kind == Kind::add) {
        params = {0.0, 1.0};
    } else if (d.kind == Kind::coherent) {
        if (!d.r) {
            throw BadParams("coherent source requires r");
        }
        params = CoherentOpParams::from_r(*d.r, d.negative_t);
    }
    OperatedState op = apply_coherent_op(build_tmss(d.s, cutoff), params);
    return {std::move(op.state), op.success_weight};
}

SourceDescriptor SourceDescriptor::parse(std::string_view text) {
    using Kind = SourceDescriptor::Kind;
    static const std::map<std::string_view, Kind> kinds{{"tmss", Kind::tmss},         {"subtract", Kind::subtract},
                                                        {"add", Kind::add},           {"coherent", Kind::coherent},
                                                        {"bell", Kind::bell},         {"fock", Kind::fock}};
    const auto colon = text.find(':');
    const std::string_view name = text.substr(0, colon);
    const auto it = kinds.find(name);
    if (it == kinds.end()) {
        throw ParseError(fmt::format("unknown source kind '{}'", name));
    }
    SourceDescriptor d;
    d.kind = it->second;

    bool have_s = false;
    std::string_view rest = colon == std::string_view::npos ? std::string_view{} : text.substr(colon + 1);
    while (!rest.empty()) {
        const auto comma = rest.find(',');
        const std::string_view item = rest.substr(0, comma);
        rest = comma == std::string_view::npos ? std::string_view{} : rest.substr(comma + 1);
        const auto eq = item.find('=');
        if (eq == std::string_view::npos) {
            throw ParseError(fmt::format("expected key=value, got '{}'", item));
        }
        const std::string_view key = item.substr(0, eq);
        const std::string_view value = item.substr(eq + 1);
        if (key == "s") {
            d.s = parse_number(value, key);
            have_s = true;
        } else if (key == "r") {
            d.r = parse_number(value, key);
        } else if (key == "tsign") {
            if (value != "+" && value != "-") {
                throw ParseError("tsign must be '+' or '-'");
            }
            d.negative_t = value == "-";
        } else if (key == "ns" || key == "ni") {
            const double n = parse_number(value, key);
            if (n < 0 || n != std::floor(n)) {
                throw ParseError(fmt::format("{} must be a non-negative integer", key));
            }
            (key == "ns" ? d.ns : d.ni) = static_cast<int>(n);
        } else {
            throw ParseError(fmt::format("unknown key '{}' in source descriptor", key));
        }
    }

    const bool squeezed = d.kind != Kind::bell && d.kind != Kind::fock;
    if (squeezed && !have_s) {
        throw ParseError(fmt::format("source '{}' requires s=", name));
    }
    if (d.kind == Kind::coherent && !d.r) {
        throw ParseError("coherent source requires r=");
    }
    if (d.kind != Kind::coherent && d.r) {
        throw ParseError(fmt::format("source '{}' does not take r=", name));
    }
    return d;
}

std::string SourceDescriptor::to_string() const {
    switch (kind) {
        case Kind::tmss:
            return fmt::format("tmss:s={}", s);
        case Kind::subtract:
            return fmt::format("subtract:s={}", s);
        case Kind::add:
            return fmt::format("add:s={}", s);
        case Kind::coherent:
            return fmt::format("coherent:s={},r={}{}", s, r.value_or(0.0), negative_t ? ",tsign=-" : "");
        case Kind::bell:
            return "bell";
        case Kind::fock:
            return fmt::format("fock:ns={},ni={}", ns, ni);
    }
    return {};
}

}  // namespace ghostlight
