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

#include "ghostlight/fock.hpp"

#include <algorithm>
#include <cmath>
#include <optional>
#include <string>

#include <Eigen/Dense>
#include <unsupported/Eigen/MatrixFunctions>
#include <fmt/format.h>

#include "ghostlight/errors.hpp"

namespace ghostlight {
namespace {

void check_mode(const FockState& state, int mode) {
    if (mode < 0 || mode >= state.mode_count()) {
        throw BadParams(fmt::format("mode {} out of range for a {}-mode state", mode, state.mode_count()));
    }
}

void check_distinct(const FockState& state, int a, int b) {
    check_mode(state, a);
    check_mode(state, b);
    if (a == b) {
        throw BadParams("two-mode operation needs distinct modes");
    }
}

void check_same_shape(const FockState& a, const FockState& b) {
    if (a.mode_count() != b.mode_count() || a.cutoff() != b.cutoff()) {
        throw BadParams(fmt::format("shape mismatch: {} modes/cutoff {} vs {} modes/cutoff {}", a.mode_count(),
                                    a.cutoff(), b.mode_count(), b.cutoff()));
    }
}

// Flat indices whose photon numbers in both `mode_a` and `mode_b` are zero.
std::vector<std::size_t> pair_base_offsets(const FockState& state, int mode_a, int mode_b) {
    std::vector<std::size_t> bases;
    for (std::size_t i = 0; i < state.size(); ++i) {
        if (state.photon_in_mode(i, mode_a) == 0 && state.photon_in_mode(i, mode_b) == 0) {
            bases.push_back(i);
        }
    }
    return bases;
}

void enforce_leak(double leak, double tolerance, const char* what) {
    if (leak > tolerance) {
        throw TruncationOverflow(
            fmt::format("{}: {:.3e} of squared amplitude pushed past the cutoff (tolerance {:.3e})", what, leak,
                        tolerance));
    }
}

}  // namespace

FockState::FockState(int mode_count, int cutoff) : mode_count_(mode_count), cutoff_(cutoff) {
    if (mode_count < 1 || mode_count > kMaxModes) {
        throw BadParams(fmt::format("mode_count must be in [1, {}], got {}", kMaxModes, mode_count));
    }
    if (cutoff < 1) {
        throw BadParams(fmt::format("cutoff must be >= 1, got {}", cutoff));
    }
    std::size_t total = 1;
    for (int m = 0; m < mode_count; ++m) {
        total *= static_cast<std::size_t>(cutoff + 1);
    }
    amplitudes_.assign(total, Complex{0.0, 0.0});
}

FockState FockState::basis(std::initializer_list<int> photons, int cutoff) {
    return basis(std::span<const int>(photons.begin(), photons.size()), cutoff);
}

FockState FockState::basis(std::span<const int> photons, int cutoff) {
    FockState state(static_cast<int>(photons.size()), cutoff);
    state.amplitudes_[state.index_of(photons)] = 1.0;
    return state;
}

std::size_t FockState::stride(int mode) const {
    std::size_t s = 1;
    for (int m = mode_count_ - 1; m > mode; --m) {
        s *= static_cast<std::size_t>(extent());
    }
    return s;
}

std::size_t FockState::index_of(std::span<const int> photons) const {
    if (static_cast<int>(photons.size()) != mode_count_) {
        throw BadParams(fmt::format("expected {} photon numbers, got {}", mode_count_, photons.size()));
    }
    std::size_t index = 0;
    for (int n : photons) {
        if (n < 0 || n > cutoff_) {
            throw BadParams(fmt::format("photon number {} outside [0, {}]", n, cutoff_));
        }
        index = index * static_cast<std::size_t>(extent()) + static_cast<std::size_t>(n);
    }
    return index;
}

std::vector<int> FockState::photons_at(std::size_t index) const {
    std::vector<int> photons(static_cast<std::size_t>(mode_count_));
    for (int m = mode_count_ - 1; m >= 0; --m) {
        photons[static_cast<std::size_t>(m)] = static_cast<int>(index % static_cast<std::size_t>(extent()));
        index /= static_cast<std::size_t>(extent());
    }
    return photons;
}

int FockState::photon_in_mode(std::size_t index, int mode) const {
    return static_cast<int>((index / stride(mode)) % static_cast<std::size_t>(extent()));
}

Complex FockState::amplitude(std::initializer_list<int> photons) const {
    return amplitudes_[index_of(std::span<const int>(photons.begin(), photons.size()))];
}

void FockState::set_amplitude(std::initializer_list<int> photons, Complex value) {
    amplitudes_[index_of(std::span<const int>(photons.begin(), photons.size()))] = value;
}

void FockState::add_leak(double mass) {
    if (!(mass >= 0.0)) {
        throw BadParams("leaked mass must be non-negative");
    }
    leaked_norm_ += mass;
}

double FockState::norm_sq() const {
    double total = 0.0;
    for (const Complex& a : amplitudes_) {
        total += std::norm(a);
    }
    return total;
}

bool FockState::is_normalized() const { return std::abs(norm_sq() - 1.0) <= 1e-12; }

bool FockState::is_null() const {
    return std::all_of(amplitudes_.begin(), amplitudes_.end(), [](const Complex& a) { return a == Complex{}; });
}

FockState vacuum(int mode_count, int cutoff) {
    FockState state(mode_count, cutoff);
    state.amplitudes()[0] = 1.0;
    return state;
}

FockState annihilate(const FockState& state, int mode) {
    check_mode(state, mode);
    FockState out(state.mode_count(), state.cutoff());
    out.add_leak(state.leaked_norm());
    const std::size_t step = state.stride(mode);
    auto in = state.amplitudes();
    auto dst = out.amplitudes();
    for (std::size_t i = 0; i < state.size(); ++i) {
        const int n = state.photon_in_mode(i, mode);
        if (n > 0) {
            dst[i - step] = std::sqrt(static_cast<double>(n)) * in[i];
        }
    }
    return out;
}

FockState create(const FockState& state, int mode, double leak_tolerance) {
    check_mode(state, mode);
    FockState out(state.mode_count(), state.cutoff());
    const std::size_t step = state.stride(mode);
    auto in = state.amplitudes();
    auto dst = out.amplitudes();
    double leak = 0.0;
    for (std::size_t i = 0; i < state.size(); ++i) {
        const int n = state.photon_in_mode(i, mode);
        const Complex value = std::sqrt(static_cast<double>(n + 1)) * in[i];
        if (n < state.cutoff()) {
            dst[i + step] = value;
        } else {
            leak += std::norm(value);
        }
    }
    enforce_leak(leak, leak_tolerance, "creation operator");
    out.add_leak(state.leaked_norm() + leak);
    return out;
}

FockState apply_two_mode_squeezer(const FockState& state, int mode_a, int mode_c, double s, double phase,
                                  const TruncationConfig& config) {
    check_distinct(state, mode_a, mode_c);
    if (!std::isfinite(s) || s < 0.0) {
        throw BadParams(fmt::format("squeezing parameter must be finite and >= 0, got {}", s));
    }
    if (config.buffer < 0) {
        throw BadParams("truncation buffer must be >= 0");
    }
    if (s == 0.0) {
        return state;
    }

    const int n_max = state.cutoff();
    const int n_buf = n_max + config.buffer;
    const Complex g = s * std::polar(1.0, phase);

    // One block per photon-number difference d = n_a - n_c; chain index i <-> n_a = max(0, d) + i.
    std::vector<Eigen::MatrixXcd> blocks;
    blocks.reserve(static_cast<std::size_t>(2 * n_max + 1));
    for (int d = -n_max; d <= n_max; ++d) {
        const int lo = std::max(0, d);
        const int len = n_buf + 1 - std::abs(d);
        Eigen::MatrixXcd generator = Eigen::MatrixXcd::Zero(len, len);
        for (int i = 0; i + 1 < len; ++i) {
            const int na = lo + i;
            const int nc = na - d;
            const double c = std::sqrt(static_cast<double>(na + 1) * static_cast<double>(nc + 1));
            generator(i + 1, i) = g * c;
            generator(i, i + 1) = -std::conj(g) * c;
        }
        blocks.emplace_back(generator.exp());
    }

    FockState out(state.mode_count(), n_max);
    const std::size_t sa = state.stride(mode_a);
    const std::size_t sc = state.stride(mode_c);
    auto in = state.amplitudes();
    auto dst = out.amplitudes();
    double leak = 0.0;
    Eigen::VectorXcd v;
    Eigen::VectorXcd w;
    for (std::size_t base : pair_base_offsets(state, mode_a, mode_c)) {
        for (int d = -n_max; d <= n_max; ++d) {
            const int lo = std::max(0, d);
            const int count = n_max + 1 - std::abs(d);
            v.resize(count);
            bool any = false;
            for (int i = 0; i < count; ++i) {
                const int na = lo + i;
                v(i) = in[base + static_cast<std::size_t>(na) * sa + static_cast<std::size_t>(na - d) * sc];
                any = any || v(i) != Complex{};
            }
            if (!any) {
                continue;
            }
            const Eigen::MatrixXcd& u = blocks[static_cast<std::size_t>(d + n_max)];
            w.noalias() = u.leftCols(count) * v;
            for (Eigen::Index i = 0; i < w.size(); ++i) {
                const int na = lo + static_cast<int>(i);
                const int nc = na - d;
                if (na <= n_max && nc <= n_max) {
                    dst[base + static_cast<std::size_t>(na) * sa + static_cast<std::size_t>(nc) * sc] = w(i);
                } else {
                    leak += std::norm(w(i));
                }
            }
        }
    }
    enforce_leak(leak, config.leak_tolerance, "two-mode squeezer");
    out.add_leak(state.leaked_norm() + leak);
    return out;
}

FockState apply_beam_splitter(const FockState& state, int mode_b, int mode_c, Complex t, Complex r,
                              double leak_tolerance) {
    check_distinct(state, mode_b, mode_c);
    if (std::abs(std::norm(t) + std::norm(r) - 1.0) > 1e-12) {
        throw BadParams(fmt::format("beam splitter needs |t|^2 + |r|^2 = 1, got {:.17g}", std::norm(t) + std::norm(r)));
    }
    if (t == Complex{1.0, 0.0} && r == Complex{}) {
        return state;
    }

    // Single-photon map W (column j = image of a_j†) and its anti-Hermitian log.
    Eigen::Matrix2cd single;
    single << t, r, -std::conj(r), std::conj(t);
    const Eigen::Matrix2cd gen = single.log();

    const int n_max = state.cutoff();
    std::vector<std::optional<Eigen::MatrixXcd>> blocks(static_cast<std::size_t>(2 * n_max + 1));
    auto block_for = [&](int total) -> const Eigen::MatrixXcd& {
        auto& slot = blocks[static_cast<std::size_t>(total)];
        if (!slot) {
            // Basis |k, total-k>, k = n_b.
            const int len = total + 1;
            Eigen::MatrixXcd g = Eigen::MatrixXcd::Zero(len, len);
            for (int k = 0; k <= total; ++k) {
                g(k, k) = gen(0, 0) * static_cast<double>(k) + gen(1, 1) * static_cast<double>(total - k);
                if (k < total) {
                    g(k + 1, k) += gen(0, 1) * std::sqrt(static_cast<double>(k + 1) * (total - k));
                }
                if (k > 0) {
                    g(k - 1, k) += gen(1, 0) * std::sqrt(static_cast<double>(k) * (total - k + 1));
                }
            }
            slot = g.exp();
        }
        return *slot;
    };

    FockState out(state.mode_count(), n_max);
    const std::size_t sb = state.stride(mode_b);
    const std::size_t sc = state.stride(mode_c);
    auto in = state.amplitudes();
    auto dst = out.amplitudes();
    double leak = 0.0;
    Eigen::VectorXcd v;
    Eigen::VectorXcd w;
    for (std::size_t base : pair_base_offsets(state, mode_b, mode_c)) {
        for (int total = 0; total <= 2 * n_max; ++total) {
            const int k_lo = std::max(0, total - n_max);
            const int k_hi = std::min(total, n_max);
            const int count = k_hi - k_lo + 1;
            v.resize(count);
            bool any = false;
            for (int i = 0; i < count; ++i) {
                const int k = k_lo + i;
                v(i) = in[base + static_cast<std::size_t>(k) * sb + static_cast<std::size_t>(total - k) * sc];
                any = any || v(i) != Complex{};
            }
            if (!any) {
                continue;
            }
            w.noalias() = block_for(total).middleCols(k_lo, count) * v;
            for (int k = 0; k <= total; ++k) {
                if (k <= n_max && total - k <= n_max) {
                    dst[base + static_cast<std::size_t>(k) * sb + static_cast<std::size_t>(total - k) * sc] = w(k);
                } else {
                    leak += std::norm(w(k));
                }
            }
        }
    }
    enforce_leak(leak, leak_tolerance, "beam splitter");
    out.add_leak(state.leaked_norm() + leak);
    return out;
}

Projection project_photon_pattern(const FockState& state, const std::map<int, int>& pattern) {
    for (const auto& [mode, count] : pattern) {
        check_mode(state, mode);
        if (count < 0 || count > state.cutoff()) {
            throw BadParams(fmt::format("pattern count {} outside [0, {}]", count, state.cutoff()));
        }
    }
    const int remaining = state.mode_count() - static_cast<int>(pattern.size());
    if (remaining < 1) {
        throw BadParams("projection must leave at least one mode");
    }

    FockState out(remaining, state.cutoff());
    out.add_leak(state.leaked_norm());
    auto in = state.amplitudes();
    auto dst = out.amplitudes();
    const std::size_t extent = static_cast<std::size_t>(state.extent());
    for (std::size_t i = 0; i < state.size(); ++i) {
        std::size_t j = 0;
        bool match = true;
        for (int m = 0; m < state.mode_count() && match; ++m) {
            const int n = state.photon_in_mode(i, m);
            if (auto it = pattern.find(m); it != pattern.end()) {
                match = n == it->second;
            } else {
                j = j * extent + static_cast<std::size_t>(n);
            }
        }
        if (match) {
            dst[j] = in[i];
        }
    }

    Projection result{std::move(out), 0.0, false};
    result.probability = result.state.norm_sq();
    if (result.probability <= kNullProbability) {
        result.null = true;
        std::fill(dst.begin(), dst.end(), Complex{});
        return result;
    }
    const double scale = 1.0 / std::sqrt(result.probability);
    for (Complex& a : result.state.amplitudes()) {
        a *= scale;
    }
    return result;
}

double norm_sq(const FockState& state) { return state.norm_sq(); }

FockState normalize(const FockState& state) {
    const double n2 = state.norm_sq();
    if (!(n2 > 0.0)) {
        throw NullStateError("cannot normalize the zero state");
    }
    FockState out = state;
    const double scale = 1.0 / std::sqrt(n2);
    for (Complex& a : out.amplitudes()) {
        a *= scale;
    }
    return out;
}

Complex inner_product(const FockState& bra, const FockState& ket) {
    check_same_shape(bra, ket);
    Complex total{};
    auto a = bra.amplitudes();
    auto b = ket.amplitudes();
    for (std::size_t i = 0; i < a.size(); ++i) {
        total += std::conj(a[i]) * b[i];
    }
    return total;
}

double fidelity(const FockState& a, const FockState& b) {
    if (!a.is_normalized() || !b.is_normalized()) {
        throw BadParams("fidelity requires normalized states");
    }
    return std::clamp(std::norm(inner_product(a, b)), 0.0, 1.0);
}

FockState canonicalize_phase(const FockState& state) {
    FockState out = state;
    for (const Complex& a : state.amplitudes()) {
        if (a != Complex{}) {
            const Complex phase = std::conj(a) / std::abs(a);
            for (Complex& x : out.amplitudes()) {
                x *= phase;
            }
            break;
        }
    }
    return out;
}

FockState with_cutoff(const FockState& state, int cutoff) {
    FockState out(state.mode_count(), cutoff);
    double dropped = 0.0;
    auto in = state.amplitudes();
    for (std::size_t i = 0; i < state.size(); ++i) {
        if (in[i] == Complex{}) {
            continue;
        }
        const std::vector<int> n = state.photons_at(i);
        if (std::all_of(n.begin(), n.end(), [cutoff](int k) { return k <= cutoff; })) {
            out.amplitudes()[out.index_of(n)] = in[i];
        } else {
            dropped += std::norm(in[i]);
        }
    }
    out.add_leak(state.leaked_norm() + dropped);
    return out;
}

FockState tensor_product(const FockState& a, const FockState& b) {
    if (a.cutoff() != b.cutoff()) {
        throw BadParams("tensor product needs equal cutoffs");
    }
    FockState out(a.mode_count() + b.mode_count(), a.cutoff());
    auto dst = out.amplitudes();
    auto x = a.amplitudes();
    auto y = b.amplitudes();
    for (std::size_t i = 0; i < x.size(); ++i) {
        for (std::size_t j = 0; j < y.size(); ++j) {
            dst[i * y.size() + j] = x[i] * y[j];
        }
    }
    out.add_leak(a.leaked_norm() + b.leaked_norm());
    return out;
}

JointPnd joint_pnd(const FockState& state) {
    if (state.mode_count() != 2) {
        throw BadParams("joint photon-number distribution needs a two-mode state");
    }
    const double n2 = state.norm_sq();
    if (!(n2 > 0.0)) {
        throw NullStateError("joint photon-number distribution of the zero state");
    }
    JointPnd pnd;
    pnd.cutoff = state.cutoff();
    pnd.probabilities.reserve(state.size());
    for (const Complex& a : state.amplitudes()) {
        pnd.probabilities.push_back(std::norm(a) / n2);
    }
    return pnd;
}

double moment(const JointPnd& pnd, int p, int q) {
    if (p < 0 || q < 0) {
        throw BadParams("moment orders must be non-negative");
    }
    double total = 0.0;
    for (int ns = 0; ns < pnd.extent(); ++ns) {
        const double ws = std::pow(static_cast<double>(ns), p);
        for (int ni = 0; ni < pnd.extent(); ++ni) {
            total += ws * std::pow(static_cast<double>(ni), q) * pnd.at(ns, ni);
        }
    }
    return total;
}

double moment(const FockState& state, int p, int q) { return moment(joint_pnd(state), p, q); }

double mean_photon_number(const FockState& state, int mode) {
    check_mode(state, mode);
    const double n2 = state.norm_sq();
    if (!(n2 > 0.0)) {
        throw NullStateError("mean photon number of the zero state");
    }
    double total = 0.0;
    auto amps = state.amplitudes();
    for (std::size_t i = 0; i < amps.size(); ++i) {
        total += state.photon_in_mode(i, mode) * std::norm(amps[i]);
    }
    return total / n2;
}

nlohmann::json to_json(const FockState& state) {
    nlohmann::json amps = nlohmann::json::array();
    for (const Complex& a : state.amplitudes()) {
        amps.push_back({a.real(), a.imag()});
    }
    return {{"mode_count", state.mode_count()},
            {"cutoff", state.cutoff()},
            {"amplitudes", std::move(amps)},
            {"leaked_norm", state.leaked_norm()}};
}

FockState state_from_json(const nlohmann::json& json) {
    try {
        FockState state(json.at("mode_count").get<int>(), json.at("cutoff").get<int>());
        const auto& amps = json.at("amplitudes");
        if (!amps.is_array() || amps.size() != state.size()) {
            throw ParseError(fmt::format("expected {} amplitudes", state.size()));
        }
        auto dst = state.amplitudes();
        for (std::size_t i = 0; i < dst.size(); ++i) {
            const auto& pair = amps[i];
            if (!pair.is_array() || pair.size() != 2) {
                throw ParseError("amplitudes must be [re, im] pairs");
            }
            dst[i] = Complex{pair[0].get<double>(), pair[1].get<double>()};
        }
        state.add_leak(json.value("leaked_norm", 0.0));
        return state;
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(std::string("malformed state JSON: ") + e.what());
    }
}

}  // namespace ghostlight
