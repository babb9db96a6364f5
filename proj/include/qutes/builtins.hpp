// Copyright 2026 The Qutes C++ Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <string>
#include <vector>

#include "qutes/qir.hpp"

namespace qutes {

class BuiltinError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// X gates mapping |0...0> to the basis state of `value`, qubit 0 least
/// significant.
inline std::vector<GateOp> encode_classical(std::uint64_t value, const RegisterHandle& target) {
    const std::uint64_t limit =
        target.width >= 64 ? ~0ull : ((std::uint64_t{1} << target.width) - 1);
    if (value > limit)
        throw BuiltinError("value " + std::to_string(value) + " does not fit register '" +
                           target.name + "' of width " + std::to_string(target.width));
    std::vector<GateOp> ops;
    for (int b = 0; b < target.width; ++b)
        if ((value >> b) & 1ull)
            ops.push_back(GateOp::x(target.qubit(b)));
    return ops;
}

inline std::vector<GateOp> encode_classical(bool value, const RegisterHandle& target) {
    return encode_classical(static_cast<std::uint64_t>(value ? 1 : 0), target);
}

/// Bitstring value of a qustring register: the leftmost character sits on
/// the highest qubit index.
inline std::uint64_t bitstring_to_value(const std::string& bits) {
    std::uint64_t v = 0;
    for (std::size_t p = 0; p < bits.size(); ++p) {
        const char c = bits[p];
        if (c != '0' && c != '1')
            throw BuiltinError(std::string("non-bitstring character '") + c +
                               "' in quantum string");
        const int qubit = static_cast<int>(bits.size() - 1 - p);
        if (c == '1')
            v |= std::uint64_t{1} << qubit;
    }
    return v;
}

inline std::string value_to_bitstring(std::uint64_t v, int width) {
    std::string s(static_cast<std::size_t>(width), '0');
    for (int p = 0; p < width; ++p)
        if ((v >> (width - 1 - p)) & 1ull)
            s[static_cast<std::size_t>(p)] = '1';
    return s;
}

inline std::vector<GateOp> encode_classical(const std::string& bits,
                                            const RegisterHandle& target) {
    if (static_cast<int>(bits.size()) != target.width)
        throw BuiltinError("bitstring length " + std::to_string(bits.size()) +
                           " does not match register width " + std::to_string(target.width));
    return encode_classical(bitstring_to_value(bits), target);
}

/// QFT without the final qubit reversal, the form the phase adder uses:
/// after it, qubit j holds (|0> + exp(2*pi*i*b / 2^(j+1)) |1>)/sqrt(2).
inline std::vector<GateOp> synth_qft(const RegisterHandle& reg) {
    std::vector<GateOp> ops;
    for (int j = reg.width - 1; j >= 0; --j) {
        ops.push_back(GateOp::h(reg.qubit(j)));
        for (int k = j - 1; k >= 0; --k) {
            const double theta = std::numbers::pi / static_cast<double>(1ull << (j - k));
            ops.push_back(GateOp::mcp({reg.qubit(k)}, reg.qubit(j), theta));
        }
    }
    return ops;
}

inline std::vector<GateOp> synth_iqft(const RegisterHandle& reg) {
    std::vector<GateOp> forward = synth_qft(reg);
    std::vector<GateOp> ops;
    for (auto it = forward.rbegin(); it != forward.rend(); ++it) {
        GateOp op = *it;
        if (op.kind == GateKind::MCP || op.kind == GateKind::P)
            op.theta = -op.theta;
        ops.push_back(std::move(op));
    }
    return ops;
}

/// Draper adder: |a>|b> -> |a>|(a+b) mod 2^w>. Modular, no carry ancillas,
/// works on superposed inputs by linearity.
inline std::vector<GateOp> synth_add(const RegisterHandle& a, const RegisterHandle& b) {
    if (a.width != b.width)
        throw BuiltinError("adder operands must have equal widths (" +
                           std::to_string(a.width) + " vs " + std::to_string(b.width) + ")");
    std::vector<GateOp> ops = synth_qft(b);
    for (int j = 0; j < b.width; ++j)
        for (int k = 0; k <= j; ++k) {
            const double theta = std::numbers::pi / static_cast<double>(1ull << (j - k));
            ops.push_back(GateOp::mcp({a.qubit(k)}, b.qubit(j), theta));
        }
    const auto iqft = synth_iqft(b);
    ops.insert(ops.end(), iqft.begin(), iqft.end());
    return ops;
}

enum class ShiftDirection { Left, Right };

struct ShiftSpec {
    RegisterHandle reg;
    std::int64_t amount = 0;
    ShiftDirection direction = ShiftDirection::Left;
};

namespace detail {

/// One parallel layer of swaps reversing qubit positions [lo, hi].
inline void append_reversal(std::vector<GateOp>& ops, const RegisterHandle& reg, int lo,
                            int hi) {
    while (lo < hi) {
        ops.push_back(GateOp::swap(reg.qubit(lo), reg.qubit(hi)));
        ++lo;
        --hi;
    }
}

} // namespace detail

/// Constant-depth cyclic rotation: the permutation q_i -> q_((i+k) mod w)
/// for a left shift, realized as two layers of disjoint swaps (reverse the
/// two blocks, then reverse the whole register). At most w swaps total.
inline std::vector<GateOp> synth_cyclic_shift(const ShiftSpec& spec) {
    const int w = spec.reg.width;
    std::vector<GateOp> ops;
    if (w <= 1)
        return ops;
    std::int64_t k = spec.amount % w;
    if (k < 0)
        k += w;
    if (spec.direction == ShiftDirection::Right)
        k = (w - k) % w;
    if (k == 0)
        return ops;
    // layer 1: reverse [0, w-k-1] and [w-k, w-1]; layer 2: reverse all.
    const int split = w - static_cast<int>(k);
    detail::append_reversal(ops, spec.reg, 0, split - 1);
    detail::append_reversal(ops, spec.reg, split, w - 1);
    detail::append_reversal(ops, spec.reg, 0, w - 1);
    return ops;
}

/// Classical oracle for the rotation the swap network must implement:
/// bit i of the input appears at bit (i+k) mod w of the output.
inline std::uint64_t rotate_left_value(std::uint64_t v, int k, int w) {
    if (w <= 0)
        return v;
    k %= w;
    if (k < 0)
        k += w;
    const std::uint64_t mask = w >= 64 ? ~0ull : ((std::uint64_t{1} << w) - 1);
    v &= mask;
    if (k == 0)
        return v;
    return ((v << k) | (v >> (w - k))) & mask;
}

/// floor((pi/4) * sqrt(N / M)) Grover iterations.
inline int grover_iterations(std::uint64_t search_space, std::uint64_t assumed_matches) {
    if (search_space < 1)
        throw BuiltinError("search space must be at least 1");
    if (assumed_matches < 1 || assumed_matches > search_space)
        throw BuiltinError("assumed match count must be in [1, N]");
    const double ratio = static_cast<double>(search_space) /
                         static_cast<double>(assumed_matches);
    return static_cast<int>(std::floor(std::numbers::pi / 4.0 * std::sqrt(ratio)));
}

struct GroverPlan {
    RegisterHandle index_register;
    std::vector<RegisterHandle> ancilla;
    std::vector<GateOp> oracle_ops;
    std::vector<GateOp> diffusion_ops;
    int iterations = 0;
    int position_count = 0; // P = n - m + 1 valid starting positions
};

/// Qubit holding character `position` of a width-n qustring register.
inline QubitRef qustring_char_qubit(const RegisterHandle& reg, int position) {
    return reg.qubit(reg.width - 1 - position);
}

/// Phase oracle flipping |i>|t> exactly when t[i..i+m) == pattern. Per
/// position: CX the window bits onto the comparison ancillas, X them by the
/// classical pattern so all-ones means match, phase-flip through an MCZ
/// with the index controls conjugated to select i, then uncompute. Every
/// ancilla returns to |0> on all inputs.
inline std::vector<GateOp> grover_oracle_ops(const RegisterHandle& index,
                                             const RegisterHandle& compare_ancilla,
                                             const RegisterHandle& target,
                                             const std::string& pattern, int position_count) {
    const int m = static_cast<int>(pattern.size());
    std::vector<GateOp> ops;
    for (int i = 0; i < position_count; ++i) {
        std::vector<GateOp> window;
        for (int j = 0; j < m; ++j) {
            const QubitRef tq = qustring_char_qubit(target, i + j);
            const QubitRef aq = compare_ancilla.qubit(j);
            // anc = NOT(t XOR p): 1 exactly when the characters agree
            window.push_back(GateOp::cx(tq, aq));
            if (pattern[static_cast<std::size_t>(j)] == '0')
                window.push_back(GateOp::x(aq));
        }
        std::vector<GateOp> select;
        for (int b = 0; b < index.width; ++b)
            if (!((static_cast<std::uint64_t>(i) >> b) & 1ull))
                select.push_back(GateOp::x(index.qubit(b)));

        ops.insert(ops.end(), window.begin(), window.end());
        ops.insert(ops.end(), select.begin(), select.end());

        std::vector<QubitRef> controls;
        for (int b = 0; b < index.width; ++b)
            controls.push_back(index.qubit(b));
        for (int j = 0; j + 1 < m; ++j)
            controls.push_back(compare_ancilla.qubit(j));
        ops.push_back(GateOp::mcz(controls, compare_ancilla.qubit(m - 1)));

        for (auto it = select.rbegin(); it != select.rend(); ++it)
            ops.push_back(*it);
        for (auto it = window.rbegin(); it != window.rend(); ++it)
            ops.push_back(*it);
    }
    return ops;
}

/// Inversion about the mean on the index register: H X (MCZ) X H.
inline std::vector<GateOp> grover_diffusion_ops(const RegisterHandle& index) {
    std::vector<GateOp> ops;
    for (int b = 0; b < index.width; ++b)
        ops.push_back(GateOp::h(index.qubit(b)));
    for (int b = 0; b < index.width; ++b)
        ops.push_back(GateOp::x(index.qubit(b)));
    if (index.width == 1) {
        ops.push_back(GateOp::z(index.qubit(0)));
    } else {
        std::vector<QubitRef> controls;
        for (int b = 0; b + 1 < index.width; ++b)
            controls.push_back(index.qubit(b));
        ops.push_back(GateOp::mcz(controls, index.qubit(index.width - 1)));
    }
    for (int b = 0; b < index.width; ++b)
        ops.push_back(GateOp::x(index.qubit(b)));
    for (int b = 0; b < index.width; ++b)
        ops.push_back(GateOp::h(index.qubit(b)));
    return ops;
}

inline void validate_pattern(const std::string& pattern) {
    if (pattern.empty())
        throw BuiltinError("empty search pattern");
    for (char c : pattern)
        if (c != '0' && c != '1')
            throw BuiltinError(std::string("non-bitstring character '") + c +
                               "' in search pattern");
}

/// Plan a Grover substring search of `pattern` over a qustring register.
/// Declares the index and comparison-ancilla registers on the handler.
/// Index states beyond the last valid position are padding and are never
/// marked; M is assumed 1 because the match count is unknown up front.
inline GroverPlan plan_grover_substring(CircuitHandler& handler, const RegisterHandle& target,
                                        const std::string& pattern,
                                        const std::string& name_prefix = "grover") {
    validate_pattern(pattern);
    const int n = target.width;
    const int m = static_cast<int>(pattern.size());
    if (m > n)
        throw BuiltinError("pattern of length " + std::to_string(m) +
                           " cannot occur in a string of length " + std::to_string(n));
    const int positions = n - m + 1;
    int index_width = 1;
    while ((1 << index_width) < positions)
        ++index_width;

    auto unique_name = [&](const std::string& base) {
        if (!handler.has_register_name(base))
            return base;
        int suffix = 1;
        while (handler.has_register_name(base + "_" + std::to_string(suffix)))
            ++suffix;
        return base + "_" + std::to_string(suffix);
    };

    GroverPlan plan;
    plan.position_count = positions;
    plan.index_register =
        handler.declare_register(unique_name(name_prefix + "_idx"), index_width,
                                 InitialState::zero());
    const RegisterHandle anc = handler.declare_register(unique_name(name_prefix + "_cmp"), m,
                                                        InitialState::zero());
    plan.ancilla.push_back(anc);
    plan.oracle_ops = grover_oracle_ops(plan.index_register, anc, target, pattern, positions);
    plan.diffusion_ops = grover_diffusion_ops(plan.index_register);
    plan.iterations = grover_iterations(std::uint64_t{1} << index_width, 1);
    return plan;
}

} // namespace qutes
