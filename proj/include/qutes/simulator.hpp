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
#include <complex>
#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "qutes/qir.hpp"

namespace qutes {

class SimError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

inline constexpr int kDefaultQubitCap = 24;

/// Counter-based deterministic generator: a splitmix64 walk whose initial
/// state is keyed by (seed, stream), so streams are order-independent.
class CounterRng {
public:
    CounterRng(std::uint64_t seed, std::uint64_t stream)
        : state_(mix(seed + 0x9E3779B97F4A7C15ull * (stream + 1))) {}

    std::uint64_t next_u64() {
        state_ += 0x9E3779B97F4A7C15ull;
        return mix(state_);
    }

    /// Uniform in [0, 1) with 53 random bits.
    double next_double() {
        return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
    }

private:
    static std::uint64_t mix(std::uint64_t z) {
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
        return z ^ (z >> 31);
    }
    std::uint64_t state_;
};

struct StateVector {
    int num_qubits = 0;
    std::vector<std::complex<double>> amps;

    static StateVector zero(int n, int cap = kDefaultQubitCap) {
        if (n < 0 || n > cap)
            throw SimError("qubit count " + std::to_string(n) + " exceeds cap " +
                           std::to_string(cap));
        StateVector s;
        s.num_qubits = n;
        s.amps.assign(std::size_t{1} << n, {0.0, 0.0});
        s.amps[0] = {1.0, 0.0};
        return s;
    }

    double norm_sq() const {
        double n = 0.0;
        for (const auto& a : amps)
            n += std::norm(a);
        return n;
    }
};

/// Fix the first amplitude with |a| > 1e-12 to be real-positive; global
/// phase is unobservable so equality checks use this canonical form.
inline void normalize_global_phase(StateVector& s) {
    for (const auto& a : s.amps) {
        const double m = std::abs(a);
        if (m > 1e-12) {
            const std::complex<double> factor = std::conj(a) / m;
            for (auto& x : s.amps)
                x *= factor;
            return;
        }
    }
}

/// A gate with operands resolved to flat qubit indices.
struct ResolvedOp {
    GateKind kind;
    std::vector<int> qubits;
    double theta = 0.0;
    int slot = -1;
};

inline ResolvedOp resolve_op(const GateOp& op, const std::vector<int>& bases) {
    ResolvedOp r;
    r.kind = op.kind;
    r.theta = op.theta;
    r.slot = op.slot;
    r.qubits.reserve(op.qubits.size());
    for (const auto& q : op.qubits) {
        if (q.reg < 0 || static_cast<std::size_t>(q.reg) >= bases.size() ||
            bases[static_cast<std::size_t>(q.reg)] < 0)
            throw SimError("gate references unknown register");
        r.qubits.push_back(bases[static_cast<std::size_t>(q.reg)] + q.offset);
    }
    return r;
}

namespace kernels {

inline void check_qubit(const StateVector& s, int q) {
    if (q < 0 || q >= s.num_qubits)
        throw SimError("qubit index " + std::to_string(q) + " out of range");
}

inline void apply_h(StateVector& s, int q) {
    check_qubit(s, q);
    const std::size_t bit = std::size_t{1} << q;
    const double inv_sqrt2 = 0.7071067811865476;
    for (std::size_t i = 0; i < s.amps.size(); ++i) {
        if (i & bit)
            continue;
        const auto a0 = s.amps[i];
        const auto a1 = s.amps[i | bit];
        s.amps[i] = (a0 + a1) * inv_sqrt2;
        s.amps[i | bit] = (a0 - a1) * inv_sqrt2;
    }
}

inline void apply_x(StateVector& s, int q) {
    check_qubit(s, q);
    const std::size_t bit = std::size_t{1} << q;
    for (std::size_t i = 0; i < s.amps.size(); ++i)
        if (!(i & bit))
            std::swap(s.amps[i], s.amps[i | bit]);
}

inline void apply_y(StateVector& s, int q) {
    check_qubit(s, q);
    const std::size_t bit = std::size_t{1} << q;
    const std::complex<double> im{0.0, 1.0};
    for (std::size_t i = 0; i < s.amps.size(); ++i) {
        if (i & bit)
            continue;
        const auto a0 = s.amps[i];
        const auto a1 = s.amps[i | bit];
        s.amps[i] = -im * a1;
        s.amps[i | bit] = im * a0;
    }
}

inline void apply_z(StateVector& s, int q) {
    check_qubit(s, q);
    const std::size_t bit = std::size_t{1} << q;
    for (std::size_t i = 0; i < s.amps.size(); ++i)
        if (i & bit)
            s.amps[i] = -s.amps[i];
}

inline void apply_p(StateVector& s, int q, double theta) {
    check_qubit(s, q);
    const std::size_t bit = std::size_t{1} << q;
    const std::complex<double> phase = std::polar(1.0, theta);
    for (std::size_t i = 0; i < s.amps.size(); ++i)
        if (i & bit)
            s.amps[i] *= phase;
}

inline void apply_swap(StateVector& s, int a, int b) {
    check_qubit(s, a);
    check_qubit(s, b);
    const std::size_t ba = std::size_t{1} << a;
    const std::size_t bb = std::size_t{1} << b;
    for (std::size_t i = 0; i < s.amps.size(); ++i)
        if ((i & ba) && !(i & bb))
            std::swap(s.amps[i], s.amps[(i & ~ba) | bb]);
}

/// controls all-1 gate the target; multi-controlled gates are applied by
/// masking rather than matrix expansion.
inline void apply_mcx(StateVector& s, const std::vector<int>& controls, int target) {
    check_qubit(s, target);
    std::size_t mask = 0;
    for (int c : controls) {
        check_qubit(s, c);
        mask |= std::size_t{1} << c;
    }
    const std::size_t tbit = std::size_t{1} << target;
    for (std::size_t i = 0; i < s.amps.size(); ++i)
        if ((i & mask) == mask && !(i & tbit))
            std::swap(s.amps[i], s.amps[i | tbit]);
}

inline void apply_mcy(StateVector& s, const std::vector<int>& controls, int target) {
    check_qubit(s, target);
    std::size_t mask = 0;
    for (int c : controls) {
        check_qubit(s, c);
        mask |= std::size_t{1} << c;
    }
    const std::size_t tbit = std::size_t{1} << target;
    const std::complex<double> im{0.0, 1.0};
    for (std::size_t i = 0; i < s.amps.size(); ++i) {
        if ((i & mask) != mask || (i & tbit))
            continue;
        const auto a0 = s.amps[i];
        const auto a1 = s.amps[i | tbit];
        s.amps[i] = -im * a1;
        s.amps[i | tbit] = im * a0;
    }
}

inline void apply_mcz(StateVector& s, const std::vector<int>& controls, int target) {
    check_qubit(s, target);
    std::size_t mask = std::size_t{1} << target;
    for (int c : controls) {
        check_qubit(s, c);
        mask |= std::size_t{1} << c;
    }
    for (std::size_t i = 0; i < s.amps.size(); ++i)
        if ((i & mask) == mask)
            s.amps[i] = -s.amps[i];
}

inline void apply_mcp(StateVector& s, const std::vector<int>& controls, int target,
                      double theta) {
    check_qubit(s, target);
    std::size_t mask = std::size_t{1} << target;
    for (int c : controls) {
        check_qubit(s, c);
        mask |= std::size_t{1} << c;
    }
    const std::complex<double> phase = std::polar(1.0, theta);
    for (std::size_t i = 0; i < s.amps.size(); ++i)
        if ((i & mask) == mask)
            s.amps[i] *= phase;
}

} // namespace kernels

/// Unitary gate application. Measure and Reset are trajectory operations and
/// are rejected here; Barrier is a no-op.
inline void apply_gate(StateVector& s, const ResolvedOp& op) {
    using namespace kernels;
    switch (op.kind) {
        case GateKind::H: apply_h(s, op.qubits[0]); return;
        case GateKind::X: apply_x(s, op.qubits[0]); return;
        case GateKind::Y: apply_y(s, op.qubits[0]); return;
        case GateKind::Z: apply_z(s, op.qubits[0]); return;
        case GateKind::P: apply_p(s, op.qubits[0], op.theta); return;
        case GateKind::CX:
            apply_mcx(s, {op.qubits[0]}, op.qubits[1]);
            return;
        case GateKind::Swap: apply_swap(s, op.qubits[0], op.qubits[1]); return;
        case GateKind::MCX: {
            std::vector<int> controls(op.qubits.begin(), op.qubits.end() - 1);
            apply_mcx(s, controls, op.qubits.back());
            return;
        }
        case GateKind::MCY: {
            std::vector<int> controls(op.qubits.begin(), op.qubits.end() - 1);
            apply_mcy(s, controls, op.qubits.back());
            return;
        }
        case GateKind::MCZ: {
            std::vector<int> controls(op.qubits.begin(), op.qubits.end() - 1);
            apply_mcz(s, controls, op.qubits.back());
            return;
        }
        case GateKind::MCP: {
            std::vector<int> controls(op.qubits.begin(), op.qubits.end() - 1);
            apply_mcp(s, controls, op.qubits.back(), op.theta);
            return;
        }
        case GateKind::Barrier: return;
        case GateKind::Measure:
        case GateKind::Reset:
            throw SimError("apply_gate cannot execute non-unitary operations");
    }
}

inline void apply_gate(StateVector& s, const GateOp& op, const Circuit& circuit) {
    apply_gate(s, resolve_op(op, circuit.qubit_bases()));
}

/// Born-rule measurement of the listed qubits, in list order, collapsing and
/// renormalizing in place. Returns one bit per listed qubit.
inline std::vector<int> measure(StateVector& s, const std::vector<int>& qubits,
                                CounterRng& rng) {
    std::vector<int> bits;
    bits.reserve(qubits.size());
    for (int q : qubits) {
        kernels::check_qubit(s, q);
        const std::size_t bit = std::size_t{1} << q;
        double p1 = 0.0;
        for (std::size_t i = 0; i < s.amps.size(); ++i)
            if (i & bit)
                p1 += std::norm(s.amps[i]);
        const int outcome = rng.next_double() < p1 ? 1 : 0;
        const double p = outcome ? p1 : 1.0 - p1;
        const double scale = p > 0.0 ? 1.0 / std::sqrt(p) : 0.0;
        for (std::size_t i = 0; i < s.amps.size(); ++i) {
            const bool keep = ((i & bit) != 0) == (outcome == 1);
            s.amps[i] = keep ? s.amps[i] * scale : std::complex<double>{0.0, 0.0};
        }
        bits.push_back(outcome);
    }
    return bits;
}

/// Reset to |0>: measure, then flip when the outcome was 1.
inline void reset_qubit(StateVector& s, int q, CounterRng& rng) {
    const std::vector<int> one{q};
    if (measure(s, one, rng)[0] == 1)
        kernels::apply_x(s, q);
}

struct ShotHistogram {
    std::map<std::string, std::int64_t> counts;
    std::int64_t shots = 0;
};

namespace detail {

inline std::string slot_bits_string(const std::vector<int>& bits) {
    std::string s;
    for (auto it = bits.rbegin(); it != bits.rend(); ++it)
        s.push_back(*it ? '1' : '0');
    return s;
}

} // namespace detail

/// One seeded trajectory through a finished circuit: preparation is already
/// part of `ops` for assembled circuits. Returns the final state and the
/// per-slot measured bits.
struct Trajectory {
    StateVector state;
    std::vector<std::vector<int>> slot_bits; // indexed by slot id
};

inline Trajectory run_trajectory(const Circuit& circuit, CounterRng rng,
                                 int cap = kDefaultQubitCap) {
    Trajectory t;
    t.state = StateVector::zero(circuit.total_qubits(), cap);
    t.slot_bits.resize(circuit.slots.size());
    const auto bases = circuit.qubit_bases();
    for (const auto& op : circuit.ops) {
        const ResolvedOp r = resolve_op(op, bases);
        switch (r.kind) {
            case GateKind::Measure:
                t.slot_bits[static_cast<std::size_t>(r.slot)] = measure(t.state, r.qubits, rng);
                break;
            case GateKind::Reset:
                reset_qubit(t.state, r.qubits[0], rng);
                break;
            default:
                apply_gate(t.state, r);
                break;
        }
    }
    return t;
}

/// Shot histogram keyed by the concatenated classical slots, slot 0
/// rightmost, space separated. Shot s draws from the (seed, s) stream, so
/// the result is independent of execution order.
inline ShotHistogram run(const Circuit& circuit, std::int64_t shots, std::uint64_t seed,
                         int cap = kDefaultQubitCap) {
    if (shots < 1)
        throw SimError("shot count must be at least 1");
    ShotHistogram h;
    h.shots = shots;
    for (std::int64_t s = 0; s < shots; ++s) {
        Trajectory t = run_trajectory(circuit, CounterRng(seed, static_cast<std::uint64_t>(s)),
                                      cap);
        std::string key;
        for (std::size_t slot = circuit.slots.size(); slot-- > 0;) {
            if (!key.empty())
                key += ' ';
            key += detail::slot_bits_string(t.slot_bits[slot]);
        }
        if (key.empty())
            key = "";
        ++h.counts[key];
    }
    return h;
}

/// Exact pre-measurement state; rejects circuits containing Measure or
/// Reset. Property tests use this as the oracle access point.
inline StateVector statevector_of(const Circuit& circuit, int cap = kDefaultQubitCap) {
    StateVector s = StateVector::zero(circuit.total_qubits(), cap);
    const auto bases = circuit.qubit_bases();
    for (const auto& op : circuit.ops) {
        if (op.kind == GateKind::Measure)
            throw SimError("statevector_of requires a measure-free circuit");
        if (op.kind == GateKind::Reset)
            throw SimError("statevector_of requires a reset-free circuit");
        apply_gate(s, resolve_op(op, bases));
    }
    return s;
}

} // namespace qutes
