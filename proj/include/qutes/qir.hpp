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

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <deque>
#include <map>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

namespace qutes {

class QirError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Width in qubits needed to hold `value` as a basis state.
inline int basis_width(std::uint64_t value) {
    int w = 0;
    while (value > 0) {
        ++w;
        value >>= 1;
    }
    return std::max(1, w);
}

struct InitialState {
    enum class Kind { Zero, Basis, Superposition };
    Kind kind = Kind::Zero;
    std::uint64_t basis_value = 0;
    std::vector<std::uint64_t> values; // distinct basis values, superposition only

    static InitialState zero() { return {}; }
    static InitialState basis(std::uint64_t v) {
        InitialState s;
        s.kind = Kind::Basis;
        s.basis_value = v;
        return s;
    }
    static InitialState superposition(std::vector<std::uint64_t> vs) {
        InitialState s;
        s.kind = Kind::Superposition;
        s.values = std::move(vs);
        return s;
    }

    void validate(int width) const {
        const std::uint64_t limit =
            width >= 64 ? ~0ull : ((std::uint64_t{1} << width) - 1);
        if (kind == Kind::Basis && basis_value > limit)
            throw QirError("initial basis value " + std::to_string(basis_value) +
                           " out of range for width " + std::to_string(width));
        if (kind == Kind::Superposition) {
            if (values.empty())
                throw QirError("superposition initial state must list at least one value");
            std::set<std::uint64_t> seen;
            for (auto v : values) {
                if (v > limit)
                    throw QirError("superposition value " + std::to_string(v) +
                                   " out of range for width " + std::to_string(width));
                if (!seen.insert(v).second)
                    throw QirError("superposition values must be distinct");
            }
        }
    }
};

/// (register id, qubit offset); offset 0 is the least significant qubit.
struct QubitRef {
    int reg = -1;
    int offset = 0;
    bool operator==(const QubitRef& o) const { return reg == o.reg && offset == o.offset; }
    bool operator<(const QubitRef& o) const {
        return reg != o.reg ? reg < o.reg : offset < o.offset;
    }
};

enum class GateKind { H, X, Y, Z, P, CX, Swap, MCX, MCY, MCZ, MCP, Measure, Reset, Barrier };

inline const char* gate_kind_name(GateKind k) {
    switch (k) {
        case GateKind::H: return "h";
        case GateKind::X: return "x";
        case GateKind::Y: return "y";
        case GateKind::Z: return "z";
        case GateKind::P: return "p";
        case GateKind::CX: return "cx";
        case GateKind::Swap: return "swap";
        case GateKind::MCX: return "mcx";
        case GateKind::MCY: return "mcy";
        case GateKind::MCZ: return "mcz";
        case GateKind::MCP: return "mcp";
        case GateKind::Measure: return "measure";
        case GateKind::Reset: return "reset";
        case GateKind::Barrier: return "barrier";
    }
    return "?";
}

/// One logged operation. For controlled kinds the last qubit is the target
/// and the preceding ones are controls. Measure lists the measured qubits in
/// ascending significance and names the destination classical slot.
struct GateOp {
    GateKind kind = GateKind::Barrier;
    std::vector<QubitRef> qubits;
    double theta = 0.0; // P / MCP
    int slot = -1;      // Measure

    static GateOp h(QubitRef q) { return {GateKind::H, {q}}; }
    static GateOp x(QubitRef q) { return {GateKind::X, {q}}; }
    static GateOp y(QubitRef q) { return {GateKind::Y, {q}}; }
    static GateOp z(QubitRef q) { return {GateKind::Z, {q}}; }
    static GateOp p(QubitRef q, double theta) { return {GateKind::P, {q}, theta}; }
    static GateOp cx(QubitRef c, QubitRef t) { return {GateKind::CX, {c, t}}; }
    static GateOp swap(QubitRef a, QubitRef b) { return {GateKind::Swap, {a, b}}; }
    static GateOp mcx(std::vector<QubitRef> controls, QubitRef target) {
        controls.push_back(target);
        return {GateKind::MCX, std::move(controls)};
    }
    static GateOp mcy(std::vector<QubitRef> controls, QubitRef target) {
        controls.push_back(target);
        return {GateKind::MCY, std::move(controls)};
    }
    static GateOp mcz(std::vector<QubitRef> controls, QubitRef target) {
        controls.push_back(target);
        return {GateKind::MCZ, std::move(controls)};
    }
    static GateOp mcp(std::vector<QubitRef> controls, QubitRef target, double theta) {
        controls.push_back(target);
        return {GateKind::MCP, std::move(controls), theta};
    }
    static GateOp measure(std::vector<QubitRef> qubits, int slot) {
        GateOp op{GateKind::Measure, std::move(qubits)};
        op.slot = slot;
        return op;
    }
    static GateOp reset(QubitRef q) { return {GateKind::Reset, {q}}; }
    static GateOp barrier(std::vector<QubitRef> qubits) {
        return {GateKind::Barrier, std::move(qubits)};
    }

    bool operator==(const GateOp& o) const {
        return kind == o.kind && qubits == o.qubits && theta == o.theta && slot == o.slot;
    }
};

struct RegisterHandle {
    int id = -1;
    std::string name;
    int width = 0;
    InitialState init;

    QubitRef qubit(int offset) const { return {id, offset}; }
};

struct ClassicalSlot {
    int id = -1;
    int width = 0;
};

struct Circuit {
    std::vector<RegisterHandle> registers;
    std::vector<GateOp> ops;
    std::vector<ClassicalSlot> slots;

    int total_qubits() const {
        int n = 0;
        for (const auto& r : registers)
            n += r.width;
        return n;
    }

    /// Base flat-qubit index per register id; registers are laid out in
    /// declaration order, register qubit 0 least significant globally.
    std::vector<int> qubit_bases() const {
        int max_id = -1;
        for (const auto& r : registers)
            max_id = std::max(max_id, r.id);
        std::vector<int> bases(static_cast<std::size_t>(max_id + 1), -1);
        int base = 0;
        for (const auto& r : registers) {
            bases[static_cast<std::size_t>(r.id)] = base;
            base += r.width;
        }
        return bases;
    }

    const RegisterHandle* find_register(int id) const {
        for (const auto& r : registers)
            if (r.id == id)
                return &r;
        return nullptr;
    }
};

namespace detail {

/// Ry(theta) out of the available gate set, up to a global phase of
/// exp(i*theta/2):  P(pi/2) H P(theta) H P(-pi/2).
inline void append_ry(std::vector<GateOp>& ops, QubitRef q, double theta) {
    constexpr double half_pi = 1.5707963267948966;
    ops.push_back(GateOp::p(q, -half_pi));
    ops.push_back(GateOp::h(q));
    ops.push_back(GateOp::p(q, theta));
    ops.push_back(GateOp::h(q));
    ops.push_back(GateOp::p(q, half_pi));
}

/// Multi-controlled Ry via the standard halving conjugation
/// Ry(t/2) MCX Ry(-t/2) MCX; the composite-Ry global phases cancel.
inline void append_mcry(std::vector<GateOp>& ops, const std::vector<QubitRef>& controls,
                        QubitRef target, double theta) {
    if (controls.empty()) {
        append_ry(ops, target, theta);
        return;
    }
    append_ry(ops, target, theta / 2.0);
    ops.push_back(GateOp::mcx(controls, target));
    append_ry(ops, target, -theta / 2.0);
    ops.push_back(GateOp::mcx(controls, target));
}

inline void append_mcx_or_x(std::vector<GateOp>& ops, const std::vector<QubitRef>& controls,
                            QubitRef target) {
    if (controls.empty())
        ops.push_back(GateOp::x(target));
    else
        ops.push_back(GateOp::mcx(controls, target));
}

/// Recursive amplitude splitting over the sorted value tree: handle bit
/// `bit` (MSB first), conditioning the recursion on the path taken so far.
inline void superposition_node(std::vector<GateOp>& ops, const RegisterHandle& reg, int bit,
                               const std::vector<std::uint64_t>& values,
                               std::vector<QubitRef>& path_controls,
                               std::vector<QubitRef>& zero_conjugated) {
    if (bit < 0)
        return;
    std::vector<std::uint64_t> zeros, ones;
    for (auto v : values) {
        if ((v >> bit) & 1ull)
            ones.push_back(v);
        else
            zeros.push_back(v);
    }
    const QubitRef q = reg.qubit(bit);
    if (ones.empty()) {
        superposition_node(ops, reg, bit - 1, zeros, path_controls, zero_conjugated);
        return;
    }
    if (zeros.empty()) {
        append_mcx_or_x(ops, path_controls, q);
        path_controls.push_back(q);
        superposition_node(ops, reg, bit - 1, ones, path_controls, zero_conjugated);
        path_controls.pop_back();
        return;
    }
    const double theta =
        2.0 * std::atan2(std::sqrt(static_cast<double>(ones.size())),
                         std::sqrt(static_cast<double>(zeros.size())));
    append_mcry(ops, path_controls, q, theta);

    // zero branch: conjugate q with X so it can serve as a 1-control
    ops.push_back(GateOp::x(q));
    path_controls.push_back(q);
    zero_conjugated.push_back(q);
    superposition_node(ops, reg, bit - 1, zeros, path_controls, zero_conjugated);
    zero_conjugated.pop_back();
    path_controls.pop_back();
    ops.push_back(GateOp::x(q));

    // one branch
    path_controls.push_back(q);
    superposition_node(ops, reg, bit - 1, ones, path_controls, zero_conjugated);
    path_controls.pop_back();
}

} // namespace detail

/// Gate sequence preparing |0...0> into the register's initial state.
inline std::vector<GateOp> state_prep_ops(const RegisterHandle& reg) {
    reg.init.validate(reg.width);
    std::vector<GateOp> ops;
    switch (reg.init.kind) {
        case InitialState::Kind::Zero:
            break;
        case InitialState::Kind::Basis:
            for (int b = 0; b < reg.width; ++b)
                if ((reg.init.basis_value >> b) & 1ull)
                    ops.push_back(GateOp::x(reg.qubit(b)));
            break;
        case InitialState::Kind::Superposition: {
            const auto& values = reg.init.values;
            if (values.size() == 1) {
                RegisterHandle basis = reg;
                basis.init = InitialState::basis(values[0]);
                return state_prep_ops(basis);
            }
            // full uniform set shortcuts to one Hadamard per qubit
            if (reg.width < 64 &&
                values.size() == (std::uint64_t{1} << reg.width)) {
                for (int b = 0; b < reg.width; ++b)
                    ops.push_back(GateOp::h(reg.qubit(b)));
                break;
            }
            std::vector<std::uint64_t> sorted = values;
            std::sort(sorted.begin(), sorted.end());
            std::vector<QubitRef> path, conjugated;
            detail::superposition_node(ops, reg, reg.width - 1, sorted, path, conjugated);
            break;
        }
    }
    return ops;
}

/// Append-only log of registers, classical slots, and gate operations.
/// Assembly emits every register's state preparation (in declaration order)
/// followed by the logged ops. Registers live in a deque so returned handle
/// references stay valid across later declarations.
class CircuitHandler {
public:
    const RegisterHandle& declare_register(const std::string& name, int width,
                                           InitialState init) {
        if (width < 1)
            throw QirError("register width must be at least 1");
        for (const auto& r : registers_)
            if (r.name == name)
                throw QirError("duplicate register name '" + name + "'");
        init.validate(width);
        RegisterHandle reg;
        reg.id = next_id_++;
        reg.name = name;
        reg.width = width;
        reg.init = std::move(init);
        registers_.push_back(std::move(reg));
        return registers_.back();
    }

    bool has_register_name(const std::string& name) const {
        for (const auto& r : registers_)
            if (r.name == name)
                return true;
        return false;
    }

    const RegisterHandle& register_by_id(int id) const {
        for (const auto& r : registers_)
            if (r.id == id)
                return r;
        throw QirError("unknown register id " + std::to_string(id));
    }

    int alloc_slot(int width) {
        slots_.push_back({next_slot_, width});
        return next_slot_++;
    }

    void push_op(GateOp op) {
        validate_op(op);
        ops_.push_back(std::move(op));
    }

    void push_ops(const std::vector<GateOp>& ops) {
        for (const auto& op : ops)
            push_op(op);
    }

    Circuit assemble() const {
        Circuit c;
        c.registers.assign(registers_.begin(), registers_.end());
        c.slots = slots_;
        for (const auto& r : registers_) {
            auto prep = state_prep_ops(r);
            c.ops.insert(c.ops.end(), prep.begin(), prep.end());
        }
        c.ops.insert(c.ops.end(), ops_.begin(), ops_.end());
        return c;
    }

    const std::deque<RegisterHandle>& registers() const { return registers_; }
    const std::vector<GateOp>& ops() const { return ops_; }
    const std::vector<ClassicalSlot>& slots() const { return slots_; }
    std::size_t op_count() const { return ops_.size(); }

private:
    void validate_op(const GateOp& op) const {
        if (op.qubits.empty() && op.kind != GateKind::Barrier)
            throw QirError("operation has no qubit operands");
        for (const auto& q : op.qubits) {
            const RegisterHandle* reg = nullptr;
            for (const auto& r : registers_)
                if (r.id == q.reg)
                    reg = &r;
            if (!reg)
                throw QirError("operation references undeclared register");
            if (q.offset < 0 || q.offset >= reg->width)
                throw QirError("qubit offset " + std::to_string(q.offset) +
                               " out of range for register '" + reg->name + "'");
        }
        for (std::size_t i = 0; i < op.qubits.size(); ++i)
            for (std::size_t j = i + 1; j < op.qubits.size(); ++j)
                if (op.qubits[i] == op.qubits[j])
                    throw QirError("repeated qubit operand in one operation");
        if ((op.kind == GateKind::P || op.kind == GateKind::MCP) && !std::isfinite(op.theta))
            throw QirError("phase angle must be finite");
        if (op.kind == GateKind::Measure) {
            bool ok = false;
            for (const auto& s : slots_)
                if (s.id == op.slot)
                    ok = true;
            if (!ok)
                throw QirError("measure targets unallocated classical slot");
        }
    }

    std::deque<RegisterHandle> registers_;
    std::vector<GateOp> ops_;
    std::vector<ClassicalSlot> slots_;
    int next_id_ = 0;
    int next_slot_ = 0;
};

} // namespace qutes
