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
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "qutes/ast.hpp"
#include "qutes/builtins.hpp"
#include "qutes/printer.hpp"
#include "qutes/qir.hpp"
#include "qutes/sema.hpp"
#include "qutes/simulator.hpp"

namespace qutes {

struct RuntimeConfig {
    std::uint64_t seed = 0;
    int grover_retries = 3;
    int qubit_cap = kDefaultQubitCap;
    int recursion_limit = 256;
};

class RuntimeError : public std::runtime_error {
public:
    RuntimeError(std::string code, const std::string& message, Span span)
        : std::runtime_error(message), code(std::move(code)), span(std::move(span)) {}
    std::string code;
    Span span;
};

struct MeasurementRecord {
    std::string register_name;
    int slot = -1;
    std::string bits; // most significant qubit first
    std::uint64_t value = 0;
};

struct ProgramResult {
    std::string stdout_text;
    std::vector<MeasurementRecord> measurements;
    int exit_code = 0;
    Circuit circuit;
};

/// A live view into a register: a whole register or a contiguous slice.
struct QuantumRef {
    int reg = -1;
    int offset = 0;
    int width = 0;
    TypeKind kind = TypeKind::Qubit;
};

struct ArrayObj;
using ArrayPtr = std::shared_ptr<ArrayObj>;

struct Value {
    std::variant<std::monostate, bool, std::int64_t, double, std::string, ArrayPtr, QuantumRef>
        v;

    Value() = default;
    Value(bool b) : v(b) {}
    Value(std::int64_t i) : v(i) {}
    Value(double d) : v(d) {}
    Value(std::string s) : v(std::move(s)) {}
    Value(ArrayPtr a) : v(std::move(a)) {}
    Value(QuantumRef q) : v(q) {}

    bool is_void() const { return std::holds_alternative<std::monostate>(v); }
    bool is_bool() const { return std::holds_alternative<bool>(v); }
    bool is_int() const { return std::holds_alternative<std::int64_t>(v); }
    bool is_float() const { return std::holds_alternative<double>(v); }
    bool is_string() const { return std::holds_alternative<std::string>(v); }
    bool is_array() const { return std::holds_alternative<ArrayPtr>(v); }
    bool is_quantum() const { return std::holds_alternative<QuantumRef>(v); }

    bool as_bool() const { return std::get<bool>(v); }
    std::int64_t as_int() const { return std::get<std::int64_t>(v); }
    double as_float() const { return std::get<double>(v); }
    const std::string& as_string() const { return std::get<std::string>(v); }
    const ArrayPtr& as_array() const { return std::get<ArrayPtr>(v); }
    const QuantumRef& as_quantum() const { return std::get<QuantumRef>(v); }
};

struct ArrayObj {
    TypeKind elem = TypeKind::Void;
    std::vector<Value> items;
};

/// Tree-walking interpreter: classical operations execute natively, quantum
/// operations append to the circuit log and mutate the retained simulator
/// state. A quantum-to-classical boundary measures once, collapses the live
/// state, and the program continues from the collapsed state.
class Interpreter {
public:
    Interpreter(const SemaResult& sema, RuntimeConfig config)
        : sema_(sema), config_(std::move(config)), rng_(config_.seed, 0) {
        // zero-qubit state: the scalar 1, ready to be tensored with registers
        state_.num_qubits = 0;
        state_.amps.assign(1, {1.0, 0.0});
    }

    ProgramResult interpret(Program& program) {
        env_.emplace_back(); // global frame
        for (auto& item : program.items) {
            ExecStatus st = exec_stmt(*item);
            if (st.kind == ExecStatus::Kind::Return)
                break;
        }
        ProgramResult result;
        result.stdout_text = std::move(transcript_);
        result.measurements = std::move(measurements_);
        result.circuit = handler_.assemble();
        result.exit_code = 0;
        return result;
    }

    const CircuitHandler& handler() const { return handler_; }
    const StateVector& live_state() const { return state_; }

private:
    // ---- environment ----------------------------------------------------

    using Frame = std::map<std::string, Value>;

    Value* lookup(const std::string& name) {
        const std::size_t floor = call_floors_.empty() ? 0 : call_floors_.back();
        for (std::size_t i = env_.size(); i-- > floor;) {
            auto it = env_[i].find(name);
            if (it != env_[i].end())
                return &it->second;
        }
        if (floor > 0) {
            auto it = env_[0].find(name);
            if (it != env_[0].end())
                return &it->second;
        }
        return nullptr;
    }

    Value& expect_binding(const std::string& name, const Span& span) {
        Value* v = lookup(name);
        if (!v)
            throw RuntimeError("R010", "unbound variable '" + name + "'", span);
        return *v;
    }

    // ---- live circuit + state -------------------------------------------

    std::string unique_register_name(const std::string& base) {
        if (!handler_.has_register_name(base))
            return base;
        int suffix = 1;
        while (handler_.has_register_name(base + "_" + std::to_string(suffix)))
            ++suffix;
        return base + "_" + std::to_string(suffix);
    }

    const RegisterHandle& declare_live(const std::string& base_name, int width,
                                       InitialState init, const Span& span) {
        if (state_.num_qubits + width > config_.qubit_cap)
            throw RuntimeError("R005",
                               "qubit cap of " + std::to_string(config_.qubit_cap) +
                                   " exceeded (need " +
                                   std::to_string(state_.num_qubits + width) + ")",
                               span);
        const RegisterHandle& reg =
            handler_.declare_register(unique_register_name(base_name), width, std::move(init));
        if (static_cast<int>(reg_base_.size()) <= reg.id)
            reg_base_.resize(static_cast<std::size_t>(reg.id) + 1, -1);
        reg_base_[static_cast<std::size_t>(reg.id)] = state_.num_qubits;

        // new qubits are the high bits and start in |0>, so growing the
        // amplitude array in place is exactly the tensor product
        state_.num_qubits += width;
        state_.amps.resize(std::size_t{1} << state_.num_qubits, {0.0, 0.0});
        shadow_.resize(static_cast<std::size_t>(state_.num_qubits), 0);

        // preparation is applied live but not logged; assembly re-derives it
        for (const auto& op : state_prep_ops(reg))
            apply_live(op);
        return reg;
    }

    int flat_qubit(const QubitRef& q) const {
        return reg_base_[static_cast<std::size_t>(q.reg)] + q.offset;
    }

    /// Push one op to the log and mirror it on the retained state.
    void emit(const GateOp& op, const Span& span) {
        try {
            handler_.push_op(op);
        } catch (const QirError& err) {
            throw RuntimeError("R008", err.what(), span);
        }
        apply_live(op);
    }

    void emit_all(const std::vector<GateOp>& ops, const Span& span) {
        for (const auto& op : ops)
            emit(op, span);
    }

    void apply_live(const GateOp& op) {
        ResolvedOp r;
        r.kind = op.kind;
        r.theta = op.theta;
        r.slot = op.slot;
        for (const auto& q : op.qubits)
            r.qubits.push_back(flat_qubit(q));
        if (r.kind == GateKind::Reset) {
            reset_qubit(state_, r.qubits[0], rng_);
            shadow_[static_cast<std::size_t>(r.qubits[0])] = 0;
            return;
        }
        apply_gate(state_, r);
        update_shadow(r);
    }

    /// Per-qubit classical tracking: 0/1 when the qubit is known to be in a
    /// computational basis state, -1 otherwise. Used to verify Grover
    /// samples without disturbing the state.
    void update_shadow(const ResolvedOp& op) {
        auto known = [&](int q) { return shadow_[static_cast<std::size_t>(q)] >= 0; };
        auto flip = [&](int q) {
            auto& s = shadow_[static_cast<std::size_t>(q)];
            if (s >= 0)
                s = static_cast<std::int8_t>(1 - s);
        };
        auto unknown = [&](int q) { shadow_[static_cast<std::size_t>(q)] = -1; };
        switch (op.kind) {
            case GateKind::H: unknown(op.qubits[0]); break;
            case GateKind::X:
            case GateKind::Y: flip(op.qubits[0]); break;
            case GateKind::Z:
            case GateKind::P:
            case GateKind::MCZ:
            case GateKind::MCP:
            case GateKind::Barrier: break;
            case GateKind::Swap:
                std::swap(shadow_[static_cast<std::size_t>(op.qubits[0])],
                          shadow_[static_cast<std::size_t>(op.qubits[1])]);
                break;
            case GateKind::CX:
            case GateKind::MCX:
            case GateKind::MCY: {
                const int target = op.qubits.back();
                bool all_one = true, any_zero = false;
                for (std::size_t i = 0; i + 1 < op.qubits.size(); ++i) {
                    const int c = op.qubits[i];
                    if (!known(c))
                        all_one = false;
                    else if (shadow_[static_cast<std::size_t>(c)] == 0)
                        any_zero = true;
                }
                if (any_zero)
                    break;
                if (all_one)
                    flip(target);
                else
                    unknown(target);
                break;
            }
            case GateKind::Measure:
            case GateKind::Reset: break;
        }
    }

    struct Measured {
        std::vector<int> bits; // ascending significance
        std::uint64_t value = 0;
        int slot = -1;
    };

    /// The quantum-to-classical boundary: log a Measure op, sample the live
    /// state once, collapse it, and record the outcome.
    Measured boundary_measure(const QuantumRef& ref, const Span& span) {
        const RegisterHandle& reg = handler_.register_by_id(ref.reg);
        const int slot = handler_.alloc_slot(ref.width);
        std::vector<QubitRef> qubits;
        std::vector<int> flat;
        for (int b = 0; b < ref.width; ++b) {
            qubits.push_back({ref.reg, ref.offset + b});
            flat.push_back(reg_base_[static_cast<std::size_t>(ref.reg)] + ref.offset + b);
        }
        emit_measure_op(GateOp::measure(qubits, slot), span);

        Measured m;
        m.slot = slot;
        m.bits = measure(state_, flat, rng_);
        for (std::size_t i = 0; i < m.bits.size(); ++i) {
            shadow_[static_cast<std::size_t>(flat[i])] =
                static_cast<std::int8_t>(m.bits[i]);
            if (m.bits[i])
                m.value |= std::uint64_t{1} << i;
        }

        MeasurementRecord rec;
        rec.register_name = ref.offset == 0 && ref.width == reg.width
                                ? reg.name
                                : reg.name + "[" + std::to_string(ref.offset) +
                                      (ref.width > 1
                                           ? ".." + std::to_string(ref.offset + ref.width - 1)
                                           : "") +
                                      "]";
        rec.slot = slot;
        rec.bits = detail::slot_bits_string(m.bits);
        rec.value = m.value;
        measurements_.push_back(std::move(rec));
        return m;
    }

    void emit_measure_op(const GateOp& op, const Span& span) {
        try {
            handler_.push_op(op);
        } catch (const QirError& err) {
            throw RuntimeError("R008", err.what(), span);
        }
        // the live effect is performed by the caller
    }

    Value demote_measured(const Measured& m, TypeKind quantum_kind) {
        switch (quantum_kind) {
            case TypeKind::Qubit: return Value(m.bits[0] != 0);
            case TypeKind::Quint: return Value(static_cast<std::int64_t>(m.value));
            case TypeKind::Qustring: return Value(detail::slot_bits_string(m.bits));
            default: return Value();
        }
    }

    /// Reset a slice to |0> and encode a basis value into it, in place.
    void reencode(const QuantumRef& ref, std::uint64_t value, const Span& span) {
        const std::uint64_t limit =
            ref.width >= 64 ? ~0ull : ((std::uint64_t{1} << ref.width) - 1);
        if (value > limit)
            throw RuntimeError("R006",
                               "value " + std::to_string(value) +
                                   " does not fit a register of width " +
                                   std::to_string(ref.width),
                               span);
        for (int b = 0; b < ref.width; ++b)
            emit(GateOp::reset({ref.reg, ref.offset + b}), span);
        for (int b = 0; b < ref.width; ++b)
            if ((value >> b) & 1ull)
                emit(GateOp::x({ref.reg, ref.offset + b}), span);
    }

    /// Reset a slice and prepare a uniform superposition over `values`.
    void represuperpose(const QuantumRef& ref, const std::vector<std::uint64_t>& values,
                        const Span& span) {
        for (int b = 0; b < ref.width; ++b)
            emit(GateOp::reset({ref.reg, ref.offset + b}), span);
        RegisterHandle view;
        view.id = ref.reg;
        view.name = "view";
        view.width = ref.width;
        view.init = InitialState::superposition(values);
        try {
            view.init.validate(view.width);
        } catch (const QirError& err) {
            throw RuntimeError("R006", err.what(), span);
        }
        emit_all(rebase_ops(state_prep_ops(view), ref.offset), span);
    }

    static std::vector<GateOp> rebase_ops(std::vector<GateOp> ops, int delta) {
        for (auto& op : ops)
            for (auto& q : op.qubits)
                q.offset += delta;
        return ops;
    }

    // ---- value helpers ---------------------------------------------------

    static TypeKind value_kind(const Value& v) {
        if (v.is_bool())
            return TypeKind::Bool;
        if (v.is_int())
            return TypeKind::Int;
        if (v.is_float())
            return TypeKind::Float;
        if (v.is_string())
            return TypeKind::String;
        if (v.is_quantum())
            return v.as_quantum().kind;
        if (v.is_array())
            return TypeKind::Array;
        return TypeKind::Void;
    }

    /// Implicit conversion at a boundary: classical widening, classical ->
    /// quantum encoding (fresh register), or measurement demotion.
    Value coerce(Value v, const QutesType& to, const Span& span) {
        if (to.is_array()) {
            if (v.is_array())
                return v;
            throw RuntimeError("R011", "expected an array value", span);
        }
        const TypeKind want = to.kind;
        const TypeKind have = value_kind(v);
        if (have == want)
            return v;

        if (v.is_quantum()) {
            const QuantumRef ref = v.as_quantum();
            if (is_quantum_kind(want)) {
                QuantumRef adjusted = ref;
                adjusted.kind = want;
                return Value(adjusted);
            }
            const Measured m = boundary_measure(ref, span);
            Value classical = demote_measured(m, ref.kind);
            // documented special case: measured quint to bool is a nonzero test
            if (ref.kind == TypeKind::Quint && want == TypeKind::Bool)
                return Value(classical.as_int() != 0);
            return coerce(std::move(classical), to, span);
        }

        switch (want) {
            case TypeKind::Bool:
                if (v.is_bool())
                    return v;
                break;
            case TypeKind::Int:
                if (v.is_bool())
                    return Value(static_cast<std::int64_t>(v.as_bool() ? 1 : 0));
                break;
            case TypeKind::Float:
                if (v.is_bool())
                    return Value(v.as_bool() ? 1.0 : 0.0);
                if (v.is_int())
                    return Value(static_cast<double>(v.as_int()));
                break;
            case TypeKind::String:
                break;
            case TypeKind::Qubit: {
                if (v.is_bool()) {
                    const RegisterHandle& reg = declare_live(
                        "tmp", 1, InitialState::basis(v.as_bool() ? 1 : 0), span);
                    return Value(QuantumRef{reg.id, 0, 1, TypeKind::Qubit});
                }
                break;
            }
            case TypeKind::Quint: {
                std::optional<std::uint64_t> enc;
                if (v.is_bool())
                    enc = v.as_bool() ? 1 : 0;
                else if (v.is_int()) {
                    if (v.as_int() < 0)
                        throw RuntimeError("R006", "cannot encode a negative value", span);
                    enc = static_cast<std::uint64_t>(v.as_int());
                }
                if (enc) {
                    const RegisterHandle& reg =
                        declare_live("tmp", basis_width(*enc), InitialState::basis(*enc), span);
                    return Value(QuantumRef{reg.id, 0, reg.width, TypeKind::Quint});
                }
                break;
            }
            case TypeKind::Qustring: {
                if (v.is_string()) {
                    const std::string& bits = v.as_string();
                    if (bits.empty())
                        throw RuntimeError("R007", "cannot encode an empty bitstring", span);
                    std::uint64_t value;
                    try {
                        value = bitstring_to_value(bits);
                    } catch (const BuiltinError& err) {
                        throw RuntimeError("R007", err.what(), span);
                    }
                    const RegisterHandle& reg =
                        declare_live("tmp", static_cast<int>(bits.size()),
                                     InitialState::basis(value), span);
                    return Value(QuantumRef{reg.id, 0, reg.width, TypeKind::Qustring});
                }
                break;
            }
            default:
                break;
        }
        throw RuntimeError("R011",
                           "no runtime conversion from " +
                               type_name(QutesType{have}) + " to " + type_name(to),
                           span);
    }

    bool to_bool(Value v, const Span& span) {
        if (v.is_bool())
            return v.as_bool();
        if (v.is_quantum()) {
            const QuantumRef ref = v.as_quantum();
            const Measured m = boundary_measure(ref, span);
            if (ref.kind == TypeKind::Qubit)
                return m.bits[0] != 0;
            if (ref.kind == TypeKind::Quint)
                return m.value != 0;
        }
        throw RuntimeError("R011", "condition did not evaluate to a bool", span);
    }

    std::string display(const Value& v, const Span& span) {
        if (v.is_bool())
            return v.as_bool() ? "true" : "false";
        if (v.is_int())
            return std::to_string(v.as_int());
        if (v.is_float())
            return format_float_literal(v.as_float());
        if (v.is_string())
            return v.as_string();
        if (v.is_quantum()) {
            const QuantumRef ref = v.as_quantum();
            const Measured m = boundary_measure(ref, span);
            return display(demote_measured(m, ref.kind), span);
        }
        if (v.is_array()) {
            std::string out = "[";
            const auto& items = v.as_array()->items;
            for (std::size_t i = 0; i < items.size(); ++i) {
                if (i)
                    out += ", ";
                out += display(items[i], span);
            }
            return out + "]";
        }
        return "void";
    }

    // ---- statements -------------------------------------------------------

    struct ExecStatus {
        enum class Kind { Normal, Return } kind = Kind::Normal;
        Value value;
    };

    ExecStatus exec_stmt(Stmt& s) {
        return std::visit(
            overloaded{
                [&](VarDeclStmt& d) { return exec_var_decl(s, d); },
                [&](FuncDeclStmt&) { return ExecStatus{}; },
                [&](BlockStmt& b) {
                    env_.emplace_back();
                    ExecStatus st;
                    for (auto& inner : b.stmts) {
                        st = exec_stmt(*inner);
                        if (st.kind == ExecStatus::Kind::Return)
                            break;
                    }
                    env_.pop_back();
                    return st;
                },
                [&](IfStmt& i) {
                    if (to_bool(eval(*i.cond), i.cond->span))
                        return exec_stmt(*i.then_branch);
                    if (i.else_branch)
                        return exec_stmt(*i.else_branch);
                    return ExecStatus{};
                },
                [&](WhileStmt& w) {
                    ExecStatus st;
                    while (to_bool(eval(*w.cond), w.cond->span)) {
                        st = exec_stmt(*w.body);
                        if (st.kind == ExecStatus::Kind::Return)
                            return st;
                    }
                    return ExecStatus{};
                },
                [&](ForeachStmt& f) {
                    Value iterable = eval(*f.iterable);
                    if (!iterable.is_array())
                        throw RuntimeError("R011", "foreach requires an array",
                                           f.iterable->span);
                    const ArrayPtr arr = iterable.as_array();
                    for (std::size_t idx = 0; idx < arr->items.size(); ++idx) {
                        env_.emplace_back();
                        env_.back()[f.var] = arr->items[idx];
                        ExecStatus st = exec_stmt(*f.body);
                        env_.pop_back();
                        if (st.kind == ExecStatus::Kind::Return)
                            return st;
                    }
                    return ExecStatus{};
                },
                [&](ReturnStmt& r) {
                    ExecStatus st;
                    st.kind = ExecStatus::Kind::Return;
                    if (r.value)
                        st.value = eval(*r.value);
                    return st;
                },
                [&](ExprStmt& e) {
                    eval(*e.expr);
                    return ExecStatus{};
                },
            },
            s.node);
    }

    ExecStatus exec_var_decl(Stmt& s, VarDeclStmt& d) {
        auto it = sema_.decl_symbols.find(&s);
        const Symbol* sym = it == sema_.decl_symbols.end() ? nullptr : it->second;
        if (!sym)
            throw RuntimeError("R012", "missing symbol for declaration", s.span);
        const QutesType declared = sym->declared_type;

        if (!declared.is_array() && is_quantum_kind(declared.kind)) {
            if (sym->reg) {
                const RegisterHandle& reg =
                    declare_live(sym->name, sym->reg->width, sym->reg->init, s.span);
                env_.back()[d.name] =
                    Value(QuantumRef{reg.id, 0, reg.width, declared.kind});
            } else {
                if (!d.init)
                    throw RuntimeError("R012", "unsized quantum declaration", s.span);
                Value v = eval(*d.init);
                if (!v.is_quantum())
                    throw RuntimeError("R011", "quantum initializer expected", d.init->span);
                QuantumRef ref = v.as_quantum();
                ref.kind = declared.kind;
                env_.back()[d.name] = Value(ref);
            }
            return ExecStatus{};
        }

        if (declared.is_array()) {
            if (d.init) {
                Value v = eval(*d.init);
                if (!v.is_array())
                    throw RuntimeError("R011", "array initializer expected", d.init->span);
                env_.back()[d.name] = v;
            } else {
                auto arr = std::make_shared<ArrayObj>();
                arr->elem = declared.elem;
                env_.back()[d.name] = Value(std::move(arr));
            }
            return ExecStatus{};
        }

        Value v;
        if (d.init) {
            v = coerce(eval(*d.init), declared, d.init->span);
        } else {
            switch (declared.kind) {
                case TypeKind::Bool: v = Value(false); break;
                case TypeKind::Int: v = Value(std::int64_t{0}); break;
                case TypeKind::Float: v = Value(0.0); break;
                case TypeKind::String: v = Value(std::string{}); break;
                default: break;
            }
        }
        env_.back()[d.name] = std::move(v);
        return ExecStatus{};
    }

    // ---- expressions ------------------------------------------------------

    Value eval(Expr& e) {
        return std::visit(
            overloaded{
                [&](IntLit& x) { return Value(x.value); },
                [&](FloatLit& x) { return Value(x.value); },
                [&](BoolLit& x) { return Value(x.value); },
                [&](StringLit& x) { return Value(x.value); },
                [&](QuantumLit& q) { return eval_quantum_lit(q, e.span); },
                [&](Identifier& id) { return Value(expect_binding(id.name, e.span)); },
                [&](IndexExpr& ix) { return eval_index(ix, e.span); },
                [&](CallExpr& call) { return eval_call(e, call); },
                [&](ArrayLit& lit) { return eval_array_lit(e, lit); },
                [&](UnaryExpr& u) { return eval_unary(e, u); },
                [&](BinaryExpr& b) { return eval_binary(e, b); },
                [&](MultiControlledExpr& mc) { return eval_mc(e, mc); },
                [&](InMatchExpr& in) { return eval_in_match(e, in); },
            },
            e.node);
    }

    Value eval_quantum_lit(const QuantumLit& q, const Span& span) {
        int width = 1;
        for (auto v : q.values)
            width = std::max(width, basis_width(v));
        InitialState init = q.superposition ? InitialState::superposition(q.values)
                                            : InitialState::basis(q.values[0]);
        const RegisterHandle& reg = declare_live("lit", width, std::move(init), span);
        return Value(QuantumRef{reg.id, 0, reg.width,
                                width == 1 ? TypeKind::Qubit : TypeKind::Quint});
    }

    Value eval_index(IndexExpr& ix, const Span& span) {
        Value target = eval(*ix.target);
        const std::int64_t i =
            coerce(eval(*ix.index), QutesType{TypeKind::Int}, ix.index->span).as_int();
        if (target.is_array()) {
            const auto& items = target.as_array()->items;
            if (i < 0 || static_cast<std::size_t>(i) >= items.size())
                throw RuntimeError("R002",
                                   "index " + std::to_string(i) +
                                       " out of bounds for array of length " +
                                       std::to_string(items.size()),
                                   span);
            return items[static_cast<std::size_t>(i)];
        }
        if (target.is_quantum()) {
            const QuantumRef ref = target.as_quantum();
            if (i < 0 || i >= ref.width)
                throw RuntimeError("R002",
                                   "index " + std::to_string(i) +
                                       " out of bounds for register of width " +
                                       std::to_string(ref.width),
                                   span);
            int offset;
            if (ref.kind == TypeKind::Qustring)
                offset = ref.offset + ref.width - 1 - static_cast<int>(i); // character order
            else
                offset = ref.offset + static_cast<int>(i); // bit order, LSB first
            return Value(QuantumRef{ref.reg, offset, 1, TypeKind::Qubit});
        }
        throw RuntimeError("R011", "cannot index this value", span);
    }

    Value eval_array_lit(Expr& e, ArrayLit& lit) {
        auto arr = std::make_shared<ArrayObj>();
        arr->elem = e.type.is_array() ? e.type.elem : TypeKind::Void;
        for (auto& el : lit.elems)
            arr->items.push_back(coerce(eval(*el), QutesType{arr->elem}, el->span));
        return Value(std::move(arr));
    }

    Value eval_unary(Expr& e, UnaryExpr& u) {
        switch (u.op) {
            case UnaryOp::Neg: {
                Value v = eval(*u.operand);
                if (v.is_int())
                    return Value(-v.as_int());
                if (v.is_float())
                    return Value(-v.as_float());
                throw RuntimeError("R011", "unary '-' requires a numeric operand", e.span);
            }
            case UnaryOp::Pos:
                return eval(*u.operand);
            case UnaryOp::Not: {
                Value v = eval(*u.operand);
                if (v.is_bool())
                    return Value(!v.as_bool());
                return apply_register_gate(v, GateKind::X, e.span);
            }
            case UnaryOp::Hadamard:
                return apply_register_gate(eval(*u.operand), GateKind::H, e.span);
            case UnaryOp::PauliY:
                return apply_register_gate(eval(*u.operand), GateKind::Y, e.span);
            case UnaryOp::PauliZ:
                return apply_register_gate(eval(*u.operand), GateKind::Z, e.span);
            case UnaryOp::Measure: {
                Value v = eval(*u.operand);
                if (!v.is_quantum())
                    throw RuntimeError("R011", "'measure' requires a quantum operand", e.span);
                const QuantumRef ref = v.as_quantum();
                return demote_measured(boundary_measure(ref, e.span), ref.kind);
            }
            case UnaryOp::Print:
            case UnaryOp::Println: {
                Value v = eval(*u.operand);
                transcript_ += display(v, u.operand->span);
                if (u.op == UnaryOp::Println)
                    transcript_ += '\n';
                return Value();
            }
        }
        return Value();
    }

    Value apply_register_gate(Value v, GateKind kind, const Span& span) {
        if (!v.is_quantum())
            throw RuntimeError("R011", "quantum operand required", span);
        const QuantumRef ref = v.as_quantum();
        for (int b = 0; b < ref.width; ++b) {
            GateOp op;
            op.kind = kind;
            op.qubits = {{ref.reg, ref.offset + b}};
            emit(op, span);
        }
        return v;
    }

    Value eval_binary(Expr& e, BinaryExpr& b) {
        switch (b.op) {
            case BinaryOp::Assign:
                return exec_assign(e, b);
            case BinaryOp::Or: {
                if (to_bool(eval(*b.lhs), b.lhs->span))
                    return Value(true);
                return Value(to_bool(eval(*b.rhs), b.rhs->span));
            }
            case BinaryOp::And: {
                if (!to_bool(eval(*b.lhs), b.lhs->span))
                    return Value(false);
                return Value(to_bool(eval(*b.rhs), b.rhs->span));
            }
            case BinaryOp::Eq:
            case BinaryOp::Ne:
            case BinaryOp::Lt:
            case BinaryOp::Le:
            case BinaryOp::Gt:
            case BinaryOp::Ge:
                return eval_comparison(e, b);
            case BinaryOp::Shl:
            case BinaryOp::Shr:
                return eval_shift(e, b);
            case BinaryOp::Add:
            case BinaryOp::Sub:
            case BinaryOp::Mul:
            case BinaryOp::Div:
            case BinaryOp::Mod:
            case BinaryOp::Pow:
                return eval_arith(e, b);
        }
        return Value();
    }

    /// Measure any quantum side down to its classical demotion target.
    Value classicalize(Value v, const Span& span) {
        if (!v.is_quantum())
            return v;
        const QuantumRef ref = v.as_quantum();
        return demote_measured(boundary_measure(ref, span), ref.kind);
    }

    Value eval_comparison(Expr& e, BinaryExpr& b) {
        Value l = classicalize(eval(*b.lhs), b.lhs->span);
        Value r = classicalize(eval(*b.rhs), b.rhs->span);
        auto cmp_bool = [&](bool eq) { return Value(b.op == BinaryOp::Eq ? eq : !eq); };
        if (l.is_string() && r.is_string()) {
            if (b.op == BinaryOp::Eq || b.op == BinaryOp::Ne)
                return cmp_bool(l.as_string() == r.as_string());
            throw RuntimeError("R011", "strings support only == and !=", e.span);
        }
        if (l.is_bool() && r.is_bool() && (b.op == BinaryOp::Eq || b.op == BinaryOp::Ne))
            return cmp_bool(l.as_bool() == r.as_bool());
        if (l.is_float() || r.is_float()) {
            const double x = coerce(l, QutesType{TypeKind::Float}, e.span).as_float();
            const double y = coerce(r, QutesType{TypeKind::Float}, e.span).as_float();
            switch (b.op) {
                case BinaryOp::Eq: return Value(x == y);
                case BinaryOp::Ne: return Value(x != y);
                case BinaryOp::Lt: return Value(x < y);
                case BinaryOp::Le: return Value(x <= y);
                case BinaryOp::Gt: return Value(x > y);
                default: return Value(x >= y);
            }
        }
        const std::int64_t x = coerce(l, QutesType{TypeKind::Int}, e.span).as_int();
        const std::int64_t y = coerce(r, QutesType{TypeKind::Int}, e.span).as_int();
        switch (b.op) {
            case BinaryOp::Eq: return Value(x == y);
            case BinaryOp::Ne: return Value(x != y);
            case BinaryOp::Lt: return Value(x < y);
            case BinaryOp::Le: return Value(x <= y);
            case BinaryOp::Gt: return Value(x > y);
            default: return Value(x >= y);
        }
    }

    Value eval_shift(Expr& e, BinaryExpr& b) {
        Value l = eval(*b.lhs);
        const std::int64_t k =
            coerce(eval(*b.rhs), QutesType{TypeKind::Int}, b.rhs->span).as_int();
        if (l.is_quantum()) {
            QuantumRef ref = l.as_quantum();
            RegisterHandle view;
            view.id = ref.reg;
            view.width = ref.width;
            ShiftSpec spec{view, k,
                           b.op == BinaryOp::Shl ? ShiftDirection::Left
                                                 : ShiftDirection::Right};
            emit_all(rebase_ops(synth_cyclic_shift(spec), ref.offset), e.span);
            if (ref.kind == TypeKind::Qubit)
                ref.kind = TypeKind::Quint;
            return Value(ref);
        }
        const std::int64_t x = coerce(l, QutesType{TypeKind::Int}, b.lhs->span).as_int();
        if (k < 0 || k > 62)
            throw RuntimeError("R013", "classical shift amount out of range", b.rhs->span);
        return Value(b.op == BinaryOp::Shl ? (x << k) : (x >> k));
    }

    /// Quantum addition accumulates into the right operand's register and
    /// yields that register; a classical side is encoded into a fresh
    /// temporary padded to the quantum side's width.
    Value eval_quantum_add(Expr& e, Value l, Value r) {
        auto as_register = [&](Value& v, int width, const Span& span) -> QuantumRef {
            if (v.is_quantum())
                return v.as_quantum();
            std::int64_t raw =
                coerce(v, QutesType{TypeKind::Int}, span).as_int();
            if (raw < 0)
                throw RuntimeError("R006", "cannot encode a negative value", span);
            const std::uint64_t value = static_cast<std::uint64_t>(raw);
            if (basis_width(value) > width)
                throw RuntimeError("R006",
                                   "literal requires width " +
                                       std::to_string(basis_width(value)) +
                                       " but the register has width " + std::to_string(width),
                                   span);
            const RegisterHandle& reg =
                declare_live("tmp", width, InitialState::basis(value), span);
            return QuantumRef{reg.id, 0, reg.width, TypeKind::Quint};
        };

        const int width = l.is_quantum() ? l.as_quantum().width : r.as_quantum().width;
        QuantumRef a = as_register(l, r.is_quantum() ? r.as_quantum().width : width, e.span);
        QuantumRef c = as_register(r, a.width, e.span);
        if (a.width != c.width)
            throw RuntimeError("R006",
                               "quantum addition width mismatch: " + std::to_string(a.width) +
                                   " vs " + std::to_string(c.width),
                               e.span);
        // synthesize over placeholder ids so disjoint slices of one register
        // stay distinguishable, then map onto the real operands
        RegisterHandle left_view, right_view;
        left_view.id = -1;
        left_view.width = a.width;
        right_view.id = -2;
        right_view.width = c.width;
        std::vector<GateOp> ops;
        try {
            ops = synth_add(left_view, right_view);
        } catch (const BuiltinError& err) {
            throw RuntimeError("R006", err.what(), e.span);
        }
        for (auto& op : ops)
            for (auto& q : op.qubits) {
                if (q.reg == -1) {
                    q.reg = a.reg;
                    q.offset += a.offset;
                } else {
                    q.reg = c.reg;
                    q.offset += c.offset;
                }
            }
        emit_all(ops, e.span);
        QuantumRef result = c;
        result.kind = TypeKind::Quint;
        return Value(result);
    }

    Value eval_arith(Expr& e, BinaryExpr& b) {
        Value l = eval(*b.lhs);
        Value r = eval(*b.rhs);
        if (b.op == BinaryOp::Add && (l.is_quantum() || r.is_quantum()))
            return eval_quantum_add(e, std::move(l), std::move(r));
        if (l.is_quantum() || r.is_quantum())
            throw RuntimeError("R011", "quantum arithmetic supports addition only", e.span);

        if (l.is_float() || r.is_float()) {
            const double x = coerce(l, QutesType{TypeKind::Float}, b.lhs->span).as_float();
            const double y = coerce(r, QutesType{TypeKind::Float}, b.rhs->span).as_float();
            switch (b.op) {
                case BinaryOp::Add: return Value(x + y);
                case BinaryOp::Sub: return Value(x - y);
                case BinaryOp::Mul: return Value(x * y);
                case BinaryOp::Div: return Value(x / y);
                case BinaryOp::Pow: return Value(std::pow(x, y));
                default:
                    throw RuntimeError("R011", "'%' requires int operands", e.span);
            }
        }
        const std::int64_t x = coerce(l, QutesType{TypeKind::Int}, b.lhs->span).as_int();
        const std::int64_t y = coerce(r, QutesType{TypeKind::Int}, b.rhs->span).as_int();
        switch (b.op) {
            case BinaryOp::Add: return Value(x + y);
            case BinaryOp::Sub: return Value(x - y);
            case BinaryOp::Mul: return Value(x * y);
            case BinaryOp::Div:
                if (y == 0)
                    throw RuntimeError("R001", "division by zero", e.span);
                return Value(x / y); // truncates toward zero
            case BinaryOp::Mod:
                if (y == 0)
                    throw RuntimeError("R001", "division by zero", e.span);
                return Value(x % y);
            case BinaryOp::Pow: {
                auto p = checked_ipow(x, y);
                if (!p)
                    throw RuntimeError("R013", "negative integer exponent", e.span);
                return Value(*p);
            }
            default:
                return Value();
        }
    }

    Value exec_assign(Expr& e, BinaryExpr& b) {
        Expr& lhs = *b.lhs;
        if (auto* id = lhs.as<Identifier>())
            return assign_variable(*id, lhs, *b.rhs, e.span);
        if (auto* ix = lhs.as<IndexExpr>())
            return assign_element(*ix, *b.rhs, e.span);
        throw RuntimeError("R014", "invalid assignment target", lhs.span);
    }

    Value assign_variable(Identifier& id, Expr& lhs, Expr& rhs, const Span& span) {
        Value& binding = expect_binding(id.name, lhs.span);
        const QutesType declared =
            lhs.symbol ? lhs.symbol->declared_type : QutesType{value_kind(binding)};

        if (!declared.is_array() && is_quantum_kind(declared.kind)) {
            if (!binding.is_quantum())
                throw RuntimeError("R011", "quantum variable lost its register", lhs.span);
            const QuantumRef current = binding.as_quantum();
            // reassignment from a literal re-prepares the same register
            if (const auto* qlit = rhs.as<QuantumLit>()) {
                if (qlit->superposition)
                    represuperpose(current, qlit->values, span);
                else
                    reencode(current, qlit->values[0], span);
                return binding;
            }
            Value v = eval(rhs);
            if (v.is_quantum()) {
                QuantumRef ref = v.as_quantum();
                ref.kind = declared.kind;
                binding = Value(ref);
                return binding;
            }
            // classical value: reset and re-encode in place
            if (declared.kind == TypeKind::Qustring) {
                const std::string bits =
                    coerce(v, QutesType{TypeKind::String}, span).as_string();
                if (static_cast<int>(bits.size()) != current.width)
                    throw RuntimeError("R006",
                                       "bitstring length " + std::to_string(bits.size()) +
                                           " does not match register width " +
                                           std::to_string(current.width),
                                       span);
                std::uint64_t value;
                try {
                    value = bitstring_to_value(bits);
                } catch (const BuiltinError& err) {
                    throw RuntimeError("R007", err.what(), span);
                }
                reencode(current, value, span);
                return binding;
            }
            std::int64_t raw = coerce(v, QutesType{TypeKind::Int}, span).as_int();
            if (raw < 0)
                throw RuntimeError("R006", "cannot encode a negative value", span);
            reencode(current, static_cast<std::uint64_t>(raw), span);
            return binding;
        }

        if (declared.is_array()) {
            Value v = eval(rhs);
            if (!v.is_array())
                throw RuntimeError("R011", "array value expected", rhs.span);
            binding = v;
            return binding;
        }

        binding = coerce(eval(rhs), declared, span);
        return binding;
    }

    Value assign_element(IndexExpr& ix, Expr& rhs, const Span& span) {
        Value target = eval(*ix.target);
        const std::int64_t i =
            coerce(eval(*ix.index), QutesType{TypeKind::Int}, ix.index->span).as_int();

        if (target.is_array()) {
            ArrayPtr arr = target.as_array();
            if (i < 0 || static_cast<std::size_t>(i) >= arr->items.size())
                throw RuntimeError("R002",
                                   "index " + std::to_string(i) +
                                       " out of bounds for array of length " +
                                       std::to_string(arr->items.size()),
                                   span);
            Value& slot = arr->items[static_cast<std::size_t>(i)];
            if (is_quantum_kind(arr->elem)) {
                Value v = eval(rhs);
                if (v.is_quantum()) {
                    QuantumRef ref = v.as_quantum();
                    ref.kind = arr->elem;
                    slot = Value(ref);
                    return slot;
                }
                if (!slot.is_quantum())
                    throw RuntimeError("R011", "array element lost its register", span);
                const std::int64_t raw =
                    coerce(v, QutesType{TypeKind::Int}, span).as_int();
                if (raw < 0)
                    throw RuntimeError("R006", "cannot encode a negative value", span);
                reencode(slot.as_quantum(), static_cast<std::uint64_t>(raw), span);
                return slot;
            }
            slot = coerce(eval(rhs), QutesType{arr->elem}, span);
            return slot;
        }

        if (target.is_quantum()) {
            const QuantumRef ref = target.as_quantum();
            if (i < 0 || i >= ref.width)
                throw RuntimeError("R002", "register index out of bounds", span);
            int offset;
            if (ref.kind == TypeKind::Qustring)
                offset = ref.offset + ref.width - 1 - static_cast<int>(i);
            else
                offset = ref.offset + static_cast<int>(i);
            const std::int64_t bit =
                coerce(eval(rhs), QutesType{TypeKind::Int}, rhs.span).as_int();
            if (bit != 0 && bit != 1)
                throw RuntimeError("R006", "register slice assignment requires 0 or 1",
                                   rhs.span);
            reencode(QuantumRef{ref.reg, offset, 1, TypeKind::Qubit},
                     static_cast<std::uint64_t>(bit), span);
            return Value(QuantumRef{ref.reg, offset, 1, TypeKind::Qubit});
        }
        throw RuntimeError("R011", "cannot assign into this value", span);
    }

    Value eval_mc(Expr& e, MultiControlledExpr& mc) {
        std::vector<QubitRef> qubits;
        for (auto& operand : mc.operands) {
            Value v = eval(*operand);
            if (!v.is_quantum() || v.as_quantum().width != 1)
                throw RuntimeError("R011", "multi-controlled operands must be single qubits",
                                   operand->span);
            const QuantumRef ref = v.as_quantum();
            qubits.push_back({ref.reg, ref.offset});
        }
        if (qubits.size() < 2)
            throw RuntimeError("R011", "multi-controlled gate needs at least 2 operands",
                               e.span);
        const QubitRef target = qubits.back();
        qubits.pop_back();
        GateOp op;
        switch (mc.op) {
            case McOp::X: op = GateOp::mcx(qubits, target); break;
            case McOp::Y: op = GateOp::mcy(qubits, target); break;
            case McOp::Z: op = GateOp::mcz(qubits, target); break;
            case McOp::P: {
                const double theta =
                    coerce(eval(*mc.phase), QutesType{TypeKind::Float}, mc.phase->span)
                        .as_float();
                op = GateOp::mcp(qubits, target, theta);
                break;
            }
        }
        emit(op, e.span);
        return Value();
    }

    Value eval_call(Expr& e, CallExpr& call) {
        const Symbol* sym = e.symbol;
        if (!sym || !sym->is_function || !sym->func_ast)
            throw RuntimeError("R012", "call to unknown function '" + call.name + "'", e.span);
        if (call_floors_.size() >= static_cast<std::size_t>(config_.recursion_limit))
            throw RuntimeError("R003",
                               "recursion limit of " +
                                   std::to_string(config_.recursion_limit) + " exceeded",
                               e.span);
        const FuncDeclStmt& fn = *sym->func_ast;

        // classical arguments are copied, quantum arguments alias
        std::vector<Value> args;
        for (std::size_t i = 0; i < call.args.size(); ++i)
            args.push_back(
                coerce(eval(*call.args[i]), sym->signature.param_types[i],
                       call.args[i]->span));

        env_.emplace_back();
        call_floors_.push_back(env_.size() - 1);
        for (std::size_t i = 0; i < fn.params.size(); ++i)
            env_.back()[fn.params[i].name] = std::move(args[i]);

        ExecStatus st = exec_stmt(*fn.body);

        call_floors_.pop_back();
        env_.pop_back();

        const QutesType ret = sym->signature.return_type;
        if (st.kind != ExecStatus::Kind::Return) {
            if (ret.is_void())
                return Value();
            throw RuntimeError("R004",
                               "function '" + call.name +
                                   "' finished without returning a value",
                               e.span);
        }
        if (ret.is_void())
            return Value();
        return coerce(std::move(st.value), ret, e.span);
    }

    // ---- substring search --------------------------------------------------

    Value eval_in_match(Expr& e, InMatchExpr& in) {
        // target: a qustring register, or a classical bitstring promoted here
        Value target_value = expect_binding(in.target, in.target_span);
        if (target_value.is_string())
            target_value =
                coerce(target_value, QutesType{TypeKind::Qustring}, in.target_span);
        if (!target_value.is_quantum() ||
            target_value.as_quantum().kind != TypeKind::Qustring)
            throw RuntimeError("R011", "search target must be a qustring", in.target_span);
        const QuantumRef target = target_value.as_quantum();

        Value pattern_value = eval(*in.pattern);
        if (pattern_value.is_quantum())
            pattern_value = classicalize(std::move(pattern_value), in.pattern->span);
        if (!pattern_value.is_string())
            throw RuntimeError("R011", "search pattern must be a string", in.pattern->span);
        const std::string pattern = pattern_value.as_string();
        try {
            validate_pattern(pattern);
        } catch (const BuiltinError& err) {
            throw RuntimeError("R007", err.what(), in.pattern->span);
        }

        const int n = target.width;
        const int m = static_cast<int>(pattern.size());
        if (m > n)
            throw RuntimeError("R007",
                               "pattern of length " + std::to_string(m) +
                                   " cannot occur in a string of length " + std::to_string(n),
                               in.pattern->span);
        const int positions = n - m + 1;
        int index_width = 1;
        while ((1 << index_width) < positions)
            ++index_width;

        const RegisterHandle& idx =
            declare_live("grover_idx", index_width, InitialState::zero(), e.span);
        const RegisterHandle& cmp =
            declare_live("grover_cmp", m, InitialState::zero(), e.span);

        RegisterHandle target_view;
        target_view.id = target.reg;
        target_view.width = target.width;
        const auto oracle = grover_oracle_ops(idx, cmp, target_view, pattern, positions);
        const auto diffusion = grover_diffusion_ops(idx);
        const int iterations = grover_iterations(std::uint64_t{1} << index_width, 1);

        const int attempts = 1 + std::max(0, config_.grover_retries);
        for (int attempt = 0; attempt < attempts; ++attempt) {
            if (attempt > 0)
                for (int b = 0; b < idx.width; ++b)
                    emit(GateOp::reset(idx.qubit(b)), e.span);
            for (int b = 0; b < idx.width; ++b)
                emit(GateOp::h(idx.qubit(b)), e.span);
            for (int it = 0; it < iterations; ++it) {
                emit_all(oracle, e.span);
                emit_all(diffusion, e.span);
            }
            const Measured sampled =
                boundary_measure(QuantumRef{idx.id, 0, idx.width, TypeKind::Quint}, e.span);
            const std::int64_t i = static_cast<std::int64_t>(sampled.value);
            if (i >= positions)
                continue; // padding index, retry
            if (verify_match(target, pattern, static_cast<int>(i), e.span))
                return Value(i);
        }
        return Value(std::int64_t{-1});
    }

    /// Classical verification of a sampled position. When the window bits
    /// are tracked (basis-state target) this is a pure table lookup;
    /// otherwise the window is measured.
    bool verify_match(const QuantumRef& target, const std::string& pattern, int position,
                      const Span& span) {
        const int n = target.width;
        const int m = static_cast<int>(pattern.size());
        const int base = reg_base_[static_cast<std::size_t>(target.reg)] + target.offset;
        bool all_known = true;
        for (int j = 0; j < m; ++j) {
            const int flat = base + (n - 1 - position - j);
            if (shadow_[static_cast<std::size_t>(flat)] < 0) {
                all_known = false;
                break;
            }
        }
        if (all_known) {
            for (int j = 0; j < m; ++j) {
                const int flat = base + (n - 1 - position - j);
                const int bit = shadow_[static_cast<std::size_t>(flat)];
                if ((pattern[static_cast<std::size_t>(j)] == '1') != (bit == 1))
                    return false;
            }
            return true;
        }
        // fall back to measuring the window; exact for basis-state targets
        const QuantumRef window{target.reg, target.offset + n - position - m, m,
                                TypeKind::Qustring};
        const Measured got = boundary_measure(window, span);
        return detail::slot_bits_string(got.bits) == pattern;
    }

    const SemaResult& sema_;
    RuntimeConfig config_;
    CircuitHandler handler_;
    StateVector state_; // zero qubits until the first register
    std::vector<int> reg_base_;
    std::vector<std::int8_t> shadow_;
    CounterRng rng_;
    std::vector<Frame> env_;
    std::vector<std::size_t> call_floors_;
    std::string transcript_;
    std::vector<MeasurementRecord> measurements_;
};

/// Parse, check, and interpret are wired together by the driver; this runs
/// an already-checked program.
inline ProgramResult interpret(Program& program, const SemaResult& sema,
                               const RuntimeConfig& config = {}) {
    Interpreter interp(sema, config);
    return interp.interpret(program);
}

} // namespace qutes
