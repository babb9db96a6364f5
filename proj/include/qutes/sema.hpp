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
#include <cstdint>
#include <limits>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <variant>
#include <vector>

#include "qutes/ast.hpp"
#include "qutes/builtins.hpp"
#include "qutes/symbols.hpp"
#include "qutes/types.hpp"

namespace qutes {

struct ConstValue {
    std::variant<std::int64_t, bool, double, std::string> v;

    bool is_int() const { return std::holds_alternative<std::int64_t>(v); }
    bool is_bool() const { return std::holds_alternative<bool>(v); }
    bool is_float() const { return std::holds_alternative<double>(v); }
    bool is_string() const { return std::holds_alternative<std::string>(v); }
};

inline std::optional<std::int64_t> checked_ipow(std::int64_t base, std::int64_t exp) {
    if (exp < 0)
        return std::nullopt;
    std::int64_t r = 1;
    for (std::int64_t i = 0; i < exp; ++i)
        r *= base;
    return r;
}

/// Literal-level constant folding; used for quantum register sizing.
inline std::optional<ConstValue> fold_const(const Expr& e) {
    return std::visit(
        overloaded{
            [](const IntLit& x) -> std::optional<ConstValue> {
                return ConstValue{x.value};
            },
            [](const BoolLit& x) -> std::optional<ConstValue> {
                return ConstValue{x.value};
            },
            [](const FloatLit& x) -> std::optional<ConstValue> {
                return ConstValue{x.value};
            },
            [](const StringLit& x) -> std::optional<ConstValue> {
                return ConstValue{x.value};
            },
            [](const UnaryExpr& x) -> std::optional<ConstValue> {
                auto inner = fold_const(*x.operand);
                if (!inner)
                    return std::nullopt;
                if (x.op == UnaryOp::Pos)
                    return inner;
                if (x.op != UnaryOp::Neg)
                    return std::nullopt;
                if (inner->is_int())
                    return ConstValue{-std::get<std::int64_t>(inner->v)};
                if (inner->is_float())
                    return ConstValue{-std::get<double>(inner->v)};
                return std::nullopt;
            },
            [](const BinaryExpr& x) -> std::optional<ConstValue> {
                auto l = fold_const(*x.lhs);
                auto r = fold_const(*x.rhs);
                if (!l || !r || !l->is_int() || !r->is_int())
                    return std::nullopt;
                const std::int64_t a = std::get<std::int64_t>(l->v);
                const std::int64_t b = std::get<std::int64_t>(r->v);
                switch (x.op) {
                    case BinaryOp::Add: return ConstValue{a + b};
                    case BinaryOp::Sub: return ConstValue{a - b};
                    case BinaryOp::Mul: return ConstValue{a * b};
                    case BinaryOp::Div:
                        if (b == 0)
                            return std::nullopt;
                        return ConstValue{a / b};
                    case BinaryOp::Mod:
                        if (b == 0)
                            return std::nullopt;
                        return ConstValue{a % b};
                    case BinaryOp::Pow: {
                        auto p = checked_ipow(a, b);
                        if (!p)
                            return std::nullopt;
                        return ConstValue{*p};
                    }
                    default: return std::nullopt;
                }
            },
            [](const auto&) -> std::optional<ConstValue> { return std::nullopt; },
        },
        e.node);
}

struct SemaResult {
    SymbolTable table;
    DiagnosticList diagnostics;
    /// VarDecl/Foreach/FuncDecl statements and Params to their symbols.
    std::map<const void*, const Symbol*> decl_symbols;

    bool ok() const { return !diagnostics.has_errors(); }
};

namespace detail {

/// First AST pass: scopes, symbols, and quantum register sizing.
class SymbolTableBuilder {
public:
    SymbolTableBuilder(SemaResult& out) : out_(out) {}

    void run(const Program& program) {
        hoist_functions(program);
        for (const auto& item : program.items)
            visit_stmt(*item, out_.table.global());
    }

private:
    void error(std::string code, std::string message, const Span& span) {
        out_.diagnostics.error(std::move(code), std::move(message), span);
    }

    void hoist_functions(const Program& program) {
        for (const auto& item : program.items) {
            const auto* fn = item->as<FuncDeclStmt>();
            if (!fn)
                continue;
            Symbol sym;
            sym.name = fn->name;
            sym.is_function = true;
            sym.declared_type = fn->return_type.resolved();
            sym.decl_span = item->span;
            sym.func_ast = fn;
            sym.signature.return_type = fn->return_type.resolved();
            for (const auto& p : fn->params)
                sym.signature.param_types.push_back(p.type.resolved());
            Symbol* declared = out_.table.declare(out_.table.global(), std::move(sym));
            if (!declared)
                error("S001", "duplicate symbol '" + fn->name + "' in scope", item->span);
            else
                out_.decl_symbols[item.get()] = declared;
        }
    }

    void visit_stmt(const Stmt& s, Scope* scope) {
        const int seq = ++seq_;
        std::visit(
            overloaded{
                [&](const VarDeclStmt& d) { declare_variable(s, d, scope, seq); },
                [&](const FuncDeclStmt& d) {
                    Scope* fn_scope =
                        out_.table.make_scope(scope, ScopeKind::Function, &s);
                    for (const auto& p : d.params) {
                        Symbol sym;
                        sym.name = p.name;
                        sym.declared_type = p.type.resolved();
                        sym.decl_span = p.span;
                        sym.seq = seq;
                        sym.is_param = true;
                        if (sym.declared_type.is_void()) {
                            error("S003", "parameter '" + p.name + "' cannot have void type",
                                  p.span);
                        }
                        Symbol* declared = out_.table.declare(fn_scope, std::move(sym));
                        if (!declared)
                            error("S001", "duplicate parameter '" + p.name + "'", p.span);
                        else
                            out_.decl_symbols[&p] = declared;
                    }
                    visit_stmt(*d.body, fn_scope);
                },
                [&](const BlockStmt& b) {
                    Scope* block = out_.table.make_scope(scope, ScopeKind::Block, &s);
                    for (const auto& inner : b.stmts)
                        visit_stmt(*inner, block);
                },
                [&](const IfStmt& i) {
                    visit_stmt(*i.then_branch, scope);
                    if (i.else_branch)
                        visit_stmt(*i.else_branch, scope);
                },
                [&](const WhileStmt& w) { visit_stmt(*w.body, scope); },
                [&](const ForeachStmt& f) {
                    Scope* loop = out_.table.make_scope(scope, ScopeKind::Block, &s);
                    Symbol sym;
                    sym.name = f.var;
                    sym.declared_type = QutesType{TypeKind::Void}; // fixed by typecheck
                    sym.decl_span = f.var_span;
                    sym.seq = seq;
                    Symbol* declared = out_.table.declare(loop, std::move(sym));
                    if (!declared)
                        error("S001", "duplicate symbol '" + f.var + "' in scope", f.var_span);
                    else
                        out_.decl_symbols[&f] = declared;
                    visit_stmt(*f.body, loop);
                },
                [&](const ReturnStmt&) {},
                [&](const ExprStmt&) {},
            },
            s.node);
    }

    void declare_variable(const Stmt& stmt, const VarDeclStmt& d, Scope* scope, int seq) {
        const QutesType declared = d.declared_type.resolved();
        Symbol sym;
        sym.name = d.name;
        sym.declared_type = declared;
        sym.decl_span = stmt.span;
        sym.seq = seq;

        if (declared.is_void() || (declared.is_array() && declared.elem == TypeKind::Void)) {
            error("S003", "variable '" + d.name + "' cannot have void type", stmt.span);
        } else if (!declared.is_array() && is_quantum_kind(declared.kind)) {
            size_quantum(sym, d, stmt.span);
        }

        Symbol* out = out_.table.declare(scope, std::move(sym));
        if (!out)
            error("S001", "duplicate symbol '" + d.name + "' in scope", stmt.span);
        else
            out_.decl_symbols[&stmt] = out;
    }

    /// Width and initial-state rules:
    ///   qubit: width 1.
    ///   quint from value v: width = max(1, ceil(log2(v+1))).
    ///   superposition literal: max width over the listed values.
    ///   qustring: one qubit per character of its bitstring initializer.
    /// Non-constant classical initializers cannot size a register; quantum
    /// initializers alias instead of allocating.
    void size_quantum(Symbol& sym, const VarDeclStmt& d, const Span& span) {
        const TypeKind kind = sym.declared_type.kind;
        auto fresh = [&](int width, InitialState init) {
            RegisterHandle reg;
            reg.id = next_register_id_++;
            reg.name = sym.name;
            reg.width = width;
            reg.init = std::move(init);
            sym.reg = std::move(reg);
        };

        if (!d.init) {
            if (kind == TypeKind::Qustring)
                error("S017", "qustring declaration requires a bitstring initializer", span);
            else
                fresh(1, InitialState::zero());
            return;
        }

        if (const auto* qlit = d.init->as<QuantumLit>()) {
            int width = 1;
            for (auto v : qlit->values)
                width = std::max(width, basis_width(v));
            std::set<std::uint64_t> distinct(qlit->values.begin(), qlit->values.end());
            if (distinct.size() != qlit->values.size()) {
                error("S013", "duplicate value in superposition literal", d.init->span);
                return;
            }
            if (kind == TypeKind::Qustring) {
                error("S005", "no conversion from quantum literal to qustring", d.init->span);
                return;
            }
            if (kind == TypeKind::Qubit && width > 1) {
                error("S005",
                      "quantum literal of width " + std::to_string(width) +
                          " cannot initialize a qubit",
                      d.init->span);
                return;
            }
            if (qlit->superposition)
                fresh(width, InitialState::superposition(qlit->values));
            else
                fresh(width, InitialState::basis(qlit->values[0]));
            return;
        }

        if (auto cv = fold_const(*d.init)) {
            if (cv->is_bool()) {
                const bool b = std::get<bool>(cv->v);
                if (kind == TypeKind::Qustring) {
                    error("S005", "no conversion from bool to qustring", d.init->span);
                    return;
                }
                fresh(1, InitialState::basis(b ? 1 : 0));
                return;
            }
            if (cv->is_int()) {
                const std::int64_t v = std::get<std::int64_t>(cv->v);
                if (kind != TypeKind::Quint) {
                    error("S005",
                          std::string("no conversion from int to ") +
                              type_name(sym.declared_type),
                          d.init->span);
                    return;
                }
                if (v < 0) {
                    error("S027", "cannot encode a negative value into a register",
                          d.init->span);
                    return;
                }
                fresh(basis_width(static_cast<std::uint64_t>(v)),
                      InitialState::basis(static_cast<std::uint64_t>(v)));
                return;
            }
            if (cv->is_string()) {
                const std::string& bits = std::get<std::string>(cv->v);
                if (kind != TypeKind::Qustring) {
                    error("S005",
                          std::string("no conversion from string to ") +
                              type_name(sym.declared_type),
                          d.init->span);
                    return;
                }
                if (bits.empty()) {
                    error("S028", "qustring initializer must be a non-empty bitstring",
                          d.init->span);
                    return;
                }
                for (char c : bits) {
                    if (c != '0' && c != '1') {
                        error("S012",
                              std::string("non-bitstring character '") + c + "' in qustring",
                              d.init->span);
                        return;
                    }
                }
                fresh(static_cast<int>(bits.size()),
                      InitialState::basis(bitstring_to_value(bits)));
                return;
            }
            error("S005",
                  std::string("no conversion from float to ") + type_name(sym.declared_type),
                  d.init->span);
            return;
        }

        // Not a constant: the initializer must be a quantum expression; the
        // declaration then aliases its register. Typecheck verifies.
        sym.aliases_init = true;
    }

    SemaResult& out_;
    int seq_ = 0;
    int next_register_id_ = 0;
};

/// Second pass: types every expression, resolves identifiers, and marks
/// implicit promotion/measurement conversions.
class TypeChecker {
public:
    TypeChecker(SemaResult& out) : out_(out) {}

    void run(Program& program) {
        for (auto& item : program.items)
            visit_stmt(*item, out_.table.global());
    }

private:
    void error(std::string code, std::string message, const Span& span) {
        out_.diagnostics.error(std::move(code), std::move(message), span);
    }

    static bool is_poisoned(const QutesType& t) { return t.is_void(); }

    void visit_stmt(Stmt& s, Scope* scope) {
        const int seq = ++seq_;
        std::visit(
            overloaded{
                [&](VarDeclStmt& d) { check_var_decl(s, d, scope, seq); },
                [&](FuncDeclStmt& d) {
                    Scope* fn_scope = out_.table.scope_for(&s);
                    const Symbol* prev = current_function_;
                    auto it = out_.decl_symbols.find(&s);
                    current_function_ = it == out_.decl_symbols.end() ? nullptr : it->second;
                    visit_stmt(*d.body, fn_scope ? fn_scope : scope);
                    current_function_ = prev;
                },
                [&](BlockStmt& b) {
                    Scope* block = out_.table.scope_for(&s);
                    for (auto& inner : b.stmts)
                        visit_stmt(*inner, block ? block : scope);
                },
                [&](IfStmt& i) {
                    check_condition(*i.cond, scope, seq);
                    visit_stmt(*i.then_branch, scope);
                    if (i.else_branch)
                        visit_stmt(*i.else_branch, scope);
                },
                [&](WhileStmt& w) {
                    check_condition(*w.cond, scope, seq);
                    visit_stmt(*w.body, scope);
                },
                [&](ForeachStmt& f) {
                    const QutesType iterable = check_expr(*f.iterable, scope, seq);
                    Scope* loop = out_.table.scope_for(&s);
                    auto it = out_.decl_symbols.find(&f);
                    Symbol* var = it == out_.decl_symbols.end()
                                      ? nullptr
                                      : const_cast<Symbol*>(it->second);
                    if (!iterable.is_array()) {
                        if (!is_poisoned(iterable))
                            error("S026",
                                  "foreach requires an array, got " + type_name(iterable),
                                  f.iterable->span);
                        if (var)
                            var->declared_type = QutesType{TypeKind::Void};
                    } else if (var) {
                        var->declared_type = QutesType{iterable.elem};
                    }
                    visit_stmt(*f.body, loop ? loop : scope);
                },
                [&](ReturnStmt& r) {
                    if (!current_function_) {
                        error("S015", "return outside of a function", s.span);
                        if (r.value)
                            check_expr(*r.value, scope, seq);
                        return;
                    }
                    const QutesType expected = current_function_->signature.return_type;
                    if (!r.value) {
                        if (!expected.is_void())
                            error("S005", "missing return value in function returning " +
                                              type_name(expected),
                                  s.span);
                        return;
                    }
                    const QutesType got = check_expr(*r.value, scope, seq);
                    if (expected.is_void()) {
                        error("S005", "void function cannot return a value", r.value->span);
                        return;
                    }
                    apply_conversion(*r.value, got, expected, "return value");
                },
                [&](ExprStmt& e) { check_expr(*e.expr, scope, seq); },
            },
            s.node);
    }

    void check_var_decl(Stmt& s, VarDeclStmt& d, Scope* scope, int seq) {
        auto it = out_.decl_symbols.find(&s);
        const Symbol* sym = it == out_.decl_symbols.end() ? nullptr : it->second;
        if (!d.init)
            return;
        QutesType init_type = check_expr(*d.init, scope, seq);
        if (!sym || is_poisoned(init_type))
            return;
        const QutesType declared = sym->declared_type;

        if (!declared.is_array() && is_quantum_kind(declared.kind)) {
            if (sym->reg.has_value()) {
                // fresh register, init already folded into the initial state
                d.init->conversion = classify_conversion(init_type, declared);
                return;
            }
            if (sym->aliases_init) {
                if (!is_quantum(init_type) || init_type.is_array()) {
                    error("S011",
                          "register width of '" + sym->name +
                              "' requires a constant or quantum initializer",
                          d.init->span);
                    return;
                }
                apply_conversion(*d.init, init_type, declared, "initializer");
            }
            return;
        }

        if (declared.is_array()) {
            if (const auto* lit = d.init->as<ArrayLit>(); lit && lit->elems.empty()) {
                d.init->type = declared; // empty literal adopts the declared type
                return;
            }
            if (init_type.is_array()) {
                if (init_type.elem != declared.elem)
                    error("S005",
                          "cannot initialize " + type_name(declared) + " from " +
                              type_name(init_type),
                          d.init->span);
                return;
            }
            error("S005",
                  "cannot initialize " + type_name(declared) + " from " + type_name(init_type),
                  d.init->span);
            return;
        }

        apply_conversion(*d.init, init_type, declared, "initializer");
    }

    void check_condition(Expr& cond, Scope* scope, int seq) {
        const QutesType t = check_expr(cond, scope, seq);
        if (is_poisoned(t))
            return;
        if (!convert_to_bool(cond, t))
            error("S006",
                  "condition must be bool or a measurable quantum value, got " + type_name(t),
                  cond.span);
    }

    /// bool passes through; qubit and quint conditions are auto-measured.
    bool convert_to_bool(Expr& e, const QutesType& t) {
        if (t.kind == TypeKind::Bool) {
            e.conversion = {Conversion::Kind::Identity, QutesType{TypeKind::Bool}};
            return true;
        }
        if (t.is_array())
            return false;
        if (t.kind == TypeKind::Qubit || t.kind == TypeKind::Quint) {
            e.conversion = classify_conversion(t, QutesType{TypeKind::Bool});
            return e.conversion.kind != Conversion::Kind::Invalid;
        }
        return false;
    }

    bool apply_conversion(Expr& e, const QutesType& from, const QutesType& to,
                          const std::string& what) {
        const Conversion conv = classify_conversion(from, to);
        if (conv.kind == Conversion::Kind::Invalid) {
            if (!is_poisoned(from))
                error("S005",
                      "no conversion from " + type_name(from) + " to " + type_name(to) +
                          " for " + what,
                      e.span);
            return false;
        }
        e.conversion = conv;
        return true;
    }

    QutesType set_type(Expr& e, QutesType t) {
        e.type = t;
        return t;
    }

    QutesType check_expr(Expr& e, Scope* scope, int seq) {
        return std::visit(
            overloaded{
                [&](IntLit&) { return set_type(e, QutesType{TypeKind::Int}); },
                [&](FloatLit&) { return set_type(e, QutesType{TypeKind::Float}); },
                [&](BoolLit&) { return set_type(e, QutesType{TypeKind::Bool}); },
                [&](StringLit&) { return set_type(e, QutesType{TypeKind::String}); },
                [&](QuantumLit& q) {
                    int width = 1;
                    for (auto v : q.values)
                        width = std::max(width, basis_width(v));
                    std::set<std::uint64_t> distinct(q.values.begin(), q.values.end());
                    if (distinct.size() != q.values.size())
                        error("S013", "duplicate value in superposition literal", e.span);
                    return set_type(
                        e, QutesType{width == 1 ? TypeKind::Qubit : TypeKind::Quint});
                },
                [&](Identifier& id) {
                    const Symbol* sym = out_.table.resolve(scope, id.name, seq);
                    if (!sym) {
                        error("S004", "unresolved identifier '" + id.name + "'", e.span);
                        return set_type(e, QutesType{TypeKind::Void});
                    }
                    if (sym->is_function) {
                        error("S004", "'" + id.name + "' is a function, not a value", e.span);
                        return set_type(e, QutesType{TypeKind::Void});
                    }
                    e.symbol = sym;
                    return set_type(e, sym->declared_type);
                },
                [&](IndexExpr& ix) { return check_index(e, ix, scope, seq); },
                [&](CallExpr& call) { return check_call(e, call, scope, seq); },
                [&](ArrayLit& lit) { return check_array_lit(e, lit, scope, seq); },
                [&](UnaryExpr& u) { return check_unary(e, u, scope, seq); },
                [&](BinaryExpr& b) { return check_binary(e, b, scope, seq); },
                [&](MultiControlledExpr& mc) { return check_mc(e, mc, scope, seq); },
                [&](InMatchExpr& in) { return check_in_match(e, in, scope, seq); },
            },
            e.node);
    }

    QutesType check_index(Expr& e, IndexExpr& ix, Scope* scope, int seq) {
        const QutesType target = check_expr(*ix.target, scope, seq);
        const QutesType index = check_expr(*ix.index, scope, seq);
        if (!is_poisoned(index) && index.kind != TypeKind::Int &&
            index.kind != TypeKind::Bool)
            error("S009", "index must be a classical int, got " + type_name(index),
                  ix.index->span);
        if (target.is_array())
            return set_type(e, QutesType{target.elem});
        if (target.kind == TypeKind::Quint || target.kind == TypeKind::Qustring)
            return set_type(e, QutesType{TypeKind::Qubit});
        if (!is_poisoned(target))
            error("S009", "cannot index " + type_name(target), ix.target->span);
        return set_type(e, QutesType{TypeKind::Void});
    }

    QutesType check_call(Expr& e, CallExpr& call, Scope* scope, int seq) {
        const Symbol* sym = out_.table.resolve(scope, call.name, seq);
        for (auto& a : call.args)
            check_expr(*a, scope, seq);
        if (!sym) {
            error("S004", "unresolved function '" + call.name + "'", call.name_span);
            return set_type(e, QutesType{TypeKind::Void});
        }
        if (!sym->is_function) {
            error("S004", "'" + call.name + "' is not a function", call.name_span);
            return set_type(e, QutesType{TypeKind::Void});
        }
        e.symbol = sym;
        const auto& sig = sym->signature;
        if (sig.param_types.size() != call.args.size()) {
            error("S007",
                  "function '" + call.name + "' expects " +
                      std::to_string(sig.param_types.size()) + " argument(s), got " +
                      std::to_string(call.args.size()),
                  e.span);
            return set_type(e, sig.return_type);
        }
        for (std::size_t i = 0; i < call.args.size(); ++i)
            apply_conversion(*call.args[i], call.args[i]->type, sig.param_types[i],
                             "argument " + std::to_string(i + 1));
        return set_type(e, sig.return_type);
    }

    QutesType check_array_lit(Expr& e, ArrayLit& lit, Scope* scope, int seq) {
        if (lit.elems.empty()) {
            // only legal directly as an array initializer; the decl fills the type
            return set_type(e, QutesType{TypeKind::Void});
        }
        QutesType join = check_expr(*lit.elems[0], scope, seq);
        for (std::size_t i = 1; i < lit.elems.size(); ++i) {
            const QutesType t = check_expr(*lit.elems[i], scope, seq);
            if (is_poisoned(join) || is_poisoned(t)) {
                join = QutesType{TypeKind::Void};
                continue;
            }
            if (promote_type(t, join))
                continue;
            if (promote_type(join, t)) {
                join = t;
                continue;
            }
            error("S005",
                  "mixed array element types: " + type_name(join) + " and " + type_name(t),
                  lit.elems[i]->span);
            join = QutesType{TypeKind::Void};
        }
        if (is_poisoned(join))
            return set_type(e, QutesType{TypeKind::Void});
        if (join.is_array()) {
            error("S002", "nested arrays are not supported", e.span);
            return set_type(e, QutesType{TypeKind::Void});
        }
        for (auto& el : lit.elems)
            apply_conversion(*el, el->type, join, "array element");
        return set_type(e, QutesType::array_of(join.kind));
    }

    QutesType check_unary(Expr& e, UnaryExpr& u, Scope* scope, int seq) {
        const QutesType t = check_expr(*u.operand, scope, seq);
        if (is_poisoned(t) && u.op != UnaryOp::Print && u.op != UnaryOp::Println)
            return set_type(e, QutesType{TypeKind::Void});
        switch (u.op) {
            case UnaryOp::Neg:
            case UnaryOp::Pos:
                if (t.kind == TypeKind::Int || t.kind == TypeKind::Float)
                    return set_type(e, t);
                error("S020", "unary '" + std::string(unary_op_name_(u.op)) +
                                  "' requires a numeric operand, got " + type_name(t),
                      e.span);
                return set_type(e, QutesType{TypeKind::Void});
            case UnaryOp::Not:
                if (t.kind == TypeKind::Bool)
                    return set_type(e, t);
                if (is_quantum(t) && !t.is_array())
                    return set_type(e, t);
                error("S008", "'not' requires a bool or quantum operand, got " + type_name(t),
                      e.span);
                return set_type(e, QutesType{TypeKind::Void});
            case UnaryOp::Hadamard:
            case UnaryOp::PauliY:
            case UnaryOp::PauliZ:
                if (is_quantum(t) && !t.is_array())
                    return set_type(e, t);
                error("S008",
                      "'" + std::string(unary_op_name_(u.op)) +
                          "' requires a quantum operand, got " + type_name(t),
                      e.span);
                return set_type(e, QutesType{TypeKind::Void});
            case UnaryOp::Measure:
                if (is_quantum(t) && !t.is_array()) {
                    const TypeKind d = *demotion_target(t.kind);
                    u.operand->conversion = classify_conversion(t, QutesType{d});
                    return set_type(e, QutesType{d});
                }
                error("S008", "'measure' requires a quantum operand, got " + type_name(t),
                      e.span);
                return set_type(e, QutesType{TypeKind::Void});
            case UnaryOp::Print:
            case UnaryOp::Println:
                if (t.is_void() && !is_poisoned_ok_for_print(*u.operand))
                    error("S020", "cannot print a void expression", u.operand->span);
                return set_type(e, QutesType{TypeKind::Void});
        }
        return set_type(e, QutesType{TypeKind::Void});
    }

    // a poisoned operand already produced a diagnostic; avoid cascades
    static bool is_poisoned_ok_for_print(const Expr& operand) {
        return operand.symbol != nullptr || !operand.type.is_void();
    }

    static const char* unary_op_name_(UnaryOp op) {
        switch (op) {
            case UnaryOp::Neg: return "-";
            case UnaryOp::Pos: return "+";
            case UnaryOp::Not: return "not";
            case UnaryOp::Hadamard: return "hadamard";
            case UnaryOp::PauliY: return "pauliy";
            case UnaryOp::PauliZ: return "pauliz";
            case UnaryOp::Measure: return "measure";
            case UnaryOp::Print: return "print";
            case UnaryOp::Println: return "println";
        }
        return "?";
    }

    std::optional<int> static_width(const Expr& e) const {
        if (e.is<Identifier>()) {
            if (e.symbol && e.symbol->reg)
                return e.symbol->reg->width;
            return std::nullopt;
        }
        if (e.is<IndexExpr>() && e.type.kind == TypeKind::Qubit)
            return 1;
        if (const auto* q = e.as<QuantumLit>()) {
            int width = 1;
            for (auto v : q->values)
                width = std::max(width, basis_width(v));
            return width;
        }
        if (const auto* lit = e.as<IntLit>()) {
            if (lit->value >= 0)
                return basis_width(static_cast<std::uint64_t>(lit->value));
        }
        if (e.is<BoolLit>())
            return 1;
        return std::nullopt;
    }

    QutesType check_binary(Expr& e, BinaryExpr& b, Scope* scope, int seq) {
        if (b.op == BinaryOp::Assign)
            return check_assign(e, b, scope, seq);

        const QutesType lt = check_expr(*b.lhs, scope, seq);
        const QutesType rt = check_expr(*b.rhs, scope, seq);
        if (is_poisoned(lt) || is_poisoned(rt))
            return set_type(e, QutesType{TypeKind::Void});

        switch (b.op) {
            case BinaryOp::Or:
            case BinaryOp::And: {
                const bool l_ok = convert_to_bool(*b.lhs, lt);
                const bool r_ok = convert_to_bool(*b.rhs, rt);
                if (!l_ok)
                    error("S020", "logical operand must be bool, got " + type_name(lt),
                          b.lhs->span);
                if (!r_ok)
                    error("S020", "logical operand must be bool, got " + type_name(rt),
                          b.rhs->span);
                return set_type(e, QutesType{TypeKind::Bool});
            }
            case BinaryOp::Eq:
            case BinaryOp::Ne:
            case BinaryOp::Lt:
            case BinaryOp::Le:
            case BinaryOp::Gt:
            case BinaryOp::Ge:
                return check_comparison(e, b, lt, rt);
            case BinaryOp::Shl:
            case BinaryOp::Shr:
                return check_shift(e, b, lt, rt);
            case BinaryOp::Add:
                if ((is_quantum(lt) && !lt.is_array()) || (is_quantum(rt) && !rt.is_array()))
                    return check_quantum_add(e, b, lt, rt);
                return check_classical_arith(e, b, lt, rt);
            case BinaryOp::Sub:
            case BinaryOp::Mul:
            case BinaryOp::Div:
            case BinaryOp::Mod:
            case BinaryOp::Pow:
                if (is_quantum(lt) || is_quantum(rt)) {
                    error("S023", "quantum arithmetic supports addition only", e.span);
                    return set_type(e, QutesType{TypeKind::Void});
                }
                return check_classical_arith(e, b, lt, rt);
            default:
                return set_type(e, QutesType{TypeKind::Void});
        }
    }

    QutesType check_assign(Expr& e, BinaryExpr& b, Scope* scope, int seq) {
        Expr& lhs = *b.lhs;
        if (!lhs.is<Identifier>() && !lhs.is<IndexExpr>()) {
            error("S014", "assignment target must be a variable or an element", lhs.span);
            check_expr(lhs, scope, seq);
            check_expr(*b.rhs, scope, seq);
            return set_type(e, QutesType{TypeKind::Void});
        }
        const QutesType lt = check_expr(lhs, scope, seq);
        const QutesType rt = check_expr(*b.rhs, scope, seq);
        if (is_poisoned(lt) || is_poisoned(rt))
            return set_type(e, lt);

        // assigning into a register slice takes a classical bit
        if (lhs.is<IndexExpr>() && lt.kind == TypeKind::Qubit) {
            const IndexExpr* ix = lhs.as<IndexExpr>();
            const QutesType& target = ix->target->type;
            if (target.kind == TypeKind::Quint || target.kind == TypeKind::Qustring) {
                if (rt.kind == TypeKind::Bool || rt.kind == TypeKind::Int) {
                    b.rhs->conversion = {Conversion::Kind::Promote, QutesType{TypeKind::Qubit}};
                    return set_type(e, lt);
                }
                error("S021", "register slice assignment requires a classical bit value",
                      b.rhs->span);
                return set_type(e, lt);
            }
        }
        apply_conversion(*b.rhs, rt, lt, "assignment");
        return set_type(e, lt);
    }

    QutesType check_comparison(Expr& e, BinaryExpr& b, QutesType lt, QutesType rt) {
        const bool lq = is_quantum(lt) && !lt.is_array();
        const bool rq = is_quantum(rt) && !rt.is_array();
        if (lq && rq) {
            error("S022", "comparisons between two quantum values are not supported", e.span);
            return set_type(e, QutesType{TypeKind::Void});
        }
        // comparing quantum with classical measures the quantum side
        if (lq) {
            const TypeKind d = *demotion_target(lt.kind);
            b.lhs->conversion = classify_conversion(lt, QutesType{d});
            lt = QutesType{d};
        }
        if (rq) {
            const TypeKind d = *demotion_target(rt.kind);
            b.rhs->conversion = classify_conversion(rt, QutesType{d});
            rt = QutesType{d};
        }
        if (lt.is_array() || rt.is_array()) {
            error("S020", "cannot compare arrays", e.span);
            return set_type(e, QutesType{TypeKind::Void});
        }
        const bool equality = b.op == BinaryOp::Eq || b.op == BinaryOp::Ne;
        if (lt.kind == TypeKind::String || rt.kind == TypeKind::String) {
            if (lt.kind == rt.kind && equality)
                return set_type(e, QutesType{TypeKind::Bool});
            error("S020",
                  equality ? "cannot compare " + type_name(lt) + " with " + type_name(rt)
                           : "strings support only == and !=",
                  e.span);
            return set_type(e, QutesType{TypeKind::Void});
        }
        if (lt.kind == TypeKind::Bool && rt.kind == TypeKind::Bool && equality)
            return set_type(e, QutesType{TypeKind::Bool});
        if (!numeric_join(lt, rt)) {
            error("S020", "cannot compare " + type_name(lt) + " with " + type_name(rt),
                  e.span);
            return set_type(e, QutesType{TypeKind::Void});
        }
        return set_type(e, QutesType{TypeKind::Bool});
    }

    QutesType check_shift(Expr& e, BinaryExpr& b, const QutesType& lt, const QutesType& rt) {
        const bool amount_ok =
            rt.kind == TypeKind::Int || rt.kind == TypeKind::Bool;
        if (!amount_ok) {
            error("S020", "shift amount must be a classical int, got " + type_name(rt),
                  b.rhs->span);
            return set_type(e, QutesType{TypeKind::Void});
        }
        if (lt.kind == TypeKind::Int)
            return set_type(e, QutesType{TypeKind::Int});
        if (lt.kind == TypeKind::Quint || lt.kind == TypeKind::Qustring)
            return set_type(e, lt);
        if (lt.kind == TypeKind::Qubit) {
            b.lhs->conversion = {Conversion::Kind::Promote, QutesType{TypeKind::Quint}};
            return set_type(e, QutesType{TypeKind::Quint});
        }
        error("S020", "cyclic shift requires a quint or qustring, got " + type_name(lt),
              b.lhs->span);
        return set_type(e, QutesType{TypeKind::Void});
    }

    /// Superposition addition: both sides reach quint; widths must agree.
    /// The narrower side may only be a promoted literal, which pads.
    QutesType check_quantum_add(Expr& e, BinaryExpr& b, const QutesType& lt,
                                const QutesType& rt) {
        const QutesType quint{TypeKind::Quint};
        const bool l_ok = promote_type(lt, quint).has_value();
        const bool r_ok = promote_type(rt, quint).has_value();
        if (!l_ok || !r_ok) {
            error("S005",
                  "no conversion to quint for quantum addition (" + type_name(lt) + " + " +
                      type_name(rt) + ")",
                  e.span);
            return set_type(e, QutesType{TypeKind::Void});
        }
        if (lt != quint)
            b.lhs->conversion = {Conversion::Kind::Promote, quint};
        if (rt != quint)
            b.rhs->conversion = {Conversion::Kind::Promote, quint};

        const auto lw = static_width(*b.lhs);
        const auto rw = static_width(*b.rhs);
        if (lw && rw) {
            const bool l_literal = b.lhs->is<IntLit>() || b.lhs->is<BoolLit>();
            const bool r_literal = b.rhs->is<IntLit>() || b.rhs->is<BoolLit>();
            if (!l_literal && !r_literal && *lw != *rw)
                error("S010",
                      "quantum addition width mismatch: " + std::to_string(*lw) + " vs " +
                          std::to_string(*rw),
                      e.span);
            else if (l_literal && !r_literal && *lw > *rw)
                error("S010",
                      "literal requires width " + std::to_string(*lw) +
                          " but the register has width " + std::to_string(*rw),
                      b.lhs->span);
            else if (r_literal && !l_literal && *rw > *lw)
                error("S010",
                      "literal requires width " + std::to_string(*rw) +
                          " but the register has width " + std::to_string(*lw),
                      b.rhs->span);
        }
        return set_type(e, quint);
    }

    QutesType check_classical_arith(Expr& e, BinaryExpr& b, const QutesType& lt,
                                    const QutesType& rt) {
        if (b.op == BinaryOp::Add && lt.kind == TypeKind::String &&
            rt.kind == TypeKind::String) {
            error("S020", "string concatenation is not supported", e.span);
            return set_type(e, QutesType{TypeKind::Void});
        }
        auto join = numeric_join(lt, rt);
        if (!join) {
            error("S020",
                  "arithmetic requires numeric operands (" + type_name(lt) + ", " +
                      type_name(rt) + ")",
                  e.span);
            return set_type(e, QutesType{TypeKind::Void});
        }
        if (b.op == BinaryOp::Mod && join->kind != TypeKind::Int) {
            error("S020", "'%' requires int operands", e.span);
            return set_type(e, QutesType{TypeKind::Void});
        }
        return set_type(e, *join);
    }

    static std::optional<QutesType> numeric_join(const QutesType& a, const QutesType& c) {
        auto rank = [](TypeKind k) {
            switch (k) {
                case TypeKind::Bool: return 0;
                case TypeKind::Int: return 1;
                case TypeKind::Float: return 2;
                default: return -1;
            }
        };
        const int ra = rank(a.kind);
        const int rc = rank(c.kind);
        if (ra < 0 || rc < 0)
            return std::nullopt;
        const int r = std::max(std::max(ra, rc), 1); // arithmetic is at least int
        return QutesType{r == 2 ? TypeKind::Float : TypeKind::Int};
    }

    static const char* mc_name_(McOp op) {
        switch (op) {
            case McOp::X: return "mcx";
            case McOp::Y: return "mcy";
            case McOp::Z: return "mcz";
            case McOp::P: return "mcp";
        }
        return "?";
    }

    QutesType check_mc(Expr& e, MultiControlledExpr& mc, Scope* scope, int seq) {
        if (mc.operands.size() < 2)
            error("S024",
                  std::string(mc_name_(mc.op)) + " requires at least 2 quantum operands",
                  e.span);
        for (auto& operand : mc.operands) {
            const QutesType t = check_expr(*operand, scope, seq);
            if (is_poisoned(t))
                continue;
            if (t.kind != TypeKind::Qubit)
                error("S008",
                      std::string(mc_name_(mc.op)) +
                          " operands must be single qubits, got " + type_name(t),
                      operand->span);
        }
        if (mc.op == McOp::P && mc.phase) {
            const QutesType pt = check_expr(*mc.phase, scope, seq);
            if (!is_poisoned(pt)) {
                if (pt.kind == TypeKind::Float || pt.kind == TypeKind::Int ||
                    pt.kind == TypeKind::Bool)
                    apply_conversion(*mc.phase, pt, QutesType{TypeKind::Float}, "phase");
                else
                    error("S020", "mcp phase must be a classical float, got " + type_name(pt),
                          mc.phase->span);
            }
        }
        return set_type(e, QutesType{TypeKind::Void});
    }

    QutesType check_in_match(Expr& e, InMatchExpr& in, Scope* scope, int seq) {
        const QutesType pt = check_expr(*in.pattern, scope, seq);
        if (!is_poisoned(pt)) {
            if (pt.kind == TypeKind::Qustring)
                in.pattern->conversion =
                    classify_conversion(pt, QutesType{TypeKind::String});
            else if (pt.kind != TypeKind::String)
                error("S025",
                      "search pattern must be a string or qustring, got " + type_name(pt),
                      in.pattern->span);
        }
        const Symbol* target = out_.table.resolve(scope, in.target, seq);
        if (!target) {
            error("S004", "unresolved identifier '" + in.target + "'", in.target_span);
            return set_type(e, QutesType{TypeKind::Int});
        }
        if (target->is_function ||
            (target->declared_type.kind != TypeKind::Qustring &&
             target->declared_type.kind != TypeKind::String)) {
            error("S025",
                  "search target must be a qustring or string variable, got " +
                      type_name(target->declared_type),
                  in.target_span);
        }
        // static length check when both sides are statically known
        if (const auto* lit = in.pattern->as<StringLit>()) {
            if (target && target->reg &&
                target->declared_type.kind == TypeKind::Qustring &&
                static_cast<int>(lit->value.size()) > target->reg->width)
                error("S025",
                      "pattern of length " + std::to_string(lit->value.size()) +
                          " cannot occur in a string of length " +
                          std::to_string(target->reg->width),
                      in.pattern->span);
        }
        return set_type(e, QutesType{TypeKind::Int});
    }

    SemaResult& out_;
    int seq_ = 0;
    const Symbol* current_function_ = nullptr;
};

} // namespace detail

/// First pass only: scopes, symbols, register sizing.
inline SemaResult build_symbol_table(const Program& program) {
    SemaResult out;
    detail::SymbolTableBuilder(out).run(program);
    return out;
}

/// Both passes: symbol table plus full type checking with promotion and
/// measurement-demotion marking. Mutates the program's annotations.
inline SemaResult check(Program& program) {
    SemaResult out;
    detail::SymbolTableBuilder(out).run(program);
    detail::TypeChecker(out).run(program);
    return out;
}

/// Innermost visible binding; thin wrapper over the table for callers that
/// do not track declaration order.
inline const Symbol* resolve(const SymbolTable& table, const Scope* scope,
                             const std::string& name) {
    return table.resolve(scope, name, std::numeric_limits<int>::max());
}

} // namespace qutes
