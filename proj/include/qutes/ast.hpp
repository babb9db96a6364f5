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

#include <cstdint>
#include <memory>
#include <string>
#include <variant>
#include <vector>

#include "qutes/diag.hpp"
#include "qutes/types.hpp"

namespace qutes {

struct Symbol; // sema annotation target

struct Expr;
struct Stmt;
using ExprPtr = std::unique_ptr<Expr>;
using StmtPtr = std::unique_ptr<Stmt>;

enum class UnaryOp { Neg, Pos, Not, Hadamard, PauliY, PauliZ, Measure, Print, Println };
enum class BinaryOp {
    Assign, Or, And,
    Eq, Ne, Lt, Le, Gt, Ge,
    Shl, Shr, Add, Sub, Mul, Div, Mod, Pow,
};
enum class McOp { X, Y, Z, P };

struct IntLit { std::int64_t value = 0; };
struct FloatLit { double value = 0.0; };
struct BoolLit { bool value = false; };
struct StringLit { std::string value; };
/// `<n>q` basis-state literal or `[v1, v2, ...]q` uniform superposition.
struct QuantumLit {
    std::vector<std::uint64_t> values;
    bool superposition = false;
};
struct Identifier { std::string name; };
struct IndexExpr { ExprPtr target; ExprPtr index; };
struct CallExpr { std::string name; std::vector<ExprPtr> args; Span name_span; };
struct ArrayLit { std::vector<ExprPtr> elems; };
struct UnaryExpr { UnaryOp op; ExprPtr operand; };
struct BinaryExpr { BinaryOp op; ExprPtr lhs; ExprPtr rhs; };
/// mcx/mcy/mcz(q0, ..., target) and mcp(q0, ..., target) by <phase>.
struct MultiControlledExpr { McOp op; std::vector<ExprPtr> operands; ExprPtr phase; };
/// `<pattern> in <target>` substring search; yields the match index.
struct InMatchExpr { ExprPtr pattern; std::string target; Span target_span; };

using ExprNode = std::variant<IntLit, FloatLit, BoolLit, StringLit, QuantumLit, Identifier,
                              IndexExpr, CallExpr, ArrayLit, UnaryExpr, BinaryExpr,
                              MultiControlledExpr, InMatchExpr>;

struct Expr {
    ExprNode node;
    Span span;

    // sema annotations
    QutesType type{TypeKind::Void};
    const Symbol* symbol = nullptr; // resolved binding for Identifier nodes
    Conversion conversion{};        // conversion into the surrounding context

    template <typename T>
    const T* as() const { return std::get_if<T>(&node); }
    template <typename T>
    T* as() { return std::get_if<T>(&node); }
    template <typename T>
    bool is() const { return std::holds_alternative<T>(node); }
};

/// Written type in source: a base type keyword, optionally `[]`.
struct TypeExpr {
    TypeKind base = TypeKind::Void;
    bool is_array = false;
    Span span;

    QutesType resolved() const { return is_array ? QutesType::array_of(base) : QutesType{base}; }
};

struct Param {
    TypeExpr type;
    std::string name;
    Span span;
};

struct VarDeclStmt {
    TypeExpr declared_type;
    std::string name;
    ExprPtr init; // may be null
};
struct FuncDeclStmt {
    TypeExpr return_type;
    std::string name;
    std::vector<Param> params;
    StmtPtr body; // BlockStmt
};
struct BlockStmt { std::vector<StmtPtr> stmts; };
struct IfStmt { ExprPtr cond; StmtPtr then_branch; StmtPtr else_branch; /* may be null */ };
struct WhileStmt { ExprPtr cond; StmtPtr body; };
struct ForeachStmt { std::string var; Span var_span; ExprPtr iterable; StmtPtr body; };
struct ReturnStmt { ExprPtr value; /* may be null */ };
struct ExprStmt { ExprPtr expr; };

using StmtNode = std::variant<VarDeclStmt, FuncDeclStmt, BlockStmt, IfStmt, WhileStmt,
                              ForeachStmt, ReturnStmt, ExprStmt>;

struct Stmt {
    StmtNode node;
    Span span;

    template <typename T>
    const T* as() const { return std::get_if<T>(&node); }
    template <typename T>
    T* as() { return std::get_if<T>(&node); }
    template <typename T>
    bool is() const { return std::holds_alternative<T>(node); }
};

struct Program {
    std::vector<StmtPtr> items;
    std::string file;
};

template <class... Ts>
struct overloaded : Ts... { using Ts::operator()...; };
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

inline ExprPtr make_expr(ExprNode node, Span span) {
    auto e = std::make_unique<Expr>();
    e->node = std::move(node);
    e->span = std::move(span);
    return e;
}

inline StmtPtr make_stmt(StmtNode node, Span span) {
    auto s = std::make_unique<Stmt>();
    s->node = std::move(node);
    s->span = std::move(span);
    return s;
}

/// Structural equality, spans and annotations excluded. Used by the
/// print/re-parse round-trip tests.
inline bool ast_equal(const Expr& a, const Expr& b);
inline bool ast_equal(const Stmt& a, const Stmt& b);

inline bool ast_equal(const ExprPtr& a, const ExprPtr& b) {
    if (!a || !b)
        return !a && !b;
    return ast_equal(*a, *b);
}
inline bool ast_equal(const StmtPtr& a, const StmtPtr& b) {
    if (!a || !b)
        return !a && !b;
    return ast_equal(*a, *b);
}

inline bool ast_equal(const Program& a, const Program& b) {
    if (a.items.size() != b.items.size())
        return false;
    for (std::size_t i = 0; i < a.items.size(); ++i)
        if (!ast_equal(a.items[i], b.items[i]))
            return false;
    return true;
}

inline bool ast_equal(const Expr& a, const Expr& b) {
    if (a.node.index() != b.node.index())
        return false;
    return std::visit(
        overloaded{
            [&](const IntLit& x) { return x.value == b.as<IntLit>()->value; },
            [&](const FloatLit& x) { return x.value == b.as<FloatLit>()->value; },
            [&](const BoolLit& x) { return x.value == b.as<BoolLit>()->value; },
            [&](const StringLit& x) { return x.value == b.as<StringLit>()->value; },
            [&](const QuantumLit& x) {
                const auto* y = b.as<QuantumLit>();
                return x.superposition == y->superposition && x.values == y->values;
            },
            [&](const Identifier& x) { return x.name == b.as<Identifier>()->name; },
            [&](const IndexExpr& x) {
                const auto* y = b.as<IndexExpr>();
                return ast_equal(x.target, y->target) && ast_equal(x.index, y->index);
            },
            [&](const CallExpr& x) {
                const auto* y = b.as<CallExpr>();
                if (x.name != y->name || x.args.size() != y->args.size())
                    return false;
                for (std::size_t i = 0; i < x.args.size(); ++i)
                    if (!ast_equal(x.args[i], y->args[i]))
                        return false;
                return true;
            },
            [&](const ArrayLit& x) {
                const auto* y = b.as<ArrayLit>();
                if (x.elems.size() != y->elems.size())
                    return false;
                for (std::size_t i = 0; i < x.elems.size(); ++i)
                    if (!ast_equal(x.elems[i], y->elems[i]))
                        return false;
                return true;
            },
            [&](const UnaryExpr& x) {
                const auto* y = b.as<UnaryExpr>();
                return x.op == y->op && ast_equal(x.operand, y->operand);
            },
            [&](const BinaryExpr& x) {
                const auto* y = b.as<BinaryExpr>();
                return x.op == y->op && ast_equal(x.lhs, y->lhs) && ast_equal(x.rhs, y->rhs);
            },
            [&](const MultiControlledExpr& x) {
                const auto* y = b.as<MultiControlledExpr>();
                if (x.op != y->op || x.operands.size() != y->operands.size())
                    return false;
                for (std::size_t i = 0; i < x.operands.size(); ++i)
                    if (!ast_equal(x.operands[i], y->operands[i]))
                        return false;
                return ast_equal(x.phase, y->phase);
            },
            [&](const InMatchExpr& x) {
                const auto* y = b.as<InMatchExpr>();
                return x.target == y->target && ast_equal(x.pattern, y->pattern);
            },
        },
        a.node);
}

inline bool ast_equal(const Stmt& a, const Stmt& b) {
    if (a.node.index() != b.node.index())
        return false;
    auto type_eq = [](const TypeExpr& x, const TypeExpr& y) {
        return x.base == y.base && x.is_array == y.is_array;
    };
    return std::visit(
        overloaded{
            [&](const VarDeclStmt& x) {
                const auto* y = b.as<VarDeclStmt>();
                return type_eq(x.declared_type, y->declared_type) && x.name == y->name &&
                       ast_equal(x.init, y->init);
            },
            [&](const FuncDeclStmt& x) {
                const auto* y = b.as<FuncDeclStmt>();
                if (!type_eq(x.return_type, y->return_type) || x.name != y->name ||
                    x.params.size() != y->params.size())
                    return false;
                for (std::size_t i = 0; i < x.params.size(); ++i)
                    if (!type_eq(x.params[i].type, y->params[i].type) ||
                        x.params[i].name != y->params[i].name)
                        return false;
                return ast_equal(x.body, y->body);
            },
            [&](const BlockStmt& x) {
                const auto* y = b.as<BlockStmt>();
                if (x.stmts.size() != y->stmts.size())
                    return false;
                for (std::size_t i = 0; i < x.stmts.size(); ++i)
                    if (!ast_equal(x.stmts[i], y->stmts[i]))
                        return false;
                return true;
            },
            [&](const IfStmt& x) {
                const auto* y = b.as<IfStmt>();
                return ast_equal(x.cond, y->cond) && ast_equal(x.then_branch, y->then_branch) &&
                       ast_equal(x.else_branch, y->else_branch);
            },
            [&](const WhileStmt& x) {
                const auto* y = b.as<WhileStmt>();
                return ast_equal(x.cond, y->cond) && ast_equal(x.body, y->body);
            },
            [&](const ForeachStmt& x) {
                const auto* y = b.as<ForeachStmt>();
                return x.var == y->var && ast_equal(x.iterable, y->iterable) &&
                       ast_equal(x.body, y->body);
            },
            [&](const ReturnStmt& x) { return ast_equal(x.value, b.as<ReturnStmt>()->value); },
            [&](const ExprStmt& x) { return ast_equal(x.expr, b.as<ExprStmt>()->expr); },
        },
        a.node);
}

} // namespace qutes
