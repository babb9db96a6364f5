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

#include <charconv>
#include <string>

#include "qutes/ast.hpp"

namespace qutes {

inline std::string format_float_literal(double v) {
    char buf[64];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
    std::string s(buf, ptr);
    if (s.find('.') == std::string::npos && s.find('e') == std::string::npos &&
        s.find('E') == std::string::npos)
        s += ".0";
    return s;
}

inline std::string escape_string_literal(const std::string& raw) {
    std::string out = "\"";
    for (char c : raw) {
        switch (c) {
            case '"': out += "\\\""; break;
            case '\\': out += "\\\\"; break;
            case '\n': out += "\\n"; break;
            case '\t': out += "\\t"; break;
            default: out.push_back(c);
        }
    }
    out += '"';
    return out;
}

inline const char* unary_op_name(UnaryOp op) {
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

inline const char* binary_op_name(BinaryOp op) {
    switch (op) {
        case BinaryOp::Assign: return "=";
        case BinaryOp::Or: return "||";
        case BinaryOp::And: return "&&";
        case BinaryOp::Eq: return "==";
        case BinaryOp::Ne: return "!=";
        case BinaryOp::Lt: return "<";
        case BinaryOp::Le: return "<=";
        case BinaryOp::Gt: return ">";
        case BinaryOp::Ge: return ">=";
        case BinaryOp::Shl: return "<<";
        case BinaryOp::Shr: return ">>";
        case BinaryOp::Add: return "+";
        case BinaryOp::Sub: return "-";
        case BinaryOp::Mul: return "*";
        case BinaryOp::Div: return "/";
        case BinaryOp::Mod: return "%";
        case BinaryOp::Pow: return "^";
    }
    return "?";
}

inline const char* mc_op_name(McOp op) {
    switch (op) {
        case McOp::X: return "mcx";
        case McOp::Y: return "mcy";
        case McOp::Z: return "mcz";
        case McOp::P: return "mcp";
    }
    return "?";
}

inline std::string type_expr_name(const TypeExpr& t) {
    std::string s = type_name(QutesType{t.base});
    if (t.is_array)
        s += "[]";
    return s;
}

namespace detail {

// precedence levels mirroring the parser
inline int binary_level(BinaryOp op) {
    switch (op) {
        case BinaryOp::Assign: return 1;
        case BinaryOp::Or: return 3;
        case BinaryOp::And: return 4;
        case BinaryOp::Eq:
        case BinaryOp::Ne:
        case BinaryOp::Lt:
        case BinaryOp::Le:
        case BinaryOp::Gt:
        case BinaryOp::Ge: return 5;
        case BinaryOp::Shl:
        case BinaryOp::Shr: return 6;
        case BinaryOp::Add:
        case BinaryOp::Sub: return 7;
        case BinaryOp::Mul:
        case BinaryOp::Div:
        case BinaryOp::Mod: return 8;
        case BinaryOp::Pow: return 9;
    }
    return 12;
}

inline int expr_level(const Expr& e) {
    return std::visit(
        overloaded{
            [](const BinaryExpr& b) { return binary_level(b.op); },
            [](const InMatchExpr&) { return 2; },
            [](const UnaryExpr& u) {
                return (u.op == UnaryOp::Print || u.op == UnaryOp::Println) ? 0 : 10;
            },
            [](const IndexExpr&) { return 11; },
            [](const auto&) { return 12; },
        },
        e.node);
}

class SourcePrinter {
public:
    std::string print(const Program& p) {
        for (const auto& item : p.items)
            stmt(*item);
        return std::move(out_);
    }

    std::string print_expr(const Expr& e) {
        expr(e, 0);
        return std::move(out_);
    }

private:
    void write(const std::string& s) { out_ += s; }
    void indent() { out_.append(static_cast<std::size_t>(depth_) * 4, ' '); }
    void newline() { out_ += '\n'; }

    void expr(const Expr& e, int min_level) {
        const bool parens = expr_level(e) < min_level;
        if (parens)
            write("(");
        std::visit(
            overloaded{
                [&](const IntLit& x) { write(std::to_string(x.value)); },
                [&](const FloatLit& x) { write(format_float_literal(x.value)); },
                [&](const BoolLit& x) { write(x.value ? "true" : "false"); },
                [&](const StringLit& x) { write(escape_string_literal(x.value)); },
                [&](const QuantumLit& x) {
                    if (!x.superposition) {
                        write(std::to_string(x.values[0]) + "q");
                    } else {
                        write("[");
                        for (std::size_t i = 0; i < x.values.size(); ++i) {
                            if (i)
                                write(", ");
                            write(std::to_string(x.values[i]));
                        }
                        write("]q");
                    }
                },
                [&](const Identifier& x) { write(x.name); },
                [&](const IndexExpr& x) {
                    expr(*x.target, 11);
                    write("[");
                    expr(*x.index, 0);
                    write("]");
                },
                [&](const CallExpr& x) {
                    write(x.name + "(");
                    for (std::size_t i = 0; i < x.args.size(); ++i) {
                        if (i)
                            write(", ");
                        expr(*x.args[i], 0);
                    }
                    write(")");
                },
                [&](const ArrayLit& x) {
                    write("[");
                    for (std::size_t i = 0; i < x.elems.size(); ++i) {
                        if (i)
                            write(", ");
                        expr(*x.elems[i], 0);
                    }
                    write("]");
                },
                [&](const UnaryExpr& x) {
                    const bool loose = x.op == UnaryOp::Print || x.op == UnaryOp::Println;
                    write(unary_op_name(x.op));
                    if (loose || x.op == UnaryOp::Not || x.op == UnaryOp::Hadamard ||
                        x.op == UnaryOp::PauliY || x.op == UnaryOp::PauliZ ||
                        x.op == UnaryOp::Measure)
                        write(" ");
                    expr(*x.operand, loose ? 0 : 10);
                },
                [&](const BinaryExpr& x) {
                    const int lv = binary_level(x.op);
                    const bool right_assoc = x.op == BinaryOp::Assign || x.op == BinaryOp::Pow;
                    expr(*x.lhs, right_assoc ? lv + 1 : lv);
                    write(std::string(" ") + binary_op_name(x.op) + " ");
                    expr(*x.rhs, right_assoc ? lv : lv + 1);
                },
                [&](const MultiControlledExpr& x) {
                    write(std::string(mc_op_name(x.op)) + "(");
                    for (std::size_t i = 0; i < x.operands.size(); ++i) {
                        if (i)
                            write(", ");
                        expr(*x.operands[i], 0);
                    }
                    write(")");
                    if (x.phase) {
                        write(" by ");
                        expr(*x.phase, 2);
                    }
                },
                [&](const InMatchExpr& x) {
                    expr(*x.pattern, 3);
                    write(" in " + x.target);
                },
            },
            e.node);
        if (parens)
            write(")");
    }

    void block_body(const Stmt& s) {
        const auto* b = s.as<BlockStmt>();
        write("{");
        newline();
        ++depth_;
        for (const auto& inner : b->stmts)
            stmt(*inner);
        --depth_;
        indent();
        write("}");
    }

    void stmt(const Stmt& s) {
        std::visit(
            overloaded{
                [&](const VarDeclStmt& x) {
                    indent();
                    write(type_expr_name(x.declared_type) + " " + x.name);
                    if (x.init) {
                        write(" = ");
                        expr(*x.init, 0);
                    }
                    write(";");
                    newline();
                },
                [&](const FuncDeclStmt& x) {
                    indent();
                    write(type_expr_name(x.return_type) + " " + x.name + "(");
                    for (std::size_t i = 0; i < x.params.size(); ++i) {
                        if (i)
                            write(", ");
                        write(type_expr_name(x.params[i].type) + " " + x.params[i].name);
                    }
                    write(") ");
                    block_body(*x.body);
                    newline();
                },
                [&](const BlockStmt&) {
                    indent();
                    block_body(s);
                    newline();
                },
                [&](const IfStmt& x) {
                    indent();
                    if_chain(x);
                    newline();
                },
                [&](const WhileStmt& x) {
                    indent();
                    write("while ");
                    expr(*x.cond, 2);
                    write(" ");
                    block_body(*x.body);
                    newline();
                },
                [&](const ForeachStmt& x) {
                    indent();
                    write("foreach " + x.var + " in ");
                    expr(*x.iterable, 3);
                    write(" ");
                    block_body(*x.body);
                    newline();
                },
                [&](const ReturnStmt& x) {
                    indent();
                    write("return");
                    if (x.value) {
                        write(" ");
                        expr(*x.value, 0);
                    }
                    write(";");
                    newline();
                },
                [&](const ExprStmt& x) {
                    indent();
                    expr(*x.expr, 0);
                    write(";");
                    newline();
                },
            },
            s.node);
    }

    void if_chain(const IfStmt& x) {
        write("if ");
        expr(*x.cond, 2);
        write(" ");
        block_body(*x.then_branch);
        if (x.else_branch) {
            write(" else ");
            if (const auto* nested = x.else_branch->as<IfStmt>())
                if_chain(*nested);
            else
                block_body(*x.else_branch);
        }
    }

    std::string out_;
    int depth_ = 0;
};

class SexprPrinter {
public:
    std::string print(const Program& p) {
        if (p.items.empty())
            return "(program)\n";
        out_ = "(program\n";
        depth_ = 1;
        for (std::size_t i = 0; i < p.items.size(); ++i)
            stmt(*p.items[i], i + 1 == p.items.size() ? 1 : 0);
        return std::move(out_);
    }

private:
    void line_open(const std::string& head) {
        out_.append(static_cast<std::size_t>(depth_) * 2, ' ');
        out_ += head;
    }
    // `extra` closing parens fold onto the final child line
    void line_close(int extra) {
        out_.append(static_cast<std::size_t>(extra), ')');
        out_ += '\n';
    }

    std::string expr(const Expr& e) {
        return std::visit(
            overloaded{
                [&](const IntLit& x) { return "(int " + std::to_string(x.value) + ")"; },
                [&](const FloatLit& x) {
                    return "(float " + format_float_literal(x.value) + ")";
                },
                [&](const BoolLit& x) {
                    return std::string("(bool ") + (x.value ? "true" : "false") + ")";
                },
                [&](const StringLit& x) {
                    return "(str " + escape_string_literal(x.value) + ")";
                },
                [&](const QuantumLit& x) {
                    std::string s = x.superposition ? "(qlit-super" : "(qlit";
                    for (auto v : x.values)
                        s += " " + std::to_string(v);
                    return s + ")";
                },
                [&](const Identifier& x) { return "(ident " + x.name + ")"; },
                [&](const IndexExpr& x) {
                    return "(index " + expr(*x.target) + " " + expr(*x.index) + ")";
                },
                [&](const CallExpr& x) {
                    std::string s = "(call " + x.name;
                    for (const auto& a : x.args)
                        s += " " + expr(*a);
                    return s + ")";
                },
                [&](const ArrayLit& x) {
                    std::string s = "(array";
                    for (const auto& a : x.elems)
                        s += " " + expr(*a);
                    return s + ")";
                },
                [&](const UnaryExpr& x) {
                    std::string head;
                    switch (x.op) {
                        case UnaryOp::Neg: head = "neg"; break;
                        case UnaryOp::Pos: head = "pos"; break;
                        default: head = unary_op_name(x.op); break;
                    }
                    return "(unary " + head + " " + expr(*x.operand) + ")";
                },
                [&](const BinaryExpr& x) {
                    std::string head;
                    switch (x.op) {
                        case BinaryOp::Assign: head = "assign"; break;
                        case BinaryOp::Or: head = "or"; break;
                        case BinaryOp::And: head = "and"; break;
                        case BinaryOp::Eq: head = "eq"; break;
                        case BinaryOp::Ne: head = "ne"; break;
                        case BinaryOp::Lt: head = "lt"; break;
                        case BinaryOp::Le: head = "le"; break;
                        case BinaryOp::Gt: head = "gt"; break;
                        case BinaryOp::Ge: head = "ge"; break;
                        case BinaryOp::Shl: head = "shl"; break;
                        case BinaryOp::Shr: head = "shr"; break;
                        case BinaryOp::Add: head = "add"; break;
                        case BinaryOp::Sub: head = "sub"; break;
                        case BinaryOp::Mul: head = "mul"; break;
                        case BinaryOp::Div: head = "div"; break;
                        case BinaryOp::Mod: head = "mod"; break;
                        case BinaryOp::Pow: head = "pow"; break;
                    }
                    return "(binary " + head + " " + expr(*x.lhs) + " " + expr(*x.rhs) + ")";
                },
                [&](const MultiControlledExpr& x) {
                    std::string s = std::string("(") + mc_op_name(x.op);
                    for (const auto& o : x.operands)
                        s += " " + expr(*o);
                    if (x.phase)
                        s += " (by " + expr(*x.phase) + ")";
                    return s + ")";
                },
                [&](const InMatchExpr& x) {
                    return "(in " + expr(*x.pattern) + " " + x.target + ")";
                },
            },
            e.node);
    }

    void stmt(const Stmt& s, int closers) {
        std::visit(
            overloaded{
                [&](const VarDeclStmt& x) {
                    line_open("(vardecl " + type_expr_name(x.declared_type) + " " + x.name);
                    if (x.init)
                        out_ += " " + expr(*x.init);
                    out_ += ")";
                    line_close(closers);
                },
                [&](const FuncDeclStmt& x) {
                    std::string head =
                        "(funcdecl " + type_expr_name(x.return_type) + " " + x.name + " (params";
                    for (const auto& p : x.params)
                        head += " (" + type_expr_name(p.type) + " " + p.name + ")";
                    head += ")";
                    line_open(head);
                    out_ += '\n';
                    ++depth_;
                    stmt(*x.body, closers + 1);
                    --depth_;
                },
                [&](const BlockStmt& x) {
                    if (x.stmts.empty()) {
                        line_open("(block)");
                        line_close(closers);
                        return;
                    }
                    line_open("(block");
                    out_ += '\n';
                    ++depth_;
                    for (std::size_t i = 0; i < x.stmts.size(); ++i)
                        stmt(*x.stmts[i], i + 1 == x.stmts.size() ? closers + 1 : 0);
                    --depth_;
                },
                [&](const IfStmt& x) {
                    line_open("(if " + expr(*x.cond));
                    out_ += '\n';
                    ++depth_;
                    stmt(*x.then_branch, x.else_branch ? 0 : closers + 1);
                    if (x.else_branch)
                        stmt(*x.else_branch, closers + 1);
                    --depth_;
                },
                [&](const WhileStmt& x) {
                    line_open("(while " + expr(*x.cond));
                    out_ += '\n';
                    ++depth_;
                    stmt(*x.body, closers + 1);
                    --depth_;
                },
                [&](const ForeachStmt& x) {
                    line_open("(foreach " + x.var + " " + expr(*x.iterable));
                    out_ += '\n';
                    ++depth_;
                    stmt(*x.body, closers + 1);
                    --depth_;
                },
                [&](const ReturnStmt& x) {
                    if (x.value)
                        line_open("(return " + expr(*x.value) + ")");
                    else
                        line_open("(return)");
                    line_close(closers);
                },
                [&](const ExprStmt& x) {
                    line_open("(exprstmt " + expr(*x.expr) + ")");
                    line_close(closers);
                },
            },
            s.node);
    }

    std::string out_;
    int depth_ = 0;
};

} // namespace detail

/// Canonical source form; re-parses to a structurally identical tree.
inline std::string pretty_print(const Program& p) { return detail::SourcePrinter().print(p); }
inline std::string pretty_print(const Expr& e) { return detail::SourcePrinter().print_expr(e); }

/// Deterministic s-expression dump, statement nodes one per line.
inline std::string emit_ast(const Program& p) { return detail::SexprPrinter().print(p); }

} // namespace qutes
