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

#include <string>
#include <utility>
#include <vector>

#include "qutes/ast.hpp"
#include "qutes/lexer.hpp"
#include "qutes/token.hpp"

namespace qutes {

struct ParseResult {
    Program program;
    DiagnosticList diagnostics;
};

/// Recursive descent with precedence climbing. Recovery is per statement:
/// after an error the parser synchronizes on `;` or `}` so several
/// diagnostics can be reported in one run.
class Parser {
public:
    explicit Parser(std::vector<Token> tokens) : tokens_(std::move(tokens)) {}

    ParseResult run(std::string file) {
        ParseResult out;
        out.program.file = std::move(file);
        while (!check(TokenType::EndOfFile)) {
            if (auto item = parse_item(/*top_level=*/true))
                out.program.items.push_back(std::move(item));
        }
        out.diagnostics = std::move(diags_);
        return out;
    }

private:
    struct ParseError {};

    const Token& peek(std::size_t ahead = 0) const {
        std::size_t i = pos_ + ahead;
        if (i >= tokens_.size())
            i = tokens_.size() - 1;
        return tokens_[i];
    }
    bool check(TokenType t) const { return peek().type == t; }
    bool match(TokenType t) {
        if (!check(t))
            return false;
        consume();
        return true;
    }
    const Token& consume() {
        const Token& t = tokens_[pos_];
        if (pos_ + 1 < tokens_.size())
            ++pos_;
        return t;
    }
    const Token& expect(TokenType t, const std::string& context) {
        if (check(t))
            return consume();
        fail("expected " + token_type_name(t) + " " + context + ", found " +
             token_type_name(peek().type));
    }

    [[noreturn]] void fail(const std::string& message) {
        diags_.error("P001", message, peek().span);
        throw ParseError{};
    }

    void synchronize() {
        while (!check(TokenType::EndOfFile)) {
            if (check(TokenType::Semicolon)) {
                consume();
                return;
            }
            if (check(TokenType::RBrace))
                return;
            consume();
        }
    }

    static Span join(const Span& a, const Span& b) {
        Span s = a;
        s.end_line = b.end_line;
        s.end_col = b.end_col;
        return s;
    }

    static bool is_type_keyword(TokenType t) {
        switch (t) {
            case TokenType::KwBool:
            case TokenType::KwInt:
            case TokenType::KwFloat:
            case TokenType::KwString:
            case TokenType::KwQubit:
            case TokenType::KwQuint:
            case TokenType::KwQustring:
            case TokenType::KwVoid: return true;
            default: return false;
        }
    }

    static TypeKind type_kind_of(TokenType t) {
        switch (t) {
            case TokenType::KwBool: return TypeKind::Bool;
            case TokenType::KwInt: return TypeKind::Int;
            case TokenType::KwFloat: return TypeKind::Float;
            case TokenType::KwString: return TypeKind::String;
            case TokenType::KwQubit: return TypeKind::Qubit;
            case TokenType::KwQuint: return TypeKind::Quint;
            case TokenType::KwQustring: return TypeKind::Qustring;
            default: return TypeKind::Void;
        }
    }

    TypeExpr parse_type() {
        const Token& t = consume();
        TypeExpr te;
        te.base = type_kind_of(t.type);
        te.span = t.span;
        if (check(TokenType::LBracket) && peek(1).type == TokenType::RBracket) {
            consume();
            const Token& close = consume();
            te.is_array = true;
            te.span = join(te.span, close.span);
        }
        return te;
    }

    StmtPtr parse_item(bool top_level) {
        try {
            return parse_statement(top_level);
        } catch (const ParseError&) {
            synchronize();
            return nullptr;
        }
    }

    StmtPtr parse_statement(bool top_level) {
        if (is_type_keyword(peek().type))
            return parse_decl(top_level);
        switch (peek().type) {
            case TokenType::KwIf: return parse_if();
            case TokenType::KwWhile: return parse_while();
            case TokenType::KwForeach: return parse_foreach();
            case TokenType::KwReturn: return parse_return();
            case TokenType::LBrace: return parse_block();
            default: break;
        }
        Span start = peek().span;
        ExprPtr e = parse_expr();
        const Token& semi = expect(TokenType::Semicolon, "after expression statement");
        return make_stmt(ExprStmt{std::move(e)}, join(start, semi.span));
    }

    StmtPtr parse_decl(bool top_level) {
        Span start = peek().span;
        TypeExpr type = parse_type();
        const Token& name = expect(TokenType::Identifier, "after type");
        if (check(TokenType::LParen)) {
            if (!top_level)
                fail("nested function declarations are not supported");
            return parse_func_rest(std::move(type), name, start);
        }
        ExprPtr init;
        if (match(TokenType::Assign))
            init = parse_expr();
        const Token& semi = expect(TokenType::Semicolon, "after variable declaration");
        return make_stmt(VarDeclStmt{type, name.lexeme, std::move(init)}, join(start, semi.span));
    }

    StmtPtr parse_func_rest(TypeExpr return_type, const Token& name, Span start) {
        expect(TokenType::LParen, "after function name");
        std::vector<Param> params;
        if (!check(TokenType::RParen)) {
            do {
                if (!is_type_keyword(peek().type))
                    fail("expected parameter type, found " + token_type_name(peek().type));
                TypeExpr pt = parse_type();
                const Token& pn = expect(TokenType::Identifier, "after parameter type");
                params.push_back({pt, pn.lexeme, join(pt.span, pn.span)});
            } while (match(TokenType::Comma));
        }
        expect(TokenType::RParen, "after parameter list");
        StmtPtr body = parse_block();
        Span span = join(start, body->span);
        return make_stmt(FuncDeclStmt{return_type, name.lexeme, std::move(params), std::move(body)},
                         span);
    }

    StmtPtr parse_block() {
        const Token& open = expect(TokenType::LBrace, "to open block");
        std::vector<StmtPtr> stmts;
        while (!check(TokenType::RBrace) && !check(TokenType::EndOfFile)) {
            if (auto s = parse_item(/*top_level=*/false))
                stmts.push_back(std::move(s));
        }
        const Token& close = expect(TokenType::RBrace, "to close block");
        return make_stmt(BlockStmt{std::move(stmts)}, join(open.span, close.span));
    }

    StmtPtr parse_if() {
        const Token& kw = consume();
        ExprPtr cond = parse_condition();
        StmtPtr then_branch = parse_block();
        StmtPtr else_branch;
        Span span = join(kw.span, then_branch->span);
        if (match(TokenType::KwElse)) {
            if (check(TokenType::KwIf))
                else_branch = parse_if();
            else
                else_branch = parse_block();
            span = join(kw.span, else_branch->span);
        }
        return make_stmt(IfStmt{std::move(cond), std::move(then_branch), std::move(else_branch)},
                         span);
    }

    StmtPtr parse_while() {
        const Token& kw = consume();
        ExprPtr cond = parse_condition();
        StmtPtr body = parse_block();
        Span span = join(kw.span, body->span);
        return make_stmt(WhileStmt{std::move(cond), std::move(body)}, span);
    }

    StmtPtr parse_foreach() {
        const Token& kw = consume();
        const Token& var = expect(TokenType::Identifier, "after 'foreach'");
        expect(TokenType::KwIn, "after loop variable");
        ExprPtr iterable = parse_or(); // no bare `in` inside the iterable
        StmtPtr body = parse_block();
        Span span = join(kw.span, body->span);
        return make_stmt(ForeachStmt{var.lexeme, var.span, std::move(iterable), std::move(body)},
                         span);
    }

    StmtPtr parse_return() {
        const Token& kw = consume();
        ExprPtr value;
        if (!check(TokenType::Semicolon))
            value = parse_expr();
        const Token& semi = expect(TokenType::Semicolon, "after return statement");
        return make_stmt(ReturnStmt{std::move(value)}, join(kw.span, semi.span));
    }

    // conditions allow everything except assignment
    ExprPtr parse_condition() { return parse_in(); }

    ExprPtr parse_expr() {
        if (check(TokenType::KwPrint) || check(TokenType::KwPrintln)) {
            const Token& kw = consume();
            UnaryOp op = kw.type == TokenType::KwPrint ? UnaryOp::Print : UnaryOp::Println;
            ExprPtr operand = parse_expr();
            Span span = join(kw.span, operand->span);
            return make_expr(UnaryExpr{op, std::move(operand)}, span);
        }
        return parse_assign();
    }

    ExprPtr parse_assign() {
        ExprPtr lhs = parse_in();
        if (match(TokenType::Assign)) {
            ExprPtr rhs = parse_expr();
            Span span = join(lhs->span, rhs->span);
            return make_expr(BinaryExpr{BinaryOp::Assign, std::move(lhs), std::move(rhs)}, span);
        }
        return lhs;
    }

    ExprPtr parse_in() {
        ExprPtr lhs = parse_or();
        if (match(TokenType::KwIn)) {
            const Token& target = expect(TokenType::Identifier, "after 'in'");
            Span span = join(lhs->span, target.span);
            return make_expr(InMatchExpr{std::move(lhs), target.lexeme, target.span}, span);
        }
        return lhs;
    }

    ExprPtr parse_or() {
        ExprPtr lhs = parse_and();
        while (match(TokenType::OrOr)) {
            ExprPtr rhs = parse_and();
            Span span = join(lhs->span, rhs->span);
            lhs = make_expr(BinaryExpr{BinaryOp::Or, std::move(lhs), std::move(rhs)}, span);
        }
        return lhs;
    }

    ExprPtr parse_and() {
        ExprPtr lhs = parse_comparison();
        while (match(TokenType::AndAnd)) {
            ExprPtr rhs = parse_comparison();
            Span span = join(lhs->span, rhs->span);
            lhs = make_expr(BinaryExpr{BinaryOp::And, std::move(lhs), std::move(rhs)}, span);
        }
        return lhs;
    }

    ExprPtr parse_comparison() {
        ExprPtr lhs = parse_shift();
        for (;;) {
            BinaryOp op;
            if (match(TokenType::EqEq)) op = BinaryOp::Eq;
            else if (match(TokenType::NotEq)) op = BinaryOp::Ne;
            else if (match(TokenType::Less)) op = BinaryOp::Lt;
            else if (match(TokenType::LessEq)) op = BinaryOp::Le;
            else if (match(TokenType::Greater)) op = BinaryOp::Gt;
            else if (match(TokenType::GreaterEq)) op = BinaryOp::Ge;
            else break;
            ExprPtr rhs = parse_shift();
            Span span = join(lhs->span, rhs->span);
            lhs = make_expr(BinaryExpr{op, std::move(lhs), std::move(rhs)}, span);
        }
        return lhs;
    }

    ExprPtr parse_shift() {
        ExprPtr lhs = parse_additive();
        for (;;) {
            BinaryOp op;
            if (match(TokenType::Shl)) op = BinaryOp::Shl;
            else if (match(TokenType::Shr)) op = BinaryOp::Shr;
            else break;
            ExprPtr rhs = parse_additive();
            Span span = join(lhs->span, rhs->span);
            lhs = make_expr(BinaryExpr{op, std::move(lhs), std::move(rhs)}, span);
        }
        return lhs;
    }

    ExprPtr parse_additive() {
        ExprPtr lhs = parse_multiplicative();
        for (;;) {
            BinaryOp op;
            if (match(TokenType::Plus)) op = BinaryOp::Add;
            else if (match(TokenType::Minus)) op = BinaryOp::Sub;
            else break;
            ExprPtr rhs = parse_multiplicative();
            Span span = join(lhs->span, rhs->span);
            lhs = make_expr(BinaryExpr{op, std::move(lhs), std::move(rhs)}, span);
        }
        return lhs;
    }

    ExprPtr parse_multiplicative() {
        ExprPtr lhs = parse_power();
        for (;;) {
            BinaryOp op;
            if (match(TokenType::Star)) op = BinaryOp::Mul;
            else if (match(TokenType::Slash)) op = BinaryOp::Div;
            else if (match(TokenType::Percent)) op = BinaryOp::Mod;
            else break;
            ExprPtr rhs = parse_power();
            Span span = join(lhs->span, rhs->span);
            lhs = make_expr(BinaryExpr{op, std::move(lhs), std::move(rhs)}, span);
        }
        return lhs;
    }

    ExprPtr parse_power() {
        ExprPtr lhs = parse_unary();
        if (match(TokenType::Caret)) {
            ExprPtr rhs = parse_power(); // right-assoc
            Span span = join(lhs->span, rhs->span);
            return make_expr(BinaryExpr{BinaryOp::Pow, std::move(lhs), std::move(rhs)}, span);
        }
        return lhs;
    }

    ExprPtr parse_unary() {
        UnaryOp op;
        switch (peek().type) {
            case TokenType::Minus: op = UnaryOp::Neg; break;
            case TokenType::Plus: op = UnaryOp::Pos; break;
            case TokenType::KwNot: op = UnaryOp::Not; break;
            case TokenType::KwHadamard: op = UnaryOp::Hadamard; break;
            case TokenType::KwPauliY: op = UnaryOp::PauliY; break;
            case TokenType::KwPauliZ: op = UnaryOp::PauliZ; break;
            case TokenType::KwMeasure: op = UnaryOp::Measure; break;
            default: return parse_postfix();
        }
        const Token& kw = consume();
        ExprPtr operand = parse_unary();
        Span span = join(kw.span, operand->span);
        return make_expr(UnaryExpr{op, std::move(operand)}, span);
    }

    ExprPtr parse_postfix() {
        ExprPtr e = parse_primary();
        while (check(TokenType::LBracket)) {
            consume();
            ExprPtr index = parse_expr();
            const Token& close = expect(TokenType::RBracket, "to close index");
            Span span = join(e->span, close.span);
            e = make_expr(IndexExpr{std::move(e), std::move(index)}, span);
        }
        return e;
    }

    ExprPtr parse_primary() {
        const Token& t = peek();
        switch (t.type) {
            case TokenType::IntLiteral: {
                consume();
                return make_expr(IntLit{t.int_value}, t.span);
            }
            case TokenType::FloatLiteral: {
                consume();
                return make_expr(FloatLit{t.float_value}, t.span);
            }
            case TokenType::StringLiteral: {
                consume();
                return make_expr(StringLit{t.string_value}, t.span);
            }
            case TokenType::QuantumLiteral: {
                consume();
                QuantumLit q;
                q.values.push_back(static_cast<std::uint64_t>(t.int_value));
                q.superposition = false;
                return make_expr(std::move(q), t.span);
            }
            case TokenType::KwTrue:
            case TokenType::KwFalse: {
                consume();
                return make_expr(BoolLit{t.type == TokenType::KwTrue}, t.span);
            }
            case TokenType::Identifier: {
                consume();
                if (check(TokenType::LParen))
                    return parse_call(t);
                return make_expr(Identifier{t.lexeme}, t.span);
            }
            case TokenType::LParen: {
                consume();
                ExprPtr inner = parse_expr();
                expect(TokenType::RParen, "to close parenthesized expression");
                return inner;
            }
            case TokenType::LBracket:
                return parse_bracket_literal();
            case TokenType::KwMcx:
            case TokenType::KwMcy:
            case TokenType::KwMcz:
            case TokenType::KwMcp:
                return parse_multi_controlled();
            default:
                fail("expected expression, found " + token_type_name(t.type));
        }
    }

    ExprPtr parse_call(const Token& name) {
        expect(TokenType::LParen, "after function name");
        std::vector<ExprPtr> args;
        if (!check(TokenType::RParen)) {
            do {
                args.push_back(parse_expr());
            } while (match(TokenType::Comma));
        }
        const Token& close = expect(TokenType::RParen, "to close argument list");
        Span span = join(name.span, close.span);
        return make_expr(CallExpr{name.lexeme, std::move(args), name.span}, span);
    }

    /// `[e1, e2, ...]` array literal or `[v1, v2, ...]q` superposition literal.
    ExprPtr parse_bracket_literal() {
        const Token& open = consume();
        std::vector<ExprPtr> elems;
        if (!check(TokenType::RBracket) && !check(TokenType::RBracketQ)) {
            do {
                elems.push_back(parse_expr());
            } while (match(TokenType::Comma));
        }
        if (check(TokenType::RBracketQ)) {
            const Token& close = consume();
            Span span = join(open.span, close.span);
            QuantumLit q;
            q.superposition = true;
            for (const auto& e : elems) {
                const auto* lit = e->as<IntLit>();
                if (!lit || lit->value < 0) {
                    diags_.error("L003",
                                 "malformed quantum literal: superposition values must be "
                                 "non-negative integer literals",
                                 e->span);
                    throw ParseError{};
                }
                q.values.push_back(static_cast<std::uint64_t>(lit->value));
            }
            if (q.values.empty()) {
                diags_.error("L003", "malformed quantum literal: superposition list is empty",
                             span);
                throw ParseError{};
            }
            return make_expr(std::move(q), span);
        }
        const Token& close = expect(TokenType::RBracket, "to close array literal");
        Span span = join(open.span, close.span);
        return make_expr(ArrayLit{std::move(elems)}, span);
    }

    ExprPtr parse_multi_controlled() {
        const Token& kw = consume();
        McOp op;
        switch (kw.type) {
            case TokenType::KwMcx: op = McOp::X; break;
            case TokenType::KwMcy: op = McOp::Y; break;
            case TokenType::KwMcz: op = McOp::Z; break;
            default: op = McOp::P; break;
        }
        expect(TokenType::LParen, "after multi-controlled operator");
        std::vector<ExprPtr> operands;
        if (!check(TokenType::RParen)) {
            do {
                operands.push_back(parse_expr());
            } while (match(TokenType::Comma));
        }
        const Token& close = expect(TokenType::RParen, "to close operand list");
        Span span = join(kw.span, close.span);
        ExprPtr phase;
        if (op == McOp::P) {
            expect(TokenType::KwBy, "after mcp operand list");
            phase = parse_in();
            span = join(kw.span, phase->span);
        }
        return make_expr(MultiControlledExpr{op, std::move(operands), std::move(phase)}, span);
    }

    std::vector<Token> tokens_;
    std::size_t pos_ = 0;
    DiagnosticList diags_;
};

inline ParseResult parse(std::vector<Token> tokens, std::string file = "<input>") {
    return Parser(std::move(tokens)).run(std::move(file));
}

inline ParseResult parse_program(std::string_view source, std::string file = "<input>") {
    LexResult lexed = tokenize(source, file);
    ParseResult out = parse(std::move(lexed.tokens), std::move(file));
    DiagnosticList all = std::move(lexed.diagnostics);
    all.append(out.diagnostics);
    out.diagnostics = std::move(all);
    return out;
}

} // namespace qutes
