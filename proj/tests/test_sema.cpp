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

#include <cmath>
#include <functional>

#include <catch_amalgamated.hpp>

#include "qutes/parser.hpp"
#include "qutes/sema.hpp"
#include "test_support.hpp"

using namespace qutes;

namespace {

struct Checked {
    Program program;
    SemaResult sema;
};

Checked check_source(const std::string& source) {
    ParseResult parsed = parse_program(source, "test.qut");
    INFO(parsed.diagnostics.render_all());
    REQUIRE(!parsed.diagnostics.has_errors());
    Checked out{std::move(parsed.program), {}};
    out.sema = check(out.program);
    return out;
}

const Symbol* decl_symbol(const Checked& c, std::size_t item) {
    auto it = c.sema.decl_symbols.find(c.program.items.at(item).get());
    return it == c.sema.decl_symbols.end() ? nullptr : it->second;
}

bool has_code(const SemaResult& sema, const std::string& code) {
    for (const auto& d : sema.diagnostics.items())
        if (d.code == code)
            return true;
    return false;
}

} // namespace

TEST_CASE("qubit declarations size a one-qubit register") {
    Checked c = check_source("qubit q = 1q;");
    REQUIRE(c.sema.ok());
    const Symbol* q = decl_symbol(c, 0);
    REQUIRE(q != nullptr);
    REQUIRE(q->reg.has_value());
    CHECK(q->reg->width == 1);
    CHECK(q->reg->init.kind == InitialState::Kind::Basis);
    CHECK(q->reg->init.basis_value == 1);
}

TEST_CASE("quint width follows max(1, ceil(log2(v+1)))") {
    // independent oracle for the sizing rule
    auto expected_width = [](std::uint64_t v) {
        const int w = static_cast<int>(
            std::ceil(std::log2(static_cast<double>(v) + 1.0)));
        return std::max(1, w);
    };
    for (std::uint64_t v = 0; v <= 64; ++v) {
        INFO("v = " << v);
        CHECK(basis_width(v) == expected_width(v));
    }

    Checked c = check_source("quint a = 3q;");
    REQUIRE(c.sema.ok());
    const Symbol* a = decl_symbol(c, 0);
    REQUIRE(a != nullptr);
    REQUIRE(a->reg.has_value());
    CHECK(a->reg->width == 2);

    Checked s = check_source("quint b = [0, 3, 4]q;");
    REQUIRE(s.sema.ok());
    const Symbol* b = decl_symbol(s, 0);
    REQUIRE(b != nullptr);
    REQUIRE(b->reg.has_value());
    CHECK(b->reg->width == 3); // max width over the listed values
}

TEST_CASE("qustring sizing is one qubit per character") {
    Checked c = check_source("qustring s = \"0110\";");
    REQUIRE(c.sema.ok());
    const Symbol* s = decl_symbol(c, 0);
    REQUIRE(s != nullptr);
    REQUIRE(s->reg.has_value());
    CHECK(s->reg->width == 4);
    // "0110": leftmost char is the highest qubit
    CHECK(s->reg->init.basis_value == 0b0110);
}

TEST_CASE("redeclaring a name in the same scope is an error") {
    Checked c = check_source("qubit q = 1q;\nqubit q = 0q;");
    CHECK(has_code(c.sema, "S001"));
}

TEST_CASE("shadowing across scopes resolves to the innermost symbol") {
    Checked c = check_source("int x = 1;\n{\n    int x = 2;\n    print x;\n}\nprint x;\n");
    REQUIRE(c.sema.ok());
    const auto* outer_block = c.program.items[1]->as<BlockStmt>();
    REQUIRE(outer_block != nullptr);
    const auto* inner_print = outer_block->stmts[1]->as<ExprStmt>();
    const auto* inner_unary = inner_print->expr->as<UnaryExpr>();
    const Symbol* inner = inner_unary->operand->symbol;
    const auto* outer_print = c.program.items[2]->as<ExprStmt>();
    const Symbol* outer = outer_print->expr->as<UnaryExpr>()->operand->symbol;
    REQUIRE(inner != nullptr);
    REQUIRE(outer != nullptr);
    CHECK(inner != outer);
    CHECK(inner->scope->kind == ScopeKind::Block);
    CHECK(outer->scope->kind == ScopeKind::Global);
}

TEST_CASE("unknown names carry a span") {
    Checked c = check_source("print y;");
    REQUIRE(has_code(c.sema, "S004"));
    const auto& d = c.sema.diagnostics.items()[0];
    CHECK(d.span.start_line == 1);
    CHECK(d.span.start_col == 7);
}

TEST_CASE("functions are visible before their textual definition") {
    Checked c = check_source("int y = twice(2);\nint twice(int v) { return v * 2; }\n");
    CHECK(c.sema.ok());
}

TEST_CASE("quantum to classical declaration marks an implicit measurement") {
    Checked c = check_source("qubit q = 1q;\nint x = q;");
    REQUIRE(c.sema.ok());
    const auto* decl = c.program.items[1]->as<VarDeclStmt>();
    REQUIRE(decl != nullptr);
    CHECK(decl->init->conversion.kind == Conversion::Kind::Measure);
    CHECK(decl->init->type.kind == TypeKind::Qubit);
}

TEST_CASE("quantum addition promotes the int literal operand") {
    Checked c = check_source("quint a = 2q;\na = a + 1;");
    REQUIRE(c.sema.ok());
    const auto* stmt = c.program.items[1]->as<ExprStmt>();
    const auto* assign = stmt->expr->as<BinaryExpr>();
    const auto* add = assign->rhs->as<BinaryExpr>();
    REQUIRE(add != nullptr);
    CHECK(add->op == BinaryOp::Add);
    CHECK(assign->rhs->type.kind == TypeKind::Quint);
    CHECK(add->rhs->conversion.kind == Conversion::Kind::Promote);
    CHECK(add->rhs->conversion.result.kind == TypeKind::Quint);
}

TEST_CASE("quantum while conditions are marked for auto-measurement") {
    Checked c = check_source("qubit q = 1q;\nwhile q { q = 0q; }\n");
    REQUIRE(c.sema.ok());
    const auto* loop = c.program.items[1]->as<WhileStmt>();
    REQUIRE(loop != nullptr);
    CHECK(loop->cond->conversion.kind == Conversion::Kind::Measure);
    CHECK(loop->cond->conversion.result.kind == TypeKind::Bool);
}

TEST_CASE("quint conditions measure the full width then test nonzero") {
    Checked c = check_source("quint a = 3q;\nif a { print 1; }\n");
    REQUIRE(c.sema.ok());
    const auto* branch = c.program.items[1]->as<IfStmt>();
    CHECK(branch->cond->conversion.kind == Conversion::Kind::MeasureNarrow);
}

TEST_CASE("float to quint has no conversion path") {
    Checked c = check_source("quint a = 2q;\nfloat f = 1.5;\na = a + f;");
    CHECK(has_code(c.sema, "S005"));
}

TEST_CASE("void variables are rejected") {
    Checked c = check_source("void v;");
    CHECK(has_code(c.sema, "S003"));
}

TEST_CASE("call arity is checked") {
    Checked c = check_source("int f(int a) { return a; }\nint x = f(1, 2);");
    CHECK(has_code(c.sema, "S007"));
}

TEST_CASE("quantum unary operators require quantum operands") {
    Checked c = check_source("int x = 1;\nhadamard x;");
    CHECK(has_code(c.sema, "S008"));
}

TEST_CASE("register widths need constant or quantum initializers") {
    Checked c = check_source("int n = 5;\nquint a = n;");
    CHECK(has_code(c.sema, "S011"));
}

TEST_CASE("constant-folded initializers still size registers") {
    Checked c = check_source("quint a = 2 + 3;");
    REQUIRE(c.sema.ok());
    const Symbol* a = decl_symbol(c, 0);
    REQUIRE(a != nullptr);
    REQUIRE(a->reg.has_value());
    CHECK(a->reg->width == 3);
    CHECK(a->reg->init.basis_value == 5);
}

TEST_CASE("qustring declarations require an initializer") {
    Checked c = check_source("qustring s;");
    CHECK(has_code(c.sema, "S017"));
}

TEST_CASE("qustring initializers must be bitstrings") {
    Checked c = check_source("qustring s = \"012\";");
    CHECK(has_code(c.sema, "S012"));
}

TEST_CASE("mcx needs at least two single-qubit operands") {
    Checked bad_arity = check_source("qubit q = 0q;\nmcx(q);");
    CHECK(has_code(bad_arity.sema, "S024"));
    Checked bad_type = check_source("quint a = 3q;\nqubit q = 0q;\nmcx(a, q);");
    CHECK(has_code(bad_type.sema, "S008"));
}

TEST_CASE("quantum-quantum comparisons are rejected, mixed ones measure") {
    Checked both = check_source("qubit a = 0q;\nqubit b = 0q;\nbool c = a == b;");
    CHECK(has_code(both.sema, "S022"));

    Checked mixed = check_source("quint a = 3q;\nbool c = a == 3;");
    REQUIRE(mixed.sema.ok());
    const auto* decl = mixed.program.items[1]->as<VarDeclStmt>();
    const auto* cmp = decl->init->as<BinaryExpr>();
    REQUIRE(cmp != nullptr);
    CHECK(cmp->lhs->conversion.kind == Conversion::Kind::Measure);
}

TEST_CASE("addition width mismatches are static errors when widths are known") {
    Checked regs = check_source("quint a = 1q;\nquint b = 7q;\nquint c = a + b;");
    CHECK(has_code(regs.sema, "S010"));
    Checked literal = check_source("quint a = 1q;\na = a + 6;");
    CHECK(has_code(literal.sema, "S010"));
}

TEST_CASE("return types are checked") {
    Checked wrong = check_source("int f() { return \"x\"; }");
    CHECK(has_code(wrong.sema, "S005"));
    Checked toplevel = check_source("return 1;");
    CHECK(has_code(toplevel.sema, "S015"));
}

TEST_CASE("typecheck is deterministic") {
    const std::string source = test_support::load(std::string(QUTES_PROGRAMS_DIR) +
                                                  "/language_tour.qut");
    auto dump_types = [](const std::string& src) {
        ParseResult parsed = parse_program(src, "d.qut");
        REQUIRE(!parsed.diagnostics.has_errors());
        SemaResult sema = check(parsed.program);
        REQUIRE(!sema.diagnostics.has_errors());
        std::string out;
        std::function<void(const Expr&)> walk_expr = [&](const Expr& e) {
            out += type_name(e.type) + ";";
        };
        // serialize every expression type via the printer order
        std::function<void(const Stmt&)> walk = [&](const Stmt& s) {
            std::visit(
                overloaded{
                    [&](const VarDeclStmt& d) {
                        if (d.init)
                            walk_expr(*d.init);
                    },
                    [&](const FuncDeclStmt& f) { walk(*f.body); },
                    [&](const BlockStmt& b) {
                        for (const auto& inner : b.stmts)
                            walk(*inner);
                    },
                    [&](const IfStmt& i) {
                        walk_expr(*i.cond);
                        walk(*i.then_branch);
                        if (i.else_branch)
                            walk(*i.else_branch);
                    },
                    [&](const WhileStmt& w) {
                        walk_expr(*w.cond);
                        walk(*w.body);
                    },
                    [&](const ForeachStmt& f) {
                        walk_expr(*f.iterable);
                        walk(*f.body);
                    },
                    [&](const ReturnStmt& r) {
                        if (r.value)
                            walk_expr(*r.value);
                    },
                    [&](const ExprStmt& e) { walk_expr(*e.expr); },
                },
                s.node);
        };
        for (const auto& item : parsed.program.items)
            walk(*item);
        return out;
    };
    CHECK(dump_types(source) == dump_types(source));
}

TEST_CASE("every corpus program typechecks cleanly") {
    for (const auto& path : test_support::corpus_files()) {
        Checked c = check_source(test_support::load(path));
        INFO(path.filename().string() << "\n" << c.sema.diagnostics.render_all());
        CHECK(c.sema.ok());
    }
}

TEST_CASE("identifiers in checked programs resolve to visible symbols") {
    for (const auto& path : test_support::corpus_files()) {
        Checked c = check_source(test_support::load(path));
        REQUIRE(c.sema.ok());
        std::function<void(const Expr&)> walk_expr = [&](const Expr& e) {
            if (e.is<Identifier>())
                CHECK(e.symbol != nullptr);
            std::visit(
                overloaded{
                    [&](const IndexExpr& ix) {
                        walk_expr(*ix.target);
                        walk_expr(*ix.index);
                    },
                    [&](const CallExpr& call) {
                        for (const auto& a : call.args)
                            walk_expr(*a);
                    },
                    [&](const ArrayLit& lit) {
                        for (const auto& el : lit.elems)
                            walk_expr(*el);
                    },
                    [&](const UnaryExpr& u) { walk_expr(*u.operand); },
                    [&](const BinaryExpr& b) {
                        walk_expr(*b.lhs);
                        walk_expr(*b.rhs);
                    },
                    [&](const MultiControlledExpr& m) {
                        for (const auto& o : m.operands)
                            walk_expr(*o);
                        if (m.phase)
                            walk_expr(*m.phase);
                    },
                    [&](const InMatchExpr& in) { walk_expr(*in.pattern); },
                    [&](const auto&) {},
                },
                e.node);
        };
        std::function<void(const Stmt&)> walk = [&](const Stmt& s) {
            std::visit(
                overloaded{
                    [&](const VarDeclStmt& d) {
                        if (d.init)
                            walk_expr(*d.init);
                    },
                    [&](const FuncDeclStmt& f) { walk(*f.body); },
                    [&](const BlockStmt& b) {
                        for (const auto& inner : b.stmts)
                            walk(*inner);
                    },
                    [&](const IfStmt& i) {
                        walk_expr(*i.cond);
                        walk(*i.then_branch);
                        if (i.else_branch)
                            walk(*i.else_branch);
                    },
                    [&](const WhileStmt& w) {
                        walk_expr(*w.cond);
                        walk(*w.body);
                    },
                    [&](const ForeachStmt& f) {
                        walk_expr(*f.iterable);
                        walk(*f.body);
                    },
                    [&](const ReturnStmt& r) {
                        if (r.value)
                            walk_expr(*r.value);
                    },
                    [&](const ExprStmt& e) { walk_expr(*e.expr); },
                },
                s.node);
        };
        for (const auto& item : c.program.items)
            walk(*item);
    }
}
