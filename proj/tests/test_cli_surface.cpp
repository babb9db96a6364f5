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

#include <catch_amalgamated.hpp>

#include "qutes/driver.hpp"
#include "test_support.hpp"

using namespace qutes;

TEST_CASE("emit_ast renders the empty program as (program)") {
    ParseResult r = parse_program("", "empty.qut");
    CHECK(emit_ast(r.program) == "(program)\n");
}

TEST_CASE("emit_ast renders a single declaration") {
    ParseResult r = parse_program("qubit q = 1q;", "one.qut");
    REQUIRE(!r.diagnostics.has_errors());
    CHECK(emit_ast(r.program) == "(program\n  (vardecl qubit q (qlit 1)))\n");
}

TEST_CASE("emit_ast output is deterministic for the corpus") {
    for (const auto& path : test_support::corpus_files()) {
        ParseResult a = parse_program(test_support::load(path), path.filename().string());
        ParseResult b = parse_program(test_support::load(path), path.filename().string());
        CHECK(emit_ast(a.program) == emit_ast(b.program));
    }
}

TEST_CASE("emit_ast golden: the Deutsch-Jozsa corpus program") {
    ParseResult r = parse_program(
        test_support::load(std::string(QUTES_PROGRAMS_DIR) + "/deutsch_jozsa.qut"), "dj.qut");
    REQUIRE(!r.diagnostics.has_errors());
    const std::string expected =
        "(program\n"
        "  (funcdecl void oracle (params (quint x) (qubit y))\n"
        "    (block\n"
        "      (exprstmt (mcx (index (ident x) (int 0)) (ident y)))))\n"
        "  (vardecl quint input (qlit-super 0 1 2 3 4 5 6 7))\n"
        "  (vardecl qubit output (qlit 1))\n"
        "  (exprstmt (unary hadamard (ident output)))\n"
        "  (exprstmt (call oracle (ident input) (ident output)))\n"
        "  (exprstmt (unary hadamard (ident input)))\n"
        "  (vardecl int result (ident input))\n"
        "  (if (binary eq (ident result) (int 0))\n"
        "    (block\n"
        "      (exprstmt (unary println (str \"constant\"))))\n"
        "    (block\n"
        "      (exprstmt (unary println (str \"balanced\"))))))\n";
    CHECK(emit_ast(r.program) == expected);
}

TEST_CASE("run results serialize to strict JSON") {
    ProgramResult result = run_source("qubit q = 1q;\nbool b = q;\nprintln b;", "j.qut", {7});
    const std::string dumped = result_to_json(result).dump();
    const nlohmann::json parsed = nlohmann::json::parse(dumped);
    CHECK(parsed.at("stdout") == "true\n");
    CHECK(parsed.at("exit") == 0);
    REQUIRE(parsed.at("measurements").size() == 1);
    CHECK(parsed.at("measurements")[0].at("register") == "q");
    CHECK(parsed.at("measurements")[0].at("bits") == "1");
    CHECK(parsed.at("measurements")[0].at("value") == 1);
    CHECK(parsed.at("measurements")[0].at("slot") == 0);
}

TEST_CASE("histograms and diagnostics serialize to strict JSON") {
    ProgramResult result = run_source("qubit q = 0q;\nhadamard q;\nbool b = q;", "h.qut", {1});
    ShotHistogram hist = run(result.circuit, 64, 1);
    const nlohmann::json parsed = nlohmann::json::parse(histogram_to_json(hist).dump());
    CHECK(parsed.at("shots") == 64);
    std::int64_t total = 0;
    for (const auto& [key, count] : parsed.at("counts").items())
        total += count.get<std::int64_t>();
    CHECK(total == 64);

    CompileOutput bad = compile_source("int x = ;", "bad.qut");
    const nlohmann::json diag = nlohmann::json::parse(diagnostics_to_json(bad.diagnostics).dump());
    REQUIRE(diag.at("diagnostics").size() == 1);
    CHECK(diag.at("diagnostics")[0].at("severity") == "error");
    CHECK(diag.at("diagnostics")[0].at("line") == 1);
}

TEST_CASE("circuit text dumps are deterministic and name every op") {
    ProgramResult result = run_source(
        test_support::load(std::string(QUTES_PROGRAMS_DIR) + "/bell.qut"), "bell.qut", {3});
    const std::string text = emit_circuit_text(result.circuit);
    CHECK(text == emit_circuit_text(result.circuit));
    CHECK(text.find("register a[1]") != std::string::npos);
    CHECK(text.find("h a[0]") != std::string::npos);
    CHECK(text.find("cx a[0] b[0]") != std::string::npos);
    CHECK(text.find("-> slot 0") != std::string::npos);
}

TEST_CASE("rendered diagnostics follow file:line:col with a stable code") {
    CompileOutput bad = compile_source("quint a = 1.5;", "d.qut");
    REQUIRE(bad.diagnostics.error_count() == 1);
    const std::string rendered = render_diagnostic(bad.diagnostics.items()[0]);
    CHECK(rendered.rfind("d.qut:1:", 0) == 0);
    CHECK(rendered.find("error[S005]") != std::string::npos);
}
