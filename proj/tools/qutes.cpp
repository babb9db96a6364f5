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

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "qutes/qutes.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitDiagnostics = 1;
constexpr int kExitRuntime = 2;
constexpr int kExitUsage = 3;

struct Options {
    std::string input;
    std::string emit_kind;
    std::string output; // empty means stdout
    std::int64_t shots = 1024;
    std::uint64_t seed = 0;
    bool seed_given = false;
    bool json = false;
    bool histogram = false;
    int grover_retries = 3;
    int qubit_cap = qutes::kDefaultQubitCap;
};

std::uint64_t effective_seed(const Options& opt) {
    if (opt.seed_given)
        return opt.seed;
    if (const char* env = std::getenv("QUTES_SEED")) {
        try {
            return std::stoull(env);
        } catch (...) {
            std::cerr << "warning: ignoring invalid QUTES_SEED value '" << env << "'\n";
        }
    }
    return opt.seed;
}

qutes::RuntimeConfig runtime_config(const Options& opt) {
    qutes::RuntimeConfig config;
    config.seed = effective_seed(opt);
    config.grover_retries = opt.grover_retries;
    config.qubit_cap = opt.qubit_cap;
    return config;
}

int write_output(const Options& opt, const std::string& text) {
    if (opt.output.empty()) {
        std::cout << text;
        return kExitOk;
    }
    std::ofstream out(opt.output, std::ios::binary);
    if (!out) {
        std::cerr << "error: cannot write '" << opt.output << "'\n";
        return kExitUsage;
    }
    out << text;
    return kExitOk;
}

void print_diagnostics(const qutes::DiagnosticList& diags) {
    std::cerr << diags.render_all();
}

int run_check(const Options& opt) {
    const std::string source = qutes::read_text_file(opt.input);
    qutes::CompileOutput compiled = qutes::compile_source(source, opt.input);
    if (opt.json) {
        int rc = write_output(opt, qutes::diagnostics_to_json(compiled.diagnostics).dump() + "\n");
        if (rc != kExitOk)
            return rc;
    } else {
        print_diagnostics(compiled.diagnostics);
    }
    return compiled.ok() ? kExitOk : kExitDiagnostics;
}

int run_program(const Options& opt) {
    const std::string source = qutes::read_text_file(opt.input);
    qutes::CompileOutput compiled = qutes::compile_source(source, opt.input);
    if (!compiled.ok()) {
        print_diagnostics(compiled.diagnostics);
        return kExitDiagnostics;
    }
    qutes::ProgramResult result =
        qutes::interpret(compiled.program, compiled.sema, runtime_config(opt));

    if (opt.histogram) {
        qutes::ShotHistogram hist =
            qutes::run(result.circuit, opt.shots, effective_seed(opt), opt.qubit_cap);
        if (opt.json)
            return write_output(opt, qutes::histogram_to_json(hist).dump() + "\n");
        std::string text;
        for (const auto& [outcome, count] : hist.counts)
            text += (outcome.empty() ? "(none)" : outcome) + " " + std::to_string(count) + "\n";
        return write_output(opt, text);
    }
    if (opt.json)
        return write_output(opt, qutes::result_to_json(result).dump() + "\n");
    return write_output(opt, result.stdout_text);
}

int run_emit(const Options& opt) {
    const std::string source = qutes::read_text_file(opt.input);
    if (opt.emit_kind == "ast") {
        qutes::ParseResult parsed = qutes::parse_program(source, opt.input);
        if (parsed.diagnostics.has_errors()) {
            print_diagnostics(parsed.diagnostics);
            return kExitDiagnostics;
        }
        return write_output(opt, qutes::emit_ast(parsed.program));
    }
    qutes::CompileOutput compiled = qutes::compile_source(source, opt.input);
    if (!compiled.ok()) {
        print_diagnostics(compiled.diagnostics);
        return kExitDiagnostics;
    }
    qutes::ProgramResult result =
        qutes::interpret(compiled.program, compiled.sema, runtime_config(opt));
    if (opt.emit_kind == "qasm")
        return write_output(opt, qutes::export_qasm(result.circuit));
    return write_output(opt, qutes::emit_circuit_text(result.circuit));
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"qutes - a high-level quantum programming language"};
    app.require_subcommand(1);

    Options opt;
    auto add_common = [&](CLI::App* cmd, bool with_run_flags) {
        cmd->add_option("file", opt.input, "input .qut program")->required();
        cmd->add_flag("--json", opt.json, "machine-readable JSON output");
        cmd->add_option("-o", opt.output, "write output to a file instead of stdout");
        if (with_run_flags) {
            cmd->add_option("--shots", opt.shots, "shots for --histogram mode")
                ->check(CLI::PositiveNumber);
            cmd->add_option("--seed", opt.seed, "simulator seed (default 0 or QUTES_SEED)")
                ->each([&](const std::string&) { opt.seed_given = true; });
            cmd->add_option("--grover-retries", opt.grover_retries,
                            "retry budget for substring search");
            cmd->add_option("--qubit-cap", opt.qubit_cap, "simulator qubit limit");
        }
    };

    CLI::App* check = app.add_subcommand("check", "parse and type-check a program");
    add_common(check, false);

    CLI::App* run = app.add_subcommand("run", "execute a program");
    run->add_flag("--histogram", opt.histogram,
                  "re-run the recorded circuit for --shots and print outcome counts");
    add_common(run, true);

    CLI::App* emit = app.add_subcommand("emit", "emit a compiled artifact");
    emit->add_option("kind", opt.emit_kind, "artifact kind")
        ->required()
        ->check(CLI::IsMember({"qasm", "ast", "circuit"}));
    add_common(emit, true);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? kExitOk : kExitUsage;
    }

    try {
        if (app.got_subcommand(check))
            return run_check(opt);
        if (app.got_subcommand(run))
            return run_program(opt);
        return run_emit(opt);
    } catch (const qutes::RuntimeError& e) {
        qutes::Diagnostic d{qutes::Severity::Error, e.code, e.what(), e.span};
        std::cerr << qutes::render_diagnostic(d) << "\n";
        return kExitRuntime;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitRuntime;
    }
}
