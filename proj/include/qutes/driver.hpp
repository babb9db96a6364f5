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

#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>

#include "qutes/parser.hpp"
#include "qutes/printer.hpp"
#include "qutes/qasm.hpp"
#include "qutes/runtime.hpp"
#include "qutes/sema.hpp"
#include "qutes/simulator.hpp"

#include <json.hpp>

namespace qutes {

struct CompileOutput {
    Program program;
    SemaResult sema;
    DiagnosticList diagnostics; // parse + sema combined

    bool ok() const { return !diagnostics.has_errors(); }
};

inline CompileOutput compile_source(std::string_view source, std::string file) {
    CompileOutput out;
    ParseResult parsed = parse_program(source, file);
    out.program = std::move(parsed.program);
    out.diagnostics = std::move(parsed.diagnostics);
    if (out.diagnostics.has_errors())
        return out;
    out.sema = check(out.program);
    out.diagnostics.append(out.sema.diagnostics);
    return out;
}

inline std::string read_text_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw std::runtime_error("cannot open '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

/// Full pipeline on checked source; throws RuntimeError for program faults.
inline ProgramResult run_source(std::string_view source, std::string file,
                                const RuntimeConfig& config = {}) {
    CompileOutput compiled = compile_source(source, std::move(file));
    if (!compiled.ok())
        throw std::runtime_error("program has diagnostics:\n" +
                                 compiled.diagnostics.render_all());
    return interpret(compiled.program, compiled.sema, config);
}

inline nlohmann::json result_to_json(const ProgramResult& result) {
    nlohmann::json j;
    j["stdout"] = result.stdout_text;
    j["exit"] = result.exit_code;
    nlohmann::json measurements = nlohmann::json::array();
    for (const auto& m : result.measurements) {
        measurements.push_back({{"register", m.register_name},
                                {"slot", m.slot},
                                {"bits", m.bits},
                                {"value", m.value}});
    }
    j["measurements"] = std::move(measurements);
    return j;
}

inline nlohmann::json histogram_to_json(const ShotHistogram& h) {
    nlohmann::json counts = nlohmann::json::object();
    for (const auto& [key, count] : h.counts)
        counts[key] = count;
    return nlohmann::json{{"shots", h.shots}, {"counts", std::move(counts)}};
}

inline nlohmann::json diagnostics_to_json(const DiagnosticList& diags) {
    nlohmann::json items = nlohmann::json::array();
    for (const auto& d : diags.items()) {
        items.push_back({{"severity", d.severity == Severity::Error ? "error" : "warning"},
                         {"code", d.code},
                         {"message", d.message},
                         {"file", d.span.file},
                         {"line", d.span.start_line},
                         {"col", d.span.start_col}});
    }
    return nlohmann::json{{"diagnostics", std::move(items)}};
}

/// Deterministic text dump of an assembled circuit, one op per line.
inline std::string emit_circuit_text(const Circuit& circuit) {
    std::ostringstream out;
    for (const auto& reg : circuit.registers) {
        out << "register " << reg.name << "[" << reg.width << "]";
        switch (reg.init.kind) {
            case InitialState::Kind::Zero:
                out << " = |0>";
                break;
            case InitialState::Kind::Basis:
                out << " = |" << reg.init.basis_value << ">";
                break;
            case InitialState::Kind::Superposition: {
                out << " = uniform{";
                for (std::size_t i = 0; i < reg.init.values.size(); ++i) {
                    if (i)
                        out << ", ";
                    out << reg.init.values[i];
                }
                out << "}";
                break;
            }
        }
        out << "\n";
    }
    for (const auto& slot : circuit.slots)
        out << "slot c" << (slot.id == 0 ? "" : std::to_string(slot.id)) << "["
            << slot.width << "]\n";
    auto reg_name = [&](int id) {
        const RegisterHandle* r = circuit.find_register(id);
        return r ? r->name : std::string("?");
    };
    for (const auto& op : circuit.ops) {
        out << gate_kind_name(op.kind);
        if (op.kind == GateKind::P || op.kind == GateKind::MCP)
            out << "(" << detail::format_theta(op.theta) << ")";
        for (const auto& q : op.qubits)
            out << " " << reg_name(q.reg) << "[" << q.offset << "]";
        if (op.kind == GateKind::Measure)
            out << " -> slot " << op.slot;
        out << "\n";
    }
    return out.str();
}

} // namespace qutes
