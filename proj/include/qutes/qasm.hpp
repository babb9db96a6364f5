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

#include <cctype>
#include <charconv>
#include <cstdio>
#include <map>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "qutes/qir.hpp"

namespace qutes {

class QasmError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

namespace detail {

/// 12 significant digits, enough for the round-trip contract.
inline std::string format_theta(double theta) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.12g", theta);
    return buf;
}

inline std::string classical_slot_name(int slot) {
    return slot == 0 ? "c" : "c" + std::to_string(slot);
}

inline const std::set<std::string>& qasm_reserved() {
    static const std::set<std::string> words = {
        "OPENQASM", "include",  "qubit", "bit",   "gate",  "measure", "reset",
        "barrier",  "ctrl",     "inv",   "pow",   "U",     "gphase",  "if",
        "else",     "for",      "while", "input", "output", "const",  "def",
        "let",      "array",    "int",   "uint",  "float", "angle",   "bool",
        "duration", "stretch",  "creg",  "qreg",  "pi",    "euler",   "tau",
    };
    return words;
}

inline std::string sanitize_register_name(const std::string& name) {
    if (qasm_reserved().count(name))
        return "v_" + name;
    return name;
}

} // namespace detail

/// Deterministic OpenQASM 3 text for an assembled circuit. Multi-controlled
/// gates use ctrl(n) @ modifiers; measures land one bit register per
/// classical slot.
inline std::string export_qasm(const Circuit& circuit) {
    std::ostringstream out;
    out << "OPENQASM 3.0;\n";
    out << "include \"stdgates.inc\";\n";

    std::map<int, std::string> reg_names;
    for (const auto& reg : circuit.registers) {
        reg_names[reg.id] = detail::sanitize_register_name(reg.name);
        out << "qubit[" << reg.width << "] " << reg_names[reg.id] << ";\n";
    }
    for (const auto& slot : circuit.slots)
        out << "bit[" << slot.width << "] " << detail::classical_slot_name(slot.id) << ";\n";

    auto operand = [&](const QubitRef& q) {
        return reg_names.at(q.reg) + "[" + std::to_string(q.offset) + "]";
    };
    auto operand_list = [&](const std::vector<QubitRef>& qs) {
        std::string s;
        for (std::size_t i = 0; i < qs.size(); ++i) {
            if (i)
                s += ", ";
            s += operand(qs[i]);
        }
        return s;
    };

    for (const auto& op : circuit.ops) {
        switch (op.kind) {
            case GateKind::H:
            case GateKind::X:
            case GateKind::Y:
            case GateKind::Z:
                out << gate_kind_name(op.kind) << " " << operand(op.qubits[0]) << ";\n";
                break;
            case GateKind::P:
                out << "p(" << detail::format_theta(op.theta) << ") "
                    << operand(op.qubits[0]) << ";\n";
                break;
            case GateKind::CX:
                out << "cx " << operand_list(op.qubits) << ";\n";
                break;
            case GateKind::Swap:
                out << "swap " << operand_list(op.qubits) << ";\n";
                break;
            case GateKind::MCX:
                out << "ctrl(" << op.qubits.size() - 1 << ") @ x "
                    << operand_list(op.qubits) << ";\n";
                break;
            case GateKind::MCY:
                out << "ctrl(" << op.qubits.size() - 1 << ") @ y "
                    << operand_list(op.qubits) << ";\n";
                break;
            case GateKind::MCZ:
                out << "ctrl(" << op.qubits.size() - 1 << ") @ z "
                    << operand_list(op.qubits) << ";\n";
                break;
            case GateKind::MCP:
                out << "ctrl(" << op.qubits.size() - 1 << ") @ p("
                    << detail::format_theta(op.theta) << ") " << operand_list(op.qubits)
                    << ";\n";
                break;
            case GateKind::Measure: {
                const std::string slot = detail::classical_slot_name(op.slot);
                for (std::size_t b = 0; b < op.qubits.size(); ++b)
                    out << slot << "[" << b << "] = measure " << operand(op.qubits[b])
                        << ";\n";
                break;
            }
            case GateKind::Reset:
                out << "reset " << operand(op.qubits[0]) << ";\n";
                break;
            case GateKind::Barrier:
                out << "barrier " << operand_list(op.qubits) << ";\n";
                break;
        }
    }
    return out.str();
}

namespace detail {

/// Line-oriented reader for the subset export_qasm produces. Used by the
/// round-trip tests and the import path.
class QasmReader {
public:
    Circuit read(const std::string& text) {
        Circuit circuit;
        std::istringstream in(text);
        std::string line;
        int line_no = 0;
        bool saw_version = false;
        while (std::getline(in, line)) {
            ++line_no;
            line = strip(line);
            if (line.empty() || starts_with(line, "//"))
                continue;
            if (starts_with(line, "OPENQASM")) {
                saw_version = true;
                continue;
            }
            if (starts_with(line, "include"))
                continue;
            if (!line.ends_with(";"))
                fail(line_no, "missing ';'");
            line.pop_back();
            parse_statement(circuit, strip(line), line_no);
        }
        if (!saw_version)
            throw QasmError("missing OPENQASM version header");
        return circuit;
    }

private:
    std::map<std::string, int> reg_ids_;
    std::map<std::string, int> slot_ids_;

    [[noreturn]] static void fail(int line, const std::string& message) {
        throw QasmError("line " + std::to_string(line) + ": " + message);
    }

    static std::string strip(std::string s) {
        std::size_t a = 0, b = s.size();
        while (a < b && std::isspace(static_cast<unsigned char>(s[a])))
            ++a;
        while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1])))
            --b;
        return s.substr(a, b - a);
    }
    static bool starts_with(const std::string& s, const std::string& prefix) {
        return s.rfind(prefix, 0) == 0;
    }

    void parse_statement(Circuit& circuit, const std::string& stmt, int line) {
        if (starts_with(stmt, "qubit[")) {
            parse_register(circuit, stmt, line);
            return;
        }
        if (starts_with(stmt, "bit[")) {
            parse_slot(circuit, stmt, line);
            return;
        }
        if (stmt.find("= measure ") != std::string::npos) {
            parse_measure(circuit, stmt, line);
            return;
        }
        parse_gate(circuit, stmt, line);
    }

    void parse_register(Circuit& circuit, const std::string& stmt, int line) {
        const auto close = stmt.find(']');
        if (close == std::string::npos)
            fail(line, "malformed qubit declaration");
        const int width = to_int(stmt.substr(6, close - 6), line);
        const std::string name = strip(stmt.substr(close + 1));
        if (name.empty())
            fail(line, "missing register name");
        RegisterHandle reg;
        reg.id = static_cast<int>(circuit.registers.size());
        reg.name = name;
        reg.width = width;
        reg.init = InitialState::zero();
        reg_ids_[name] = reg.id;
        circuit.registers.push_back(std::move(reg));
    }

    void parse_slot(Circuit& circuit, const std::string& stmt, int line) {
        const auto close = stmt.find(']');
        if (close == std::string::npos)
            fail(line, "malformed bit declaration");
        const int width = to_int(stmt.substr(4, close - 4), line);
        const std::string name = strip(stmt.substr(close + 1));
        const int id = static_cast<int>(circuit.slots.size());
        if (name != classical_slot_name(id))
            fail(line, "unexpected classical register name '" + name + "'");
        slot_ids_[name] = id;
        circuit.slots.push_back({id, width});
    }

    void parse_measure(Circuit& circuit, const std::string& stmt, int line) {
        // c[0] = measure q[1]
        const auto eq = stmt.find('=');
        const std::string lhs = strip(stmt.substr(0, eq));
        std::string rhs = strip(stmt.substr(eq + 1));
        if (!starts_with(rhs, "measure "))
            fail(line, "malformed measure statement");
        rhs = strip(rhs.substr(8));
        auto [slot_name, bit_index] = parse_indexed(lhs, line);
        auto it = slot_ids_.find(slot_name);
        if (it == slot_ids_.end())
            fail(line, "unknown classical register '" + slot_name + "'");
        const int slot = it->second;
        const QubitRef q = parse_qubit(rhs, line);

        // consecutive per-qubit measure lines of one slot fold into one op
        if (!circuit.ops.empty() && circuit.ops.back().kind == GateKind::Measure &&
            circuit.ops.back().slot == slot &&
            static_cast<int>(circuit.ops.back().qubits.size()) == bit_index) {
            circuit.ops.back().qubits.push_back(q);
            return;
        }
        if (bit_index != 0)
            fail(line, "measure bits of one slot must appear in order");
        circuit.ops.push_back(GateOp::measure({q}, slot));
    }

    void parse_gate(Circuit& circuit, const std::string& stmt, int line) {
        std::string head = stmt;
        std::string rest;
        int controls = 0;
        if (starts_with(head, "ctrl(")) {
            const auto close = head.find(')');
            controls = to_int(head.substr(5, close - 5), line);
            auto at = head.find('@', close);
            if (at == std::string::npos)
                fail(line, "malformed ctrl modifier");
            head = strip(head.substr(at + 1));
        }
        const auto space = head.find(' ');
        std::string name = space == std::string::npos ? head : head.substr(0, space);
        rest = space == std::string::npos ? "" : strip(head.substr(space + 1));

        double theta = 0.0;
        const auto paren = name.find('(');
        if (paren != std::string::npos) {
            const auto close = head.find(')');
            theta = to_double(head.substr(paren + 1, close - paren - 1), line);
            rest = strip(head.substr(close + 1));
            name = name.substr(0, paren);
        }

        std::vector<QubitRef> qubits;
        if (!rest.empty()) {
            std::size_t pos = 0;
            while (pos < rest.size()) {
                auto comma = rest.find(',', pos);
                const std::string item =
                    strip(comma == std::string::npos ? rest.substr(pos)
                                                     : rest.substr(pos, comma - pos));
                qubits.push_back(parse_qubit(item, line));
                if (comma == std::string::npos)
                    break;
                pos = comma + 1;
            }
        }

        GateOp op;
        op.qubits = std::move(qubits);
        op.theta = theta;
        if (controls > 0) {
            if (name == "x") op.kind = GateKind::MCX;
            else if (name == "y") op.kind = GateKind::MCY;
            else if (name == "z") op.kind = GateKind::MCZ;
            else if (name == "p") op.kind = GateKind::MCP;
            else fail(line, "unsupported controlled gate '" + name + "'");
            if (static_cast<int>(op.qubits.size()) != controls + 1)
                fail(line, "ctrl(" + std::to_string(controls) + ") expects " +
                               std::to_string(controls + 1) + " operands");
        } else if (name == "h") op.kind = GateKind::H;
        else if (name == "x") op.kind = GateKind::X;
        else if (name == "y") op.kind = GateKind::Y;
        else if (name == "z") op.kind = GateKind::Z;
        else if (name == "p") op.kind = GateKind::P;
        else if (name == "cx") op.kind = GateKind::CX;
        else if (name == "swap") op.kind = GateKind::Swap;
        else if (name == "reset") op.kind = GateKind::Reset;
        else if (name == "barrier") op.kind = GateKind::Barrier;
        else fail(line, "unsupported gate '" + name + "'");
        circuit.ops.push_back(std::move(op));
    }

    std::pair<std::string, int> parse_indexed(const std::string& text, int line) {
        const auto open = text.find('[');
        const auto close = text.find(']');
        if (open == std::string::npos || close == std::string::npos || close < open)
            fail(line, "expected name[index] in '" + text + "'");
        return {strip(text.substr(0, open)),
                to_int(text.substr(open + 1, close - open - 1), line)};
    }

    QubitRef parse_qubit(const std::string& text, int line) {
        auto [name, index] = parse_indexed(text, line);
        auto it = reg_ids_.find(name);
        if (it == reg_ids_.end())
            fail(line, "unknown register '" + name + "'");
        return {it->second, index};
    }

    static int to_int(const std::string& s, int line) {
        int v = 0;
        auto t = strip(s);
        auto [p, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
        if (ec != std::errc{} || p != t.data() + t.size())
            fail(line, "expected an integer, got '" + t + "'");
        return v;
    }

    static double to_double(const std::string& s, int line) {
        double v = 0.0;
        auto t = strip(s);
        auto [p, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
        if (ec != std::errc{} || p != t.data() + t.size())
            fail(line, "expected a number, got '" + t + "'");
        return v;
    }
};

} // namespace detail

/// Re-import the subset export_qasm emits. Imported registers carry Zero
/// initial states: their preparation is already explicit in the gate list.
inline Circuit import_qasm(const std::string& text) {
    return detail::QasmReader().read(text);
}

} // namespace qutes
