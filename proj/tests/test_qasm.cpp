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

#include <numbers>
#include <random>

#include <catch_amalgamated.hpp>

#include "qutes/qasm.hpp"
#include "qutes/simulator.hpp"
#include "test_support.hpp"

using namespace qutes;

namespace {

bool contains(const std::string& haystack, const std::string& needle) {
    return haystack.find(needle) != std::string::npos;
}

bool structurally_equal(const Circuit& a, const Circuit& b) {
    if (a.registers.size() != b.registers.size() || a.ops.size() != b.ops.size() ||
        a.slots.size() != b.slots.size())
        return false;
    for (std::size_t i = 0; i < a.registers.size(); ++i)
        if (a.registers[i].width != b.registers[i].width)
            return false;
    for (std::size_t i = 0; i < a.slots.size(); ++i)
        if (a.slots[i].width != b.slots[i].width)
            return false;
    for (std::size_t i = 0; i < a.ops.size(); ++i) {
        const GateOp& x = a.ops[i];
        const GateOp& y = b.ops[i];
        if (x.kind != y.kind || x.qubits.size() != y.qubits.size() || x.slot != y.slot)
            return false;
        for (std::size_t j = 0; j < x.qubits.size(); ++j)
            if (!(x.qubits[j] == y.qubits[j]))
                return false;
        // parameters agree to 12 significant digits
        if (detail::format_theta(x.theta) != detail::format_theta(y.theta))
            return false;
    }
    return true;
}

Circuit random_circuit(std::mt19937& gen, bool with_measure) {
    CircuitHandler h;
    std::uniform_int_distribution<int> wdist(1, 3);
    const RegisterHandle& a = h.declare_register("a", wdist(gen), InitialState::zero());
    const RegisterHandle& b = h.declare_register("b", 3, InitialState::basis(5));
    std::vector<QubitRef> pool;
    for (int i = 0; i < a.width; ++i)
        pool.push_back(a.qubit(i));
    for (int i = 0; i < b.width; ++i)
        pool.push_back(b.qubit(i));

    std::uniform_int_distribution<int> kind(0, 8);
    std::uniform_int_distribution<std::size_t> qpick(0, pool.size() - 1);
    std::uniform_real_distribution<double> angle(-3.0, 3.0);
    for (int g = 0; g < 30; ++g) {
        auto q0 = pool[qpick(gen)];
        auto q1 = pool[qpick(gen)];
        auto q2 = pool[qpick(gen)];
        if (q1 == q0)
            q1 = pool[(qpick(gen) + 1) % pool.size()];
        switch (kind(gen)) {
            case 0: h.push_op(GateOp::h(q0)); break;
            case 1: h.push_op(GateOp::x(q0)); break;
            case 2: h.push_op(GateOp::y(q0)); break;
            case 3: h.push_op(GateOp::z(q0)); break;
            case 4: h.push_op(GateOp::p(q0, angle(gen))); break;
            case 5:
                if (!(q0 == q1))
                    h.push_op(GateOp::cx(q0, q1));
                break;
            case 6:
                if (!(q0 == q1))
                    h.push_op(GateOp::swap(q0, q1));
                break;
            case 7:
                if (!(q2 == q0) && !(q2 == q1) && !(q0 == q1))
                    h.push_op(GateOp::mcx({q0, q1}, q2));
                break;
            default:
                if (!(q2 == q0) && !(q2 == q1) && !(q0 == q1))
                    h.push_op(GateOp::mcp({q0, q1}, q2, angle(gen)));
                break;
        }
    }
    if (with_measure) {
        const int slot = h.alloc_slot(b.width);
        std::vector<QubitRef> measured;
        for (int i = 0; i < b.width; ++i)
            measured.push_back(b.qubit(i));
        h.push_op(GateOp::measure(measured, slot));
    }
    return h.assemble();
}

} // namespace

TEST_CASE("an empty circuit exports to just the header") {
    Circuit empty;
    CHECK(export_qasm(empty) == "OPENQASM 3.0;\ninclude \"stdgates.inc\";\n");
}

TEST_CASE("basis prep and measurement export the expected lines") {
    CircuitHandler h;
    const RegisterHandle& q = h.declare_register("q", 1, InitialState::basis(1));
    const int slot = h.alloc_slot(1);
    h.push_op(GateOp::measure({q.qubit(0)}, slot));
    const std::string text = export_qasm(h.assemble());
    CHECK(contains(text, "OPENQASM 3.0;"));
    CHECK(contains(text, "include \"stdgates.inc\";"));
    CHECK(contains(text, "qubit[1] q;"));
    CHECK(contains(text, "bit[1] c;"));
    CHECK(contains(text, "x q[0];"));
    CHECK(contains(text, "c[0] = measure q[0];"));
}

TEST_CASE("multi-controlled gates export with ctrl modifiers") {
    CircuitHandler h;
    const RegisterHandle& a = h.declare_register("a", 2, InitialState::zero());
    const RegisterHandle& b = h.declare_register("b", 1, InitialState::zero());
    h.push_op(GateOp::mcx({a.qubit(0), a.qubit(1)}, b.qubit(0)));
    h.push_op(GateOp::mcp({a.qubit(0)}, b.qubit(0), std::numbers::pi / 2));
    const std::string text = export_qasm(h.assemble());
    CHECK(contains(text, "ctrl(2) @ x a[0], a[1], b[0];"));
    CHECK(contains(text, "ctrl(1) @ p(1.5707963268) a[0], b[0];"));
}

TEST_CASE("export and re-import is the structural identity") {
    std::mt19937 gen(31337);
    for (int round = 0; round < 20; ++round) {
        Circuit original = random_circuit(gen, round % 2 == 0);
        const std::string text = export_qasm(original);
        Circuit reread = import_qasm(text);
        INFO(text);
        // the re-import sees prep as ordinary gates, so compare against the
        // original's assembled op stream (which already includes prep)
        CHECK(structurally_equal(original, reread));
        CHECK(export_qasm(reread) == text);
    }
}

TEST_CASE("simulating a re-imported export matches direct simulation") {
    std::mt19937 gen(2718);
    for (int round = 0; round < 10; ++round) {
        Circuit original = random_circuit(gen, false);
        StateVector direct = statevector_of(original);
        StateVector reread = statevector_of(import_qasm(export_qasm(original)));
        CHECK(test_support::state_distance(direct, reread) < 1e-9);
    }
}

TEST_CASE("re-imported circuits with measurement reproduce trajectories") {
    std::mt19937 gen(1618);
    for (int round = 0; round < 6; ++round) {
        Circuit original = random_circuit(gen, true);
        Circuit reread = import_qasm(export_qasm(original));
        Trajectory a = run_trajectory(original, CounterRng(round, 0));
        Trajectory b = run_trajectory(reread, CounterRng(round, 0));
        REQUIRE(a.slot_bits.size() == b.slot_bits.size());
        for (std::size_t i = 0; i < a.slot_bits.size(); ++i)
            CHECK(a.slot_bits[i] == b.slot_bits[i]);
        CHECK(test_support::state_distance(a.state, b.state) < 1e-9);
    }
}

TEST_CASE("export is deterministic byte for byte") {
    std::mt19937 gen(5);
    Circuit circuit = random_circuit(gen, true);
    CHECK(export_qasm(circuit) == export_qasm(circuit));
}

TEST_CASE("reserved QASM names are sanitized") {
    CircuitHandler h;
    h.declare_register("gate", 1, InitialState::zero());
    const std::string text = export_qasm(h.assemble());
    CHECK(contains(text, "qubit[1] v_gate;"));
}

TEST_CASE("the reader rejects malformed input") {
    CHECK_THROWS_AS(import_qasm("h q[0];\n"), QasmError);                 // no header
    CHECK_THROWS_AS(import_qasm("OPENQASM 3.0;\nh q[0];\n"), QasmError); // unknown reg
    CHECK_THROWS_AS(import_qasm("OPENQASM 3.0;\nqubit[1] q;\nfrob q[0];\n"), QasmError);
    CHECK_THROWS_AS(import_qasm("OPENQASM 3.0;\nqubit[1] q;\nh q[0]\n"), QasmError);
}
