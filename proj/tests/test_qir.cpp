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

#include "qutes/qir.hpp"
#include "qutes/simulator.hpp"
#include "test_support.hpp"

using namespace qutes;

TEST_CASE("basis-one registers get an X during assembly") {
    CircuitHandler h;
    const RegisterHandle& q = h.declare_register("q", 1, InitialState::basis(1));
    Circuit c = h.assemble();
    REQUIRE(c.ops.size() == 1);
    CHECK(c.ops[0].kind == GateKind::X);
    CHECK(c.ops[0].qubits[0] == q.qubit(0));
}

TEST_CASE("uniform superposition over {0,3} assembles to a Bell-type state") {
    CircuitHandler h;
    h.declare_register("a", 2, InitialState::superposition({0, 3}));
    StateVector s = statevector_of(h.assemble());
    // direct construction of (|00> + |11>)/sqrt(2)
    StateVector expected = StateVector::zero(2);
    expected.amps[0] = {1.0 / std::numbers::sqrt2, 0.0};
    expected.amps[3] = {1.0 / std::numbers::sqrt2, 0.0};
    expected.amps[0b01] = expected.amps[0b10] = {0.0, 0.0};
    CHECK(test_support::state_distance(s, expected) < 1e-9);
}

TEST_CASE("out-of-range initial values are rejected") {
    CircuitHandler h;
    CHECK_THROWS_AS(h.declare_register("a", 2, InitialState::basis(7)), QirError);
    CHECK_THROWS_AS(h.declare_register("b", 2, InitialState::superposition({0, 4})), QirError);
    CHECK_THROWS_AS(h.declare_register("c", 2, InitialState::superposition({1, 1})), QirError);
    CHECK_THROWS_AS(h.declare_register("d", 2, InitialState::superposition({})), QirError);
    CHECK_THROWS_AS(h.declare_register("e", 0, InitialState::zero()), QirError);
}

TEST_CASE("duplicate register names are rejected") {
    CircuitHandler h;
    h.declare_register("q", 1, InitialState::zero());
    CHECK_THROWS_AS(h.declare_register("q", 2, InitialState::zero()), QirError);
}

TEST_CASE("push_op appends in program order") {
    CircuitHandler h;
    const RegisterHandle& q = h.declare_register("q", 2, InitialState::zero());
    CHECK(h.op_count() == 0);
    h.push_op(GateOp::h(q.qubit(0)));
    CHECK(h.op_count() == 1);
    h.push_op(GateOp::mcp({q.qubit(0)}, q.qubit(1), std::numbers::pi / 2));
    CHECK(h.op_count() == 2);
    CHECK(h.ops()[1].theta == std::numbers::pi / 2);
}

TEST_CASE("repeated qubit operands are rejected") {
    CircuitHandler h;
    const RegisterHandle& q = h.declare_register("q", 2, InitialState::zero());
    CHECK_THROWS_AS(h.push_op(GateOp::cx(q.qubit(0), q.qubit(0))), QirError);
    CHECK_THROWS_AS(h.push_op(GateOp::swap(q.qubit(1), q.qubit(1))), QirError);
}

TEST_CASE("ops on undeclared registers and bad offsets are rejected") {
    CircuitHandler h;
    const RegisterHandle& q = h.declare_register("q", 1, InitialState::zero());
    CHECK_THROWS_AS(h.push_op(GateOp::h({q.id + 5, 0})), QirError);
    CHECK_THROWS_AS(h.push_op(GateOp::h({q.id, 1})), QirError);
}

TEST_CASE("non-finite phases are rejected") {
    CircuitHandler h;
    const RegisterHandle& q = h.declare_register("q", 2, InitialState::zero());
    CHECK_THROWS_AS(h.push_op(GateOp::p(q.qubit(0), std::nan(""))), QirError);
}

TEST_CASE("assembly is empty for an empty handler and idempotent in general") {
    CircuitHandler empty;
    Circuit c0 = empty.assemble();
    CHECK(c0.registers.empty());
    CHECK(c0.ops.empty());

    CircuitHandler h;
    const RegisterHandle& q = h.declare_register("q", 1, InitialState::basis(0));
    h.push_op(GateOp::h(q.qubit(0)));
    Circuit once = h.assemble();
    Circuit twice = h.assemble();
    REQUIRE(once.ops.size() == 1); // Zero-value basis prep emits nothing
    CHECK(once.ops[0].kind == GateKind::H);
    CHECK(once.ops == twice.ops);
    CHECK(once.registers.size() == twice.registers.size());
}

TEST_CASE("single-qubit uniform superposition preps with one H then logged ops") {
    CircuitHandler h;
    const RegisterHandle& q = h.declare_register("q", 1, InitialState::superposition({0, 1}));
    h.push_op(GateOp::x(q.qubit(0)));
    Circuit c = h.assemble();
    REQUIRE(c.ops.size() == 2);
    CHECK(c.ops[0].kind == GateKind::H);
    CHECK(c.ops[1].kind == GateKind::X);
}

TEST_CASE("assembly preserves the order of logged operations") {
    std::mt19937 gen(42);
    CircuitHandler h;
    const RegisterHandle& q = h.declare_register("q", 3, InitialState::basis(5));
    std::vector<GateOp> pushed;
    std::uniform_int_distribution<int> pick(0, 2);
    std::uniform_int_distribution<int> qubit(0, 2);
    for (int i = 0; i < 40; ++i) {
        GateOp op;
        switch (pick(gen)) {
            case 0: op = GateOp::h(q.qubit(qubit(gen))); break;
            case 1: op = GateOp::x(q.qubit(qubit(gen))); break;
            default: {
                int a = qubit(gen), b = qubit(gen);
                if (a == b)
                    b = (b + 1) % 3;
                op = GateOp::cx(q.qubit(a), q.qubit(b));
                break;
            }
        }
        h.push_op(op);
        pushed.push_back(op);
    }
    Circuit c = h.assemble();
    REQUIRE(c.ops.size() >= pushed.size());
    const std::size_t prep = c.ops.size() - pushed.size();
    for (std::size_t i = 0; i < pushed.size(); ++i)
        CHECK(c.ops[prep + i] == pushed[i]);
}

TEST_CASE("superposition preparation matches direct state construction") {
    // oracle: write the amplitudes directly and compare
    std::mt19937 gen(7);
    for (int width = 1; width <= 5; ++width) {
        const std::uint64_t space = std::uint64_t{1} << width;
        for (int round = 0; round < 8; ++round) {
            std::uniform_int_distribution<std::uint64_t> count(1, space);
            const std::uint64_t k = count(gen);
            std::vector<std::uint64_t> all(space);
            for (std::uint64_t v = 0; v < space; ++v)
                all[v] = v;
            std::shuffle(all.begin(), all.end(), gen);
            std::vector<std::uint64_t> values(all.begin(), all.begin() + k);

            CircuitHandler h;
            h.declare_register("r", width, InitialState::superposition(values));
            StateVector got = statevector_of(h.assemble());

            StateVector expected = StateVector::zero(width);
            expected.amps.assign(space, {0.0, 0.0});
            const double a = 1.0 / std::sqrt(static_cast<double>(values.size()));
            for (auto v : values)
                expected.amps[v] = {a, 0.0};

            INFO("width " << width << " values " << values.size());
            CHECK(test_support::state_distance(got, expected) < 1e-9);
        }
    }
}
