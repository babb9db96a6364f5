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

#include <optional>
#include <string>

namespace qutes {

enum class TypeKind {
    Bool,
    Int,
    Float,
    String,
    Qubit,
    Quint,
    Qustring,
    Void,
    Array,
};

/// A language type. Arrays are one level deep: `kind == Array` with a
/// non-void, non-array `elem`.
struct QutesType {
    TypeKind kind = TypeKind::Void;
    TypeKind elem = TypeKind::Void;

    constexpr QutesType() = default;
    constexpr QutesType(TypeKind k) : kind(k) {}

    static constexpr QutesType array_of(TypeKind e) {
        QutesType t{TypeKind::Array};
        t.elem = e;
        return t;
    }

    constexpr bool is_array() const { return kind == TypeKind::Array; }
    constexpr bool is_void() const { return kind == TypeKind::Void; }

    constexpr bool operator==(const QutesType& o) const {
        return kind == o.kind && (kind != TypeKind::Array || elem == o.elem);
    }
    constexpr bool operator!=(const QutesType& o) const { return !(*this == o); }
};

constexpr bool is_classical_kind(TypeKind k) {
    return k == TypeKind::Bool || k == TypeKind::Int || k == TypeKind::Float ||
           k == TypeKind::String;
}

constexpr bool is_quantum_kind(TypeKind k) {
    return k == TypeKind::Qubit || k == TypeKind::Quint || k == TypeKind::Qustring;
}

constexpr bool is_classical(const QutesType& t) {
    if (t.is_array())
        return is_classical_kind(t.elem);
    return is_classical_kind(t.kind);
}

constexpr bool is_quantum(const QutesType& t) {
    if (t.is_array())
        return is_quantum_kind(t.elem);
    return is_quantum_kind(t.kind);
}

inline std::string type_name(const QutesType& t) {
    auto base = [](TypeKind k) -> std::string {
        switch (k) {
            case TypeKind::Bool: return "bool";
            case TypeKind::Int: return "int";
            case TypeKind::Float: return "float";
            case TypeKind::String: return "string";
            case TypeKind::Qubit: return "qubit";
            case TypeKind::Quint: return "quint";
            case TypeKind::Qustring: return "qustring";
            case TypeKind::Void: return "void";
            case TypeKind::Array: return "array";
        }
        return "?";
    };
    if (t.is_array())
        return base(t.elem) + "[]";
    return base(t.kind);
}

/// Implicit-conversion lattice. Returns the result type when `from` is
/// implicitly convertible to `to` without a measurement, nullopt otherwise.
/// The relation is reflexive and transitively closed:
///   bool -> int -> float, bool -> qubit -> quint, int -> quint,
///   string -> qustring.
inline std::optional<QutesType> promote_type(const QutesType& from, const QutesType& to) {
    if (from == to)
        return to;
    if (from.is_array() || to.is_array())
        return std::nullopt;
    const TypeKind f = from.kind;
    const TypeKind t = to.kind;
    switch (f) {
        case TypeKind::Bool:
            if (t == TypeKind::Int || t == TypeKind::Float || t == TypeKind::Qubit ||
                t == TypeKind::Quint)
                return to;
            break;
        case TypeKind::Int:
            if (t == TypeKind::Float || t == TypeKind::Quint)
                return to;
            break;
        case TypeKind::String:
            if (t == TypeKind::Qustring)
                return to;
            break;
        case TypeKind::Qubit:
            if (t == TypeKind::Quint)
                return to;
            break;
        default:
            break;
    }
    return std::nullopt;
}

/// The measurement demotion a quantum type collapses to when it meets a
/// classical context.
inline std::optional<TypeKind> demotion_target(TypeKind quantum) {
    switch (quantum) {
        case TypeKind::Qubit: return TypeKind::Bool;
        case TypeKind::Quint: return TypeKind::Int;
        case TypeKind::Qustring: return TypeKind::String;
        default: return std::nullopt;
    }
}

/// True exactly on the primitive demotion pairs: (qubit,bool), (quint,int),
/// (qustring,string). Composite quantum->classical paths (e.g. qubit -> int)
/// are built by the type checker from one demotion plus promotions.
inline bool requires_measurement(const QutesType& from, const QutesType& to) {
    if (from.is_array() || to.is_array())
        return false;
    auto d = demotion_target(from.kind);
    return d.has_value() && *d == to.kind;
}

/// How a value of type `from` reaches a context of type `to`.
struct Conversion {
    enum class Kind {
        Identity,
        Promote,       // classical widening or classical->quantum encoding
        Measure,       // quantum->classical demotion, then optional promote
        MeasureNarrow, // quint -> bool: measure full width, then nonzero test
        Invalid,
    };
    Kind kind = Conversion::Kind::Invalid;
    QutesType result{};
};

inline Conversion classify_conversion(const QutesType& from, const QutesType& to) {
    using K = Conversion::Kind;
    if (from == to)
        return {K::Identity, to};
    if (promote_type(from, to))
        return {K::Promote, to};
    if (!from.is_array() && !to.is_array() && is_quantum_kind(from.kind) &&
        is_classical_kind(to.kind)) {
        const TypeKind d = *demotion_target(from.kind);
        if (d == to.kind || promote_type(QutesType{d}, to))
            return {K::Measure, to};
        // Documented special case: a measured quint decodes to its full
        // integer, then converts to bool by a nonzero test.
        if (from.kind == TypeKind::Quint && to.kind == TypeKind::Bool)
            return {K::MeasureNarrow, to};
    }
    return {K::Invalid, {}};
}

} // namespace qutes
