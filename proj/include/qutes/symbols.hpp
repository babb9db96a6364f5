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

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "qutes/ast.hpp"
#include "qutes/qir.hpp"
#include "qutes/types.hpp"

namespace qutes {

enum class ScopeKind { Global, Function, Block };

struct Scope {
    Scope* parent = nullptr;
    ScopeKind kind = ScopeKind::Global;
    std::map<std::string, Symbol*> bindings;
};

struct FunctionSignature {
    std::vector<QutesType> param_types;
    QutesType return_type;
};

/// A named, scoped binding. Quantum variables carry either a fresh register
/// prototype (classically initialized declarations) or alias their
/// initializer's register; either way a symbol names exactly one register
/// for its lifetime.
struct Symbol {
    std::string name;
    QutesType declared_type;
    Scope* scope = nullptr;
    Span decl_span;
    int seq = 0; // declaration order; uses must come later

    bool is_function = false;
    FunctionSignature signature;
    const FuncDeclStmt* func_ast = nullptr;

    std::optional<RegisterHandle> reg; // fresh-register prototype
    bool aliases_init = false;         // binds the initializer's register
    bool is_param = false;
};

class SymbolTable {
public:
    SymbolTable() {
        scopes_.push_back(std::make_unique<Scope>());
        global_ = scopes_.back().get();
    }

    Scope* global() { return global_; }
    const Scope* global() const { return global_; }

    Scope* make_scope(Scope* parent, ScopeKind kind, const void* node) {
        scopes_.push_back(std::make_unique<Scope>());
        Scope* s = scopes_.back().get();
        s->parent = parent;
        s->kind = kind;
        if (node)
            node_scopes_[node] = s;
        return s;
    }

    Scope* scope_for(const void* node) const {
        auto it = node_scopes_.find(node);
        return it == node_scopes_.end() ? nullptr : it->second;
    }

    /// nullptr when the name is already bound in this scope.
    Symbol* declare(Scope* scope, Symbol sym) {
        if (scope->bindings.count(sym.name))
            return nullptr;
        symbols_.push_back(std::make_unique<Symbol>(std::move(sym)));
        Symbol* s = symbols_.back().get();
        s->scope = scope;
        scope->bindings[s->name] = s;
        return s;
    }

    /// Innermost binding declared no later than `use_seq`; functions are
    /// hoisted and visible everywhere.
    const Symbol* resolve(const Scope* scope, const std::string& name, int use_seq) const {
        for (const Scope* s = scope; s; s = s->parent) {
            auto it = s->bindings.find(name);
            if (it != s->bindings.end()) {
                const Symbol* sym = it->second;
                if (sym->is_function || sym->seq < use_seq)
                    return sym;
            }
        }
        return nullptr;
    }

    const std::vector<std::unique_ptr<Symbol>>& symbols() const { return symbols_; }

private:
    std::vector<std::unique_ptr<Symbol>> symbols_;
    std::vector<std::unique_ptr<Scope>> scopes_;
    std::map<const void*, Scope*> node_scopes_;
    Scope* global_ = nullptr;
};

} // namespace qutes
