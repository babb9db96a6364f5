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

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

#include "qutes/diag.hpp"

namespace qutes {

enum class TokenType {
    // type keywords
    KwBool, KwInt, KwFloat, KwString, KwQubit, KwQuint, KwQustring, KwVoid,
    // control keywords
    KwIf, KwElse, KwWhile, KwForeach, KwIn, KwReturn, KwTrue, KwFalse,
    // quantum unary keywords
    KwHadamard, KwPauliY, KwPauliZ, KwNot, KwMeasure, KwPrint, KwPrintln,
    // multi-controlled forms
    KwMcx, KwMcz, KwMcy, KwMcp, KwBy,
    // literals and names
    Identifier, IntLiteral, FloatLiteral, StringLiteral, QuantumLiteral,
    // operators
    Assign, EqEq, NotEq, Less, LessEq, Greater, GreaterEq,
    Plus, Minus, Star, Slash, Percent, Caret, Shl, Shr, AndAnd, OrOr,
    // punctuation
    LParen, RParen, LBrace, RBrace, LBracket, RBracket, RBracketQ,
    Comma, Semicolon,
    EndOfFile,
};

/// Coarse classification mirroring the language's token-kind model.
enum class TokenClass {
    Keyword,
    Identifier,
    IntegerLiteral,
    FloatLiteral,
    StringLiteral,
    QuantumLiteral,
    Operator,
    Punctuation,
    EndOfFile,
};

inline TokenClass token_class(TokenType t) {
    switch (t) {
        case TokenType::Identifier: return TokenClass::Identifier;
        case TokenType::IntLiteral: return TokenClass::IntegerLiteral;
        case TokenType::FloatLiteral: return TokenClass::FloatLiteral;
        case TokenType::StringLiteral: return TokenClass::StringLiteral;
        case TokenType::QuantumLiteral: return TokenClass::QuantumLiteral;
        case TokenType::Assign:
        case TokenType::EqEq:
        case TokenType::NotEq:
        case TokenType::Less:
        case TokenType::LessEq:
        case TokenType::Greater:
        case TokenType::GreaterEq:
        case TokenType::Plus:
        case TokenType::Minus:
        case TokenType::Star:
        case TokenType::Slash:
        case TokenType::Percent:
        case TokenType::Caret:
        case TokenType::Shl:
        case TokenType::Shr:
        case TokenType::AndAnd:
        case TokenType::OrOr: return TokenClass::Operator;
        case TokenType::LParen:
        case TokenType::RParen:
        case TokenType::LBrace:
        case TokenType::RBrace:
        case TokenType::LBracket:
        case TokenType::RBracket:
        case TokenType::RBracketQ:
        case TokenType::Comma:
        case TokenType::Semicolon: return TokenClass::Punctuation;
        case TokenType::EndOfFile: return TokenClass::EndOfFile;
        default: return TokenClass::Keyword;
    }
}

struct Token {
    TokenType type = TokenType::EndOfFile;
    std::string lexeme;
    Span span;
    // payloads, valid per type
    std::int64_t int_value = 0;     // IntLiteral, QuantumLiteral
    double float_value = 0.0;       // FloatLiteral
    std::string string_value;       // StringLiteral (unescaped)
};

inline std::optional<TokenType> keyword_type(std::string_view word) {
    struct Entry { std::string_view name; TokenType type; };
    static constexpr Entry table[] = {
        {"bool", TokenType::KwBool},         {"int", TokenType::KwInt},
        {"float", TokenType::KwFloat},       {"string", TokenType::KwString},
        {"qubit", TokenType::KwQubit},       {"quint", TokenType::KwQuint},
        {"qustring", TokenType::KwQustring}, {"void", TokenType::KwVoid},
        {"if", TokenType::KwIf},             {"else", TokenType::KwElse},
        {"while", TokenType::KwWhile},       {"foreach", TokenType::KwForeach},
        {"in", TokenType::KwIn},             {"return", TokenType::KwReturn},
        {"true", TokenType::KwTrue},         {"false", TokenType::KwFalse},
        {"hadamard", TokenType::KwHadamard}, {"pauliy", TokenType::KwPauliY},
        {"pauliz", TokenType::KwPauliZ},     {"not", TokenType::KwNot},
        {"measure", TokenType::KwMeasure},   {"print", TokenType::KwPrint},
        {"println", TokenType::KwPrintln},   {"mcx", TokenType::KwMcx},
        {"mcz", TokenType::KwMcz},           {"mcy", TokenType::KwMcy},
        {"mcp", TokenType::KwMcp},           {"by", TokenType::KwBy},
    };
    for (const auto& e : table)
        if (e.name == word)
            return e.type;
    return std::nullopt;
}

inline std::string token_type_name(TokenType t) {
    switch (t) {
        case TokenType::Identifier: return "identifier";
        case TokenType::IntLiteral: return "integer literal";
        case TokenType::FloatLiteral: return "float literal";
        case TokenType::StringLiteral: return "string literal";
        case TokenType::QuantumLiteral: return "quantum literal";
        case TokenType::Assign: return "'='";
        case TokenType::EqEq: return "'=='";
        case TokenType::NotEq: return "'!='";
        case TokenType::Less: return "'<'";
        case TokenType::LessEq: return "'<='";
        case TokenType::Greater: return "'>'";
        case TokenType::GreaterEq: return "'>='";
        case TokenType::Plus: return "'+'";
        case TokenType::Minus: return "'-'";
        case TokenType::Star: return "'*'";
        case TokenType::Slash: return "'/'";
        case TokenType::Percent: return "'%'";
        case TokenType::Caret: return "'^'";
        case TokenType::Shl: return "'<<'";
        case TokenType::Shr: return "'>>'";
        case TokenType::AndAnd: return "'&&'";
        case TokenType::OrOr: return "'||'";
        case TokenType::LParen: return "'('";
        case TokenType::RParen: return "')'";
        case TokenType::LBrace: return "'{'";
        case TokenType::RBrace: return "'}'";
        case TokenType::LBracket: return "'['";
        case TokenType::RBracket: return "']'";
        case TokenType::RBracketQ: return "']q'";
        case TokenType::Comma: return "','";
        case TokenType::Semicolon: return "';'";
        case TokenType::EndOfFile: return "end of file";
        case TokenType::KwBool: return "'bool'";
        case TokenType::KwInt: return "'int'";
        case TokenType::KwFloat: return "'float'";
        case TokenType::KwString: return "'string'";
        case TokenType::KwQubit: return "'qubit'";
        case TokenType::KwQuint: return "'quint'";
        case TokenType::KwQustring: return "'qustring'";
        case TokenType::KwVoid: return "'void'";
        case TokenType::KwIf: return "'if'";
        case TokenType::KwElse: return "'else'";
        case TokenType::KwWhile: return "'while'";
        case TokenType::KwForeach: return "'foreach'";
        case TokenType::KwIn: return "'in'";
        case TokenType::KwReturn: return "'return'";
        case TokenType::KwTrue: return "'true'";
        case TokenType::KwFalse: return "'false'";
        case TokenType::KwHadamard: return "'hadamard'";
        case TokenType::KwPauliY: return "'pauliy'";
        case TokenType::KwPauliZ: return "'pauliz'";
        case TokenType::KwNot: return "'not'";
        case TokenType::KwMeasure: return "'measure'";
        case TokenType::KwPrint: return "'print'";
        case TokenType::KwPrintln: return "'println'";
        case TokenType::KwMcx: return "'mcx'";
        case TokenType::KwMcz: return "'mcz'";
        case TokenType::KwMcy: return "'mcy'";
        case TokenType::KwMcp: return "'mcp'";
        case TokenType::KwBy: return "'by'";
    }
    return "?";
}

} // namespace qutes
