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
#include <string>
#include <string_view>
#include <vector>

#include "qutes/diag.hpp"
#include "qutes/token.hpp"

namespace qutes {

struct LexResult {
    std::vector<Token> tokens; // always ends with EndOfFile
    DiagnosticList diagnostics;
};

/// Hand-written scanner. Unknown characters are reported and skipped so the
/// stream always covers the whole input.
class Lexer {
public:
    Lexer(std::string_view source, std::string file) : src_(source), file_(std::move(file)) {}

    LexResult run() {
        LexResult out;
        while (!at_end()) {
            skip_trivia();
            if (at_end())
                break;
            lex_token(out);
        }
        Token eof;
        eof.type = TokenType::EndOfFile;
        eof.span = {file_, line_, col_, line_, col_};
        out.tokens.push_back(std::move(eof));
        out.diagnostics = std::move(diags_);
        return out;
    }

private:
    static bool is_ident_start(char c) {
        return std::isalpha(static_cast<unsigned char>(c)) || c == '_';
    }
    static bool is_ident_char(char c) {
        return std::isalnum(static_cast<unsigned char>(c)) || c == '_';
    }
    static bool is_digit(char c) { return std::isdigit(static_cast<unsigned char>(c)); }

    bool at_end() const { return pos_ >= src_.size(); }
    char peek(std::size_t ahead = 0) const {
        return pos_ + ahead < src_.size() ? src_[pos_ + ahead] : '\0';
    }

    char advance() {
        char c = src_[pos_++];
        last_line_ = line_;
        last_col_ = col_;
        if (c == '\n') {
            ++line_;
            col_ = 1;
        } else if ((static_cast<unsigned char>(c) & 0xC0) != 0x80) {
            // count characters, not UTF-8 continuation bytes
            ++col_;
        }
        return c;
    }

    void skip_trivia() {
        while (!at_end()) {
            char c = peek();
            if (c == ' ' || c == '\t' || c == '\r' || c == '\n') {
                advance();
            } else if (c == '/' && peek(1) == '/') {
                while (!at_end() && peek() != '\n')
                    advance();
            } else {
                break;
            }
        }
    }

    struct Mark {
        std::size_t pos;
        int line, col;
    };
    Mark mark() const { return {pos_, line_, col_}; }

    Span span_from(const Mark& m) const {
        return {file_, m.line, m.col, last_line_, last_col_};
    }
    std::string lexeme_from(const Mark& m) const {
        return std::string(src_.substr(m.pos, pos_ - m.pos));
    }

    void emit(LexResult& out, const Mark& m, TokenType type) {
        Token t;
        t.type = type;
        t.lexeme = lexeme_from(m);
        t.span = span_from(m);
        out.tokens.push_back(std::move(t));
    }

    void lex_token(LexResult& out) {
        const Mark m = mark();
        const char c = peek();
        if (is_ident_start(c)) {
            lex_word(out, m);
        } else if (is_digit(c)) {
            lex_number(out, m);
        } else if (c == '"') {
            lex_string(out, m);
        } else {
            lex_symbol(out, m);
        }
    }

    void lex_word(LexResult& out, const Mark& m) {
        while (!at_end() && is_ident_char(peek()))
            advance();
        std::string word = lexeme_from(m);
        if (auto kw = keyword_type(word)) {
            emit(out, m, *kw);
        } else {
            Token t;
            t.type = TokenType::Identifier;
            t.lexeme = std::move(word);
            t.span = span_from(m);
            out.tokens.push_back(std::move(t));
        }
    }

    void lex_number(LexResult& out, const Mark& m) {
        while (!at_end() && is_digit(peek()))
            advance();
        bool is_float = false;
        if (peek() == '.' && is_digit(peek(1))) {
            is_float = true;
            advance();
            while (!at_end() && is_digit(peek()))
                advance();
        }
        if ((peek() == 'e' || peek() == 'E') &&
            (is_digit(peek(1)) ||
             ((peek(1) == '+' || peek(1) == '-') && is_digit(peek(2))))) {
            is_float = true;
            advance();
            if (peek() == '+' || peek() == '-')
                advance();
            while (!at_end() && is_digit(peek()))
                advance();
        }

        bool quantum = false;
        if (!is_float && peek() == 'q' && !is_ident_char(peek(1))) {
            advance();
            quantum = true;
        } else if (is_float && peek() == 'q' && !is_ident_char(peek(1))) {
            advance();
            diags_.error("L003", "malformed quantum literal: value must be a non-negative integer",
                         span_from(m));
            emit_int_token(out, m, TokenType::QuantumLiteral, 0);
            return;
        }

        Token t;
        t.lexeme = lexeme_from(m);
        t.span = span_from(m);
        if (is_float) {
            t.type = TokenType::FloatLiteral;
            double v = 0.0;
            auto [p, ec] = std::from_chars(t.lexeme.data(), t.lexeme.data() + t.lexeme.size(), v);
            if (ec != std::errc{}) {
                diags_.error("L005", "malformed float literal", t.span);
                v = 0.0;
            }
            t.float_value = v;
        } else {
            t.type = quantum ? TokenType::QuantumLiteral : TokenType::IntLiteral;
            std::string_view digits(t.lexeme);
            if (quantum)
                digits.remove_suffix(1);
            std::int64_t v = 0;
            auto [p, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), v);
            if (ec != std::errc{}) {
                diags_.error("L004", "integer literal out of range", t.span);
                v = 0;
            }
            t.int_value = v;
        }
        out.tokens.push_back(std::move(t));
    }

    void emit_int_token(LexResult& out, const Mark& m, TokenType type, std::int64_t v) {
        Token t;
        t.type = type;
        t.lexeme = lexeme_from(m);
        t.span = span_from(m);
        t.int_value = v;
        out.tokens.push_back(std::move(t));
    }

    void lex_string(LexResult& out, const Mark& m) {
        advance(); // opening quote
        std::string value;
        while (!at_end()) {
            char c = peek();
            if (c == '"') {
                advance();
                Token t;
                t.type = TokenType::StringLiteral;
                t.lexeme = lexeme_from(m);
                t.span = span_from(m);
                t.string_value = std::move(value);
                out.tokens.push_back(std::move(t));
                return;
            }
            if (c == '\n')
                break;
            if (c == '\\') {
                advance();
                char e = at_end() ? '\0' : advance();
                switch (e) {
                    case 'n': value.push_back('\n'); break;
                    case 't': value.push_back('\t'); break;
                    case '\\': value.push_back('\\'); break;
                    case '"': value.push_back('"'); break;
                    default:
                        diags_.error("L006", "unknown escape sequence", span_from(m));
                        break;
                }
                continue;
            }
            value.push_back(advance());
        }
        diags_.error("L002", "unterminated string literal", span_from(m));
        Token t;
        t.type = TokenType::StringLiteral;
        t.lexeme = lexeme_from(m);
        t.span = span_from(m);
        t.string_value = std::move(value);
        out.tokens.push_back(std::move(t));
    }

    void lex_symbol(LexResult& out, const Mark& m) {
        char c = advance();
        auto two = [&](char next, TokenType pair, TokenType single) {
            if (peek() == next) {
                advance();
                emit(out, m, pair);
            } else {
                emit(out, m, single);
            }
        };
        switch (c) {
            case '(': emit(out, m, TokenType::LParen); return;
            case ')': emit(out, m, TokenType::RParen); return;
            case '{': emit(out, m, TokenType::LBrace); return;
            case '}': emit(out, m, TokenType::RBrace); return;
            case '[': emit(out, m, TokenType::LBracket); return;
            case ']':
                if (peek() == 'q' && !is_ident_char(peek(1))) {
                    advance();
                    emit(out, m, TokenType::RBracketQ);
                } else {
                    emit(out, m, TokenType::RBracket);
                }
                return;
            case ',': emit(out, m, TokenType::Comma); return;
            case ';': emit(out, m, TokenType::Semicolon); return;
            case '+': emit(out, m, TokenType::Plus); return;
            case '-': emit(out, m, TokenType::Minus); return;
            case '*': emit(out, m, TokenType::Star); return;
            case '/': emit(out, m, TokenType::Slash); return;
            case '%': emit(out, m, TokenType::Percent); return;
            case '^': emit(out, m, TokenType::Caret); return;
            case '=': two('=', TokenType::EqEq, TokenType::Assign); return;
            case '<':
                if (peek() == '<') {
                    advance();
                    emit(out, m, TokenType::Shl);
                } else {
                    two('=', TokenType::LessEq, TokenType::Less);
                }
                return;
            case '>':
                if (peek() == '>') {
                    advance();
                    emit(out, m, TokenType::Shr);
                } else {
                    two('=', TokenType::GreaterEq, TokenType::Greater);
                }
                return;
            case '&':
                if (peek() == '&') {
                    advance();
                    emit(out, m, TokenType::AndAnd);
                    return;
                }
                break;
            case '|':
                if (peek() == '|') {
                    advance();
                    emit(out, m, TokenType::OrOr);
                    return;
                }
                break;
            case '!':
                if (peek() == '=') {
                    advance();
                    emit(out, m, TokenType::NotEq);
                    return;
                }
                break;
            default:
                break;
        }
        diags_.error("L001", "invalid character", span_from(m));
    }

    std::string_view src_;
    std::string file_;
    std::size_t pos_ = 0;
    int line_ = 1, col_ = 1;
    int last_line_ = 1, last_col_ = 1;
    DiagnosticList diags_;
};

inline LexResult tokenize(std::string_view source, std::string file = "<input>") {
    return Lexer(source, std::move(file)).run();
}

} // namespace qutes
