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

#include <sstream>
#include <string>
#include <vector>

namespace qutes {

/// Half-open in spirit but stored inclusive: (start_line, start_col) is the
/// first character, (end_line, end_col) the last. Lines and columns are
/// 1-based; columns count characters, not bytes.
struct Span {
    std::string file;
    int start_line = 1;
    int start_col = 1;
    int end_line = 1;
    int end_col = 1;

    bool operator==(const Span& o) const {
        return file == o.file && start_line == o.start_line && start_col == o.start_col &&
               end_line == o.end_line && end_col == o.end_col;
    }
};

enum class Severity { Error, Warning };

struct Diagnostic {
    Severity severity = Severity::Error;
    std::string code;
    std::string message;
    Span span;
};

inline std::string render_diagnostic(const Diagnostic& d) {
    std::ostringstream os;
    os << d.span.file << ':' << d.span.start_line << ':' << d.span.start_col << ": "
       << (d.severity == Severity::Error ? "error" : "warning") << '[' << d.code
       << "]: " << d.message;
    return os.str();
}

class DiagnosticList {
public:
    void error(std::string code, std::string message, Span span) {
        items_.push_back({Severity::Error, std::move(code), std::move(message), std::move(span)});
    }
    void warning(std::string code, std::string message, Span span) {
        items_.push_back({Severity::Warning, std::move(code), std::move(message), std::move(span)});
    }

    bool has_errors() const {
        for (const auto& d : items_)
            if (d.severity == Severity::Error)
                return true;
        return false;
    }
    std::size_t error_count() const {
        std::size_t n = 0;
        for (const auto& d : items_)
            if (d.severity == Severity::Error)
                ++n;
        return n;
    }

    bool empty() const { return items_.empty(); }
    const std::vector<Diagnostic>& items() const { return items_; }

    void append(const DiagnosticList& other) {
        items_.insert(items_.end(), other.items_.begin(), other.items_.end());
    }

    std::string render_all() const {
        std::string out;
        for (const auto& d : items_) {
            out += render_diagnostic(d);
            out += '\n';
        }
        return out;
    }

private:
    std::vector<Diagnostic> items_;
};

} // namespace qutes
