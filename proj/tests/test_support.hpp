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

#include <complex>
#include <filesystem>
#include <string>
#include <vector>

#include "qutes/driver.hpp"
#include "qutes/simulator.hpp"

namespace test_support {

inline std::vector<std::filesystem::path> corpus_files() {
    std::vector<std::filesystem::path> files;
    for (const auto& entry : std::filesystem::directory_iterator(QUTES_PROGRAMS_DIR))
        if (entry.path().extension() == ".qut")
            files.push_back(entry.path());
    std::sort(files.begin(), files.end());
    return files;
}

inline std::string load(const std::filesystem::path& p) {
    return qutes::read_text_file(p.string());
}

/// max elementwise |a - b| after canonicalizing the global phase.
inline double state_distance(qutes::StateVector a, qutes::StateVector b) {
    if (a.amps.size() != b.amps.size())
        return 1e9;
    qutes::normalize_global_phase(a);
    qutes::normalize_global_phase(b);
    double worst = 0.0;
    for (std::size_t i = 0; i < a.amps.size(); ++i)
        worst = std::max(worst, std::abs(a.amps[i] - b.amps[i]));
    return worst;
}

/// Amplitude of one basis state, by index.
inline std::complex<double> amp(const qutes::StateVector& s, std::size_t idx) {
    return s.amps.at(idx);
}

} // namespace test_support
