// Copyright 2026 The qsd Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef QSD_IO_HPP
#define QSD_IO_HPP

#include <cstdint>
#include <string>
#include <string_view>

#include "json.hpp"
#include "qsd/dilation.hpp"
#include "qsd/metrics.hpp"
#include "qsd/quantum.hpp"

namespace qsd::io {

using Json = nlohmann::json;

inline constexpr std::string_view kToolName = "qsd";
inline constexpr std::string_view kToolVersion = "0.1.0";

/// Malformed or inconsistent file content.
class FormatError : public std::invalid_argument {
   public:
    using std::invalid_argument::invalid_argument;
};

// Complex numbers are [re, im] pairs everywhere. Doubles are written in the
// shortest form that parses back to the same value, so every writer below
// round-trips exactly.
Json to_json(Complex z);
Complex complex_from_json(const Json &j);
Json to_json(const CVector &v);
CVector vector_from_json(const Json &j);
Json to_json(const CMatrix &m);
CMatrix matrix_from_json(const Json &j);
Json to_json(const RMatrix &m);

/// Problem file:
///   {"num_qubits": n,
///    "states": [{"type": "pure", "amplitudes": [[re, im], ...]},
///               {"type": "density", "matrix": [[[re, im], ...], ...]},
///               {"type": "coherent", "alpha": [re, im]},
///               {"type": "benchmark2q", "a": [a1, a2, a3]}],
///    "priors": [...],          // optional, uniform when absent
///    "noise_lambda": 0.0}      // optional
/// "benchmark2q" expands to three states. Pure amplitudes must be normalized
/// unless the entry sets "normalize": true.
ProblemSpec problem_from_json(const Json &j);
/// Writes every state as a density matrix.
Json problem_to_json(const ProblemSpec &spec);

/// {"dim": d, "elements": [{"label": "0" | "1" | ... | "?", "matrix": ...}]}
Json povm_to_json(const Povm &povm);
Povm povm_from_json(const Json &j);

/// {"domain_dim", "domain_qubits", "target_qubits", "total_rank", "delta",
///  "outcome_map": [...], "element_labels": [...], "matrix": ...}
Json dilation_to_json(const DilationResult &dil);
DilationResult dilation_from_json(const Json &j);

/// Reproducibility block attached to every output: tool name and version,
/// seed and whichever numerical tolerances the producing step used.
Json meta(std::uint64_t seed, const Json &tolerances);
Json solver_tolerances(double tol, long max_iters);

/// Reads a JSON document; "-" means stdin.
Json read_json_file(const std::string &path);
/// Writes with two-space indentation and a trailing newline; "-" means stdout.
void write_json_file(const std::string &path, const Json &j);
void write_text_file(const std::string &path, const std::string &text);

}  // namespace qsd::io

#endif
