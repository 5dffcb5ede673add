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

#ifndef QSD_BENCH_HPP
#define QSD_BENCH_HPP

#include <string>
#include <vector>

#include "qsd/conic.hpp"
#include "qsd/io.hpp"
#include "qsd/schemes.hpp"

namespace qsd {

/// Three truncated coherent states with alpha = 1, e^{2 pi i/3}, e^{4 pi i/3}
/// and equal priors.
ProblemSpec bench_problem(int num_qubits);

struct NamedScheme {
    std::string name;
    SchemeConfig config;
};

/// The nine benchmark configurations, in a fixed order: uqsd, med, medplus,
/// frio (rate 0.1), crossqsd (alpha = beta = 0.1), minl1, minss, meco and
/// hybrid (ell = 1, w = 0.3). FitQSD and hybrid use `reference`; every
/// configuration solves at lambda_eval = 0.
std::vector<NamedScheme> bench_schemes(std::size_t num_states, const JointDistribution &reference);

struct BenchConfig {
    int min_qubits = 2;
    int max_qubits = 3;
    /// A scheme whose solve exceeds this many seconds is not run at larger
    /// qubit counts.
    double budget_seconds = 60.0;
    /// Restrict to these scheme names; empty runs all nine.
    std::vector<std::string> schemes;
    SolverSettings settings;
};

struct BenchRow {
    std::string scheme;
    int qubits = 0;
    /// "I" (solve), "II" (rank-1 decomposition), "III" (isometry + unitary completion).
    std::string task;
    double seconds = 0.0;
    /// "ok" or "failed".
    std::string status = "ok";
    std::string message;
};

struct BenchSkip {
    std::string scheme;
    int qubits = 0;
    std::string reason;
};

struct BenchReport {
    std::vector<BenchRow> rows;
    std::vector<BenchSkip> skipped;
};

BenchReport run_bench(const BenchConfig &config);

/// {"meta", "config", "rows": [{"scheme", "qubits", "task", "seconds",
/// "status"[, "message"]}], "skipped": [...]}
io::Json bench_to_json(const BenchReport &report, const BenchConfig &config);

}  // namespace qsd

#endif
