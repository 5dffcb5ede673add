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

#include "qsd/bench.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <map>
#include <numbers>
#include <optional>

#include "qsd/dilation.hpp"

namespace qsd {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
    return std::chrono::duration<double>(Clock::now() - start).count();
}

bool selected(const BenchConfig &config, const std::string &name) {
    return config.schemes.empty() ||
           std::find(config.schemes.begin(), config.schemes.end(), name) != config.schemes.end();
}

const std::vector<std::string> &all_scheme_names() {
    static const std::vector<std::string> names{"uqsd",  "med",   "medplus", "frio",  "crossqsd",
                                                "minl1", "minss", "meco",    "hybrid"};
    return names;
}

}  // namespace

ProblemSpec bench_problem(int num_qubits) {
    std::vector<PureState> states;
    for (int t = 0; t < 3; ++t) {
        states.push_back(make_coherent_state(std::polar(1.0, 2.0 * std::numbers::pi * t / 3.0), num_qubits));
    }
    return ProblemSpec::from_pure(states, {1.0 / 3.0, 1.0 / 3.0, 1.0 - 2.0 / 3.0});
}

std::vector<NamedScheme> bench_schemes(std::size_t num_states, const JointDistribution &reference) {
    const std::vector<double> tenth(num_states, 0.1);
    return {
        {"uqsd", {Uqsd{}, 0.0}},
        {"med", {Med{}, 0.0}},
        {"medplus", {MedPlus{}, 0.0}},
        {"frio", {Frio{0.1, RateBound::AtLeast}, 0.0}},
        {"crossqsd", {CrossQsd{tenth, tenth}, 0.0}},
        {"minl1", {FitMinLp{1.0, reference}, 0.0}},
        {"minss", {FitMinLp{2.0, reference}, 0.0}},
        {"meco", {FitMeco{reference}, 0.0}},
        {"hybrid", {Hybrid{0.3, 1.0, reference}, 0.0}},
    };
}

BenchReport run_bench(const BenchConfig &config) {
    if (config.min_qubits < 1 || config.max_qubits < config.min_qubits) {
        throw std::invalid_argument("qubit range must satisfy 1 <= min <= max");
    }
    for (const auto &name : config.schemes) {
        const auto &names = all_scheme_names();
        if (std::find(names.begin(), names.end(), name) == names.end()) {
            throw std::invalid_argument("unknown benchmark scheme \"" + name + "\"");
        }
    }
    BenchReport report;
    std::map<std::string, std::string> over_budget;
    for (int n = config.min_qubits; n <= config.max_qubits; ++n) {
        const ProblemSpec spec = bench_problem(n);
        std::optional<JointDistribution> reference;
        std::string reference_error;
        try {
            reference = uqsd_reference(spec, config.settings);
        } catch (const std::exception &e) {
            reference_error = e.what();
        }
        // Placeholder for the schemes that need a reference when it failed;
        // they are reported as failed before use.
        const JointDistribution fallback =
            reference ? *reference : JointDistribution::unchecked(RMatrix::Zero(3, 4));
        for (const auto &[name, scheme] : bench_schemes(spec.num_states(), fallback)) {
            if (!selected(config, name)) {
                continue;
            }
            if (auto it = over_budget.find(name); it != over_budget.end()) {
                report.skipped.push_back({name, n, it->second});
                continue;
            }
            const bool needs_reference = name == "minl1" || name == "minss" || name == "meco" || name == "hybrid";
            if (needs_reference && !reference) {
                report.rows.push_back({name, n, "I", 0.0, "failed", "reference solve failed: " + reference_error});
                continue;
            }

            auto start = Clock::now();
            std::optional<SchemeResult> solved;
            try {
                solved = solve_scheme(spec, scheme, config.settings);
            } catch (const std::exception &e) {
                report.rows.push_back({name, n, "I", seconds_since(start), "failed", e.what()});
                continue;
            }
            const double solve_seconds = seconds_since(start);
            report.rows.push_back({name, n, "I", solve_seconds, "ok", ""});

            start = Clock::now();
            const Rank1Decomposition dec = decompose_rank1(solved->povm);
            report.rows.push_back({name, n, "II", seconds_since(start), "ok", ""});

            start = Clock::now();
            const DilationResult dil = build_isometry(dec);
            [[maybe_unused]] const CMatrix unitary = complete_to_unitary(dil);
            report.rows.push_back({name, n, "III", seconds_since(start), "ok", ""});

            if (solve_seconds > config.budget_seconds) {
                over_budget[name] = "solve at " + std::to_string(n) + " qubits exceeded the time budget";
            }
        }
    }
    return report;
}

io::Json bench_to_json(const BenchReport &report, const BenchConfig &config) {
    io::Json rows = io::Json::array();
    for (const auto &r : report.rows) {
        io::Json row = {{"scheme", r.scheme},
                        {"qubits", r.qubits},
                        {"task", r.task},
                        {"seconds", r.seconds},
                        {"status", r.status}};
        if (!r.message.empty()) {
            row["message"] = r.message;
        }
        rows.push_back(std::move(row));
    }
    io::Json skipped = io::Json::array();
    for (const auto &s : report.skipped) {
        skipped.push_back({{"scheme", s.scheme}, {"qubits", s.qubits}, {"reason", s.reason}});
    }
    io::Json schemes = io::Json::array();
    for (const auto &name : config.schemes.empty() ? all_scheme_names() : config.schemes) {
        schemes.push_back(name);
    }
    return {{"meta", io::meta(0, io::solver_tolerances(config.settings.tol, config.settings.max_iters))},
            {"config",
             {{"min_qubits", config.min_qubits},
              {"max_qubits", config.max_qubits},
              {"budget_seconds", config.budget_seconds},
              {"schemes", std::move(schemes)}}},
            {"rows", std::move(rows)},
            {"skipped", std::move(skipped)}};
}

}  // namespace qsd
