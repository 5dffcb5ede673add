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

#include <set>
#include <string>

#include "gtest/gtest.h"
#include "qsd/bench.hpp"
#include "schema_check.hpp"
#include "test_util.hpp"

using namespace qsd;

namespace {

const BenchReport &two_qubit_report() {
    static const BenchReport report = [] {
        BenchConfig config;
        config.min_qubits = 2;
        config.max_qubits = 2;
        return run_bench(config);
    }();
    return report;
}

}  // namespace

TEST(bench_problem, coherent_family) {
    const ProblemSpec spec = bench_problem(3);
    EXPECT_EQ(spec.num_states(), 3u);
    EXPECT_EQ(spec.dim(), 8u);
    const ProblemSpec expected = qsd::testing::coherent_spec(3, qsd::testing::third_roots());
    for (std::size_t i = 0; i < 3; ++i) {
        EXPECT_LE(qsd::testing::max_abs(spec.states()[i].matrix() - expected.states()[i].matrix()), 1e-15);
        EXPECT_NEAR(spec.priors()[i], 1.0 / 3.0, 1e-15);
    }
}

TEST(bench_schemes, nine_configurations) {
    const JointDistribution ref = JointDistribution::unchecked(RMatrix::Zero(3, 4));
    const auto schemes = bench_schemes(3, ref);
    ASSERT_EQ(schemes.size(), 9u);
    const std::vector<std::string> names{"uqsd", "med", "medplus", "frio", "crossqsd", "minl1", "minss", "meco", "hybrid"};
    for (std::size_t i = 0; i < 9; ++i) {
        EXPECT_EQ(schemes[i].name, names[i]);
        EXPECT_EQ(scheme_name(schemes[i].config.scheme), names[i]);
        EXPECT_EQ(schemes[i].config.lambda_eval, 0.0);
    }
    EXPECT_EQ(std::get<Frio>(schemes[3].config.scheme).rate, 0.1);
    EXPECT_EQ(std::get<CrossQsd>(schemes[4].config.scheme).alpha, (std::vector<double>{0.1, 0.1, 0.1}));
    EXPECT_EQ(std::get<CrossQsd>(schemes[4].config.scheme).beta, (std::vector<double>{0.1, 0.1, 0.1}));
    EXPECT_EQ(std::get<Hybrid>(schemes[8].config.scheme).w, 0.3);
    EXPECT_EQ(std::get<Hybrid>(schemes[8].config.scheme).ell, 1.0);
}

TEST(run_bench, two_qubits_all_schemes) {
    const BenchReport &report = two_qubit_report();
    ASSERT_EQ(report.rows.size(), 27u);
    EXPECT_TRUE(report.skipped.empty());
    std::set<std::pair<std::string, std::string>> seen;
    for (const BenchRow &row : report.rows) {
        EXPECT_EQ(row.status, "ok") << row.scheme << " " << row.task << ": " << row.message;
        EXPECT_EQ(row.qubits, 2);
        EXPECT_GE(row.seconds, 0.0);
        seen.insert({row.scheme, row.task});
    }
    EXPECT_EQ(seen.size(), 27u);
}

TEST(run_bench, report_matches_schema) {
    BenchConfig config;
    config.min_qubits = 2;
    config.max_qubits = 2;
    const io::Json j = bench_to_json(two_qubit_report(), config);
    const auto errors = qsd::testing::bench_schema().errors(j);
    EXPECT_TRUE(errors.empty()) << errors.front();
    EXPECT_EQ(j.at("rows").size(), 27u);
}

TEST(run_bench, schema_check_rejects_broken_reports) {
    BenchConfig config;
    config.min_qubits = 2;
    config.max_qubits = 2;
    io::Json j = bench_to_json(two_qubit_report(), config);
    j["rows"][0]["task"] = "IV";
    j["rows"][1].erase("seconds");
    j["extra"] = 1;
    EXPECT_EQ(qsd::testing::bench_schema().errors(j).size(), 3u);
}

TEST(run_bench, budget_skips_larger_instances) {
    BenchConfig config;
    config.min_qubits = 1;
    config.max_qubits = 2;
    config.budget_seconds = 1e-12;
    config.schemes = {"med", "uqsd"};
    const BenchReport report = run_bench(config);
    EXPECT_EQ(report.rows.size(), 6u);
    ASSERT_EQ(report.skipped.size(), 2u);
    for (const BenchSkip &s : report.skipped) EXPECT_EQ(s.qubits, 2);
    const auto errors = qsd::testing::bench_schema().errors(bench_to_json(report, config));
    EXPECT_TRUE(errors.empty()) << errors.front();
}

TEST(run_bench, rejects_bad_configuration) {
    BenchConfig config;
    config.schemes = {"nope"};
    EXPECT_THROW(run_bench(config), std::invalid_argument);
    config = {};
    config.min_qubits = 3;
    config.max_qubits = 2;
    EXPECT_THROW(run_bench(config), std::invalid_argument);
}
