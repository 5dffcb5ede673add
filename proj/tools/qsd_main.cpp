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

// Command-line front end: solve, dilate, simulate, bench.
//
// Exit codes: 0 success, 1 usage error, 2 numerical failure or unusable
// input data.

#include <charconv>
#include <cmath>
#include <iostream>
#include <limits>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "qsd/bench.hpp"
#include "qsd/dilation.hpp"
#include "qsd/io.hpp"
#include "qsd/metrics.hpp"
#include "qsd/schemes.hpp"

namespace {

using qsd::io::Json;

constexpr int kExitUsage = 1;
constexpr int kExitNumerical = 2;

/// Bad flag values discovered after parsing.
struct UsageError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

struct SolverFlags {
    double tol = 1e-8;
    long max_iters = 200'000;

    qsd::SolverSettings settings() const {
        qsd::SolverSettings s;
        s.tol = tol;
        s.max_iters = max_iters;
        return s;
    }
};

void add_solver_flags(CLI::App *cmd, SolverFlags &f) {
    cmd->add_option("--tol", f.tol, "Solver tolerance on the relative residuals")->capture_default_str();
    cmd->add_option("--max-iters", f.max_iters, "Solver iteration budget")->capture_default_str();
}

struct SolveArgs {
    std::string problem;
    std::string scheme;
    std::optional<double> lambda;
    std::optional<double> lambda_eval;
    std::vector<double> alpha{0.1};
    std::vector<double> beta{0.1};
    double rate = 0.1;
    std::string bound = "atleast";
    double ell = 1.0;
    double w = 0.3;
    std::string reference;
    std::string out = "-";
    SolverFlags solver;
};

struct DilateArgs {
    std::string povm;
    double delta = 0.0;
    double rank_tol = 0.0;
    bool generic = false;
    std::uint64_t seed = 7;
    std::size_t test_states = 10;
    std::string out = "-";
};

struct SimulateArgs {
    std::string isometry;
    std::string problem;
    std::optional<std::size_t> state_index;
    double lambda = 0.0;
    std::uint64_t shots = 0;
    std::uint64_t seed = 0;
    std::string sweep;
    std::string out = "-";
};

struct BenchArgs {
    int min_qubits = 2;
    int max_qubits = 3;
    double budget = 60.0;
    std::vector<std::string> schemes;
    std::string out = "-";
    SolverFlags solver;
};

std::string shortest(double v) {
    if (std::isinf(v)) {
        return v > 0 ? "inf" : "-inf";
    }
    if (std::isnan(v)) {
        return "nan";
    }
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

std::string scientific(double v) {
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof(buf), v, std::chars_format::scientific);
    return std::string(buf, res.ptr);
}

// JSON has no infinity; ratios without a denominator become null.
Json finite_or_null(double v) { return std::isfinite(v) ? Json(v) : Json(nullptr); }

std::vector<double> per_state(const std::vector<double> &v, std::size_t k, const char *name) {
    if (v.size() == 1) {
        return std::vector<double>(k, v.front());
    }
    if (v.size() != k) {
        throw UsageError(std::string("--") + name + " takes one value or one per state");
    }
    return v;
}

qsd::JointDistribution load_reference(const std::string &path, const qsd::ProblemSpec &spec,
                                      const qsd::SolverSettings &settings) {
    if (path.empty()) {
        return qsd::uqsd_reference(spec, settings);
    }
    const Json j = qsd::io::read_json_file(path);
    if (j.contains("elements")) {
        return qsd::joint_distribution(spec, qsd::io::povm_from_json(j), 0.0);
    }
    if (!j.contains("joint")) {
        throw qsd::io::FormatError("reference file needs \"joint\" or \"elements\"");
    }
    const qsd::CMatrix m = qsd::io::matrix_from_json(j.at("joint"));
    return qsd::JointDistribution(m.real());
}

qsd::SchemeConfig scheme_config(const SolveArgs &a, const qsd::ProblemSpec &spec, double lambda_eval) {
    const std::size_t k = spec.num_states();
    const auto settings = a.solver.settings();
    if (a.scheme == "med") {
        return {qsd::Med{}, lambda_eval};
    }
    if (a.scheme == "medplus") {
        return {qsd::MedPlus{}, lambda_eval};
    }
    if (a.scheme == "uqsd") {
        return {qsd::Uqsd{}, lambda_eval};
    }
    if (a.scheme == "frio") {
        if (a.bound != "atleast" && a.bound != "atmost") {
            throw UsageError("--bound must be atleast or atmost");
        }
        return {qsd::Frio{a.rate, a.bound == "atleast" ? qsd::RateBound::AtLeast : qsd::RateBound::AtMost},
                lambda_eval};
    }
    if (a.scheme == "crossqsd") {
        return {qsd::CrossQsd{per_state(a.alpha, k, "alpha"), per_state(a.beta, k, "beta")}, lambda_eval};
    }
    if (a.scheme == "minl1" || a.scheme == "minss") {
        return {qsd::FitMinLp{a.scheme == "minl1" ? 1.0 : 2.0, load_reference(a.reference, spec, settings)},
                lambda_eval};
    }
    if (a.scheme == "meco") {
        return {qsd::FitMeco{load_reference(a.reference, spec, settings)}, lambda_eval};
    }
    if (a.scheme == "hybrid") {
        return {qsd::Hybrid{a.w, a.ell, load_reference(a.reference, spec, settings)}, lambda_eval};
    }
    throw UsageError("unknown scheme \"" + a.scheme + "\"");
}

Json stats_json(const qsd::JointDistribution &jd) {
    const qsd::OutcomeStats st = qsd::outcome_stats(jd);
    const qsd::Confidences conf = qsd::confidences(jd);
    return {{"p_succ", st.p_succ},
            {"p_err", st.p_err},
            {"p_inc", st.p_inc},
            {"error_to_success", finite_or_null(qsd::error_to_success(st))},
            {"joint", qsd::io::to_json(jd.entries())},
            {"confidence_given_state", std::vector<double>(conf.given_state.begin(), conf.given_state.end())},
            {"confidence_given_outcome",
             std::vector<double>(conf.given_outcome.begin(), conf.given_outcome.end())}};
}

int run_solve(const SolveArgs &a) {
    const qsd::ProblemSpec spec = qsd::io::problem_from_json(qsd::io::read_json_file(a.problem));
    const double lambda_eval = a.lambda_eval.value_or(spec.noise_lambda());
    const double lambda = a.lambda.value_or(lambda_eval);
    if (!(lambda >= 0.0 && lambda <= 1.0) || !(lambda_eval >= 0.0 && lambda_eval <= 1.0)) {
        throw UsageError("noise levels must lie in [0, 1]");
    }
    const qsd::SchemeConfig config = scheme_config(a, spec, lambda_eval);
    const qsd::SolverSettings settings = a.solver.settings();
    const qsd::SchemeResult result = qsd::solve_scheme(spec, config, settings);

    const qsd::JointDistribution jd = qsd::joint_distribution(spec, result.povm, lambda);
    Json metrics = stats_json(jd);
    metrics["lambda"] = lambda;
    metrics["lambda_eval"] = lambda_eval;
    metrics["scheme"] = qsd::scheme_name(config.scheme);
    const qsd::Solution &sol = result.solution;
    metrics["solver"] = {{"status", std::string(qsd::to_string(sol.status))},
                         {"iterations", sol.iterations},
                         {"primal_residual", sol.primal_residual},
                         {"dual_residual", sol.dual_residual},
                         {"objective", sol.objective}};
    const auto *ref = std::visit(
        [](const auto &s) -> const qsd::JointDistribution * {
            if constexpr (requires { s.reference; }) {
                return &s.reference;
            }
            return nullptr;
        },
        config.scheme);
    if (ref != nullptr) {
        metrics["deviation_l1"] = qsd::lp_distance(*ref, jd, 1.0);
        metrics["deviation_l2"] = qsd::lp_distance(*ref, jd, 2.0);
    }

    Json doc = qsd::io::povm_to_json(result.povm);
    doc["metrics"] = metrics;
    doc["meta"] = qsd::io::meta(0, qsd::io::solver_tolerances(settings.tol, settings.max_iters));
    qsd::io::write_json_file(a.out, doc);
    if (a.out != "-") {
        std::cout << Json{{"metrics", metrics}}.dump(2) << "\n";
    }
    return 0;
}

int run_dilate(const DilateArgs &a) {
    if (!(a.delta >= 0.0) || !(a.rank_tol >= 0.0)) {
        throw UsageError("--delta and --rank-tol must be nonnegative");
    }
    const qsd::Povm povm = qsd::io::povm_from_json(qsd::io::read_json_file(a.povm));
    const qsd::DilationResult generic = qsd::build_isometry_generic(povm);
    qsd::DilationResult dil;
    Json ranks = Json::array();
    if (a.generic) {
        dil = generic;
    } else {
        qsd::Rank1Decomposition dec = qsd::decompose_rank1(povm, a.rank_tol);
        if (a.delta > 0.0) {
            dec = qsd::truncate(dec, a.delta);
        }
        for (std::size_t r : dec.per_element_rank) {
            ranks.push_back(r);
        }
        dil = qsd::build_isometry(dec);
    }
    const qsd::DilationReport rep = qsd::verify_dilation(dil, povm, a.test_states, a.seed);

    Json report = {{"method", a.generic ? "generic" : "minimal"},
                   {"total_rank", dil.total_rank},
                   {"per_element_rank", ranks},
                   {"domain_qubits", dil.domain_qubits},
                   {"target_qubits", dil.target_qubits},
                   {"ancilla_qubits", dil.ancilla_qubits()},
                   {"generic_target_qubits", generic.target_qubits},
                   {"isometry_deviation", rep.isometry_deviation},
                   {"max_probability_deviation", rep.max_probability_deviation},
                   {"states_checked", rep.states_checked}};
    Json doc = qsd::io::dilation_to_json(dil);
    doc["report"] = report;
    doc["meta"] = qsd::io::meta(a.seed, {{"rank_tol", a.rank_tol}, {"delta", a.delta}});
    qsd::io::write_json_file(a.out, doc);
    if (a.out != "-") {
        std::cout << Json{{"report", report}}.dump(2) << "\n";
    }
    return 0;
}

// Ensemble statistics of measuring `spec` through the dilation at noise
// `lambda`. Residual mass counts as inconclusive.
struct SimStats {
    double p_succ = 0.0;
    double p_err = 0.0;
    double p_inc = 0.0;
};

SimStats ensemble_stats(const qsd::DilationResult &dil, const qsd::ProblemSpec &spec, double lambda) {
    SimStats s;
    const auto noisy = spec.noisy_states(lambda);
    for (std::size_t i = 0; i < spec.num_states(); ++i) {
        const qsd::OutcomeCounts oc = qsd::simulate_measurement(dil, qsd::DensityMatrix(noisy[i]));
        const double p = spec.priors()[i];
        for (std::size_t t = 0; t < oc.labels.size(); ++t) {
            const qsd::Label &l = oc.labels[t];
            const double q = p * oc.probabilities[t];
            if (l.kind != qsd::Label::Kind::Conclusive) {
                s.p_inc += q;
            } else if (l.index == static_cast<int>(i)) {
                s.p_succ += q;
            } else {
                s.p_err += q;
            }
        }
    }
    return s;
}

struct Sweep {
    double from = 0.0;
    double to = 0.0;
    int points = 0;
    bool log = true;
};

Sweep parse_sweep(const std::string &text) {
    std::vector<std::string> parts;
    std::stringstream ss(text);
    for (std::string p; std::getline(ss, p, ':');) {
        parts.push_back(p);
    }
    if (parts.size() != 3 && parts.size() != 4) {
        throw UsageError("--lambda-sweep expects from:to:points[:lin|log]");
    }
    Sweep s;
    try {
        s.from = std::stod(parts[0]);
        s.to = std::stod(parts[1]);
        s.points = std::stoi(parts[2]);
    } catch (const std::exception &) {
        throw UsageError("--lambda-sweep has a non-numeric field");
    }
    if (parts.size() == 4) {
        if (parts[3] != "lin" && parts[3] != "log") {
            throw UsageError("--lambda-sweep spacing must be lin or log");
        }
        s.log = parts[3] == "log";
    }
    if (s.points < 1 || !(s.from >= 0.0 && s.to <= 1.0 && s.from <= s.to) || (s.log && !(s.from > 0.0))) {
        throw UsageError("--lambda-sweep needs 0 <= from <= to <= 1, points >= 1 and from > 0 for log spacing");
    }
    return s;
}

std::vector<double> sweep_values(const Sweep &s) {
    std::vector<double> out;
    for (int t = 0; t < s.points; ++t) {
        const double frac = s.points == 1 ? 0.0 : static_cast<double>(t) / (s.points - 1);
        out.push_back(s.log ? s.from * std::pow(s.to / s.from, frac) : s.from + frac * (s.to - s.from));
    }
    // Pin the endpoints exactly.
    out.front() = s.from;
    out.back() = s.to;
    return out;
}

int run_simulate(const SimulateArgs &a) {
    const qsd::DilationResult dil = qsd::io::dilation_from_json(qsd::io::read_json_file(a.isometry));
    const qsd::ProblemSpec spec = qsd::io::problem_from_json(qsd::io::read_json_file(a.problem));
    if (spec.dim() != dil.domain_dim) {
        throw std::invalid_argument("problem dimension " + std::to_string(spec.dim()) +
                                    " does not match the isometry domain " + std::to_string(dil.domain_dim));
    }

    if (!a.sweep.empty()) {
        std::ostringstream csv;
        csv << "lambda,p_succ,p_err,p_inc,ratio\n";
        for (double lambda : sweep_values(parse_sweep(a.sweep))) {
            const SimStats s = ensemble_stats(dil, spec, lambda);
            const double ratio = s.p_succ > 1e-15 ? s.p_err / s.p_succ : std::numeric_limits<double>::infinity();
            csv << scientific(lambda) << ',' << shortest(s.p_succ) << ',' << shortest(s.p_err) << ','
                << shortest(s.p_inc) << ',' << shortest(ratio) << '\n';
        }
        qsd::io::write_text_file(a.out, csv.str());
        return 0;
    }

    if (!(a.lambda >= 0.0 && a.lambda <= 1.0)) {
        throw UsageError("--lambda must lie in [0, 1]");
    }
    if (a.state_index && *a.state_index >= spec.num_states()) {
        throw UsageError("--state-index is out of range");
    }
    const auto noisy = spec.noisy_states(a.lambda);
    Json states = Json::array();
    for (std::size_t i = 0; i < spec.num_states(); ++i) {
        if (a.state_index && *a.state_index != i) {
            continue;
        }
        // Each state draws from its own stream so results do not depend on
        // which other states are simulated.
        const std::uint64_t seed = a.seed + i;
        const qsd::OutcomeCounts oc = qsd::simulate_measurement(dil, qsd::DensityMatrix(noisy[i]), a.shots, seed);
        Json outcomes = Json::array();
        for (std::size_t t = 0; t < oc.labels.size(); ++t) {
            Json o = {{"label", qsd::to_string(oc.labels[t])}, {"probability", oc.probabilities[t]}};
            if (a.shots > 0) {
                o["count"] = oc.counts[t];
            }
            outcomes.push_back(std::move(o));
        }
        states.push_back({{"state", i}, {"seed", seed}, {"outcomes", std::move(outcomes)}});
    }
    const SimStats s = ensemble_stats(dil, spec, a.lambda);
    Json doc = {{"lambda", a.lambda},
                {"shots", a.shots},
                {"states", std::move(states)},
                {"ensemble",
                 {{"p_succ", s.p_succ},
                  {"p_err", s.p_err},
                  {"p_inc", s.p_inc},
                  {"error_to_success", finite_or_null(s.p_succ > 1e-15 ? s.p_err / s.p_succ
                                                                          : std::numeric_limits<double>::infinity())}}},
                {"meta", qsd::io::meta(a.seed, {{"state_trace", qsd::DensityMatrix::kTraceTol}, {"state_psd", qsd::DensityMatrix::kPsdTol}})}};
    qsd::io::write_json_file(a.out, doc);
    return 0;
}

int run_bench_cmd(const BenchArgs &a) {
    qsd::BenchConfig config;
    config.min_qubits = a.min_qubits;
    config.max_qubits = a.max_qubits;
    config.budget_seconds = a.budget;
    config.schemes = a.schemes;
    config.settings = a.solver.settings();
    if (a.min_qubits < 1 || a.max_qubits < a.min_qubits || a.max_qubits > 8) {
        throw UsageError("qubit range must satisfy 1 <= min <= max <= 8");
    }
    const qsd::BenchReport report = qsd::run_bench(config);
    qsd::io::write_json_file(a.out, qsd::bench_to_json(report, config));
    return 0;
}

}  // namespace

int main(int argc, char **argv) {
    CLI::App app{"Quantum state discrimination: solve, dilate, simulate, benchmark"};
    app.require_subcommand(1);
    app.set_version_flag("--version", std::string(qsd::io::kToolVersion));

    SolveArgs solve;
    CLI::App *solve_cmd = app.add_subcommand("solve", "Optimize a POVM for a discrimination problem");
    solve_cmd->add_option("--problem", solve.problem, "Problem JSON file")->required();
    solve_cmd
        ->add_option("--scheme", solve.scheme,
                     "med | medplus | uqsd | frio | crossqsd | minl1 | minss | meco | hybrid")
        ->required();
    solve_cmd->add_option("--lambda", solve.lambda, "Noise level for the reported metrics (default: --lambda-eval)");
    solve_cmd->add_option("--lambda-eval", solve.lambda_eval,
                          "Noise level assumed while solving (default: the problem's noise_lambda)");
    solve_cmd->add_option("--alpha", solve.alpha, "CrossQSD false-positive bounds (one value or one per state)")
        ->delimiter(',');
    solve_cmd->add_option("--beta", solve.beta, "CrossQSD false-negative bounds (one value or one per state)")
        ->delimiter(',');
    solve_cmd->add_option("--rate", solve.rate, "FRIO inconclusive rate")->capture_default_str();
    solve_cmd->add_option("--bound", solve.bound, "FRIO bound direction: atleast | atmost")->capture_default_str();
    solve_cmd->add_option("--ell", solve.ell, "Hybrid deviation norm (1 or 2)")->capture_default_str();
    solve_cmd->add_option("--w", solve.w, "Hybrid deviation weight")->capture_default_str();
    solve_cmd->add_option("--reference", solve.reference,
                          "Reference distribution file ({\"joint\": ...} or a POVM file); default: noiseless UQSD");
    solve_cmd->add_option("--out", solve.out, "POVM output file ('-' for stdout)")->capture_default_str();
    add_solver_flags(solve_cmd, solve.solver);

    DilateArgs dilate;
    CLI::App *dilate_cmd = app.add_subcommand("dilate", "Build a Naimark dilation of a POVM");
    dilate_cmd->add_option("--povm", dilate.povm, "POVM JSON file")->required();
    dilate_cmd->add_option("--delta", dilate.delta, "Drop rank-1 components with weight below delta")
        ->capture_default_str();
    dilate_cmd->add_option("--rank-tol", dilate.rank_tol, "Eigenvalues at or below this are treated as zero")
        ->capture_default_str();
    dilate_cmd->add_flag("--generic", dilate.generic, "Use the sqrt(Pi) (x) |i> baseline instead");
    dilate_cmd->add_option("--seed", dilate.seed, "Seed for the verification states")->capture_default_str();
    dilate_cmd->add_option("--test-states", dilate.test_states, "Random states used for verification")
        ->capture_default_str();
    dilate_cmd->add_option("--out", dilate.out, "Isometry output file ('-' for stdout)")->capture_default_str();

    SimulateArgs sim;
    CLI::App *sim_cmd = app.add_subcommand("simulate", "Measure problem states through a dilation");
    sim_cmd->add_option("--isometry", sim.isometry, "Isometry JSON file")->required();
    sim_cmd->add_option("--problem", sim.problem, "Problem JSON file with the states to prepare")->required();
    sim_cmd->add_option("--state-index", sim.state_index, "Simulate only this state");
    sim_cmd->add_option("--lambda", sim.lambda, "Depolarizing level applied to the states")->capture_default_str();
    sim_cmd->add_option("--shots", sim.shots, "Sampled shots per state (0: exact probabilities only)")
        ->capture_default_str();
    sim_cmd->add_option("--seed", sim.seed, "Sampling seed")->capture_default_str();
    sim_cmd->add_option("--lambda-sweep", sim.sweep, "from:to:points[:lin|log] noise sweep, written as CSV");
    sim_cmd->add_option("--out", sim.out, "Output file ('-' for stdout)")->capture_default_str();

    BenchArgs bench;
    CLI::App *bench_cmd = app.add_subcommand("bench", "Time solve, rank-1 decomposition and dilation");
    bench_cmd->add_option("--min-qubits", bench.min_qubits)->capture_default_str();
    bench_cmd->add_option("--max-qubits", bench.max_qubits)->capture_default_str();
    bench_cmd->add_option("--budget", bench.budget, "Seconds per solve before larger sizes are skipped")
        ->capture_default_str();
    bench_cmd->add_option("--schemes", bench.schemes, "Subset of schemes to run")->delimiter(',');
    bench_cmd->add_option("--out", bench.out, "Report file ('-' for stdout)")->capture_default_str();
    add_solver_flags(bench_cmd, bench.solver);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp &e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp &e) {
        return app.exit(e);
    } catch (const CLI::CallForVersion &e) {
        return app.exit(e);
    } catch (const CLI::ParseError &e) {
        app.exit(e);
        return kExitUsage;
    }

    try {
        if (*solve_cmd) {
            return run_solve(solve);
        }
        if (*dilate_cmd) {
            return run_dilate(dilate);
        }
        if (*sim_cmd) {
            return run_simulate(sim);
        }
        if (*bench_cmd) {
            return run_bench_cmd(bench);
        }
    } catch (const UsageError &e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::exception &e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitNumerical;
    }
    return kExitUsage;
}
