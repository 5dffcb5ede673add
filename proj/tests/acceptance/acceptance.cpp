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

// Acceptance checks. Prints one PASS/FAIL line per criterion and exits
// nonzero when any criterion fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "qsd/bench.hpp"
#include "qsd/dilation.hpp"
#include "qsd/metrics.hpp"
#include "qsd/schemes.hpp"
#include "schema_check.hpp"
#include "test_util.hpp"

using namespace qsd;
using qsd::testing::max_abs;

namespace {

struct Outcome {
    bool pass = true;
    std::ostringstream detail;

    void check(bool ok, const std::string &what) {
        if (!ok) {
            if (pass) detail << "; failed: ";
            detail << what << " ";
            pass = false;
        }
    }
};

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

SchemeResult solve_at(const ProblemSpec &spec, const Scheme &scheme, double lambda_eval, double tol = 1e-8) {
    SolverSettings settings;
    settings.tol = tol;
    return solve_scheme(spec, {scheme, lambda_eval}, settings);
}

double p_succ(const ProblemSpec &spec, const Povm &povm, double lambda) {
    return outcome_stats(joint_distribution(spec, povm, lambda)).p_succ;
}

double trace_norm(const CMatrix &m) { return hermitian_eigenvalues(m).cwiseAbs().sum(); }

// Ensemble statistics of measuring the states of `spec`, depolarized by
// `lambda`, through a dilation. Residual mass counts as inconclusive.
OutcomeStats dilated_stats(const DilationResult &dil, const ProblemSpec &spec, double lambda) {
    OutcomeStats s;
    const auto noisy = spec.noisy_states(lambda);
    for (std::size_t i = 0; i < spec.num_states(); ++i) {
        const OutcomeCounts oc = simulate_measurement(dil, DensityMatrix(noisy[i]));
        for (std::size_t t = 0; t < oc.labels.size(); ++t) {
            const double q = spec.priors()[i] * oc.probabilities[t];
            if (oc.labels[t].kind != Label::Kind::Conclusive) {
                s.p_inc += q;
            } else if (oc.labels[t].index == static_cast<int>(i)) {
                s.p_succ += q;
            } else {
                s.p_err += q;
            }
        }
    }
    return s;
}

const Povm &benchmark_med_povm() {
    static const Povm povm = solve_at(qsd::testing::benchmark_spec(), Med{}, 0.0).povm;
    return povm;
}

// Random instances shared by criteria 4 and 5.
struct Instance {
    ProblemSpec spec;
    double lambda;
};

const std::vector<Instance> &random_instances() {
    static const std::vector<Instance> instances = [] {
        std::mt19937_64 rng(2024);
        std::vector<Instance> out;
        const double lambdas[] = {0.0, 0.05, 0.3};
        for (int n = 0; n < 50; ++n) {
            const std::size_t k = 2 + rng() % 3;
            const int qubits = 1 + static_cast<int>(rng() % 3);
            const bool pure = rng() % 2 == 0;
            const double lambda = lambdas[rng() % 3];
            out.push_back({qsd::testing::random_spec(rng, k, qubits, pure), lambda});
        }
        return out;
    }();
    return instances;
}

void criterion1(Outcome &o) {
    const ProblemSpec spec = qsd::testing::benchmark_spec();
    const auto t0 = std::chrono::steady_clock::now();
    const Povm povm = solve_at(spec, Med{}, 0.0).povm;
    const double elapsed = seconds_since(t0);
    const RVector cond = confidences(spec, povm, 0.0).given_state;
    const double expected[] = {0.99547, 0.98188, 0.98059};
    for (int i = 0; i < 3; ++i) {
        o.detail << "p" << i << "=" << cond[i] << " ";
        o.check(std::abs(cond[i] - expected[i]) <= 1e-3, "conditional " + std::to_string(i));
    }
    o.detail << "t=" << elapsed << "s";
    o.check(elapsed < 10.0, "runtime");
}

void criterion2(Outcome &o) {
    const Povm &povm = benchmark_med_povm();
    const Rank1Decomposition exact_dec = decompose_rank1(povm);
    const DilationResult exact = build_isometry(exact_dec);
    const DilationResult cut = build_isometry(truncate(exact_dec, 1e-4));
    o.detail << "rank " << exact.total_rank << "->" << cut.total_rank << " ancilla " << exact.ancilla_qubits() << "->"
             << cut.ancilla_qubits();
    o.check(cut.total_rank <= 6, "truncated rank");
    o.check(cut.ancilla_qubits() == 1, "truncated ancilla");
    o.check(exact.ancilla_qubits() == 2, "exact ancilla");
    double worst = 0.0;
    const ProblemSpec spec = qsd::testing::benchmark_spec();
    for (const DensityMatrix &rho : spec.states()) {
        const OutcomeCounts a = simulate_measurement(exact, rho);
        const OutcomeCounts b = simulate_measurement(cut, rho);
        for (int i = 0; i < 3; ++i) {
            worst = std::max(worst, std::abs(a.probability(Label::conclusive(i)) - b.probability(Label::conclusive(i))));
        }
    }
    o.detail << " max dev " << worst;
    o.check(worst <= 1e-4, "probability deviation");
}

void criterion3(Outcome &o) {
    const auto t0 = std::chrono::steady_clock::now();
    const ProblemSpec spec = qsd::testing::coherent_spec(3, qsd::testing::sixth_roots_lower());
    const std::vector<double> bound(3, 0.01);
    const Povm povm = solve_at(spec, CrossQsd{bound, bound}, 0.01).povm;
    const DilationResult dil = build_isometry(decompose_rank1(povm));
    std::vector<double> ratios;
    for (int i = 0; i < 23; ++i) {
        const double lambda = std::pow(10.0, -6.0 + 6.0 * i / 22.0);
        ratios.push_back(error_to_success(dilated_stats(dil, spec, i == 22 ? 1.0 : lambda)));
    }
    const double elapsed = seconds_since(t0);
    const double mid = error_to_success(dilated_stats(dil, spec, 0.01));
    o.detail << "ratio(1e-6)=" << ratios.front() << " ratio(0.01)=" << mid << " ratio(1)=" << ratios.back()
             << " t=" << elapsed << "s";
    o.check(std::abs(mid - 0.01010) <= 5e-4, "ratio at 0.01");
    o.check(std::abs(ratios.back() - 2.000) <= 1e-3, "ratio at 1");
    o.check(std::abs(ratios.front() - 0.00511) <= 5e-4, "ratio at 1e-6");
    o.check(elapsed < 300.0, "sweep runtime");
}

void criterion4(Outcome &o) {
    double worst_gap = 0.0;
    double worst_inc = 0.0;
    for (const Instance &inst : random_instances()) {
        const double med = p_succ(inst.spec, solve_at(inst.spec, Med{}, inst.lambda).povm, inst.lambda);
        const Povm plus = solve_at(inst.spec, MedPlus{}, inst.lambda).povm;
        const double med_plus = p_succ(inst.spec, plus, inst.lambda);
        double inc = 0.0;
        for (std::size_t j = 0; j < plus.size(); ++j) {
            if (plus.labels()[j].kind == Label::Kind::Inconclusive) inc += plus.elements()[j].trace().real();
        }
        worst_gap = std::max(worst_gap, std::abs(med - med_plus));
        worst_inc = std::max(worst_inc, inc);
    }
    o.detail << "max |MED-MED+| " << worst_gap << " max Tr(inc) " << worst_inc;
    o.check(worst_gap <= 1e-5, "success gap");
    o.check(worst_inc <= 1e-3, "inconclusive trace");
}

void criterion5(Outcome &o) {
    double worst = -1.0;
    for (const Instance &inst : random_instances()) {
        const double med = p_succ(inst.spec, solve_at(inst.spec, Med{}, inst.lambda).povm, inst.lambda);
        const double uqsd = p_succ(inst.spec, solve_at(inst.spec, Uqsd{}, inst.lambda).povm, inst.lambda);
        worst = std::max(worst, uqsd - med);
    }
    o.detail << "max UQSD-MED " << worst;
    o.check(worst <= 1e-6, "MED dominates UQSD");
}

void criterion6(Outcome &o) {
    std::mt19937_64 rng(99);
    std::uniform_real_distribution<double> prior(0.05, 0.95);
    double worst_med = 0.0;
    double worst_uqsd = 0.0;
    for (int n = 0; n < 100; ++n) {
        const DensityMatrix a = qsd::testing::random_density(rng, 2, 1 + n % 2);
        const DensityMatrix b = qsd::testing::random_density(rng, 2, 1 + (n / 2) % 2);
        const double p = prior(rng);
        const ProblemSpec spec({a, b}, {p, 1.0 - p});
        const double helstrom = 0.5 * (1.0 + trace_norm(p * a.matrix() - (1.0 - p) * b.matrix()));
        worst_med = std::max(worst_med, std::abs(p_succ(spec, solve_at(spec, Med{}, 0.0).povm, 0.0) - helstrom));

        const PureState u = qsd::testing::random_pure(rng, 1);
        const PureState v = qsd::testing::random_pure(rng, 1);
        const ProblemSpec pair = qsd::testing::pure_uniform({u, v});
        const double closed = 1.0 - std::abs(u.amplitudes().dot(v.amplitudes()));
        worst_uqsd = std::max(worst_uqsd, std::abs(p_succ(pair, solve_at(pair, Uqsd{}, 0.0).povm, 0.0) - closed));
    }
    const ProblemSpec pair = qsd::testing::qubit_pair_spec();
    const double med = p_succ(pair, solve_at(pair, Med{}, 0.0).povm, 0.0);
    const double uqsd = p_succ(pair, solve_at(pair, Uqsd{}, 0.0).povm, 0.0);
    o.detail << "max MED dev " << worst_med << " max UQSD dev " << worst_uqsd << " |0>/|+> " << med << " " << uqsd;
    o.check(worst_med <= 1e-6, "Helstrom");
    o.check(worst_uqsd <= 1e-6, "equal-prior UQSD");
    o.check(std::abs(med - (0.5 + std::sqrt(0.125))) <= 1e-6 && std::abs(med - 0.853553) <= 1e-6, "|0>/|+> MED");
    o.check(std::abs(uqsd - (1.0 - std::sqrt(0.5))) <= 1e-6 && std::abs(uqsd - 0.292893) <= 1e-6, "|0>/|+> UQSD");
}

void criterion7(Outcome &o) {
    std::mt19937_64 rng(7);
    double worst_iso = 0.0;
    double worst_prob = 0.0;
    bool dims_ok = true;
    for (int n = 0; n < 50; ++n) {
        const Eigen::Index d = 1 << (1 + n % 3);
        const std::size_t k = 2 + rng() % 3;
        const Povm povm = qsd::testing::random_povm(rng, d, k);
        const DilationResult dil = build_isometry(decompose_rank1(povm));
        const CMatrix &v = dil.isometry;
        worst_iso = std::max(worst_iso, max_abs(v.adjoint() * v - CMatrix::Identity(d, d)));
        for (int s = 0; s < 10; ++s) {
            const DensityMatrix rho = qsd::testing::random_density(rng, d, 1 + s % d);
            const OutcomeCounts oc = simulate_measurement(dil, rho);
            for (std::size_t j = 0; j < povm.size(); ++j) {
                const double born = (rho.matrix() * povm.elements()[j]).trace().real();
                worst_prob = std::max(worst_prob, std::abs(oc.probability(povm.labels()[j]) - born));
            }
        }
        dims_ok = dims_ok && dil.target_dim() <= build_isometry_generic(povm).target_dim();
    }
    o.detail << "max |V'V-I| " << worst_iso << " max prob dev " << worst_prob;
    o.check(worst_iso <= 1e-10, "isometry");
    o.check(worst_prob <= 1e-10, "probabilities");
    o.check(dims_ok, "minimal vs generic dimension");
}

void criterion8(Outcome &o) {
    const ProblemSpec spec = qsd::testing::benchmark_spec();
    const JointDistribution ref = uqsd_reference(spec);
    const double objective = solve_at(spec, FitMinLp{1.0, ref}, 0.0).solution.objective;
    o.check(objective <= 1e-6, "MinL1 objective");

    const ProblemSpec noisy = qsd::testing::benchmark_spec(0.01);
    const JointDistribution noisy_ref = uqsd_reference(noisy);
    const double med = p_succ(noisy, solve_at(noisy, Med{}, 0.01).povm, 0.01);
    const double hybrid = p_succ(noisy, solve_at(noisy, Hybrid{0.0, 1.0, noisy_ref}, 0.01).povm, 0.01);
    o.check(std::abs(hybrid - med) <= 1e-5, "hybrid w=0");

    // Solve tight so the noise sits well below the slack of twice the default tolerance.
    const double tol = 1e-10;
    const double slack = 2.0 * SolverSettings{}.tol;
    double prev_succ = 2.0;
    double prev_dev = 1e9;
    bool monotone = true;
    for (double w : {0.0, 0.1, 0.3, 1.0, 3.0, 10.0}) {
        const JointDistribution jd = joint_distribution(spec, solve_at(spec, Hybrid{w, 1.0, ref}, 0.0, tol).povm, 0.0);
        const double succ = outcome_stats(jd).p_succ;
        const double dev = lp_distance(jd, ref, 1.0);
        monotone = monotone && succ <= prev_succ + slack && dev <= prev_dev + slack;
        prev_succ = succ;
        prev_dev = dev;
    }
    o.detail << "MinL1 obj " << objective << " |hybrid0-MED| " << std::abs(hybrid - med);
    o.check(monotone, "monotone in w");
}

void criterion9(Outcome &o) {
    const ProblemSpec spec = qsd::testing::benchmark_spec();
    const DilationResult dil = build_isometry(decompose_rank1(solve_at(spec, Uqsd{}, 0.0).povm));
    const double clean = dilated_stats(dil, spec, 0.0).p_succ;
    double worst_low = 0.0;
    for (double lambda : {1e-6, 1e-5, 1e-4, 1e-3}) {
        worst_low = std::max(worst_low, std::abs(dilated_stats(dil, spec, lambda).p_succ - clean) / clean);
    }
    double prev = dilated_stats(dil, spec, 1e-3).p_succ;
    bool decreasing = true;
    for (double lambda : {3e-3, 1e-2, 3e-2, 0.1, 0.3, 1.0}) {
        const double s = dilated_stats(dil, spec, lambda).p_succ;
        decreasing = decreasing && s < prev;
        prev = s;
    }
    o.detail << "noiseless " << clean << " max rel change (lambda<=1e-3) " << worst_low << " at lambda=1: " << prev;
    o.check(worst_low <= 0.01, "low-noise stability");
    o.check(decreasing, "monotone degradation");
}

void criterion10(Outcome &o) {
    BenchConfig config;
    config.min_qubits = 2;
    config.max_qubits = 3;
    config.budget_seconds = 1e9;
    const BenchReport report = run_bench(config);
    bool all_ok = report.skipped.empty();
    for (const BenchRow &row : report.rows) all_ok = all_ok && row.status == "ok";
    const auto errors = qsd::testing::bench_schema().errors(bench_to_json(report, config));
    o.detail << report.rows.size() << " rows, " << report.skipped.size() << " skipped, " << errors.size()
             << " schema errors";
    o.check(report.rows.size() == 54, "row count");
    o.check(all_ok, "all tasks ok");
    o.check(errors.empty(), "schema");
}

}  // namespace

int main() {
    const std::vector<std::function<void(Outcome &)>> criteria{criterion1, criterion2, criterion3, criterion4,
                                                               criterion5, criterion6, criterion7, criterion8,
                                                               criterion9, criterion10};
    int failures = 0;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        Outcome o;
        try {
            criteria[i](o);
        } catch (const std::exception &e) {
            o.pass = false;
            o.detail << " exception: " << e.what();
        }
        failures += o.pass ? 0 : 1;
        std::printf("criterion %zu: %s (%s)\n", i + 1, o.pass ? "PASS" : "FAIL", o.detail.str().c_str());
        std::fflush(stdout);
    }
    return failures == 0 ? 0 : 1;
}
