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

// Python bindings. Matrices cross the boundary as complex numpy arrays,
// POVM labels as strings ("0", "1", ..., "?", "residual").

#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <string>
#include <vector>

#include "qsd/bench.hpp"
#include "qsd/dilation.hpp"
#include "qsd/io.hpp"
#include "qsd/metrics.hpp"
#include "qsd/oracles.hpp"
#include "qsd/schemes.hpp"

namespace py = pybind11;
using namespace qsd;

namespace {

ProblemSpec make_spec(const std::vector<CMatrix> &states, const std::vector<double> &priors) {
    std::vector<DensityMatrix> rhos;
    for (const CMatrix &m : states) rhos.emplace_back(m);
    return ProblemSpec(std::move(rhos), priors);
}

Povm make_povm(const std::vector<CMatrix> &elements, const std::vector<std::string> &labels) {
    std::vector<Label> parsed;
    for (const std::string &l : labels) parsed.push_back(parse_label(l));
    return Povm(elements, parsed);
}

std::vector<std::string> label_strings(const std::vector<Label> &labels) {
    std::vector<std::string> out;
    for (const Label &l : labels) out.push_back(to_string(l));
    return out;
}

std::vector<double> per_state(const std::vector<double> &v, std::size_t k, const char *name) {
    if (v.size() == 1) return std::vector<double>(k, v.front());
    if (v.size() != k) throw std::invalid_argument(std::string(name) + " takes one value or one per state");
    return v;
}

SchemeConfig scheme_config(const ProblemSpec &spec, const std::string &scheme, double lambda_eval,
                           const std::vector<double> &alpha, const std::vector<double> &beta, double rate,
                           const std::string &bound, double w, double ell, const SolverSettings &settings) {
    const std::size_t k = spec.num_states();
    if (scheme == "med") return {Med{}, lambda_eval};
    if (scheme == "medplus") return {MedPlus{}, lambda_eval};
    if (scheme == "uqsd") return {Uqsd{}, lambda_eval};
    if (scheme == "frio") {
        if (bound != "atleast" && bound != "atmost") throw std::invalid_argument("bound must be atleast or atmost");
        return {Frio{rate, bound == "atleast" ? RateBound::AtLeast : RateBound::AtMost}, lambda_eval};
    }
    if (scheme == "crossqsd") return {CrossQsd{per_state(alpha, k, "alpha"), per_state(beta, k, "beta")}, lambda_eval};
    if (scheme == "minl1" || scheme == "minss") {
        return {FitMinLp{scheme == "minl1" ? 1.0 : 2.0, uqsd_reference(spec, settings)}, lambda_eval};
    }
    if (scheme == "meco") return {FitMeco{uqsd_reference(spec, settings)}, lambda_eval};
    if (scheme == "hybrid") return {Hybrid{w, ell, uqsd_reference(spec, settings)}, lambda_eval};
    throw std::invalid_argument("unknown scheme \"" + scheme + "\"");
}

py::dict py_solve(const std::vector<CMatrix> &states, const std::vector<double> &priors, const std::string &scheme,
               double lambda_eval, const std::vector<double> &alpha, const std::vector<double> &beta, double rate,
               const std::string &bound, double w, double ell, double tol, long max_iters) {
    const ProblemSpec spec = make_spec(states, priors);
    SolverSettings settings;
    settings.tol = tol;
    settings.max_iters = max_iters;
    const SchemeResult r =
        solve_scheme(spec, scheme_config(spec, scheme, lambda_eval, alpha, beta, rate, bound, w, ell, settings), settings);
    const JointDistribution jd = joint_distribution(spec, r.povm, lambda_eval);
    const OutcomeStats st = outcome_stats(jd);
    py::dict out;
    out["elements"] = r.povm.elements();
    out["labels"] = label_strings(r.povm.labels());
    out["joint"] = jd.entries();
    out["p_succ"] = st.p_succ;
    out["p_err"] = st.p_err;
    out["p_inc"] = st.p_inc;
    out["status"] = std::string(to_string(r.solution.status));
    out["iterations"] = r.solution.iterations;
    out["objective"] = r.solution.objective;
    return out;
}

py::dict py_dilate(const std::vector<CMatrix> &elements, const std::vector<std::string> &labels, double delta,
                bool generic) {
    const Povm povm = make_povm(elements, labels);
    const DilationResult dil = generic ? build_isometry_generic(povm) : build_isometry(truncate(decompose_rank1(povm), delta));
    const DilationReport report = verify_dilation(dil, povm);
    py::dict out;
    out["isometry"] = dil.isometry;
    out["outcome_map"] = label_strings(dil.outcome_map);
    out["total_rank"] = dil.total_rank;
    out["domain_qubits"] = dil.domain_qubits;
    out["target_qubits"] = dil.target_qubits;
    out["ancilla_qubits"] = dil.ancilla_qubits();
    out["isometry_deviation"] = report.isometry_deviation;
    out["max_probability_deviation"] = report.max_probability_deviation;
    return out;
}

py::dict py_measure(const std::vector<CMatrix> &elements, const std::vector<std::string> &labels, const CMatrix &rho,
                 double delta, std::uint64_t shots, std::uint64_t seed) {
    const DilationResult dil = build_isometry(truncate(decompose_rank1(make_povm(elements, labels)), delta));
    const OutcomeCounts oc = simulate_measurement(dil, DensityMatrix(rho), shots, seed);
    py::dict out;
    out["labels"] = label_strings(oc.labels);
    out["probabilities"] = oc.probabilities;
    out["counts"] = oc.counts;
    return out;
}

std::string py_bench(int min_qubits, int max_qubits, double budget, const std::vector<std::string> &schemes, double tol,
                  long max_iters) {
    BenchConfig config;
    config.min_qubits = min_qubits;
    config.max_qubits = max_qubits;
    config.budget_seconds = budget;
    config.schemes = schemes;
    config.settings.tol = tol;
    config.settings.max_iters = max_iters;
    return bench_to_json(run_bench(config), config).dump();
}

py::tuple py_load_problem(const std::string &path) {
    const ProblemSpec spec = io::problem_from_json(io::read_json_file(path));
    std::vector<CMatrix> states;
    for (const DensityMatrix &rho : spec.states()) states.push_back(rho.matrix());
    return py::make_tuple(states, spec.priors());
}

}  // namespace

PYBIND11_MODULE(_qsd, m) {
    m.doc() = "Quantum state discrimination: conic schemes, Naimark dilation, simulation.";
    m.attr("__version__") = std::string(io::kToolVersion);

    m.def("solve", &py_solve, py::arg("states"), py::arg("priors"), py::arg("scheme"), py::kw_only(),
          py::arg("lambda_eval") = 0.0, py::arg("alpha") = std::vector<double>{0.1},
          py::arg("beta") = std::vector<double>{0.1}, py::arg("rate") = 0.1, py::arg("bound") = "atleast",
          py::arg("w") = 0.3, py::arg("ell") = 1.0, py::arg("tol") = 1e-8, py::arg("max_iters") = 200'000L,
          "Optimal measurement for a state ensemble under the named scheme.");
    m.def("dilate", &py_dilate, py::arg("elements"), py::arg("labels"), py::kw_only(), py::arg("delta") = 0.0,
          py::arg("generic") = false, "Naimark isometry for a POVM, with its verification report.");
    m.def("measure", &py_measure, py::arg("elements"), py::arg("labels"), py::arg("rho"), py::kw_only(),
          py::arg("delta") = 0.0, py::arg("shots") = 0, py::arg("seed") = 0,
          "Outcome probabilities (and sampled counts) of measuring rho through the dilated POVM.");
    m.def("bench_json", &py_bench, py::arg("min_qubits") = 2, py::arg("max_qubits") = 3, py::arg("budget") = 60.0,
          py::arg("schemes") = std::vector<std::string>{}, py::arg("tol") = 1e-8, py::arg("max_iters") = 200'000L,
          "Benchmark report as a JSON string.");
    m.def("load_problem", &py_load_problem, py::arg("path"), "States and priors from a problem file.");
    m.def(
        "depolarize", [](const CMatrix &rho, double lambda) { return depolarize(rho, lambda); }, py::arg("rho"),
        py::arg("lam"));
    m.def(
        "coherent_state",
        [](Complex alpha, int num_qubits) { return CVector(make_coherent_state(alpha, num_qubits).amplitudes()); },
        py::arg("alpha"), py::arg("num_qubits"));
    m.def(
        "helstrom",
        [](const CMatrix &a, const CMatrix &b, double p1) {
            return helstrom_two_state(DensityMatrix(a), DensityMatrix(b), p1);
        },
        py::arg("rho1"), py::arg("rho2"), py::arg("p1"));
    m.def(
        "uqsd_two_pure",
        [](const CVector &a, const CVector &b, double p1) {
            const int n = qubits_for_dim(static_cast<std::size_t>(a.size()));
            return uqsd_two_pure(PureState::normalized(n, a), PureState::normalized(n, b), p1);
        },
        py::arg("psi1"), py::arg("psi2"), py::arg("p1"));
}
