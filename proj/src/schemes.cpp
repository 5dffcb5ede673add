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

#include "qsd/schemes.hpp"

#include <cmath>
#include <optional>
#include <sstream>
#include <stdexcept>

namespace qsd {

namespace {

template <class... Ts>
struct Overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

void require_states(const ProblemSpec &spec) {
    if (spec.num_states() < 2) {
        throw std::invalid_argument("discrimination needs at least two states");
    }
}

void require_lambda(double lambda) {
    if (!(lambda >= 0.0 && lambda <= 1.0)) {
        throw std::invalid_argument("noise level must lie in [0, 1]");
    }
}

void require_ell(double ell) {
    if (ell != 1.0 && ell != 2.0) {
        throw std::invalid_argument("only ell = 1 and ell = 2 are supported");
    }
}

void require_reference(const ProblemSpec &spec, const JointDistribution &reference) {
    const auto k = static_cast<Eigen::Index>(spec.num_states());
    if (reference.entries().rows() != k || reference.entries().cols() != k + 1) {
        throw std::invalid_argument("reference distribution must be k x (k+1)");
    }
}

// The POVM blocks plus the shared objective / completeness rows.
constexpr double kInconclusiveTieBreak = 1e-3;

struct PovmLayout {
    ProgramBuilder builder;
    std::size_t k = 0;
    std::size_t elements = 0;
    std::vector<CMatrix> noisy;  // E_lambda(rho_i)
    std::vector<double> priors;

    // Index of the block holding Pi_? (only meaningful with an inconclusive element).
    std::size_t inconclusive() const { return k; }
};

// `faces[e]`, when given and non-empty, restricts conclusive element e to
// the span of its columns.
PovmLayout povm_layout(const ProblemSpec &spec, double lambda_eval, bool inconclusive,
                       const std::vector<std::optional<CMatrix>> &faces = {}) {
    require_states(spec);
    require_lambda(lambda_eval);
    PovmLayout l;
    l.k = spec.num_states();
    l.elements = l.k + (inconclusive ? 1 : 0);
    l.noisy = spec.noisy_states(lambda_eval);
    l.priors = spec.priors();
    const auto d = static_cast<Eigen::Index>(spec.dim());
    for (std::size_t e = 0; e < l.elements; ++e) {
        if (e < faces.size() && faces[e]) {
            l.builder.add_face_block(*faces[e]);
        } else {
            l.builder.add_block(ConeKind::PsdComplex, d);
        }
    }
    // sum_e Pi_e = I, one row per svec coordinate. smat(e_t) is the matrix
    // whose trace against X reads off svec(X)_t.
    const RVector id = svec(CMatrix::Identity(d, d));
    for (Eigen::Index t = 0; t < id.size(); ++t) {
        const Eigen::Index row = l.builder.new_row(id(t));
        const CMatrix probe = smat(RVector::Unit(id.size(), t), d);
        for (std::size_t e = 0; e < l.elements; ++e) {
            if (l.builder.block(e).basis.rows() != 0) {
                l.builder.add_trace(row, e, probe);
            } else {
                l.builder.add_entry(row, e, t, 1.0);
            }
        }
    }
    return l;
}

// Objective term -P_succ (minimization convention), scaled by `weight`.
void add_success_objective(PovmLayout &l, double weight = 1.0) {
    for (std::size_t i = 0; i < l.k; ++i) {
        l.builder.add_objective_trace(i, l.noisy[i], -weight * l.priors[i]);
    }
}

// Adds p_i Tr(rho'_i Pi_j) to `row`; column j == k addresses Pi_?.
void add_joint_entry(PovmLayout &l, Eigen::Index row, std::size_t i, std::size_t j, double coeff = 1.0) {
    l.builder.add_trace(row, j, l.noisy[i], coeff * l.priors[i]);
}

// Deviation slacks between the achieved joint distribution and `reference`,
// one per (i, j) with j running over all k + 1 outcomes.
//   ell = 1: p_i Tr(rho'_i Pi_j) - a+_ij + a-_ij = ref_ij, penalty sum(a+ + a-)
//   ell = 2: p_i Tr(rho'_i Pi_j) - s_ij = ref_ij,          penalty sum(s^2)
void add_deviation_penalty(PovmLayout &l, double ell, const JointDistribution &reference, double weight) {
    const auto k = static_cast<Eigen::Index>(l.k);
    const Eigen::Index cells = k * (k + 1);
    if (ell == 1.0) {
        const std::size_t plus = l.builder.add_block(ConeKind::NonNeg, cells);
        const std::size_t minus = l.builder.add_block(ConeKind::NonNeg, cells);
        for (Eigen::Index i = 0; i < k; ++i) {
            for (Eigen::Index j = 0; j <= k; ++j) {
                const Eigen::Index cell = i * (k + 1) + j;
                const Eigen::Index row = l.builder.new_row(reference(i, j));
                add_joint_entry(l, row, static_cast<std::size_t>(i), static_cast<std::size_t>(j));
                l.builder.add_entry(row, plus, cell, -1.0);
                l.builder.add_entry(row, minus, cell, 1.0);
                if (weight != 0.0) {
                    l.builder.add_objective_entry(plus, cell, weight);
                    l.builder.add_objective_entry(minus, cell, weight);
                }
            }
        }
    } else {
        const std::size_t dev = l.builder.add_block(ConeKind::Free, cells);
        for (Eigen::Index i = 0; i < k; ++i) {
            for (Eigen::Index j = 0; j <= k; ++j) {
                const Eigen::Index cell = i * (k + 1) + j;
                const Eigen::Index row = l.builder.new_row(reference(i, j));
                add_joint_entry(l, row, static_cast<std::size_t>(i), static_cast<std::size_t>(j));
                l.builder.add_entry(row, dev, cell, -1.0);
                // 1/2 * (2 w) * s^2 = w s^2
                l.builder.set_quadratic(dev, cell, 2.0 * weight);
            }
        }
    }
}

// Orthonormal basis of the numerical null space of a PSD matrix.
CMatrix kernel_basis(const CMatrix &m) {
    Eigen::SelfAdjointEigenSolver<CMatrix> eig(0.5 * (m + m.adjoint()));
    if (eig.info() != Eigen::Success) {
        throw NumericalError("eigensolver failed while computing a kernel");
    }
    const RVector &w = eig.eigenvalues();
    const double cutoff = 1e-10 * std::max(1.0, w.cwiseAbs().maxCoeff());
    Eigen::Index r = 0;
    while (r < w.size() && w(r) <= cutoff) {
        ++r;
    }
    return eig.eigenvectors().leftCols(r);
}

}  // namespace

std::string scheme_name(const Scheme &scheme) {
    return std::visit(Overloaded{
                          [](const Med &) { return std::string("med"); },
                          [](const MedPlus &) { return std::string("medplus"); },
                          [](const Uqsd &) { return std::string("uqsd"); },
                          [](const Frio &) { return std::string("frio"); },
                          [](const CrossQsd &) { return std::string("crossqsd"); },
                          [](const FitMinLp &f) { return std::string(f.ell == 2.0 ? "minss" : "minl1"); },
                          [](const FitMeco &) { return std::string("meco"); },
                          [](const Hybrid &) { return std::string("hybrid"); },
                      },
                      scheme);
}

bool has_inconclusive_element(const Scheme &scheme) { return !std::holds_alternative<Med>(scheme); }

ConeProgram build_med(const ProblemSpec &spec, double lambda_eval) {
    PovmLayout l = povm_layout(spec, lambda_eval, false);
    add_success_objective(l);
    return l.builder.build();
}

ConeProgram build_med_plus(const ProblemSpec &spec, double lambda_eval) {
    PovmLayout l = povm_layout(spec, lambda_eval, true);
    add_success_objective(l);
    // Tie-break on Tr(Pi_?). Folding Pi_? into any conclusive element never
    // lowers P_succ, so the optimal success is unchanged for every positive
    // weight; on degenerate instances (unused subspaces) the optimum then
    // carries no inconclusive mass.
    const auto d = static_cast<Eigen::Index>(spec.dim());
    l.builder.add_objective_trace(l.inconclusive(), CMatrix::Identity(d, d), kInconclusiveTieBreak);
    return l.builder.build();
}

ConeProgram build_uqsd(const ProblemSpec &spec, double lambda_eval) {
    require_states(spec);
    require_lambda(lambda_eval);
    // Tr(rho'_j Pi_i) = 0 for all j != i with PSD rho'_j and Pi_i holds iff
    // Pi_i lives on the common kernel of those states. Solving on that face
    // directly keeps the program strictly feasible, which first-order methods
    // need for fast convergence.
    const auto noisy = spec.noisy_states(lambda_eval);
    const auto d = static_cast<Eigen::Index>(spec.dim());
    std::vector<std::optional<CMatrix>> faces;
    for (std::size_t i = 0; i < noisy.size(); ++i) {
        CMatrix others = CMatrix::Zero(d, d);
        for (std::size_t j = 0; j < noisy.size(); ++j) {
            if (j != i) {
                others += noisy[j];
            }
        }
        faces.push_back(kernel_basis(others));
    }
    PovmLayout l = povm_layout(spec, lambda_eval, true, faces);
    add_success_objective(l);
    return l.builder.build();
}

ConeProgram build_frio(const ProblemSpec &spec, double rate, RateBound bound, double lambda_eval) {
    if (!(rate >= 0.0 && rate <= 1.0)) {
        throw std::invalid_argument("inconclusive rate must lie in [0, 1]");
    }
    PovmLayout l = povm_layout(spec, lambda_eval, true);
    add_success_objective(l);
    const std::size_t slack = l.builder.add_block(ConeKind::NonNeg, 1);
    // P_inc - s = rate (at least) or P_inc + s = rate (at most).
    const Eigen::Index row = l.builder.new_row(rate);
    for (std::size_t i = 0; i < l.k; ++i) {
        add_joint_entry(l, row, i, l.inconclusive());
    }
    l.builder.add_entry(row, slack, 0, bound == RateBound::AtLeast ? -1.0 : 1.0);
    return l.builder.build();
}

ConeProgram build_crossqsd(const ProblemSpec &spec, const std::vector<double> &alpha, const std::vector<double> &beta,
                           double lambda_eval) {
    const std::size_t k = spec.num_states();
    if (alpha.size() != k || beta.size() != k) {
        throw std::invalid_argument("alpha and beta need one entry per state");
    }
    for (std::size_t i = 0; i < k; ++i) {
        if (!(alpha[i] >= 0.0 && alpha[i] <= 1.0 && beta[i] >= 0.0 && beta[i] <= 1.0)) {
            throw std::invalid_argument("alpha and beta entries must lie in [0, 1]");
        }
    }
    PovmLayout l = povm_layout(spec, lambda_eval, true);
    add_success_objective(l);
    const std::size_t slack = l.builder.add_block(ConeKind::NonNeg, static_cast<Eigen::Index>(2 * k));
    for (std::size_t i = 0; i < k; ++i) {
        // Tr(rho'_i Pi_i) - (1 - alpha_i) sum_{j<k} Tr(rho'_i Pi_j) - s = 0
        Eigen::Index row = l.builder.new_row(0.0);
        for (std::size_t j = 0; j < k; ++j) {
            const double coeff = (j == i ? 1.0 : 0.0) - (1.0 - alpha[i]);
            if (coeff != 0.0) {
                l.builder.add_trace(row, j, l.noisy[i], coeff);
            }
        }
        l.builder.add_entry(row, slack, static_cast<Eigen::Index>(i), -1.0);

        // p_i Tr(rho'_i Pi_i) - (1 - beta_i) sum_{j<k} p_j Tr(rho'_j Pi_i) - s = 0
        row = l.builder.new_row(0.0);
        CMatrix m = l.priors[i] * l.noisy[i];
        for (std::size_t j = 0; j < k; ++j) {
            m -= (1.0 - beta[i]) * l.priors[j] * l.noisy[j];
        }
        l.builder.add_trace(row, i, m);
        l.builder.add_entry(row, slack, static_cast<Eigen::Index>(k + i), -1.0);
    }
    return l.builder.build();
}

ConeProgram build_fit_min_lp(const ProblemSpec &spec, double ell, const JointDistribution &reference,
                             double lambda_eval) {
    require_ell(ell);
    require_reference(spec, reference);
    PovmLayout l = povm_layout(spec, lambda_eval, true);
    add_deviation_penalty(l, ell, reference, 1.0);
    return l.builder.build();
}

ConeProgram build_fit_meco(const ProblemSpec &spec, const JointDistribution &reference, double lambda_eval) {
    require_reference(spec, reference);
    PovmLayout l = povm_layout(spec, lambda_eval, true);
    add_success_objective(l);
    const auto k = static_cast<Eigen::Index>(l.k);
    const std::size_t slack = l.builder.add_block(ConeKind::NonNeg, k * k);
    for (Eigen::Index i = 0; i < k; ++i) {
        for (Eigen::Index j = 0; j < k; ++j) {
            // Diagonal: p_i Tr(rho'_i Pi_i) + s = ref_ii. Off-diagonal: ... - s = ref_ij.
            const Eigen::Index row = l.builder.new_row(reference(i, j));
            add_joint_entry(l, row, static_cast<std::size_t>(i), static_cast<std::size_t>(j));
            l.builder.add_entry(row, slack, i * k + j, i == j ? 1.0 : -1.0);
        }
    }
    return l.builder.build();
}

ConeProgram build_hybrid(const ProblemSpec &spec, double w, double ell, const JointDistribution &reference,
                         double lambda_eval) {
    if (!(w >= 0.0) || !std::isfinite(w)) {
        throw std::invalid_argument("hybrid weight must be finite and nonnegative");
    }
    require_ell(ell);
    require_reference(spec, reference);
    PovmLayout l = povm_layout(spec, lambda_eval, true);
    add_success_objective(l);
    add_deviation_penalty(l, ell, reference, w);
    return l.builder.build();
}

ConeProgram build_program(const ProblemSpec &spec, const SchemeConfig &config) {
    const double lam = config.lambda_eval;
    return std::visit(Overloaded{
                          [&](const Med &) { return build_med(spec, lam); },
                          [&](const MedPlus &) { return build_med_plus(spec, lam); },
                          [&](const Uqsd &) { return build_uqsd(spec, lam); },
                          [&](const Frio &f) { return build_frio(spec, f.rate, f.bound, lam); },
                          [&](const CrossQsd &c) { return build_crossqsd(spec, c.alpha, c.beta, lam); },
                          [&](const FitMinLp &f) { return build_fit_min_lp(spec, f.ell, f.reference, lam); },
                          [&](const FitMeco &f) { return build_fit_meco(spec, f.reference, lam); },
                          [&](const Hybrid &h) { return build_hybrid(spec, h.w, h.ell, h.reference, lam); },
                      },
                      config.scheme);
}

Povm decode_povm(const Scheme &scheme, const ConeProgram &program, const Solution &solution,
                 std::size_t num_states) {
    const std::size_t count = num_states + (has_inconclusive_element(scheme) ? 1 : 0);
    if (program.blocks.size() < count) {
        throw std::invalid_argument("program has fewer PSD blocks than POVM elements");
    }
    std::vector<CMatrix> elements;
    elements.reserve(count);
    for (std::size_t e = 0; e < count; ++e) {
        elements.push_back(psd_project(block_matrix(program, solution.x, e)));
    }
    const auto d = elements.front().rows();
    CMatrix sum = CMatrix::Zero(d, d);
    for (const auto &e : elements) {
        sum += e;
    }
    const double drift = (sum - CMatrix::Identity(d, d)).norm();
    if (drift > 1e-3) {
        std::ostringstream msg;
        msg << "decoded POVM is far from complete (|S - I|_F = " << drift << "); the solve did not converge";
        throw NumericalError(msg.str());
    }
    Eigen::SelfAdjointEigenSolver<CMatrix> eig(0.5 * (sum + sum.adjoint()));
    if (eig.info() != Eigen::Success) {
        throw NumericalError("eigensolver failed while rescaling the POVM");
    }
    const CMatrix &q = eig.eigenvectors();
    const CMatrix inv_sqrt = q * eig.eigenvalues().cwiseSqrt().cwiseInverse().asDiagonal() * q.adjoint();
    std::vector<Label> labels;
    for (std::size_t e = 0; e < count; ++e) {
        CMatrix m = inv_sqrt * elements[e] * inv_sqrt;
        elements[e] = 0.5 * (m + m.adjoint());
        labels.push_back(e < num_states ? Label::conclusive(static_cast<int>(e)) : Label::inconclusive());
    }
    return Povm(std::move(elements), std::move(labels));
}

SchemeResult solve_scheme(const ProblemSpec &spec, const SchemeConfig &config, const SolverSettings &settings) {
    const ConeProgram program = build_program(spec, config);
    Solution solution = solve(program, settings);
    if (solution.status != SolveStatus::Optimal) {
        std::ostringstream msg;
        msg << scheme_name(config.scheme) << " solve ended with status " << to_string(solution.status)
            << " after " << solution.iterations << " iterations: primal residual " << solution.primal_residual
            << ", dual residual " << solution.dual_residual << " (tol " << settings.tol << ")";
        throw NumericalError(msg.str());
    }
    Povm povm = decode_povm(config.scheme, program, solution, spec.num_states());
    return {std::move(povm), std::move(solution)};
}

JointDistribution uqsd_reference(const ProblemSpec &spec, const SolverSettings &settings) {
    SchemeResult r = solve_scheme(spec, {Uqsd{}, 0.0}, settings);
    return joint_distribution(spec, r.povm, 0.0);
}

}  // namespace qsd
