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

#include <cmath>
#include <numbers>
#include <random>

#include "gtest/gtest.h"
#include "qsd/quantum.hpp"
#include "test_util.hpp"

using namespace qsd;
using qsd::testing::max_abs;

TEST(pure_state, validates_length_and_norm) {
    CVector v = CVector::Zero(4);
    v(0) = 1.0;
    EXPECT_NO_THROW(PureState(2, v));
    EXPECT_THROW(PureState(3, v), std::invalid_argument);
    EXPECT_THROW(PureState(0, CVector::Ones(1)), std::invalid_argument);
    v(1) = 1e-5;
    EXPECT_THROW(PureState(2, v), std::invalid_argument);
    EXPECT_THROW(PureState::normalized(2, CVector::Zero(4)), std::invalid_argument);
    PureState psi = PureState::normalized(2, CVector::Ones(4));
    EXPECT_NEAR(psi.amplitudes().norm(), 1.0, 1e-15);
}

TEST(density_matrix, validates_invariants) {
    CMatrix m = CMatrix::Zero(2, 2);
    m(0, 0) = 1.0;
    EXPECT_NO_THROW(DensityMatrix{m});
    CMatrix bad = m;
    bad(0, 1) = 0.1;
    EXPECT_THROW(DensityMatrix{bad}, std::invalid_argument);
    bad = m * 1.01;
    EXPECT_THROW(DensityMatrix{bad}, std::invalid_argument);
    bad = CMatrix::Zero(2, 2);
    bad(0, 0) = 1.1;
    bad(1, 1) = -0.1;
    EXPECT_THROW(DensityMatrix{bad}, std::invalid_argument);
    EXPECT_THROW(DensityMatrix{CMatrix::Identity(2, 3)}, std::invalid_argument);
    bad = m;
    bad(1, 1) = std::nan("");
    EXPECT_THROW(DensityMatrix{bad}, std::invalid_argument);
}

TEST(density_of, basis_and_plus) {
    auto pair = make_single_qubit_pair();
    CMatrix zero = density_of(pair[0]).matrix();
    EXPECT_NEAR(zero(0, 0).real(), 1.0, 1e-15);
    EXPECT_NEAR(std::abs(zero(1, 1)), 0.0, 1e-15);
    EXPECT_NEAR(std::abs(zero(0, 1)), 0.0, 1e-15);
    CMatrix plus = density_of(pair[1]).matrix();
    EXPECT_LE(max_abs(plus - CMatrix::Constant(2, 2, 0.5)), 1e-15);
}

TEST(density_of, random_pure_is_rank_one_projector) {
    std::mt19937_64 rng(11);
    for (int trial = 0; trial < 20; ++trial) {
        CMatrix rho = density_of(qsd::testing::random_pure(rng, 1 + trial % 3)).matrix();
        EXPECT_NEAR(rho.trace().real(), 1.0, 1e-12);
        EXPECT_LE(max_abs(rho * rho - rho), 1e-12);
    }
}

TEST(depolarizing, examples) {
    std::mt19937_64 rng(1);
    DensityMatrix rho = qsd::testing::random_density(rng, 8, 3);
    EXPECT_LE(max_abs(apply_depolarizing(DepolarizingChannel(0.0, 8), rho).matrix() - rho.matrix()), 0.0);
    EXPECT_LE(max_abs(apply_depolarizing(DepolarizingChannel(1.0, 8), rho).matrix() - CMatrix::Identity(8, 8) / 8.0),
              1e-15);
    CMatrix zero = CMatrix::Zero(2, 2);
    zero(0, 0) = 1.0;
    CMatrix out = apply_depolarizing(DepolarizingChannel(0.5, 2), DensityMatrix(zero)).matrix();
    EXPECT_NEAR(out(0, 0).real(), 0.75, 1e-15);
    EXPECT_NEAR(out(1, 1).real(), 0.25, 1e-15);
    EXPECT_NEAR(std::abs(out(0, 1)), 0.0, 1e-15);
}

TEST(depolarizing, rejects_bad_arguments) {
    EXPECT_THROW(DepolarizingChannel(-0.1, 2), std::invalid_argument);
    EXPECT_THROW(DepolarizingChannel(1.1, 2), std::invalid_argument);
    CMatrix zero = CMatrix::Zero(2, 2);
    zero(0, 0) = 1.0;
    EXPECT_THROW(apply_depolarizing(DepolarizingChannel(0.5, 4), DensityMatrix(zero)), std::invalid_argument);
}

TEST(depolarizing, preserves_state_invariants) {
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> uni(0.0, 1.0);
    for (int trial = 0; trial < 100; ++trial) {
        const Eigen::Index d = Eigen::Index{1} << (1 + trial % 3);
        DensityMatrix rho = qsd::testing::random_density(rng, d, 1 + trial % static_cast<int>(d));
        const double lambda = trial == 0 ? 0.0 : (trial == 1 ? 1.0 : uni(rng));
        DensityMatrix out = apply_depolarizing(DepolarizingChannel(lambda, static_cast<std::size_t>(d)), rho);
        EXPECT_LE(hermiticity_error(out.matrix()), 1e-12);
        EXPECT_NEAR(out.matrix().trace().real(), 1.0, 1e-12);
        EXPECT_GE(hermitian_eigenvalues(out.matrix()).minCoeff(), -1e-12);
    }
}

TEST(depolarizing, composes_multiplicatively) {
    std::mt19937_64 rng(6);
    DensityMatrix rho = qsd::testing::random_density(rng, 4, 2);
    const CMatrix twice = depolarize(depolarize(rho.matrix(), 0.2), 0.3);
    const CMatrix once = depolarize(rho.matrix(), 1.0 - 0.8 * 0.7);
    EXPECT_LE(max_abs(twice - once), 1e-15);
}

TEST(coherent_state, vacuum) {
    PureState psi = make_coherent_state(0.0, 3);
    EXPECT_EQ(psi.dim(), 8u);
    EXPECT_NEAR(std::abs(psi.amplitudes()(0) - 1.0), 0.0, 1e-15);
    EXPECT_NEAR(psi.amplitudes().tail(7).norm(), 0.0, 1e-15);
}

TEST(coherent_state, series_coefficients) {
    CVector expected(4);
    expected << 1.0, 1.0, 1.0 / std::sqrt(2.0), 1.0 / std::sqrt(6.0);
    expected.normalize();
    PureState psi = make_coherent_state(1.0, 2);
    EXPECT_LE(max_abs(psi.amplitudes() - expected), 1e-15);
}

TEST(coherent_state, overlap_matches_direct_sum) {
    const Complex omega = std::polar(1.0, 2.0 * std::numbers::pi / 3.0);
    PureState a = make_coherent_state(1.0, 3);
    PureState b = make_coherent_state(omega, 3);
    // Independent evaluation of the truncated series.
    Complex num = 0.0;
    double na = 0.0;
    double nb = 0.0;
    double fact = 1.0;
    for (int n = 0; n < 8; ++n) {
        if (n > 0) fact *= n;
        const Complex ca = 1.0 / std::sqrt(fact);
        const Complex cb = std::pow(omega, n) / std::sqrt(fact);
        num += std::conj(ca) * cb;
        na += std::norm(ca);
        nb += std::norm(cb);
    }
    const Complex expected = num / std::sqrt(na * nb);
    EXPECT_NEAR(std::abs(a.amplitudes().dot(b.amplitudes()) - expected), 0.0, 1e-14);
}

TEST(coherent_state, unit_norm_across_parameters) {
    for (int n = 1; n <= 6; ++n) {
        for (double r : {0.0, 0.3, 1.0, 2.5, 6.0}) {
            for (double phase : {0.0, 1.0, -2.0}) {
                PureState psi = make_coherent_state(std::polar(r, phase), n);
                EXPECT_NEAR(psi.amplitudes().norm(), 1.0, 1e-12);
            }
        }
    }
    EXPECT_THROW(make_coherent_state(1.0, 0), std::invalid_argument);
}

TEST(benchmark_states, zero_parameters_give_basis_states) {
    const double a[] = {0.0, 0.0, 0.0};
    auto states = make_benchmark_two_qubit_states(a);
    ASSERT_EQ(states.size(), 3u);
    for (int i = 0; i < 3; ++i) {
        CVector e = CVector::Zero(4);
        e(i) = 1.0;
        EXPECT_LE(max_abs(states[i].amplitudes() - e), 0.0);
    }
}

TEST(benchmark_states, overlap_and_norm) {
    const double a[] = {0.2, 0.5, 0.7};
    auto states = make_benchmark_two_qubit_states(a);
    for (const auto &s : states) EXPECT_NEAR(s.amplitudes().norm(), 1.0, 1e-15);
    const Complex overlap = states[0].amplitudes().dot(states[1].amplitudes());
    EXPECT_NEAR(overlap.real(), 0.2 * 0.5 / std::sqrt(1.04 * 1.25), 1e-15);
    EXPECT_NEAR(overlap.imag(), 0.0, 1e-15);
    const double two[] = {0.1, 0.2};
    EXPECT_THROW(make_benchmark_two_qubit_states(two), std::invalid_argument);
}

TEST(single_qubit_pair, overlap_and_traces) {
    auto pair = make_single_qubit_pair();
    ASSERT_EQ(pair.size(), 2u);
    EXPECT_NEAR(std::abs(pair[0].amplitudes().dot(pair[1].amplitudes())), 1.0 / std::sqrt(2.0), 1e-15);
    for (const auto &s : pair) {
        EXPECT_NEAR(s.amplitudes().norm(), 1.0, 1e-15);
        EXPECT_NEAR(density_of(s).matrix().trace().real(), 1.0, 1e-15);
    }
}

TEST(problem_spec, validates_priors_and_dimensions) {
    auto pair = make_single_qubit_pair();
    std::vector<DensityMatrix> states{density_of(pair[0]), density_of(pair[1])};
    EXPECT_NO_THROW(ProblemSpec(states, {0.3, 0.7}));
    EXPECT_THROW(ProblemSpec(states, {0.3, 0.6}), std::invalid_argument);
    EXPECT_THROW(ProblemSpec(states, {1.2, -0.2}), std::invalid_argument);
    EXPECT_THROW(ProblemSpec(states, {1.0}), std::invalid_argument);
    EXPECT_THROW(ProblemSpec(states, {0.5, 0.5}, 1.5), std::invalid_argument);
    states.push_back(DensityMatrix(CMatrix::Identity(4, 4) / 4.0));
    EXPECT_THROW(ProblemSpec::uniform(states), std::invalid_argument);
}

TEST(problem_spec, uniform_and_noisy_states) {
    std::mt19937_64 rng(3);
    std::vector<DensityMatrix> states;
    for (int i = 0; i < 3; ++i) states.push_back(qsd::testing::random_density(rng, 4, 2));
    ProblemSpec spec = ProblemSpec::uniform(states, 0.1);
    double total = 0.0;
    for (double p : spec.priors()) total += p;
    EXPECT_NEAR(total, 1.0, 1e-15);
    EXPECT_EQ(spec.dim(), 4u);
    auto noisy = spec.noisy_states(0.25);
    for (std::size_t i = 0; i < 3; ++i) {
        EXPECT_LE(max_abs(noisy[i] - depolarize(states[i].matrix(), 0.25)), 0.0);
    }
}

TEST(label, text_round_trip) {
    for (const Label &l : {Label::conclusive(0), Label::conclusive(7), Label::inconclusive(), Label::residual()}) {
        EXPECT_EQ(parse_label(to_string(l)), l);
    }
    EXPECT_EQ(to_string(Label::conclusive(2)), "2");
    EXPECT_EQ(to_string(Label::inconclusive()), "?");
    EXPECT_THROW(parse_label("x"), std::invalid_argument);
    EXPECT_THROW(parse_label("-1"), std::invalid_argument);
}

TEST(povm, accepts_valid_sets) {
    Povm basis = qsd::testing::basis_pvm(4);
    EXPECT_EQ(basis.num_states(), 4u);
    EXPECT_FALSE(basis.has_inconclusive());
    EXPECT_NEAR(basis.completeness_error(), 0.0, 1e-15);
    Povm trine = qsd::testing::trine_povm();
    EXPECT_LE(trine.completeness_error(), 1e-15);
    Povm with_inc({CMatrix::Identity(2, 2) * 0.25, CMatrix::Identity(2, 2) * 0.25, CMatrix::Identity(2, 2) * 0.5},
                  {Label::conclusive(0), Label::conclusive(1), Label::inconclusive()});
    EXPECT_TRUE(with_inc.has_inconclusive());
    EXPECT_EQ(with_inc.num_states(), 2u);
}

TEST(povm, rejects_invalid_sets) {
    const CMatrix half = CMatrix::Identity(2, 2) * 0.5;
    EXPECT_THROW(Povm({half, half * 0.9}, {Label::conclusive(0), Label::conclusive(1)}), std::invalid_argument);
    CMatrix neg = CMatrix::Zero(2, 2);
    neg(0, 0) = 1.1;
    neg(1, 1) = 0.5;
    CMatrix rest = CMatrix::Identity(2, 2) - neg;
    EXPECT_THROW(Povm({neg, rest}, {Label::conclusive(0), Label::conclusive(1)}), std::invalid_argument);
    const CMatrix third = CMatrix::Identity(2, 2) / 3.0;
    EXPECT_THROW(Povm({third, third, third}, {Label::conclusive(0), Label::inconclusive(), Label::inconclusive()}),
                 std::invalid_argument);
    EXPECT_THROW(Povm({half, half}, {Label::conclusive(0), Label::conclusive(2)}), std::invalid_argument);
    EXPECT_THROW(Povm({half, half}, {Label::conclusive(0), Label::conclusive(0)}), std::invalid_argument);
    EXPECT_THROW(Povm({half, half}, {Label::conclusive(0), Label::residual()}), std::invalid_argument);
    EXPECT_THROW(Povm({half}, {Label::conclusive(0), Label::conclusive(1)}), std::invalid_argument);
    CMatrix nan = half;
    nan(0, 0) = std::nan("");
    EXPECT_THROW(Povm({nan, half}, {Label::conclusive(0), Label::conclusive(1)}), std::invalid_argument);
}

TEST(povm, random_construction_is_valid) {
    std::mt19937_64 rng(8);
    for (int trial = 0; trial < 20; ++trial) {
        Povm p = qsd::testing::random_povm(rng, 1 + trial % 8, 2 + trial % 3);
        EXPECT_LE(p.completeness_error(), 1e-12);
        EXPECT_GE(p.min_eigenvalue(), -1e-12);
    }
}
