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

#include "qsd/quantum.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace qsd {

double hermiticity_error(const CMatrix &m) {
    if (m.size() == 0) {
        return 0.0;
    }
    return (m - m.adjoint()).cwiseAbs().maxCoeff();
}

RVector hermitian_eigenvalues(const CMatrix &m) {
    CMatrix h = 0.5 * (m + m.adjoint());
    Eigen::SelfAdjointEigenSolver<CMatrix> solver(h, Eigen::EigenvaluesOnly);
    if (solver.info() != Eigen::Success) {
        throw NumericalError("Hermitian eigensolver did not converge");
    }
    return solver.eigenvalues();
}

int qubits_for_dim(std::size_t dim) {
    int n = 0;
    while ((std::size_t{1} << n) < dim) {
        ++n;
    }
    return n;
}

PureState::PureState(int num_qubits, CVector amplitudes) : num_qubits_(num_qubits), amplitudes_(std::move(amplitudes)) {
    if (num_qubits < 1 || num_qubits > 30) {
        throw std::invalid_argument("num_qubits must be in [1, 30]");
    }
    if (amplitudes_.size() != (Eigen::Index{1} << num_qubits)) {
        throw std::invalid_argument("amplitude vector length must be 2^num_qubits");
    }
    if (std::abs(amplitudes_.squaredNorm() - 1.0) > 1e-12) {
        throw std::invalid_argument("state vector is not normalized");
    }
}

PureState PureState::normalized(int num_qubits, CVector amplitudes) {
    double norm = amplitudes.norm();
    if (!(norm > 0.0) || !std::isfinite(norm)) {
        throw std::invalid_argument("cannot normalize a zero or non-finite vector");
    }
    amplitudes /= norm;
    return PureState(num_qubits, std::move(amplitudes));
}

DensityMatrix::DensityMatrix(CMatrix matrix) : matrix_(std::move(matrix)) {
    if (matrix_.rows() == 0 || matrix_.rows() != matrix_.cols()) {
        throw std::invalid_argument("density matrix must be square and non-empty");
    }
    if (!matrix_.allFinite()) {
        throw std::invalid_argument("density matrix has non-finite entries");
    }
    if (hermiticity_error(matrix_) > kHermitianTol) {
        throw std::invalid_argument("density matrix is not Hermitian");
    }
    if (std::abs(matrix_.trace().real() - 1.0) > kTraceTol) {
        throw std::invalid_argument("density matrix trace differs from 1");
    }
    if (hermitian_eigenvalues(matrix_).minCoeff() < kPsdTol) {
        throw std::invalid_argument("density matrix has a negative eigenvalue");
    }
}

DensityMatrix density_of(const PureState &psi) {
    const CVector &v = psi.amplitudes();
    CMatrix rho = v * v.adjoint();
    // Outer products are Hermitian up to rounding in the product itself.
    rho = 0.5 * (rho + rho.adjoint()).eval();
    return DensityMatrix(std::move(rho));
}

DepolarizingChannel::DepolarizingChannel(double lambda, std::size_t dim) : lambda_(lambda), dim_(dim) {
    if (!(lambda >= 0.0 && lambda <= 1.0)) {
        throw std::invalid_argument("depolarizing level must lie in [0, 1]");
    }
    if (dim == 0) {
        throw std::invalid_argument("channel dimension must be positive");
    }
}

DensityMatrix DepolarizingChannel::apply(const DensityMatrix &rho) const {
    if (rho.dim() != dim_) {
        throw std::invalid_argument("state dimension does not match channel dimension");
    }
    return DensityMatrix(depolarize(rho.matrix(), lambda_));
}

DensityMatrix apply_depolarizing(const DepolarizingChannel &channel, const DensityMatrix &rho) {
    return channel.apply(rho);
}

CMatrix depolarize(const CMatrix &m, double lambda) {
    const auto d = m.rows();
    CMatrix out = (1.0 - lambda) * m;
    out.diagonal().array() += lambda / static_cast<double>(d);
    return out;
}

ProblemSpec::ProblemSpec(std::vector<DensityMatrix> states, std::vector<double> priors, double noise_lambda)
    : states_(std::move(states)), priors_(std::move(priors)), noise_lambda_(noise_lambda) {
    if (states_.empty()) {
        throw std::invalid_argument("problem needs at least one state");
    }
    if (states_.size() != priors_.size()) {
        throw std::invalid_argument("one prior per state is required");
    }
    dim_ = states_.front().dim();
    for (const auto &s : states_) {
        if (s.dim() != dim_) {
            throw std::invalid_argument("all states must share one dimension");
        }
    }
    for (double p : priors_) {
        if (!(p >= 0.0)) {
            throw std::invalid_argument("priors must be nonnegative");
        }
    }
    double total = std::accumulate(priors_.begin(), priors_.end(), 0.0);
    if (std::abs(total - 1.0) > 1e-12) {
        throw std::invalid_argument("priors must sum to 1");
    }
    if (!(noise_lambda >= 0.0 && noise_lambda <= 1.0)) {
        throw std::invalid_argument("noise level must lie in [0, 1]");
    }
}

ProblemSpec ProblemSpec::uniform(std::vector<DensityMatrix> states, double noise_lambda) {
    std::vector<double> priors(states.size(), 1.0 / static_cast<double>(states.size()));
    // Repair the last entry so the sum is 1 to within a few ulps.
    if (!priors.empty()) {
        double head = std::accumulate(priors.begin(), priors.end() - 1, 0.0);
        priors.back() = 1.0 - head;
    }
    return ProblemSpec(std::move(states), std::move(priors), noise_lambda);
}

ProblemSpec ProblemSpec::from_pure(std::span<const PureState> states, std::vector<double> priors,
                                   double noise_lambda) {
    std::vector<DensityMatrix> rhos;
    rhos.reserve(states.size());
    for (const auto &psi : states) {
        rhos.push_back(density_of(psi));
    }
    return ProblemSpec(std::move(rhos), std::move(priors), noise_lambda);
}

std::vector<CMatrix> ProblemSpec::noisy_states(double lambda) const {
    std::vector<CMatrix> out;
    out.reserve(states_.size());
    for (const auto &s : states_) {
        out.push_back(depolarize(s.matrix(), lambda));
    }
    return out;
}

std::string to_string(const Label &label) {
    switch (label.kind) {
        case Label::Kind::Conclusive:
            return std::to_string(label.index);
        case Label::Kind::Inconclusive:
            return "?";
        case Label::Kind::Residual:
            return "residual";
    }
    return "?";
}

Label parse_label(const std::string &text) {
    if (text == "?") {
        return Label::inconclusive();
    }
    if (text == "residual") {
        return Label::residual();
    }
    std::size_t used = 0;
    int index = -1;
    try {
        index = std::stoi(text, &used);
    } catch (const std::exception &) {
        used = 0;
    }
    if (used != text.size() || index < 0) {
        throw std::invalid_argument("unrecognized outcome label: " + text);
    }
    return Label::conclusive(index);
}

Povm::Povm(std::vector<CMatrix> elements, std::vector<Label> labels)
    : elements_(std::move(elements)), labels_(std::move(labels)) {
    if (elements_.empty() || elements_.size() != labels_.size()) {
        throw std::invalid_argument("POVM needs one label per element and at least one element");
    }
    const auto d = elements_.front().rows();
    for (const auto &e : elements_) {
        if (e.rows() != d || e.cols() != d || d == 0) {
            throw std::invalid_argument("POVM elements must be square and share one dimension");
        }
        if (!e.allFinite()) {
            throw std::invalid_argument("POVM element has non-finite entries");
        }
        if (hermiticity_error(e) > 1e-9) {
            throw std::invalid_argument("POVM element is not Hermitian");
        }
    }
    std::size_t inconclusive = 0;
    std::vector<int> seen;
    for (const auto &l : labels_) {
        if (l.kind == Label::Kind::Inconclusive) {
            ++inconclusive;
        } else if (l.kind == Label::Kind::Conclusive) {
            seen.push_back(l.index);
        } else {
            throw std::invalid_argument("POVM elements cannot carry the residual label");
        }
    }
    if (inconclusive > 1) {
        throw std::invalid_argument("at most one inconclusive element is allowed");
    }
    std::sort(seen.begin(), seen.end());
    for (std::size_t i = 0; i < seen.size(); ++i) {
        if (seen[i] != static_cast<int>(i)) {
            throw std::invalid_argument("conclusive labels must cover 0..k-1 exactly once");
        }
    }
    if (min_eigenvalue() < kPsdTol) {
        throw std::invalid_argument("POVM element is not positive semidefinite");
    }
    if (completeness_error() > kCompletenessTol) {
        throw std::invalid_argument("POVM elements do not sum to the identity");
    }
}

Povm Povm::unchecked(std::vector<CMatrix> elements, std::vector<Label> labels) {
    Povm p;
    p.elements_ = std::move(elements);
    p.labels_ = std::move(labels);
    return p;
}

std::size_t Povm::num_states() const {
    return static_cast<std::size_t>(
        std::count_if(labels_.begin(), labels_.end(), [](const Label &l) { return l.kind == Label::Kind::Conclusive; }));
}

bool Povm::has_inconclusive() const {
    return std::any_of(labels_.begin(), labels_.end(),
                       [](const Label &l) { return l.kind == Label::Kind::Inconclusive; });
}

double Povm::completeness_error() const {
    const auto d = elements_.front().rows();
    CMatrix sum = CMatrix::Zero(d, d);
    for (const auto &e : elements_) {
        sum += e;
    }
    sum -= CMatrix::Identity(d, d);
    return sum.norm();
}

double Povm::min_eigenvalue() const {
    double lo = std::numeric_limits<double>::infinity();
    for (const auto &e : elements_) {
        lo = std::min(lo, hermitian_eigenvalues(e).minCoeff());
    }
    return lo;
}

PureState make_coherent_state(Complex alpha, int num_qubits) {
    if (num_qubits < 1 || num_qubits > 30) {
        throw std::invalid_argument("num_qubits must be in [1, 30]");
    }
    const Eigen::Index d = Eigen::Index{1} << num_qubits;
    CVector v(d);
    // c_n = alpha^n / sqrt(n!), built as a running product to avoid n! overflow.
    Complex term(1.0, 0.0);
    v(0) = term;
    for (Eigen::Index n = 1; n < d; ++n) {
        term *= alpha / std::sqrt(static_cast<double>(n));
        v(n) = term;
    }
    return PureState::normalized(num_qubits, std::move(v));
}

std::vector<PureState> make_benchmark_two_qubit_states(std::span<const double> a) {
    if (a.size() != 3) {
        throw std::invalid_argument("benchmark family takes exactly three coefficients");
    }
    std::vector<PureState> out;
    for (int i = 0; i < 3; ++i) {
        CVector v = CVector::Zero(4);
        v(i) = 1.0;
        v(3) += a[static_cast<std::size_t>(i)];
        v /= std::sqrt(1.0 + a[static_cast<std::size_t>(i)] * a[static_cast<std::size_t>(i)]);
        out.emplace_back(2, std::move(v));
    }
    return out;
}

std::vector<PureState> make_single_qubit_pair() {
    CVector zero(2);
    zero << 1.0, 0.0;
    CVector plus(2);
    plus << 1.0 / std::sqrt(2.0), 1.0 / std::sqrt(2.0);
    std::vector<PureState> out;
    out.emplace_back(1, std::move(zero));
    out.emplace_back(1, std::move(plus));
    return out;
}

}  // namespace qsd
