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

#include "qsd/dilation.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>

#include <Eigen/SVD>

namespace qsd {

namespace {

int ceil_log2(std::size_t n) { return qubits_for_dim(n); }

std::vector<Label> ordered_labels(const std::vector<Label> &element_labels) {
    std::vector<Label> out;
    int max_index = -1;
    bool inconclusive = false;
    for (const auto &l : element_labels) {
        if (l.kind == Label::Kind::Conclusive) {
            max_index = std::max(max_index, l.index);
        } else if (l.kind == Label::Kind::Inconclusive) {
            inconclusive = true;
        }
    }
    for (int i = 0; i <= max_index; ++i) {
        out.push_back(Label::conclusive(i));
    }
    if (inconclusive) {
        out.push_back(Label::inconclusive());
    }
    out.push_back(Label::residual());
    return out;
}

std::size_t label_slot(const std::vector<Label> &labels, const Label &label) {
    auto it = std::find(labels.begin(), labels.end(), label);
    if (it == labels.end()) {
        throw std::invalid_argument("outcome label " + to_string(label) + " is not part of the dilation");
    }
    return static_cast<std::size_t>(it - labels.begin());
}

// Diagonal of V rho V^dagger.
RVector basis_probabilities(const DilationResult &dil, const CMatrix &rho) {
    const CMatrix vr = dil.isometry * rho;
    RVector q(dil.isometry.rows());
    for (Eigen::Index b = 0; b < q.size(); ++b) {
        q(b) = vr.row(b).dot(dil.isometry.row(b)).real();
    }
    return q;
}

std::vector<double> label_probabilities(const DilationResult &dil, const std::vector<Label> &labels,
                                        const CMatrix &rho) {
    const RVector q = basis_probabilities(dil, rho);
    std::vector<double> probs(labels.size(), 0.0);
    double labeled = 0.0;
    for (Eigen::Index b = 0; b < q.size(); ++b) {
        const Label &l = dil.outcome_map[static_cast<std::size_t>(b)];
        if (l.kind == Label::Kind::Residual) {
            continue;
        }
        probs[label_slot(labels, l)] += q(b);
        labeled += q(b);
    }
    probs.back() = rho.trace().real() - labeled;
    return probs;
}

CMatrix random_density(std::mt19937_64 &rng, Eigen::Index d, Eigen::Index rank) {
    std::normal_distribution<double> normal;
    CMatrix g(d, rank);
    for (Eigen::Index i = 0; i < d; ++i) {
        for (Eigen::Index j = 0; j < rank; ++j) {
            g(i, j) = Complex(normal(rng), normal(rng));
        }
    }
    CMatrix rho = g * g.adjoint();
    rho /= rho.trace().real();
    return 0.5 * (rho + rho.adjoint());
}

}  // namespace

Rank1Decomposition decompose_rank1(const Povm &povm, double rank_tol) {
    if (!(rank_tol >= 0.0)) {
        throw std::invalid_argument("rank tolerance must be nonnegative");
    }
    Rank1Decomposition dec;
    dec.dim = povm.dim();
    dec.element_labels = povm.labels();
    for (std::size_t e = 0; e < povm.size(); ++e) {
        const CMatrix &m = povm.elements()[e];
        Eigen::SelfAdjointEigenSolver<CMatrix> eig(0.5 * (m + m.adjoint()));
        if (eig.info() != Eigen::Success) {
            throw NumericalError("eigensolver failed while decomposing a POVM element");
        }
        std::size_t rank = 0;
        // Eigen sorts ascending; walk from the top.
        for (Eigen::Index t = eig.eigenvalues().size() - 1; t >= 0; --t) {
            const double sigma = eig.eigenvalues()(t);
            if (!(sigma > rank_tol)) {
                break;
            }
            dec.terms.push_back({e, rank, sigma, std::sqrt(sigma) * eig.eigenvectors().col(t)});
            ++rank;
        }
        dec.per_element_rank.push_back(rank);
    }
    return dec;
}

Rank1Decomposition truncate(const Rank1Decomposition &dec, double delta) {
    if (!(delta >= 0.0)) {
        throw std::invalid_argument("truncation threshold must be nonnegative");
    }
    Rank1Decomposition out;
    out.dim = dec.dim;
    out.element_labels = dec.element_labels;
    out.delta = std::max(dec.delta, delta);
    out.per_element_rank.assign(dec.per_element_rank.size(), 0);
    for (const auto &t : dec.terms) {
        if (t.sigma < delta) {
            continue;
        }
        Rank1Term kept = t;
        kept.within = out.per_element_rank[t.element]++;
        out.terms.push_back(std::move(kept));
    }
    return out;
}

DilationResult build_isometry(const Rank1Decomposition &dec) {
    if (dec.terms.empty()) {
        throw std::invalid_argument("cannot build a dilation from an empty decomposition");
    }
    DilationResult r;
    r.domain_dim = dec.dim;
    r.total_rank = dec.total_rank();
    r.domain_qubits = ceil_log2(dec.dim);
    r.target_qubits = std::max(r.domain_qubits, ceil_log2(r.total_rank));
    r.delta = dec.delta;
    r.element_labels = dec.element_labels;
    const auto rows = Eigen::Index{1} << r.target_qubits;
    r.isometry = CMatrix::Zero(rows, static_cast<Eigen::Index>(dec.dim));
    r.outcome_map.assign(static_cast<std::size_t>(rows), Label::residual());
    for (std::size_t l = 0; l < dec.terms.size(); ++l) {
        const Rank1Term &t = dec.terms[l];
        r.isometry.row(static_cast<Eigen::Index>(l)) = t.vector.adjoint();
        r.outcome_map[l] = dec.element_labels.at(t.element);
    }
    return r;
}

DilationResult build_isometry_generic(const Povm &povm) {
    const auto d = static_cast<Eigen::Index>(povm.dim());
    const auto k = static_cast<Eigen::Index>(povm.size());
    DilationResult r;
    r.domain_dim = povm.dim();
    r.total_rank = static_cast<std::size_t>(k * d);
    r.domain_qubits = ceil_log2(povm.dim());
    r.target_qubits = std::max(r.domain_qubits, ceil_log2(r.total_rank));
    r.element_labels = povm.labels();
    const auto rows = Eigen::Index{1} << r.target_qubits;
    r.isometry = CMatrix::Zero(rows, d);
    r.outcome_map.assign(static_cast<std::size_t>(rows), Label::residual());
    for (Eigen::Index i = 0; i < k; ++i) {
        const CMatrix &m = povm.elements()[static_cast<std::size_t>(i)];
        Eigen::SelfAdjointEigenSolver<CMatrix> eig(0.5 * (m + m.adjoint()));
        if (eig.info() != Eigen::Success) {
            throw NumericalError("eigensolver failed while taking a matrix square root");
        }
        const CMatrix &q = eig.eigenvectors();
        const CMatrix root = q * eig.eigenvalues().cwiseMax(0.0).cwiseSqrt().asDiagonal() * q.adjoint();
        for (Eigen::Index s = 0; s < d; ++s) {
            r.isometry.row(s * k + i) = root.row(s);
            r.outcome_map[static_cast<std::size_t>(s * k + i)] = povm.labels()[static_cast<std::size_t>(i)];
        }
    }
    return r;
}

DilationReport verify_dilation(const DilationResult &dil, const Povm &povm, std::size_t random_states,
                               std::uint64_t seed) {
    if (povm.dim() != dil.domain_dim) {
        throw std::invalid_argument("POVM dimension does not match the dilation");
    }
    const auto d = static_cast<Eigen::Index>(dil.domain_dim);
    DilationReport report;
    const CMatrix gram = dil.isometry.adjoint() * dil.isometry;
    report.isometry_deviation = (gram - CMatrix::Identity(d, d)).cwiseAbs().maxCoeff();

    std::vector<CMatrix> tests;
    tests.push_back(CMatrix::Identity(d, d) / static_cast<double>(d));
    for (Eigen::Index b = 0; b < d; ++b) {
        CMatrix e = CMatrix::Zero(d, d);
        e(b, b) = 1.0;
        tests.push_back(std::move(e));
    }
    std::mt19937_64 rng(seed);
    for (std::size_t s = 0; s < random_states; ++s) {
        tests.push_back(random_density(rng, d, s % 2 == 0 ? 1 : std::min<Eigen::Index>(d, 2)));
    }

    const std::vector<Label> labels = ordered_labels(dil.element_labels);
    for (const auto &rho : tests) {
        const std::vector<double> probs = label_probabilities(dil, labels, rho);
        for (std::size_t e = 0; e < povm.size(); ++e) {
            const double expected = (rho * povm.elements()[e]).trace().real();
            const double got = probs[label_slot(labels, povm.labels()[e])];
            report.max_probability_deviation = std::max(report.max_probability_deviation, std::abs(got - expected));
        }
    }
    report.states_checked = tests.size();
    return report;
}

double OutcomeCounts::probability(const Label &label) const { return probabilities[label_slot(labels, label)]; }

std::vector<std::uint64_t> sample_multinomial(const std::vector<double> &probabilities, std::uint64_t shots,
                                              std::uint64_t seed) {
    std::vector<std::uint64_t> counts(probabilities.size(), 0);
    if (probabilities.empty() || shots == 0) {
        return counts;
    }
    double mass = 0.0;
    for (double p : probabilities) {
        mass += std::max(p, 0.0);
    }
    if (!(mass > 0.0)) {
        throw std::invalid_argument("cannot sample from an all-zero distribution");
    }
    // Sequential conditional binomials: category i gets Binomial(remaining,
    // p_i / remaining mass).
    std::mt19937_64 rng(seed);
    std::uint64_t remaining = shots;
    for (std::size_t i = 0; i + 1 < probabilities.size() && remaining > 0; ++i) {
        const double p = std::max(probabilities[i], 0.0);
        const double frac = mass > 0.0 ? std::clamp(p / mass, 0.0, 1.0) : 0.0;
        std::binomial_distribution<std::uint64_t> draw(remaining, frac);
        counts[i] = draw(rng);
        remaining -= counts[i];
        mass -= p;
    }
    counts.back() += remaining;
    return counts;
}

OutcomeCounts simulate_measurement(const DilationResult &dil, const DensityMatrix &rho, std::uint64_t shots,
                                   std::uint64_t seed) {
    if (rho.dim() != dil.domain_dim) {
        throw std::invalid_argument("state dimension does not match the dilation domain");
    }
    OutcomeCounts out;
    out.labels = ordered_labels(dil.element_labels);
    out.probabilities = label_probabilities(dil, out.labels, rho.matrix());
    if (shots > 0) {
        out.counts = sample_multinomial(out.probabilities, shots, seed);
    }
    return out;
}

OutcomeCounts simulate_measurement(const DilationResult &dil, const PureState &psi, std::uint64_t shots,
                                   std::uint64_t seed) {
    return simulate_measurement(dil, density_of(psi), shots, seed);
}

CMatrix complete_to_unitary(const DilationResult &dil) {
    const Eigen::Index rows = dil.isometry.rows();
    const Eigen::Index d = dil.isometry.cols();
    CMatrix v = dil.isometry;
    const CMatrix gram = v.adjoint() * v;
    if ((gram - CMatrix::Identity(d, d)).cwiseAbs().maxCoeff() > 1e-12) {
        // Polar factor U W^dagger of V = U S W^dagger; also defined when V is
        // rank deficient after truncation.
        Eigen::JacobiSVD<CMatrix> svd(v, Eigen::ComputeThinU | Eigen::ComputeThinV);
        v = svd.matrixU() * svd.matrixV().adjoint();
    }
    CMatrix u(rows, rows);
    u.leftCols(d) = v;
    if (rows > d) {
        const CMatrix complement = CMatrix::Identity(rows, rows) - v * v.adjoint();
        Eigen::SelfAdjointEigenSolver<CMatrix> eig(0.5 * (complement + complement.adjoint()));
        if (eig.info() != Eigen::Success) {
            throw NumericalError("eigensolver failed during unitary completion");
        }
        // Eigenvalues are ~0 (d of them) and ~1 (rows - d of them), ascending.
        CMatrix extra = eig.eigenvectors().rightCols(rows - d);
        // One Gram-Schmidt pass against V removes rounding leakage.
        extra -= v * (v.adjoint() * extra);
        Eigen::HouseholderQR<CMatrix> qr(extra);
        CMatrix q = qr.householderQ() * CMatrix::Identity(rows, rows - d);
        u.rightCols(rows - d) = q;
    }
    return u;
}

}  // namespace qsd
