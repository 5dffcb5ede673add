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

#include "qsd/metrics.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace qsd {

JointDistribution::JointDistribution(RMatrix entries) : entries_(std::move(entries)) {
    if (entries_.rows() == 0 || entries_.cols() != entries_.rows() + 1) {
        throw std::invalid_argument("joint distribution must be k x (k+1)");
    }
    if (entries_.minCoeff() < kEntryTol) {
        throw std::invalid_argument("joint distribution has a negative entry");
    }
    if (std::abs(entries_.sum() - 1.0) > kTotalTol) {
        throw std::invalid_argument("joint distribution does not sum to 1");
    }
}

JointDistribution JointDistribution::unchecked(RMatrix entries) {
    if (entries.rows() == 0 || entries.cols() != entries.rows() + 1) {
        throw std::invalid_argument("joint distribution must be k x (k+1)");
    }
    JointDistribution jd;
    jd.entries_ = std::move(entries);
    return jd;
}

JointDistribution joint_distribution(const ProblemSpec &spec, const Povm &povm, double lambda) {
    if (spec.dim() != povm.dim()) {
        throw std::invalid_argument("POVM dimension does not match the problem");
    }
    const auto k = static_cast<Eigen::Index>(spec.num_states());
    if (povm.num_states() != spec.num_states()) {
        throw std::invalid_argument("POVM must have one conclusive element per state");
    }
    const auto noisy = spec.noisy_states(lambda);
    RMatrix entries = RMatrix::Zero(k, k + 1);
    for (std::size_t e = 0; e < povm.size(); ++e) {
        const Label &label = povm.labels()[e];
        const Eigen::Index col = label.kind == Label::Kind::Conclusive ? label.index : k;
        for (Eigen::Index i = 0; i < k; ++i) {
            // Tr(A B) for Hermitian A, B is the real part of sum conj(A) .* B.
            double tr = (noisy[static_cast<std::size_t>(i)].conjugate().cwiseProduct(povm.elements()[e])).sum().real();
            entries(i, col) += spec.priors()[static_cast<std::size_t>(i)] * tr;
        }
    }
    return JointDistribution::unchecked(std::move(entries));
}

OutcomeStats outcome_stats(const JointDistribution &jd) {
    const RMatrix &m = jd.entries();
    const Eigen::Index k = m.rows();
    OutcomeStats s;
    s.p_succ = m.leftCols(k).diagonal().sum();
    s.p_inc = m.col(k).sum();
    s.p_err = m.leftCols(k).sum() - s.p_succ;
    return s;
}

double error_to_success(const OutcomeStats &stats) {
    if (stats.p_succ <= 1e-15) {
        return std::numeric_limits<double>::infinity();
    }
    return stats.p_err / stats.p_succ;
}

double error_to_success(const JointDistribution &jd) { return error_to_success(outcome_stats(jd)); }

double lp_distance(const JointDistribution &a, const JointDistribution &b, double ell) {
    if (a.entries().rows() != b.entries().rows() || a.entries().cols() != b.entries().cols()) {
        throw std::invalid_argument("joint distributions differ in shape");
    }
    RMatrix diff = (a.entries() - b.entries()).cwiseAbs();
    if (ell == 1.0) {
        return diff.sum();
    }
    if (ell == 2.0) {
        return std::sqrt(diff.squaredNorm());
    }
    throw std::invalid_argument("only the L1 and L2 distances are supported");
}

Confidences confidences(const JointDistribution &jd) {
    const RMatrix &m = jd.entries();
    const Eigen::Index k = m.rows();
    Confidences c;
    c.given_state = RVector::Ones(k);
    c.given_outcome = RVector::Ones(k);
    for (Eigen::Index i = 0; i < k; ++i) {
        double row = m.row(i).head(k).sum();
        double col = m.col(i).sum();
        if (row > 1e-12) {
            c.given_state(i) = m(i, i) / row;
        }
        if (col > 1e-12) {
            c.given_outcome(i) = m(i, i) / col;
        }
    }
    return c;
}

Confidences confidences(const ProblemSpec &spec, const Povm &povm, double lambda) {
    return confidences(joint_distribution(spec, povm, lambda));
}

}  // namespace qsd
