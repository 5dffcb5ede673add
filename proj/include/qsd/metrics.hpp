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

#ifndef QSD_METRICS_HPP
#define QSD_METRICS_HPP

#include <utility>

#include "qsd/quantum.hpp"

namespace qsd {

/// entries(i, j) = p(rho_i, Pi_j) = p_i Tr(E(rho_i) Pi_j), a k x (k+1) table whose
/// last column holds the inconclusive outcome (all zero when the POVM has none).
class JointDistribution {
   public:
    static constexpr double kEntryTol = -1e-10;
    static constexpr double kTotalTol = 1e-8;

    JointDistribution() = default;
    /// Checks the shape and the invariants (entries >= -1e-10, total 1 within 1e-8).
    explicit JointDistribution(RMatrix entries);
    /// Shape check only.
    static JointDistribution unchecked(RMatrix entries);

    std::size_t num_states() const { return static_cast<std::size_t>(entries_.rows()); }
    const RMatrix &entries() const { return entries_; }
    double operator()(Eigen::Index i, Eigen::Index j) const { return entries_(i, j); }
    double total() const { return entries_.sum(); }

   private:
    RMatrix entries_;
};

struct OutcomeStats {
    double p_succ = 0.0;
    double p_err = 0.0;  // misidentification only; inconclusive mass is not an error
    double p_inc = 0.0;
};

/// States are passed through the depolarizing channel at `lambda` before the
/// trace with each element.
JointDistribution joint_distribution(const ProblemSpec &spec, const Povm &povm, double lambda);

OutcomeStats outcome_stats(const JointDistribution &jd);

/// p_err / p_succ, or +infinity when p_succ <= 1e-15.
double error_to_success(const JointDistribution &jd);
double error_to_success(const OutcomeStats &stats);

/// (sum |a - b|^ell)^(1/ell) over all k x (k+1) entries. ell must be 1 or 2.
double lp_distance(const JointDistribution &a, const JointDistribution &b, double ell);

struct Confidences {
    /// p(Pi_i | rho_i): correct answers among conclusive answers for state i.
    RVector given_state;
    /// p(rho_i | Pi_i): how often outcome i is right when it fires.
    RVector given_outcome;
};

/// Ratios whose denominator is <= 1e-12 are reported as 1.
Confidences confidences(const JointDistribution &jd);
Confidences confidences(const ProblemSpec &spec, const Povm &povm, double lambda);

}  // namespace qsd

#endif
