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

#ifndef QSD_ORACLES_HPP
#define QSD_ORACLES_HPP

#include "qsd/quantum.hpp"
#include "qsd/schemes.hpp"

namespace qsd {

// Small-instance references that never touch the conic solver.

/// Optimal two-state success probability 1/2 (1 + |p1 rho1 - (1 - p1) rho2|_1).
double helstrom_two_state(const DensityMatrix &rho1, const DensityMatrix &rho2, double p1);

/// Optimal unambiguous success probability for two pure states.
///
/// With s = |<psi1|psi2>| and conditional failure rates Q1, Q2, an
/// unambiguous POVM exists iff Q1 Q2 >= s^2 (Q_i <= 1), so the optimum is
/// max over Q1 in [s^2, 1] of p1 (1 - Q1) + p2 (1 - s^2 / Q1). The objective is
/// concave in Q1; a coarse scan brackets the maximum and a ternary search
/// refines it. Equal priors short-circuit to 1 - s.
double uqsd_two_pure(const PureState &psi1, const PureState &psi2, double p1);

/// Best success probability found by exhaustive search over qubit POVMs
/// for k = 2 states (grid^3 candidates). Every candidate is feasible, so the
/// result is a lower bound on the true optimum.
///
/// Med:  Pi_1 = |n><n| + e |-n><-n|, Pi_2 = I - Pi_1 over the Bloch sphere
///       direction n (polar x azimuth) and e in [0, 1].
/// Frio: Pi_i = w_i |n_i><n_i| with n_1, n_2 in the plane of the two Bloch
///       vectors, w_1 on the grid and w_2 as large as both I - Pi_1 - Pi_2 >= 0
///       and the inconclusive-rate bound allow.
/// States are depolarized at config.lambda_eval first.
double brute_force_qubit_povm(const ProblemSpec &spec, const SchemeConfig &config, int grid);

}  // namespace qsd

#endif
