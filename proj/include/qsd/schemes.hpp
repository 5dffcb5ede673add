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

#ifndef QSD_SCHEMES_HPP
#define QSD_SCHEMES_HPP

#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "qsd/conic.hpp"
#include "qsd/metrics.hpp"
#include "qsd/quantum.hpp"

namespace qsd {

// Strategy parameters. Every program shares one layout: PSD blocks
// 0..k-1 hold Pi_1..Pi_k, block k holds Pi_? for the schemes that have an
// inconclusive element, and any slack blocks come after.

struct Med {};
struct MedPlus {};
struct Uqsd {};

enum class RateBound { AtLeast, AtMost };

struct Frio {
    double rate = 0.0;
    RateBound bound = RateBound::AtLeast;
};

struct CrossQsd {
    std::vector<double> alpha;  // tolerated 1 - p(Pi_i | rho_i)
    std::vector<double> beta;   // tolerated 1 - p(rho_i | Pi_i)
};

struct FitMinLp {
    double ell = 1.0;
    JointDistribution reference;
};

struct FitMeco {
    JointDistribution reference;
};

struct Hybrid {
    double w = 0.0;
    double ell = 1.0;
    JointDistribution reference;
};

using Scheme = std::variant<Med, MedPlus, Uqsd, Frio, CrossQsd, FitMinLp, FitMeco, Hybrid>;

struct SchemeConfig {
    Scheme scheme;
    /// Depolarizing level assumed while solving.
    double lambda_eval = 0.0;
};

/// Short lowercase name ("med", "medplus", "uqsd", "frio", "crossqsd",
/// "minl1", "minss", "meco", "hybrid").
std::string scheme_name(const Scheme &scheme);
bool has_inconclusive_element(const Scheme &scheme);

ConeProgram build_med(const ProblemSpec &spec, double lambda_eval = 0.0);
ConeProgram build_med_plus(const ProblemSpec &spec, double lambda_eval = 0.0);
ConeProgram build_uqsd(const ProblemSpec &spec, double lambda_eval = 0.0);
ConeProgram build_frio(const ProblemSpec &spec, double rate, RateBound bound, double lambda_eval = 0.0);
ConeProgram build_crossqsd(const ProblemSpec &spec, const std::vector<double> &alpha, const std::vector<double> &beta,
                           double lambda_eval = 0.0);
ConeProgram build_fit_min_lp(const ProblemSpec &spec, double ell, const JointDistribution &reference,
                             double lambda_eval = 0.0);
ConeProgram build_fit_meco(const ProblemSpec &spec, const JointDistribution &reference, double lambda_eval = 0.0);
ConeProgram build_hybrid(const ProblemSpec &spec, double w, double ell, const JointDistribution &reference,
                         double lambda_eval = 0.0);

ConeProgram build_program(const ProblemSpec &spec, const SchemeConfig &config);

/// Reads the POVM blocks out of a solution, projects each onto the PSD cone
/// and rescales the set by S^{-1/2} (S = sum of elements) so it is exactly
/// complete. Throws NumericalError when |S - I|_F > 1e-3.
Povm decode_povm(const Scheme &scheme, const ConeProgram &program, const Solution &solution,
                 std::size_t num_states);

struct SchemeResult {
    Povm povm;
    Solution solution;
};

/// Build, solve, decode. Throws NumericalError unless the solver reports
/// Optimal; the message names the offending residual.
SchemeResult solve_scheme(const ProblemSpec &spec, const SchemeConfig &config, const SolverSettings &settings = {});

/// Joint distribution of the noiseless optimal UQSD measurement on `spec`,
/// the default FitQSD reference.
JointDistribution uqsd_reference(const ProblemSpec &spec, const SolverSettings &settings = {});

}  // namespace qsd

#endif
