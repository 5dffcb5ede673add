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

#ifndef QSD_QUANTUM_HPP
#define QSD_QUANTUM_HPP

#include <complex>
#include <cstddef>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace qsd {

using Complex = std::complex<double>;
using CVector = Eigen::VectorXcd;
using CMatrix = Eigen::MatrixXcd;
using RVector = Eigen::VectorXd;
using RMatrix = Eigen::MatrixXd;

/// Raised when a solve or decomposition cannot produce a trustworthy result.
/// Contract violations on inputs use std::invalid_argument instead.
class NumericalError : public std::runtime_error {
   public:
    using std::runtime_error::runtime_error;
};

/// Max entrywise |M - M^dagger|.
double hermiticity_error(const CMatrix &m);

/// Eigenvalues of (M + M^dagger)/2, ascending.
RVector hermitian_eigenvalues(const CMatrix &m);

/// Smallest n with 2^n >= dim.
int qubits_for_dim(std::size_t dim);

/// A normalized state vector on num_qubits qubits.
///
/// Amplitude index n is the integer value of the bitstring, most significant
/// qubit first. This convention is used by every constructor in the library.
class PureState {
   public:
    /// Validates the length (2^num_qubits) and unit norm (1e-12).
    PureState(int num_qubits, CVector amplitudes);

    /// Normalizes `amplitudes` first. Throws on a zero vector.
    static PureState normalized(int num_qubits, CVector amplitudes);

    int num_qubits() const { return num_qubits_; }
    std::size_t dim() const { return static_cast<std::size_t>(amplitudes_.size()); }
    const CVector &amplitudes() const { return amplitudes_; }

   private:
    int num_qubits_;
    CVector amplitudes_;
};

/// Hermitian, unit-trace, positive semidefinite operator.
class DensityMatrix {
   public:
    static constexpr double kHermitianTol = 1e-12;
    static constexpr double kTraceTol = 1e-10;
    static constexpr double kPsdTol = -1e-9;

    /// Throws std::invalid_argument when any invariant is violated.
    explicit DensityMatrix(CMatrix matrix);

    std::size_t dim() const { return static_cast<std::size_t>(matrix_.rows()); }
    const CMatrix &matrix() const { return matrix_; }

   private:
    CMatrix matrix_;
};

/// |psi><psi|.
DensityMatrix density_of(const PureState &psi);

/// E(rho) = (1 - lambda) rho + lambda I / d.
class DepolarizingChannel {
   public:
    DepolarizingChannel(double lambda, std::size_t dim);

    double lambda() const { return lambda_; }
    std::size_t dim() const { return dim_; }

    DensityMatrix apply(const DensityMatrix &rho) const;

   private:
    double lambda_;
    std::size_t dim_;
};

DensityMatrix apply_depolarizing(const DepolarizingChannel &channel, const DensityMatrix &rho);

/// Same map on a raw Hermitian matrix; no validation beyond the dimension.
CMatrix depolarize(const CMatrix &m, double lambda);

/// The ensemble to discriminate: states, their priors and the noise level used
/// when outcomes are evaluated.
class ProblemSpec {
   public:
    ProblemSpec(std::vector<DensityMatrix> states, std::vector<double> priors, double noise_lambda = 0.0);

    /// Equal priors.
    static ProblemSpec uniform(std::vector<DensityMatrix> states, double noise_lambda = 0.0);
    static ProblemSpec from_pure(std::span<const PureState> states, std::vector<double> priors,
                                 double noise_lambda = 0.0);

    std::size_t dim() const { return dim_; }
    std::size_t num_states() const { return states_.size(); }
    const std::vector<DensityMatrix> &states() const { return states_; }
    const std::vector<double> &priors() const { return priors_; }
    double noise_lambda() const { return noise_lambda_; }

    /// E_lambda(rho_i) for every state.
    std::vector<CMatrix> noisy_states(double lambda) const;

   private:
    std::size_t dim_;
    std::vector<DensityMatrix> states_;
    std::vector<double> priors_;
    double noise_lambda_;
};

/// Which state a POVM element (or a dilation outcome) points at.
struct Label {
    enum class Kind { Conclusive, Inconclusive, Residual };
    Kind kind = Kind::Conclusive;
    int index = 0;  // state index for Conclusive, unused otherwise

    static Label conclusive(int i) { return {Kind::Conclusive, i}; }
    static Label inconclusive() { return {Kind::Inconclusive, 0}; }
    static Label residual() { return {Kind::Residual, 0}; }

    bool operator==(const Label &) const = default;
};

std::string to_string(const Label &label);
/// Parses "0", "1", ..., "?" and "residual".
Label parse_label(const std::string &text);

class Povm {
   public:
    static constexpr double kPsdTol = -1e-7;
    static constexpr double kCompletenessTol = 1e-7;

    /// Validates PSD-ness, completeness and label coverage; throws
    /// std::invalid_argument otherwise.
    Povm(std::vector<CMatrix> elements, std::vector<Label> labels);

    /// Skips validation. For callers that must inspect an invalid set.
    static Povm unchecked(std::vector<CMatrix> elements, std::vector<Label> labels);

    std::size_t dim() const { return static_cast<std::size_t>(elements_.front().rows()); }
    std::size_t size() const { return elements_.size(); }
    /// Number of conclusive elements.
    std::size_t num_states() const;
    const std::vector<CMatrix> &elements() const { return elements_; }
    const std::vector<Label> &labels() const { return labels_; }
    bool has_inconclusive() const;

    /// Frobenius norm of (sum of elements) - I.
    double completeness_error() const;
    double min_eigenvalue() const;

   private:
    Povm() = default;
    std::vector<CMatrix> elements_;
    std::vector<Label> labels_;
};

/// Truncated coherent state on the first 2^num_qubits Fock levels,
/// renormalized after truncation.
PureState make_coherent_state(Complex alpha, int num_qubits);

/// (|b_{i-1}> + a_i |11>) / sqrt(1 + a_i^2) for i = 1..3 with b = 00, 01, 10.
std::vector<PureState> make_benchmark_two_qubit_states(std::span<const double> a);

/// |0> and |+>.
std::vector<PureState> make_single_qubit_pair();

}  // namespace qsd

#endif
