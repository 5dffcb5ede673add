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

#ifndef QSD_CONIC_HPP
#define QSD_CONIC_HPP

#include <string_view>
#include <vector>

#include <Eigen/Sparse>

#include "qsd/quantum.hpp"

namespace qsd {

/// Length of the real parametrization of a d x d Hermitian matrix.
inline Eigen::Index svec_length(Eigen::Index d) { return d * d; }

/// Scaled half-vectorization of a Hermitian matrix: the d diagonal entries,
/// then for every i < j (row-major) sqrt(2) Re m_ij followed by
/// sqrt(2) Im m_ij. Dot products of svecs equal Tr(A B).
RVector svec(const CMatrix &m);
void svec_into(const CMatrix &m, Eigen::Ref<RVector> out);

/// Inverse of svec.
CMatrix smat(const Eigen::Ref<const RVector> &v, Eigen::Index d);

/// Nearest PSD matrix in Frobenius norm: symmetrize, clip negative
/// eigenvalues to zero, reassemble.
CMatrix psd_project(const CMatrix &m);

enum class ConeKind { PsdComplex, NonNeg, Free };

struct ConeBlock {
    ConeKind kind = ConeKind::Free;
    /// Matrix dimension d for PsdComplex, entry count otherwise.
    Eigen::Index size = 0;
    /// Optional face restriction for PsdComplex blocks: when non-empty the
    /// block variable Y (size x size) stands for basis * Y * basis^dagger, a
    /// PSD matrix of dimension basis.rows(). A face of dimension 0 pins the
    /// represented matrix to zero.
    CMatrix basis;

    /// Dimension of the represented matrix.
    Eigen::Index outer_size() const { return basis.rows() != 0 ? basis.rows() : size; }

    Eigen::Index length() const { return kind == ConeKind::PsdComplex ? svec_length(size) : size; }
};

/// minimize  c^T x + 1/2 x^T diag(quad_diag) x
/// s.t.      A x = b,  x in K_1 x ... x K_m  (blocks, in order)
struct ConeProgram {
    std::vector<ConeBlock> blocks;
    RVector c;
    /// Empty means no quadratic term; otherwise one nonnegative entry per coordinate.
    RVector quad_diag;
    Eigen::SparseMatrix<double> A;
    RVector b;

    Eigen::Index num_variables() const;
    Eigen::Index offset(std::size_t block) const;
    /// Throws std::invalid_argument on shape or sign problems.
    void validate() const;
};

/// Incremental construction of a ConeProgram. Rows accumulate as triplets so
/// several terms on the same coordinate add up.
class ProgramBuilder {
   public:
    std::size_t add_block(ConeKind kind, Eigen::Index size);
    /// PSD block restricted to {B Y B^dagger : Y >= 0}; `basis` has orthonormal
    /// columns (possibly none). Trace terms take matrices of the outer size.
    std::size_t add_face_block(const CMatrix &basis);
    Eigen::Index offset(std::size_t block) const { return offsets_.at(block); }
    const ConeBlock &block(std::size_t i) const { return blocks_.at(i); }

    /// Starts a new equality row and returns its index.
    Eigen::Index new_row(double rhs);
    /// Adds coeff * Tr(m X_block) to the row, X_block being a PSD block
    /// (m is compressed to B^dagger m B on face blocks).
    void add_trace(Eigen::Index row, std::size_t block, const CMatrix &m, double coeff = 1.0);
    /// Adds coeff * x[block][entry] to the row.
    void add_entry(Eigen::Index row, std::size_t block, Eigen::Index entry, double coeff);

    /// Adds coeff * Tr(m X_block) to the objective.
    void add_objective_trace(std::size_t block, const CMatrix &m, double coeff = 1.0);
    void add_objective_entry(std::size_t block, Eigen::Index entry, double coeff);
    void set_quadratic(std::size_t block, Eigen::Index entry, double weight);

    ConeProgram build() const;

   private:
    std::vector<ConeBlock> blocks_;
    std::vector<Eigen::Index> offsets_;
    Eigen::Index num_vars_ = 0;
    std::vector<Eigen::Triplet<double>> triplets_;
    std::vector<double> rhs_;
    std::vector<std::pair<Eigen::Index, double>> objective_;
    std::vector<std::pair<Eigen::Index, double>> quadratic_;
};

enum class SolveStatus { Optimal, MaxIters, Infeasible };

std::string_view to_string(SolveStatus status);

struct SolverSettings {
    double tol = 1e-8;
    long max_iters = 200'000;
    /// Initial ADMM penalty.
    double rho = 1.0;
    /// Residual balancing: rho is doubled or halved when one residual
    /// exceeds the other by `balance_ratio`.
    bool adaptive_rho = true;
    double balance_ratio = 10.0;
    long balance_interval = 50;
    /// Relaxation factor in (0, 2). Values above 1 over-relax; they slow
    /// the extrapolated iteration on degenerate programs, so 1 is the default.
    double relaxation = 1.0;
    /// Depth of the Anderson extrapolation applied to the (z, u) iteration;
    /// 0 runs plain ADMM. Extrapolated steps are kept only when they shrink
    /// the fixed-point residual.
    int anderson_memory = 10;
};

struct Solution {
    /// Affine-feasible iterate (A x = b up to factorization accuracy).
    RVector x;
    SolveStatus status = SolveStatus::MaxIters;
    double primal_residual = 0.0;
    double dual_residual = 0.0;
    double objective = 0.0;
    long iterations = 0;
};

/// ADMM on the splitting x = z with x in {A x = b} and z in K. The affine step
/// reuses a sparse LDL^T factorization of A D^-1 A^T (refactored only when rho
/// changes); the cone step projects each block independently.
///
/// primal_residual = |x - z| / (1 + max(|x|, |z|))
/// dual_residual   = rho |z - z_prev| / (1 + max(|rho u|, |c|))
Solution solve(const ConeProgram &program, const SolverSettings &settings = {});

/// View of block `i` of a solution vector as a Hermitian matrix, expanded
/// to the outer dimension on face blocks.
CMatrix block_matrix(const ConeProgram &program, const RVector &x, std::size_t block);

}  // namespace qsd

#endif
