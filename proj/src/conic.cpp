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

#include "qsd/conic.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include <Eigen/SparseCholesky>

namespace qsd {

namespace {

constexpr double kSqrt2 = 1.41421356237309504880;

// Position of the (re, im) pair for i < j in the svec layout.
inline Eigen::Index pair_offset(Eigen::Index d, Eigen::Index i, Eigen::Index j) {
    return d + 2 * (i * d - i * (i + 1) / 2 + (j - i - 1));
}

// svec of m, or of B^dagger m B on a face block.
RVector compressed_svec(const ConeBlock &b, const CMatrix &m) {
    if (b.kind != ConeKind::PsdComplex || m.rows() != b.outer_size() || m.cols() != m.rows()) {
        throw std::invalid_argument("trace term needs a PSD block of matching dimension");
    }
    if (b.basis.rows() != 0) {
        return svec(b.basis.adjoint() * m * b.basis);
    }
    return svec(m);
}

}  // namespace

void svec_into(const CMatrix &m, Eigen::Ref<RVector> out) {
    const Eigen::Index d = m.rows();
    for (Eigen::Index i = 0; i < d; ++i) {
        out(i) = m(i, i).real();
    }
    Eigen::Index p = d;
    for (Eigen::Index i = 0; i < d; ++i) {
        for (Eigen::Index j = i + 1; j < d; ++j) {
            // Average the two triangles so a slightly non-Hermitian input maps
            // to its Hermitian part.
            Complex v = 0.5 * (m(i, j) + std::conj(m(j, i)));
            out(p++) = kSqrt2 * v.real();
            out(p++) = kSqrt2 * v.imag();
        }
    }
}

RVector svec(const CMatrix &m) {
    if (m.rows() != m.cols()) {
        throw std::invalid_argument("svec needs a square matrix");
    }
    RVector out(svec_length(m.rows()));
    svec_into(m, out);
    return out;
}

CMatrix smat(const Eigen::Ref<const RVector> &v, Eigen::Index d) {
    if (v.size() != svec_length(d)) {
        throw std::invalid_argument("svec length does not match dimension");
    }
    CMatrix m(d, d);
    for (Eigen::Index i = 0; i < d; ++i) {
        m(i, i) = Complex(v(i), 0.0);
    }
    Eigen::Index p = d;
    for (Eigen::Index i = 0; i < d; ++i) {
        for (Eigen::Index j = i + 1; j < d; ++j) {
            Complex z(v(p) / kSqrt2, v(p + 1) / kSqrt2);
            p += 2;
            m(i, j) = z;
            m(j, i) = std::conj(z);
        }
    }
    return m;
}

CMatrix psd_project(const CMatrix &m) {
    if (m.rows() != m.cols()) {
        throw std::invalid_argument("psd_project needs a square matrix");
    }
    CMatrix h = 0.5 * (m + m.adjoint());
    Eigen::SelfAdjointEigenSolver<CMatrix> eig(h);
    if (eig.info() != Eigen::Success) {
        throw NumericalError("Hermitian eigensolver did not converge in PSD projection");
    }
    const RVector &w = eig.eigenvalues();
    if (w.minCoeff() >= 0.0) {
        return h;
    }
    RVector clipped = w.cwiseMax(0.0);
    const CMatrix &q = eig.eigenvectors();
    return q * clipped.asDiagonal() * q.adjoint();
}

Eigen::Index ConeProgram::num_variables() const {
    Eigen::Index n = 0;
    for (const auto &b : blocks) {
        n += b.length();
    }
    return n;
}

Eigen::Index ConeProgram::offset(std::size_t block) const {
    Eigen::Index n = 0;
    for (std::size_t i = 0; i < block; ++i) {
        n += blocks.at(i).length();
    }
    return n;
}

void ConeProgram::validate() const {
    const Eigen::Index n = num_variables();
    if (n == 0) {
        throw std::invalid_argument("cone program has no variables");
    }
    for (const auto &b : blocks) {
        const bool empty_face = b.kind == ConeKind::PsdComplex && b.size == 0 && b.basis.rows() > 0;
        if (b.size <= 0 && !empty_face) {
            throw std::invalid_argument("cone block sizes must be positive");
        }
    }
    if (c.size() != n) {
        throw std::invalid_argument("objective length does not match the cone blocks");
    }
    if (quad_diag.size() != 0 && quad_diag.size() != n) {
        throw std::invalid_argument("quadratic diagonal length does not match the cone blocks");
    }
    if (quad_diag.size() != 0 && quad_diag.minCoeff() < 0.0) {
        throw std::invalid_argument("quadratic diagonal must be nonnegative");
    }
    if (A.cols() != n || A.rows() != b.size()) {
        throw std::invalid_argument("constraint matrix shape does not match");
    }
    if (!c.allFinite() || !b.allFinite()) {
        throw std::invalid_argument("cone program data must be finite");
    }
}

std::size_t ProgramBuilder::add_block(ConeKind kind, Eigen::Index size) {
    if (size <= 0) {
        throw std::invalid_argument("cone block sizes must be positive");
    }
    blocks_.push_back({kind, size, CMatrix()});
    offsets_.push_back(num_vars_);
    num_vars_ += blocks_.back().length();
    return blocks_.size() - 1;
}

std::size_t ProgramBuilder::add_face_block(const CMatrix &basis) {
    if (basis.rows() <= 0) {
        throw std::invalid_argument("face basis needs a positive outer dimension");
    }
    if (basis.cols() > 0) {
        const CMatrix gram = basis.adjoint() * basis;
        if ((gram - CMatrix::Identity(basis.cols(), basis.cols())).cwiseAbs().maxCoeff() > 1e-10) {
            throw std::invalid_argument("face basis columns must be orthonormal");
        }
    }
    blocks_.push_back({ConeKind::PsdComplex, basis.cols(), basis});
    offsets_.push_back(num_vars_);
    num_vars_ += blocks_.back().length();
    return blocks_.size() - 1;
}

Eigen::Index ProgramBuilder::new_row(double rhs) {
    rhs_.push_back(rhs);
    return static_cast<Eigen::Index>(rhs_.size()) - 1;
}

void ProgramBuilder::add_trace(Eigen::Index row, std::size_t block, const CMatrix &m, double coeff) {
    const RVector v = compressed_svec(blocks_.at(block), m);
    const Eigen::Index base = offsets_[block];
    for (Eigen::Index t = 0; t < v.size(); ++t) {
        if (v(t) != 0.0) {
            triplets_.emplace_back(row, base + t, coeff * v(t));
        }
    }
}

void ProgramBuilder::add_entry(Eigen::Index row, std::size_t block, Eigen::Index entry, double coeff) {
    if (entry < 0 || entry >= blocks_.at(block).length()) {
        throw std::out_of_range("entry outside cone block");
    }
    triplets_.emplace_back(row, offsets_[block] + entry, coeff);
}

void ProgramBuilder::add_objective_trace(std::size_t block, const CMatrix &m, double coeff) {
    const RVector v = compressed_svec(blocks_.at(block), m);
    for (Eigen::Index t = 0; t < v.size(); ++t) {
        if (v(t) != 0.0) {
            objective_.emplace_back(offsets_[block] + t, coeff * v(t));
        }
    }
}

void ProgramBuilder::add_objective_entry(std::size_t block, Eigen::Index entry, double coeff) {
    if (entry < 0 || entry >= blocks_.at(block).length()) {
        throw std::out_of_range("entry outside cone block");
    }
    objective_.emplace_back(offsets_[block] + entry, coeff);
}

void ProgramBuilder::set_quadratic(std::size_t block, Eigen::Index entry, double weight) {
    if (entry < 0 || entry >= blocks_.at(block).length()) {
        throw std::out_of_range("entry outside cone block");
    }
    quadratic_.emplace_back(offsets_[block] + entry, weight);
}

ConeProgram ProgramBuilder::build() const {
    ConeProgram p;
    p.blocks = blocks_;
    p.c = RVector::Zero(num_vars_);
    for (const auto &[idx, v] : objective_) {
        p.c(idx) += v;
    }
    if (!quadratic_.empty()) {
        p.quad_diag = RVector::Zero(num_vars_);
        for (const auto &[idx, v] : quadratic_) {
            p.quad_diag(idx) = v;
        }
    }
    const auto rows = static_cast<Eigen::Index>(rhs_.size());
    p.A.resize(rows, num_vars_);
    p.A.setFromTriplets(triplets_.begin(), triplets_.end());
    p.A.makeCompressed();
    p.b = Eigen::Map<const RVector>(rhs_.data(), rows);
    p.validate();
    return p;
}

std::string_view to_string(SolveStatus status) {
    switch (status) {
        case SolveStatus::Optimal:
            return "optimal";
        case SolveStatus::MaxIters:
            return "max_iters";
        case SolveStatus::Infeasible:
            return "infeasible";
    }
    return "unknown";
}

CMatrix block_matrix(const ConeProgram &program, const RVector &x, std::size_t block) {
    const ConeBlock &b = program.blocks.at(block);
    if (b.kind != ConeKind::PsdComplex) {
        throw std::invalid_argument("block is not a PSD block");
    }
    CMatrix y = smat(x.segment(program.offset(block), b.length()), b.size);
    if (b.basis.rows() != 0) {
        return b.basis * y * b.basis.adjoint();
    }
    return y;
}

namespace {

using SparseMatrix = Eigen::SparseMatrix<double>;

// Projection onto {x : A x = b} in the metric induced by D = Q + rho I.
// Rows that are linear combinations of others are tolerated: the normal
// matrix is lightly regularized and the solve is refined against the exact
// operator, which converges to a least-squares multiplier.
class AffineSolver {
   public:
    AffineSolver(const SparseMatrix &A, const RVector &quad) : A_(A), At_(A.transpose()), quad_(quad) {}

    void factor(double rho) {
        d_inv_ = (quad_.array() + rho).inverse().matrix();
        if (A_.rows() == 0) {
            return;
        }
        normal_ = A_ * d_inv_.asDiagonal() * At_;
        double scale = normal_.diagonal().cwiseAbs().maxCoeff();
        reg_ = 1e-12 * (1.0 + scale);
        SparseMatrix shifted = normal_;
        for (Eigen::Index i = 0; i < shifted.rows(); ++i) {
            shifted.coeffRef(i, i) += reg_;
        }
        if (!analyzed_) {
            ldlt_.analyzePattern(shifted);
            analyzed_ = true;
        }
        ldlt_.factorize(shifted);
        if (ldlt_.info() != Eigen::Success) {
            throw NumericalError("factorization of the constraint normal matrix failed");
        }
    }

    // argmin 1/2 x^T D x - r^T x  s.t. A x = b
    void project(const RVector &r, const RVector &b, RVector &x) {
        x = d_inv_.cwiseProduct(r);
        if (A_.rows() == 0) {
            return;
        }
        RVector rhs = A_ * x - b;
        RVector nu = ldlt_.solve(rhs);
        for (int k = 0; k < 2; ++k) {
            RVector res = rhs - normal_ * nu;
            nu += ldlt_.solve(res);
        }
        x -= d_inv_.cwiseProduct(At_ * nu);
    }

   private:
    const SparseMatrix &A_;
    SparseMatrix At_;
    RVector quad_;
    RVector d_inv_;
    SparseMatrix normal_;
    double reg_ = 0.0;
    bool analyzed_ = false;
    Eigen::SimplicialLDLT<SparseMatrix> ldlt_;
};

void project_cones(const ConeProgram &p, RVector &v) {
    Eigen::Index off = 0;
    for (const auto &b : p.blocks) {
        const Eigen::Index len = b.length();
        switch (b.kind) {
            case ConeKind::Free:
                break;
            case ConeKind::NonNeg:
                v.segment(off, len) = v.segment(off, len).cwiseMax(0.0);
                break;
            case ConeKind::PsdComplex: {
                if (len == 0) {
                    break;
                }
                CMatrix m = smat(v.segment(off, len), b.size);
                svec_into(psd_project(m), v.segment(off, len));
                break;
            }
        }
        off += len;
    }
}

double objective_value(const ConeProgram &p, const RVector &x) {
    double f = p.c.dot(x);
    if (p.quad_diag.size() != 0) {
        f += 0.5 * x.dot(p.quad_diag.cwiseProduct(x));
    }
    return f;
}

}  // namespace

namespace {

// Type-II Anderson acceleration over the stacked ADMM state. Keeps the last
// `memory` differences of states and residuals and proposes
// w = f - dF * gamma with gamma = argmin |g - dG * gamma|.
class Anderson {
   public:
    explicit Anderson(int memory) : memory_(memory) {}

    bool enabled() const { return memory_ > 0; }
    void reset() {
        df_.clear();
        dg_.clear();
    }
    void push(RVector df, RVector dg) {
        df_.push_back(std::move(df));
        dg_.push_back(std::move(dg));
        if (static_cast<int>(df_.size()) > memory_) {
            df_.erase(df_.begin());
            dg_.erase(dg_.begin());
        }
    }
    // Returns false when the history is empty or the least-squares system is
    // unusable.
    bool extrapolate(const RVector &f, const RVector &g, RVector &out) const {
        const auto m = static_cast<Eigen::Index>(dg_.size());
        if (m == 0) {
            return false;
        }
        RMatrix gram(m, m);
        RVector rhs(m);
        for (Eigen::Index a = 0; a < m; ++a) {
            rhs(a) = dg_[static_cast<std::size_t>(a)].dot(g);
            for (Eigen::Index b = 0; b <= a; ++b) {
                gram(a, b) = gram(b, a) = dg_[static_cast<std::size_t>(a)].dot(dg_[static_cast<std::size_t>(b)]);
            }
        }
        gram.diagonal().array() += 1e-10 * (gram.trace() + 1e-30);
        const RVector gamma = gram.ldlt().solve(rhs);
        if (!gamma.allFinite()) {
            return false;
        }
        out = f;
        for (Eigen::Index a = 0; a < m; ++a) {
            out -= gamma(a) * df_[static_cast<std::size_t>(a)];
        }
        return out.allFinite();
    }

   private:
    int memory_;
    std::vector<RVector> df_;
    std::vector<RVector> dg_;
};

}  // namespace

Solution solve(const ConeProgram &program, const SolverSettings &settings) {
    program.validate();
    if (!(settings.tol > 0.0)) {
        throw std::invalid_argument("solver tolerance must be positive");
    }
    if (settings.max_iters <= 0) {
        throw std::invalid_argument("iteration budget must be positive");
    }
    if (!(settings.relaxation > 0.0 && settings.relaxation < 2.0)) {
        throw std::invalid_argument("relaxation factor must lie in (0, 2)");
    }
    if (settings.anderson_memory < 0) {
        throw std::invalid_argument("Anderson memory must be nonnegative");
    }

    const Eigen::Index n = program.num_variables();
    const RVector quad = program.quad_diag.size() != 0 ? program.quad_diag : RVector::Zero(n);
    const double c_norm = program.c.norm();
    constexpr double kRhoMin = 1e-6;
    constexpr double kRhoMax = 1e6;
    // Infeasibility check: over a window with a fixed rho, the gap |x - z|
    // must stop shrinking while staying far above tolerance.
    constexpr long kWindow = 1000;
    constexpr long kMinItersForInfeasible = 5000;

    double rho = settings.rho;
    AffineSolver affine(program.A, quad);
    affine.factor(rho);

    // The iteration is a fixed-point map on w = (z, u).
    RVector w = RVector::Zero(2 * n);
    RVector f(2 * n);
    RVector g(2 * n);
    RVector w_prev, f_prev, g_prev;
    bool have_prev = false;
    bool extrapolated = false;
    Anderson anderson(settings.anderson_memory);

    RVector x(n);
    RVector xh(n);
    RVector r(n);

    // Extrapolation can push w far enough that the affine step loses all
    // accuracy to cancellation (typically while u diverges on an infeasible
    // program). Such iterates are never accepted; the solve restarts from the
    // best state with plain ADMM.
    const double affine_tol = std::max(settings.tol, 1e-10) * (1.0 + program.b.norm());
    bool use_anderson = anderson.enabled();
    RVector w_best = w;
    double rho_best = rho;

    Solution best;
    best.x = RVector::Zero(n);
    double best_merit = std::numeric_limits<double>::infinity();
    double window_gap = std::numeric_limits<double>::infinity();
    bool rho_changed_in_window = false;

    long it = 0;
    for (it = 1; it <= settings.max_iters; ++it) {
        const auto z = w.head(n);
        const auto u = w.tail(n);
        r = rho * (z - u) - program.c;
        affine.project(r, program.b, x);
        xh = settings.relaxation * x + (1.0 - settings.relaxation) * z;
        auto fz = f.head(n);
        auto fu = f.tail(n);
        fz = xh + u;
        project_cones(program, f);
        fu = u + xh - fz;
        g = w - f;

        const double gap = (x - fz).norm();
        const double primal = gap / (1.0 + std::max(x.norm(), fz.norm()));
        const double dual = rho * (fz - z).norm() / (1.0 + std::max(rho * fu.norm(), c_norm));
        if (!std::isfinite(primal) || !std::isfinite(dual)) {
            throw NumericalError("solver iterates became non-finite");
        }
        if (use_anderson && (program.A * x - program.b).norm() > affine_tol) {
            use_anderson = false;
            anderson.reset();
            have_prev = false;
            extrapolated = false;
            w = w_best;
            if (rho_best != rho) {
                rho = rho_best;
                affine.factor(rho);
            }
            rho_changed_in_window = true;
            continue;
        }
        const double merit = std::max(primal, dual);
        if (merit < best_merit) {
            best_merit = merit;
            best.x = x;
            best.primal_residual = primal;
            best.dual_residual = dual;
            best.iterations = it;
            w_best = w;
            rho_best = rho;
        }
        if (merit <= settings.tol) {
            best.status = SolveStatus::Optimal;
            break;
        }

        if (extrapolated && g.norm() > g_prev.norm()) {
            // Safeguard: fall back to the plain step from the last accepted point.
            anderson.reset();
            w = f_prev;
            have_prev = false;
            extrapolated = false;
            continue;
        }

        if (settings.adaptive_rho && it % settings.balance_interval == 0) {
            double next = rho;
            if (primal > settings.balance_ratio * dual) {
                next = std::min(rho * 2.0, kRhoMax);
            } else if (dual > settings.balance_ratio * primal) {
                next = std::max(rho / 2.0, kRhoMin);
            }
            if (next != rho) {
                f.tail(n) *= rho / next;
                rho = next;
                affine.factor(rho);
                rho_changed_in_window = true;
                anderson.reset();
                have_prev = false;
                extrapolated = false;
                w = f;
                continue;
            }
        }

        if (it % kWindow == 0) {
            if (it >= kMinItersForInfeasible && !rho_changed_in_window && primal > 1e-4 &&
                gap >= 0.999 * window_gap) {
                best.status = SolveStatus::Infeasible;
                best.x = x;
                best.primal_residual = primal;
                best.dual_residual = dual;
                best.iterations = it;
                break;
            }
            window_gap = gap;
            rho_changed_in_window = false;
        }

        if (use_anderson) {
            if (have_prev) {
                anderson.push(f - f_prev, g - g_prev);
            }
            w_prev = w;
            f_prev = f;
            g_prev = g;
            have_prev = true;
            extrapolated = anderson.extrapolate(f, g, w);
            if (!extrapolated) {
                w = f;
            }
        } else {
            w = f;
        }
    }
    if (it > settings.max_iters) {
        best.status = SolveStatus::MaxIters;
        best.iterations = settings.max_iters;
    } else if (best.status == SolveStatus::Optimal) {
        best.iterations = it;
    }
    best.objective = objective_value(program, best.x);
    return best;
}

}  // namespace qsd
