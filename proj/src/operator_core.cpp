// Copyright 2026 The qhop Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "qhop/operator_core.hpp"

#include <cmath>
#include <random>
#include <sstream>
#include <utility>

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

namespace qhop {

namespace {

constexpr int kPowerIterationMax = 10000;
constexpr double kPowerIterationTol = 1e-12;

void require_square(const Matrix& m, const char* what) {
    if (m.rows() != m.cols()) {
        std::ostringstream os;
        os << what << ": matrix must be square, got " << m.rows() << "x" << m.cols();
        throw ValidationError(os.str());
    }
    if (m.rows() == 0) {
        throw ValidationError(std::string(what) + ": dimension must be positive");
    }
}

// Dense eigenvalues of the Gram matrix; used when power iteration stalls.
double gram_top_eigenvalue_dense(const Matrix& gram) {
    Eigen::SelfAdjointEigenSolver<Matrix> solver(gram, Eigen::EigenvaluesOnly);
    if (solver.info() != Eigen::Success) {
        throw FactorizationError("spectral_norm: Gram eigensolver failed", -1.0);
    }
    return std::max(0.0, solver.eigenvalues().maxCoeff());
}

double power_iteration_norm(const Matrix& a) {
    const Matrix gram = a.adjoint() * a;
    const double scale = gram.cwiseAbs().maxCoeff();
    if (scale == 0.0) {
        return 0.0;
    }
    std::mt19937_64 rng(0x5eed5eedULL);
    std::normal_distribution<double> normal;
    Vector v(gram.rows());
    for (Index i = 0; i < v.size(); ++i) {
        v(i) = Complex(normal(rng), normal(rng));
    }
    v.normalize();
    for (int it = 0; it < kPowerIterationMax; ++it) {
        Vector w = gram * v;
        const double mu = v.dot(w).real();
        const double residual = (w - mu * v).norm();
        if (residual <= kPowerIterationTol * mu) {
            return std::sqrt(mu);
        }
        const double wn = w.norm();
        if (wn == 0.0) {
            break;
        }
        v = w / wn;
    }
    return std::sqrt(gram_top_eigenvalue_dense(gram));
}

}  // namespace

DimensionMismatch::DimensionMismatch(Index lhs, Index rhs, const std::string& where)
    : ValidationError(where + ": dimension mismatch (" + std::to_string(lhs) + " vs " +
                      std::to_string(rhs) + ")") {}

FactorizationError::FactorizationError(const std::string& what, double residual)
    : ConvergenceError(what + " (residual " + std::to_string(residual) + ")"), residual_(residual) {}

void require_same_dim(Index lhs, Index rhs, const std::string& where) {
    if (lhs != rhs) {
        throw DimensionMismatch(lhs, rhs, where);
    }
}

double max_abs(const Matrix& a) { return a.size() == 0 ? 0.0 : a.cwiseAbs().maxCoeff(); }

Matrix kron(const Matrix& lhs, const Matrix& rhs) {
    Matrix out(lhs.rows() * rhs.rows(), lhs.cols() * rhs.cols());
    for (Index i = 0; i < lhs.rows(); ++i) {
        for (Index j = 0; j < lhs.cols(); ++j) {
            out.block(i * rhs.rows(), j * rhs.cols(), rhs.rows(), rhs.cols()) = lhs(i, j) * rhs;
        }
    }
    return out;
}

LinearOperator::LinearOperator(Matrix entries) : entries_(std::move(entries)) {
    require_square(entries_, "LinearOperator");
}

LinearOperator LinearOperator::identity(Index dim) { return LinearOperator(Matrix::Identity(dim, dim)); }

HermitianOperator::HermitianOperator(Matrix entries) : entries_(std::move(entries)) {
    require_square(entries_, "HermitianOperator");
    if (!entries_.allFinite()) {
        throw ValidationError("HermitianOperator: non-finite entries");
    }
    const double asym = max_abs(entries_ - entries_.adjoint());
    if (asym > kTolerance * max_abs(entries_)) {
        std::ostringstream os;
        os << "HermitianOperator: max|H - H^dagger| = " << asym << " exceeds tolerance";
        throw ValidationError(os.str());
    }
}

HermitianOperator HermitianOperator::zero(Index dim) { return HermitianOperator(Matrix::Zero(dim, dim)); }

UnitaryMatrix::UnitaryMatrix(Matrix entries) : entries_(std::move(entries)) {
    require_square(entries_, "UnitaryMatrix");
    const Matrix defect = entries_.adjoint() * entries_ - Matrix::Identity(dim(), dim());
    // Frobenius bounds the spectral norm from above; only fall back to the
    // exact norm when the cheap bound is inconclusive.
    if (defect.norm() > kTolerance && spectral_norm(defect) > kTolerance) {
        std::ostringstream os;
        os << "UnitaryMatrix: ||U^dagger U - I|| = " << spectral_norm(defect) << " exceeds tolerance";
        throw ValidationError(os.str());
    }
}

UnitaryMatrix UnitaryMatrix::identity(Index dim) { return UnitaryMatrix(Matrix::Identity(dim, dim)); }

UnitaryMatrix UnitaryMatrix::adjoint() const { return UnitaryMatrix(entries_.adjoint()); }

UnitaryMatrix operator*(const UnitaryMatrix& lhs, const UnitaryMatrix& rhs) {
    require_same_dim(lhs.dim(), rhs.dim(), "UnitaryMatrix product");
    return UnitaryMatrix(lhs.matrix() * rhs.matrix());
}

HermitianSpectrum::HermitianSpectrum(const HermitianOperator& op) {
    Eigen::SelfAdjointEigenSolver<Matrix> solver(op.matrix());
    if (solver.info() != Eigen::Success) {
        double residual = -1.0;
        if (solver.eigenvalues().allFinite() && solver.eigenvectors().allFinite()) {
            residual = spectral_norm(Matrix(op.matrix() * solver.eigenvectors() -
                                            solver.eigenvectors() * solver.eigenvalues().asDiagonal()));
        }
        throw FactorizationError("Hermitian eigendecomposition failed", residual);
    }
    values_ = solver.eigenvalues();
    vectors_ = solver.eigenvectors();
}

Vector HermitianSpectrum::phases(double t) const {
    Vector out(values_.size());
    for (Index i = 0; i < values_.size(); ++i) {
        out(i) = std::exp(-kI * (values_(i) * t));
    }
    return out;
}

UnitaryMatrix HermitianSpectrum::exp(double t) const {
    return UnitaryMatrix(vectors_ * phases(t).asDiagonal() * vectors_.adjoint());
}

Matrix HermitianSpectrum::reconstruct() const {
    return vectors_ * values_.cast<Complex>().asDiagonal() * vectors_.adjoint();
}

UnitaryMatrix herm_exp(const HermitianOperator& h, double t) { return HermitianSpectrum(h).exp(t); }

double spectral_norm(const Matrix& a) {
    require_square(a, "spectral_norm");
    if (a.rows() <= kDenseNormLimit) {
        Eigen::BDCSVD<Matrix> svd(a);
        return svd.singularValues().size() == 0 ? 0.0 : svd.singularValues()(0);
    }
    return power_iteration_norm(a);
}

Matrix commutator(const Matrix& a, const Matrix& b) {
    require_same_dim(a.rows(), b.rows(), "commutator");
    return a * b - b * a;
}

LinearOperator commutator(const LinearOperator& a, const LinearOperator& b) {
    return LinearOperator(commutator(a.matrix(), b.matrix()));
}

double operator_distance(const Matrix& a, const Matrix& b) {
    require_same_dim(a.rows(), b.rows(), "operator_distance");
    return spectral_norm(Matrix(a - b));
}

double operator_distance(const LinearOperator& a, const LinearOperator& b) {
    return operator_distance(a.matrix(), b.matrix());
}

}  // namespace qhop
