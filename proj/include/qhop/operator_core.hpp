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

#pragma once

#include <complex>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace qhop {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;
using Index = Eigen::Index;

inline constexpr Complex kI{0.0, 1.0};

/// Input rejected by a precondition or type invariant (CLI exit code 2).
class ValidationError : public std::invalid_argument {
  public:
    using std::invalid_argument::invalid_argument;
};

class DimensionMismatch : public ValidationError {
  public:
    DimensionMismatch(Index lhs, Index rhs, const std::string& where);
};

/// A numerical procedure failed to converge (CLI exit code 3).
class ConvergenceError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

/// Hermitian eigensolver failure; carries the residual ||H V - V diag(w)||.
class FactorizationError : public ConvergenceError {
  public:
    FactorizationError(const std::string& what, double residual);
    double residual() const { return residual_; }

  private:
    double residual_;
};

/// Square complex matrix with no further structure.
class LinearOperator {
  public:
    explicit LinearOperator(Matrix entries);

    Index dim() const { return entries_.rows(); }
    const Matrix& matrix() const { return entries_; }
    static LinearOperator identity(Index dim);

  private:
    Matrix entries_;
};

/// Hermitian up to roundoff: max|H - H^†| <= 1e-12 * max|H|.
class HermitianOperator {
  public:
    static constexpr double kTolerance = 1e-12;

    explicit HermitianOperator(Matrix entries);
    static HermitianOperator zero(Index dim);

    Index dim() const { return entries_.rows(); }
    const Matrix& matrix() const { return entries_; }
    operator LinearOperator() const { return LinearOperator(entries_); }

  private:
    Matrix entries_;
};

/// Unitary at construction: ||U^†U - I||_2 <= 1e-10.
class UnitaryMatrix {
  public:
    static constexpr double kTolerance = 1e-10;

    explicit UnitaryMatrix(Matrix entries);
    static UnitaryMatrix identity(Index dim);

    Index dim() const { return entries_.rows(); }
    const Matrix& matrix() const { return entries_; }
    UnitaryMatrix adjoint() const;
    operator LinearOperator() const { return LinearOperator(entries_); }

  private:
    Matrix entries_;
};

UnitaryMatrix operator*(const UnitaryMatrix& lhs, const UnitaryMatrix& rhs);

/// Eigen-factorization H = V diag(w) V^†, reused for repeated exponentials.
class HermitianSpectrum {
  public:
    explicit HermitianSpectrum(const HermitianOperator& op);

    const RealVector& values() const { return values_; }
    const Matrix& vectors() const { return vectors_; }
    Index dim() const { return values_.size(); }

    /// e^{-i H t}; cost does not depend on |t|.
    UnitaryMatrix exp(double t) const;
    /// diag(e^{-i w t}) in the eigenbasis.
    Vector phases(double t) const;
    Matrix reconstruct() const;

  private:
    RealVector values_;
    Matrix vectors_;
};

/// e^{-iHt} through the Hermitian eigendecomposition.
UnitaryMatrix herm_exp(const HermitianOperator& h, double t);

/// Largest singular value. Dense SVD up to kDenseNormLimit, power iteration on
/// A^†A above it.
inline constexpr Index kDenseNormLimit = 256;
double spectral_norm(const Matrix& a);
inline double spectral_norm(const LinearOperator& a) { return spectral_norm(a.matrix()); }

LinearOperator commutator(const LinearOperator& a, const LinearOperator& b);
Matrix commutator(const Matrix& a, const Matrix& b);

double operator_distance(const LinearOperator& a, const LinearOperator& b);
double operator_distance(const Matrix& a, const Matrix& b);

/// Max-abs entry norm.
double max_abs(const Matrix& a);

/// Kronecker product, lhs the more significant factor.
Matrix kron(const Matrix& lhs, const Matrix& rhs);

void require_same_dim(Index lhs, Index rhs, const std::string& where);

}  // namespace qhop
