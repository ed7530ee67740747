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

#include "qhop/propagators.hpp"

#include <cmath>
#include <limits>
#include <sstream>
#include <utility>
#include <vector>

namespace qhop {

namespace {

Matrix hermitian_part(const Matrix& m) { return 0.5 * (m + m.adjoint()); }

// Polar factor W V^dagger of M = W S V^dagger.
Matrix nearest_unitary(const Matrix& m) {
    Eigen::JacobiSVD<Matrix> svd(m, Eigen::ComputeFullU | Eigen::ComputeFullV);
    return svd.matrixU() * svd.matrixV().adjoint();
}

Vector phase_vector(const RealVector& w, double t) {
    Vector p(w.size());
    for (Index i = 0; i < w.size(); ++i) {
        p(i) = std::exp(kI * (w(i) * t));
    }
    return p;
}

}  // namespace

StepPlan StepPlan::make(double total_time, int segments, QuadratureRule rule) {
    if (!(total_time > 0.0) || !std::isfinite(total_time)) {
        throw ValidationError("StepPlan: total time must be positive");
    }
    if (segments < 1) {
        throw ValidationError("StepPlan: segment count must be >= 1");
    }
    const QuadratureRule checked(rule.kind, rule.nodes);
    return StepPlan{total_time, segments, total_time / segments, checked};
}

StepPlan StepPlan::from_step(double total_time, double step, QuadratureRule rule) {
    if (!(step > 0.0) || !std::isfinite(step)) {
        throw ValidationError("StepPlan: step size must be positive");
    }
    const double ratio = total_time / step;
    const double rounded = std::round(ratio);
    if (rounded < 1.0 || std::abs(ratio - rounded) > 1e-9 * std::max(1.0, ratio)) {
        std::ostringstream os;
        os << "StepPlan: step " << step << " does not divide total time " << total_time;
        throw ValidationError(os.str());
    }
    return make(total_time, static_cast<int>(rounded), rule);
}

ReferenceResult reference_propagator(const TimeDependentHamiltonian& h, double t0, double t1, double tol) {
    if (!(tol > 0.0)) {
        throw ValidationError("reference_propagator: tolerance must be positive");
    }
    if (!(t1 >= t0)) {
        throw ValidationError("reference_propagator: require t1 >= t0");
    }
    const double span = t1 - t0;
    if (span == 0.0) {
        return {UnitaryMatrix::identity(h.dim()), 0.0, 0, 0.0};
    }
    if (h.time_independent()) {
        return {herm_exp(h(t0), span), span, 0, 0.0};
    }

    auto midpoint_product = [&](long long n) {
        const double delta = span / static_cast<double>(n);
        Matrix u = Matrix::Identity(h.dim(), h.dim());
        for (long long m = 0; m < n; ++m) {
            const double mid = t0 + (static_cast<double>(m) + 0.5) * delta;
            u = herm_exp(h(mid), delta).matrix() * u;
        }
        return u;
    };

    // Start with alpha * delta <= 1.
    long long n = 1;
    while (static_cast<double>(n) < span * h.alpha()) {
        n *= 2;
    }
    // Romberg table row by row; row k holds extrapolants of order 2(m + 1).
    std::vector<Matrix> row{midpoint_product(n)};
    double change = std::numeric_limits<double>::infinity();
    for (int halving = 1; halving <= kReferenceMaxHalvings; ++halving) {
        n *= 2;
        std::vector<Matrix> next{midpoint_product(n)};
        double factor = 1.0;
        for (std::size_t m = 0; m < row.size(); ++m) {
            factor *= 4.0;
            next.push_back(Matrix(next[m] + (next[m] - row[m]) / (factor - 1.0)));
        }
        change = spectral_norm(Matrix(next.back() - row.back()));
        row = std::move(next);
        if (change < tol) {
            return {UnitaryMatrix(nearest_unitary(row.back())), span / static_cast<double>(n), halving, change};
        }
    }
    std::ostringstream os;
    os << "reference_propagator: no convergence after " << kReferenceMaxHalvings << " halvings (last change " << change
       << ", tol " << tol << ")";
    throw ConvergenceError(os.str());
}

namespace {

void require_step_index(const StepPlan& plan, int j, const char* what) {
    if (j < 0 || j >= plan.segments) {
        std::ostringstream os;
        os << what << ": step index " << j << " outside [0, " << plan.segments << ")";
        throw ValidationError(os.str());
    }
}

void require_dyson_step(double alpha, double h) {
    if (alpha * h > 0.5) {
        std::ostringstream os;
        os << "dyson1: alpha * h = " << alpha * h << " exceeds 1/2";
        throw ValidationError(os.str());
    }
}

}  // namespace

UnitaryMatrix qhop_step(const TimeDependentHamiltonian& h, const StepPlan& plan, int j) {
    require_step_index(plan, j, "qhop_step");
    return herm_exp(averaged_hamiltonian(h, plan.rule, j, plan.step), plan.step);
}

LinearOperator dyson1_step(const TimeDependentHamiltonian& h, const StepPlan& plan, int j) {
    require_step_index(plan, j, "dyson1_step");
    require_dyson_step(h.alpha(), plan.step);
    const HermitianOperator avg = averaged_hamiltonian(h, plan.rule, j, plan.step);
    return LinearOperator(Matrix::Identity(h.dim(), h.dim()) - kI * plan.step * avg.matrix());
}

InteractionPicturePropagator::InteractionPicturePropagator(SplitSystem system, StepPlan plan)
    : system_(std::move(system)), plan_(std::move(plan)), offsets_(nodes_weights(plan_.rule, 0, plan_.step)) {
    if (!system_.b().time_independent()) {
        return;
    }
    // sum_k w_k e^{i(w_m - w_n) s_k} = (P diag(w) P^†)_{mn} with P_{mk} = e^{i w_m s_k}.
    const RealVector& w = system_.a_spectrum().values();
    const Index n = system_.dim();
    const Index m = static_cast<Index>(offsets_.size());
    Matrix phases(n, m);
    Matrix weighted(n, m);
    for (Index k = 0; k < m; ++k) {
        const Vector p = phase_vector(w, offsets_[static_cast<std::size_t>(k)].time);
        phases.col(k) = p;
        weighted.col(k) = offsets_[static_cast<std::size_t>(k)].weight * p;
    }
    const Matrix kernel = weighted * phases.adjoint();
    constant_average_ = hermitian_part(system_.b_in_eigenbasis(0.0).cwiseProduct(kernel));
    constant_spectrum_.emplace(HermitianOperator(*constant_average_));
}

void InteractionPicturePropagator::require_step(int j) const {
    require_step_index(plan_, j, "InteractionPicturePropagator");
}

const Matrix& InteractionPicturePropagator::constant_average() const { return *constant_average_; }

Matrix InteractionPicturePropagator::averaged_in_eigenbasis(int j) const {
    require_step(j);
    if (constant_average_) {
        return *constant_average_;
    }
    const RealVector& w = system_.a_spectrum().values();
    const double start = j * plan_.step;
    Matrix sum = Matrix::Zero(system_.dim(), system_.dim());
    for (const QuadratureNode& node : offsets_) {
        const Vector p = phase_vector(w, node.time);
        sum += node.weight * (p.asDiagonal() * system_.b_in_eigenbasis(start + node.time) * p.conjugate().asDiagonal());
    }
    return hermitian_part(sum);
}

UnitaryMatrix InteractionPicturePropagator::qhop_step(int j) const {
    require_step(j);
    const Matrix& v = system_.a_spectrum().vectors();
    const Vector frame = phase_vector(system_.a_spectrum().values(), j * plan_.step);
    const Matrix inner = constant_spectrum_ ? constant_spectrum_->exp(plan_.step).matrix()
                                            : herm_exp(HermitianOperator(averaged_in_eigenbasis(j)), plan_.step).matrix();
    return UnitaryMatrix(v * (frame.asDiagonal() * inner * frame.conjugate().asDiagonal()) * v.adjoint());
}

LinearOperator InteractionPicturePropagator::dyson1_step(int j) const {
    require_step(j);
    require_dyson_step(system_.alpha_b(), plan_.step);
    const Matrix& v = system_.a_spectrum().vectors();
    const Vector frame = phase_vector(system_.a_spectrum().values(), j * plan_.step);
    const Index n = system_.dim();
    const Matrix inner = Matrix::Identity(n, n) - kI * plan_.step * averaged_in_eigenbasis(j);
    return LinearOperator(v * (frame.asDiagonal() * inner * frame.conjugate().asDiagonal()) * v.adjoint());
}

Matrix InteractionPicturePropagator::product_in_eigenbasis(const std::function<Matrix(int)>& step) const {
    // e^{-iAT} prod_j e^{iAjh} X_j e^{-iAjh} = prod_j (e^{-iAh} X_j) in the eigenbasis of A.
    const Vector drift = phase_vector(system_.a_spectrum().values(), -plan_.step);
    if (constant_average_) {
        return matrix_power(drift.asDiagonal() * step(0), plan_.segments);
    }
    Matrix out = Matrix::Identity(system_.dim(), system_.dim());
    for (int j = 0; j < plan_.segments; ++j) {
        out = (drift.asDiagonal() * step(j)) * out;
    }
    return out;
}

LinearOperator InteractionPicturePropagator::evolve_qhop() const {
    const Matrix& v = system_.a_spectrum().vectors();
    const Matrix x = product_in_eigenbasis([this](int j) {
        return constant_spectrum_ ? constant_spectrum_->exp(plan_.step).matrix()
                                  : herm_exp(HermitianOperator(averaged_in_eigenbasis(j)), plan_.step).matrix();
    });
    return LinearOperator(v * x * v.adjoint());
}

LinearOperator InteractionPicturePropagator::evolve_dyson1() const {
    require_dyson_step(system_.alpha_b(), plan_.step);
    const Matrix& v = system_.a_spectrum().vectors();
    const Index n = system_.dim();
    const Matrix x = product_in_eigenbasis([this, n](int j) {
        return Matrix(Matrix::Identity(n, n) - kI * plan_.step * averaged_in_eigenbasis(j));
    });
    return LinearOperator(v * x * v.adjoint());
}

UnitaryMatrix qhop_interaction_step(const SplitSystem& system, const StepPlan& plan, int j) {
    return InteractionPicturePropagator(system, plan).qhop_step(j);
}

namespace {

void require_constant_b(const SplitSystem& system, const char* what) {
    if (!system.b().time_independent()) {
        throw ValidationError(std::string(what) + ": requires a time-independent B");
    }
}

}  // namespace

UnitaryMatrix interaction_reference_step(const SplitSystem& system, const StepPlan& plan, int j) {
    require_constant_b(system, "interaction_reference_step");
    require_step_index(plan, j, "interaction_reference_step");
    const HermitianOperator full(system.a().matrix() + system.b()(0.0).matrix());
    const double h = plan.step;
    return UnitaryMatrix(fast_forward(system, -(j + 1) * h).matrix() * herm_exp(full, h).matrix() *
                         fast_forward(system, j * h).matrix());
}

UnitaryMatrix trotter1_step(const SplitSystem& system, double h, TrotterOrdering ordering) {
    require_constant_b(system, "trotter1_step");
    const Matrix ea = fast_forward(system, h).matrix();
    const Matrix eb = herm_exp(system.b()(0.0), h).matrix();
    return UnitaryMatrix(ordering == TrotterOrdering::kAThenB ? Matrix(eb * ea) : Matrix(ea * eb));
}

UnitaryMatrix trotter2_step(const SplitSystem& system, double h) {
    require_constant_b(system, "trotter2_step");
    const Matrix half = fast_forward(system, 0.5 * h).matrix();
    const Matrix eb = herm_exp(system.b()(0.0), h).matrix();
    return UnitaryMatrix(half * eb * half);
}

LinearOperator compose(const StepFactory& step, const StepPlan& plan) {
    if (plan.segments < 1) {
        throw ValidationError("compose: segment count must be >= 1");
    }
    Matrix out = step(0).matrix();
    for (int j = 1; j < plan.segments; ++j) {
        const LinearOperator next = step(j);
        require_same_dim(next.dim(), out.rows(), "compose");
        out = next.matrix() * out;
    }
    return LinearOperator(std::move(out));
}

Matrix matrix_power(const Matrix& a, int n) {
    if (n < 0) {
        throw ValidationError("matrix_power: negative exponent");
    }
    Matrix result = Matrix::Identity(a.rows(), a.cols());
    Matrix base = a;
    while (n > 0) {
        if (n & 1) {
            result = result * base;
        }
        n >>= 1;
        if (n > 0) {
            base = base * base;
        }
    }
    return result;
}

double operator_error(const Matrix& approx, const Matrix& exact) { return operator_distance(approx, exact); }

double vector_error(const Matrix& approx, const Matrix& exact, const StateVector& psi0) {
    require_same_dim(approx.rows(), exact.rows(), "vector_error");
    require_same_dim(approx.cols(), psi0.dim(), "vector_error");
    return ((approx - exact) * psi0.amplitudes()).norm();
}

}  // namespace qhop
