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

#include "qhop/hamiltonian.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <utility>

namespace qhop {

namespace {

constexpr double kAlphaSlack = 1e-8;
constexpr int kSpotChecks = 5;

double sample_time(double horizon, int i, int count) {
    return count == 1 ? 0.0 : horizon * static_cast<double>(i) / static_cast<double>(count - 1);
}

Matrix hermitian_part(const Matrix& m) { return 0.5 * (m + m.adjoint()); }

// Central differences at step delta and delta/2 against the analytic
// derivative; a correct derivative shows the O(delta^2) ratio ~ 1/4.
void check_derivative(const TimeDependentHamiltonian& h, double t, double delta) {
    const Matrix exact = h.derivative(t).matrix();
    auto fd = [&](double d) {
        return Matrix((h(t + d).matrix() - h(t - d).matrix()) / (2.0 * d));
    };
    const double e1 = spectral_norm(Matrix(fd(delta) - exact));
    const double e2 = spectral_norm(Matrix(fd(0.5 * delta) - exact));
    const double scale = std::max({1.0, h.alpha(), h.beta()});
    if (e1 <= 1e-8 * scale || e2 <= 0.35 * e1) {
        return;
    }
    std::ostringstream os;
    os << "TimeDependentHamiltonian: derivative evaluator inconsistent with finite differences at t=" << t
       << " (errors " << e1 << ", " << e2 << ")";
    throw ValidationError(os.str());
}

}  // namespace

TimeDependentHamiltonian::TimeDependentHamiltonian(Index dim, Evaluator evaluator, Options options)
    : dim_(dim),
      evaluator_(std::move(evaluator)),
      derivative_(std::move(options.derivative)),
      horizon_(options.horizon),
      time_independent_(options.time_independent) {
    if (dim_ <= 0) {
        throw ValidationError("TimeDependentHamiltonian: dimension must be positive");
    }
    if (!evaluator_) {
        throw ValidationError("TimeDependentHamiltonian: missing evaluator");
    }
    if (!(horizon_ > 0.0) || !std::isfinite(horizon_)) {
        throw ValidationError("TimeDependentHamiltonian: horizon must be positive and finite");
    }
    if (options.alpha && !(*options.alpha >= 0.0)) {
        throw ValidationError("TimeDependentHamiltonian: alpha must be non-negative");
    }
    if (options.beta && !(*options.beta >= 0.0)) {
        throw ValidationError("TimeDependentHamiltonian: beta must be non-negative");
    }
    require_same_dim((*this)(0.0).dim(), dim_, "TimeDependentHamiltonian evaluator");

    if (time_independent_) {
        const double norm = spectral_norm((*this)(0.0).matrix());
        alpha_ = options.alpha.value_or(norm);
        beta_ = options.beta.value_or(0.0);
        if (norm > alpha_ * (1.0 + kAlphaSlack)) {
            throw ValidationError("TimeDependentHamiltonian: ||H|| exceeds declared alpha");
        }
        return;
    }

    if (options.alpha) {
        alpha_ = *options.alpha;
        for (int i = 0; i < kSpotChecks; ++i) {
            const double t = sample_time(horizon_, i, kSpotChecks);
            if (spectral_norm((*this)(t).matrix()) > alpha_ * (1.0 + kAlphaSlack)) {
                std::ostringstream os;
                os << "TimeDependentHamiltonian: ||H(" << t << ")|| exceeds declared alpha " << alpha_;
                throw ValidationError(os.str());
            }
        }
    } else {
        double peak = 0.0;
        for (int i = 0; i < kBoundSamples; ++i) {
            peak = std::max(peak, spectral_norm((*this)(sample_time(horizon_, i, kBoundSamples)).matrix()));
        }
        alpha_ = kBoundInflation * peak;
    }

    if (options.beta) {
        beta_ = *options.beta;
    } else {
        double peak = 0.0;
        for (int i = 0; i < kBoundSamples; ++i) {
            peak = std::max(peak, spectral_norm(derivative(sample_time(horizon_, i, kBoundSamples)).matrix()));
        }
        beta_ = kBoundInflation * peak;
    }

    if (derivative_) {
        // Step well below the oscillation time scale alpha / beta.
        const double timescale = beta_ > 0.0 ? std::max(alpha_, 1e-3) / beta_ : 1.0;
        const double delta = 1e-2 * std::min({1.0, timescale, horizon_});
        check_derivative(*this, 0.3 * horizon_, delta);
        check_derivative(*this, 0.7 * horizon_, delta);
    }
}

TimeDependentHamiltonian TimeDependentHamiltonian::constant(const HermitianOperator& h, double horizon) {
    Matrix m = h.matrix();
    const Index dim = h.dim();
    Options options;
    options.horizon = horizon;
    options.time_independent = true;
    options.derivative = [dim](double) { return Matrix(Matrix::Zero(dim, dim)); };
    return TimeDependentHamiltonian(dim, [m](double) { return m; }, std::move(options));
}

HermitianOperator TimeDependentHamiltonian::operator()(double t) const {
    Matrix m = evaluator_(t);
    if (m.rows() != dim_ || m.cols() != dim_) {
        throw DimensionMismatch(m.rows(), dim_, "TimeDependentHamiltonian evaluation");
    }
    return HermitianOperator(std::move(m));
}

HermitianOperator TimeDependentHamiltonian::derivative(double t) const {
    if (derivative_) {
        return HermitianOperator(derivative_(t));
    }
    const double delta = 1e-6 * std::max(1.0, std::abs(t));
    return HermitianOperator(
        hermitian_part((evaluator_(t + delta) - evaluator_(t - delta)) / (2.0 * delta)));
}

StateVector::StateVector(Vector amplitudes) : amplitudes_(std::move(amplitudes)) {
    if (amplitudes_.size() == 0) {
        throw ValidationError("StateVector: empty");
    }
    if (std::abs(amplitudes_.norm() - 1.0) > kTolerance) {
        throw ValidationError("StateVector: amplitudes are not unit norm");
    }
}

struct SplitSystem::State {
    HermitianOperator a;
    HermitianSpectrum spectrum;
    TimeDependentHamiltonian b;
    double alpha_b;
    double beta_b;
    double alpha_ab;
    Matrix b_eig_cached;  // only when B is constant

    Matrix rotate(const Matrix& m) const {
        return hermitian_part(spectrum.vectors().adjoint() * m * spectrum.vectors());
    }
    Matrix b_eig(double t) const { return b.time_independent() ? b_eig_cached : rotate(b(t).matrix()); }
};

SplitSystem::SplitSystem(const HermitianOperator& a, TimeDependentHamiltonian b, Bounds bounds) {
    require_same_dim(a.dim(), b.dim(), "SplitSystem");
    HermitianSpectrum spectrum(a);
    const double a_norm = spectral_norm(a.matrix());
    if (spectral_norm(Matrix(a.matrix() - spectrum.reconstruct())) > 1e-10 * std::max(a_norm, 1e-300)) {
        throw FactorizationError("SplitSystem: spectral reconstruction of A failed",
                                 spectral_norm(Matrix(a.matrix() - spectrum.reconstruct())));
    }

    const double alpha_b = bounds.alpha_b.value_or(b.alpha());
    const double beta_b = bounds.beta_b.value_or(b.beta());
    double alpha_ab = 0.0;
    if (bounds.alpha_ab) {
        alpha_ab = *bounds.alpha_ab;
    } else if (b.time_independent()) {
        alpha_ab = spectral_norm(commutator(a.matrix(), b(0.0).matrix()));
    } else {
        for (int i = 0; i < kBoundSamples; ++i) {
            const double t = sample_time(b.horizon(), i, kBoundSamples);
            alpha_ab = std::max(alpha_ab, spectral_norm(commutator(a.matrix(), b(t).matrix())));
        }
        alpha_ab *= kBoundInflation;
    }

    auto state = std::make_shared<State>(State{a, std::move(spectrum), std::move(b), alpha_b, beta_b, alpha_ab, {}});
    if (state->b.time_independent()) {
        state->b_eig_cached = state->rotate(state->b(0.0).matrix());
    }
    state_ = std::move(state);
}

Index SplitSystem::dim() const { return state_->a.dim(); }
double SplitSystem::horizon() const { return state_->b.horizon(); }
const HermitianOperator& SplitSystem::a() const { return state_->a; }
const HermitianSpectrum& SplitSystem::a_spectrum() const { return state_->spectrum; }
const TimeDependentHamiltonian& SplitSystem::b() const { return state_->b; }
double SplitSystem::alpha_b() const { return state_->alpha_b; }
double SplitSystem::beta_b() const { return state_->beta_b; }
double SplitSystem::alpha_ab() const { return state_->alpha_ab; }

Matrix SplitSystem::b_in_eigenbasis(double t) const { return state_->b_eig(t); }

TimeDependentHamiltonian SplitSystem::full_hamiltonian() const {
    auto state = state_;
    TimeDependentHamiltonian::Options options;
    options.horizon = horizon();
    options.alpha = spectral_norm(state->a.matrix()) + state->alpha_b;
    options.beta = state->beta_b;
    options.time_independent = state->b.time_independent();
    options.derivative = [state](double t) { return state->b.derivative(t).matrix(); };
    return TimeDependentHamiltonian(
        dim(), [state](double t) { return Matrix(state->a.matrix() + state->b(t).matrix()); },
        std::move(options));
}

namespace {

// Conjugation by diag(e^{i w t}) of a matrix given in the eigenbasis.
Matrix conjugate_by_phases(const Matrix& m, const RealVector& w, double t) {
    Vector p(w.size());
    for (Index i = 0; i < w.size(); ++i) {
        p(i) = std::exp(kI * (w(i) * t));
    }
    return p.asDiagonal() * m * p.conjugate().asDiagonal();
}

}  // namespace

TimeDependentHamiltonian SplitSystem::interaction_hamiltonian() const {
    auto state = state_;
    TimeDependentHamiltonian::Options options;
    options.horizon = horizon();
    options.alpha = state->alpha_b;
    options.beta = state->alpha_ab + state->beta_b;
    options.derivative = [state](double t) {
        const RealVector& w = state->spectrum.values();
        const Matrix bt = state->b_eig(t);
        Matrix rate(bt.rows(), bt.cols());
        for (Index n = 0; n < bt.cols(); ++n) {
            for (Index m = 0; m < bt.rows(); ++m) {
                rate(m, n) = kI * (w(m) - w(n)) * bt(m, n);
            }
        }
        if (!state->b.time_independent()) {
            rate += state->rotate(state->b.derivative(t).matrix());
        }
        const Matrix& v = state->spectrum.vectors();
        return Matrix(hermitian_part(v * conjugate_by_phases(rate, w, t) * v.adjoint()));
    };
    return TimeDependentHamiltonian(
        dim(),
        [state](double t) {
            const Matrix& v = state->spectrum.vectors();
            return Matrix(hermitian_part(
                v * conjugate_by_phases(state->b_eig(t), state->spectrum.values(), t) * v.adjoint()));
        },
        std::move(options));
}

UnitaryMatrix fast_forward(const SplitSystem& system, double s) { return system.a_spectrum().exp(s); }

HermitianOperator interaction_hamiltonian(const SplitSystem& system, double t) {
    const Matrix& v = system.a_spectrum().vectors();
    return HermitianOperator(hermitian_part(
        v * conjugate_by_phases(system.b_in_eigenbasis(t), system.a_spectrum().values(), t) * v.adjoint()));
}

namespace {

void require_grid(const Grid& grid, const char* what) {
    if (grid.n < 4) {
        throw ValidationError(std::string(what) + ": grid size must be >= 4");
    }
    if (!(grid.hi > grid.lo) || !std::isfinite(grid.hi - grid.lo)) {
        throw ValidationError(std::string(what) + ": invalid domain");
    }
}

}  // namespace

HermitianOperator build_fd_laplacian(const Grid& grid) {
    require_grid(grid, "build_fd_laplacian");
    const Index n = grid.n;
    const double inv_dx2 = 1.0 / (grid.dx() * grid.dx());
    Matrix lap = Matrix::Zero(n, n);
    for (Index j = 0; j < n; ++j) {
        lap(j, j) = 2.0 * inv_dx2;
        lap(j, (j + 1) % n) = -inv_dx2;
        lap(j, (j + n - 1) % n) = -inv_dx2;
    }
    return HermitianOperator(std::move(lap));
}

RealVector fd_laplacian_eigenvalues(const Grid& grid) {
    require_grid(grid, "fd_laplacian_eigenvalues");
    RealVector out(grid.n);
    const double inv_dx2 = 1.0 / (grid.dx() * grid.dx());
    for (Index k = 0; k < grid.n; ++k) {
        out(k) = 2.0 * (1.0 - std::cos(2.0 * std::numbers::pi * static_cast<double>(k) /
                                       static_cast<double>(grid.n))) *
                 inv_dx2;
    }
    return out;
}

HermitianOperator build_potential(const Grid& grid, const std::function<double(double)>& potential) {
    require_grid(grid, "build_potential");
    Matrix v = Matrix::Zero(grid.n, grid.n);
    for (Index j = 0; j < grid.n; ++j) {
        const double value = potential(grid.x(j));
        if (!std::isfinite(value)) {
            std::ostringstream os;
            os << "build_potential: non-finite value at x=" << grid.x(j);
            throw ValidationError(os.str());
        }
        v(j, j) = value;
    }
    return HermitianOperator(std::move(v));
}

StateVector build_wavepacket(const Grid& grid, double center, double width, double frequency) {
    require_grid(grid, "build_wavepacket");
    Vector psi(grid.n);
    for (Index j = 0; j < grid.n; ++j) {
        const double y = grid.x(j) - center;
        psi(j) = std::exp(-width * y * y) * std::exp(kI * (frequency * y));
    }
    const double norm = psi.norm();
    if (!(norm > 0.0) || !std::isfinite(norm)) {
        throw ValidationError("build_wavepacket: wavepacket has zero or non-finite norm on the grid");
    }
    return StateVector(psi / norm);
}

SplitSystem schrodinger_system(const Grid& grid, const std::function<double(double)>& potential,
                               double horizon) {
    const HermitianOperator v = build_potential(grid, potential);
    SplitSystem::Bounds bounds;
    bounds.alpha_b = max_abs(v.matrix());
    bounds.beta_b = 0.0;
    return SplitSystem(build_fd_laplacian(grid), TimeDependentHamiltonian::constant(v, horizon), bounds);
}

double cos4x(double x) { return std::cos(4.0 * x); }

}  // namespace qhop
