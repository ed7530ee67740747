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

#include <functional>
#include <memory>
#include <numbers>
#include <optional>

#include "qhop/operator_core.hpp"

namespace qhop {

/// Number of uniform samples used when a bound is measured instead of declared.
inline constexpr int kBoundSamples = 64;
/// Safety factor applied to sampled maxima.
inline constexpr double kBoundInflation = 1.05;

/// t -> H(t) on [0, horizon] with declared or measured bounds
///   alpha >= max ||H(t)||,  beta >= max ||H'(t)||.
///
/// Evaluators must be pure. Without an analytic derivative, H'(t) is a central
/// difference with step 1e-6 * max(1, |t|).
class TimeDependentHamiltonian {
  public:
    using Evaluator = std::function<Matrix(double)>;

    struct Options {
        double horizon = 1.0;
        std::optional<double> alpha;
        std::optional<double> beta;
        Evaluator derivative;
        bool time_independent = false;
    };

    TimeDependentHamiltonian(Index dim, Evaluator evaluator, Options options);

    static TimeDependentHamiltonian constant(const HermitianOperator& h, double horizon = 1.0);

    Index dim() const { return dim_; }
    double horizon() const { return horizon_; }
    double alpha() const { return alpha_; }
    double beta() const { return beta_; }
    bool time_independent() const { return time_independent_; }
    bool has_analytic_derivative() const { return static_cast<bool>(derivative_); }

    HermitianOperator operator()(double t) const;
    HermitianOperator derivative(double t) const;

  private:
    Index dim_;
    Evaluator evaluator_;
    Evaluator derivative_;
    double horizon_;
    double alpha_ = 0.0;
    double beta_ = 0.0;
    bool time_independent_;
};

/// Unit-norm state (2-norm within 1e-12 of one).
class StateVector {
  public:
    static constexpr double kTolerance = 1e-12;

    explicit StateVector(Vector amplitudes);

    Index dim() const { return amplitudes_.size(); }
    const Vector& amplitudes() const { return amplitudes_; }

  private:
    Vector amplitudes_;
};

/// H(t) = A + B(t) with A time independent and fast-forwardable through its
/// precomputed spectrum.
class SplitSystem {
  public:
    struct Bounds {
        std::optional<double> alpha_b;
        std::optional<double> beta_b;
        std::optional<double> alpha_ab;
    };

    SplitSystem(const HermitianOperator& a, TimeDependentHamiltonian b, Bounds bounds = {});

    Index dim() const;
    double horizon() const;
    const HermitianOperator& a() const;
    const HermitianSpectrum& a_spectrum() const;
    const TimeDependentHamiltonian& b() const;
    double alpha_b() const;
    double beta_b() const;
    double alpha_ab() const;

    /// V^† B(t) V in the eigenbasis of A (cached when B is constant).
    Matrix b_in_eigenbasis(double t) const;

    /// A + B(t) in the Schrödinger picture.
    TimeDependentHamiltonian full_hamiltonian() const;
    /// H_I(t) = e^{iAt} B(t) e^{-iAt} with analytic derivative
    /// e^{iAt}(i[A, B(t)] + B'(t))e^{-iAt}; alpha = alpha_B, beta = alpha_AB + beta_B.
    TimeDependentHamiltonian interaction_hamiltonian() const;

  private:
    struct State;
    std::shared_ptr<const State> state_;
};

/// e^{-iAs} via the spectrum of A.
UnitaryMatrix fast_forward(const SplitSystem& system, double s);

/// e^{iAt} B(t) e^{-iAt}.
HermitianOperator interaction_hamiltonian(const SplitSystem& system, double t);

/// Left-closed periodic grid x_j = lo + j dx, dx = (hi - lo) / n.
struct Grid {
    Index n;
    double lo = -std::numbers::pi;
    double hi = std::numbers::pi;

    double dx() const { return (hi - lo) / static_cast<double>(n); }
    double x(Index j) const { return lo + static_cast<double>(j) * dx(); }
};

/// Periodic second-order finite-difference -d^2/dx^2 (stencil (-1, 2, -1)/dx^2).
HermitianOperator build_fd_laplacian(const Grid& grid);
/// Analytic spectrum 2(1 - cos(2 pi k / N)) / dx^2, k = 0..N-1.
RealVector fd_laplacian_eigenvalues(const Grid& grid);

HermitianOperator build_potential(const Grid& grid, const std::function<double(double)>& potential);

/// Samples of exp(-width (x - center)^2) exp(i k (x - center)), normalized.
StateVector build_wavepacket(const Grid& grid, double center, double width, double frequency);

/// A = FD Laplacian, B = diag V(x_j) with exact alpha_B = max |V(x_j)|.
SplitSystem schrodinger_system(const Grid& grid, const std::function<double(double)>& potential,
                               double horizon = 1.0);

double cos4x(double x);

}  // namespace qhop
