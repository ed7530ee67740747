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
#include <optional>
#include <vector>

#include "qhop/hamiltonian.hpp"
#include "qhop/quadrature.hpp"

namespace qhop {

/// [0, T] split into L equal segments of length h = T / L.
struct StepPlan {
    double total_time;
    int segments;
    double step;
    QuadratureRule rule;

    static StepPlan make(double total_time, int segments, QuadratureRule rule = {});
    /// Segment count round(T / h); rejects h that does not divide T.
    static StepPlan from_step(double total_time, double step, QuadratureRule rule = {});
};

struct ReferenceResult {
    UnitaryMatrix propagator;
    double micro_step;
    int halvings;
    double last_change;
};

inline constexpr int kReferenceMaxHalvings = 20;

/// Time-ordered U(t1, t0) from products of midpoint exponentials
/// exp(-i H(mid) delta). delta is halved and the sequence Richardson
/// extrapolated (the midpoint product has an even error expansion) until two
/// successive extrapolants differ by less than tol in spectral norm; the
/// result is projected onto the nearest unitary. Constant H is exponentiated
/// directly.
ReferenceResult reference_propagator(const TimeDependentHamiltonian& h, double t0, double t1, double tol);

/// exp(-i h sum_k w_k H(t_k)) for step j.
UnitaryMatrix qhop_step(const TimeDependentHamiltonian& h, const StepPlan& plan, int j);

/// I - i h sum_k w_k H(t_k); not unitary. Requires alpha h <= 1/2.
LinearOperator dyson1_step(const TimeDependentHamiltonian& h, const StepPlan& plan, int j);

/// qHOP and first-order Dyson in the interaction picture of A + B(t), worked
/// in the eigenbasis of A. Only e^{iAs} with |s| <= h enters the quadrature sum:
///
///   U_1 = e^{iAjh} exp(-ih sum_k w_k e^{iA s_k} B(jh + s_k) e^{-iA s_k}) e^{-iAjh}.
///
/// For constant B the averaged matrix does not depend on j and is built once.
class InteractionPicturePropagator {
  public:
    InteractionPicturePropagator(SplitSystem system, StepPlan plan);

    const StepPlan& plan() const { return plan_; }
    const SplitSystem& system() const { return system_; }

    /// sum_k w_k H_I(jh + s_k) conjugated into the frame e^{-iAjh} (.) e^{iAjh},
    /// expressed in the eigenbasis of A.
    Matrix averaged_in_eigenbasis(int j) const;

    UnitaryMatrix qhop_step(int j) const;
    LinearOperator dyson1_step(int j) const;

    /// Schrödinger-picture approximations of U(T, 0), i.e. e^{-iAT} times the
    /// ordered product of interaction-picture steps.
    LinearOperator evolve_qhop() const;
    LinearOperator evolve_dyson1() const;

  private:
    const Matrix& constant_average() const;
    Matrix product_in_eigenbasis(const std::function<Matrix(int)>& step) const;
    void require_step(int j) const;

    SplitSystem system_;
    StepPlan plan_;
    std::vector<QuadratureNode> offsets_;
    std::optional<Matrix> constant_average_;
    std::optional<HermitianSpectrum> constant_spectrum_;
};

UnitaryMatrix qhop_interaction_step(const SplitSystem& system, const StepPlan& plan, int j);

/// Exact interaction-picture step e^{iA(j+1)h} e^{-i(A+B)h} e^{-iAjh}; constant B only.
UnitaryMatrix interaction_reference_step(const SplitSystem& system, const StepPlan& plan, int j);

/// Which exponential acts first in the first-order product.
enum class TrotterOrdering {
    kAThenB,  // e^{-iBh} e^{-iAh}
    kBThenA,  // e^{-iAh} e^{-iBh}
};

UnitaryMatrix trotter1_step(const SplitSystem& system, double h, TrotterOrdering ordering = TrotterOrdering::kAThenB);
/// e^{-iAh/2} e^{-iBh} e^{-iAh/2}.
UnitaryMatrix trotter2_step(const SplitSystem& system, double h);

using StepFactory = std::function<LinearOperator(int)>;

/// step(L-1) ... step(1) step(0).
LinearOperator compose(const StepFactory& step, const StepPlan& plan);

/// A^n by repeated squaring.
Matrix matrix_power(const Matrix& a, int n);

double operator_error(const Matrix& approx, const Matrix& exact);
double vector_error(const Matrix& approx, const Matrix& exact, const StateVector& psi0);

}  // namespace qhop
