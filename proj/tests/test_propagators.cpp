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

#include <gtest/gtest.h>

#include "qhop/resources.hpp"
#include "test_util.hpp"

using namespace qhop;
using namespace qhop::testing;

namespace {

SplitSystem random_split(std::mt19937_64& rng, Index n, double b_scale = 1.0) {
    return SplitSystem(HermitianOperator(random_hermitian(n, rng)),
                       TimeDependentHamiltonian::constant(HermitianOperator(b_scale * random_hermitian(n, rng)), 4.0));
}

double dist(const Matrix& a, const Matrix& b) { return spectral_norm(Matrix(a - b)); }

}  // namespace

TEST(step_plan, validation) {
    const StepPlan p = StepPlan::make(0.5, 8);
    EXPECT_DOUBLE_EQ(p.step, 0.0625);
    EXPECT_EQ(StepPlan::from_step(0.5, 1.0 / 64).segments, 32);
    EXPECT_THROW(StepPlan::make(0.5, 0), ValidationError);
    EXPECT_THROW(StepPlan::from_step(0.5, 0.3), ValidationError);
}

TEST(reference_propagator, constant_hamiltonian) {
    std::mt19937_64 rng(41);
    const HermitianOperator h(random_hermitian(4, rng));
    const auto r = reference_propagator(TimeDependentHamiltonian::constant(h), 0.2, 0.9, 1e-10);
    EXPECT_LT(dist(r.propagator.matrix(), herm_exp(h, 0.7).matrix()), 1e-10);
}

TEST(reference_propagator, commuting_family) {
    std::mt19937_64 rng(42);
    const Matrix h0 = random_hermitian(4, rng);
    TimeDependentHamiltonian::Options options;
    options.derivative = [h0](double t) { return Matrix(2.0 * t * h0); };
    const TimeDependentHamiltonian h(4, [h0](double t) { return Matrix((1.0 + t * t) * h0); }, options);
    const auto r = reference_propagator(h, 0.0, 1.0, 1e-10);
    // int_0^1 (1 + t^2) dt = 4/3.
    EXPECT_LT(dist(r.propagator.matrix(), herm_exp(HermitianOperator(h0), 4.0 / 3.0).matrix()), 1e-9);
}

TEST(reference_propagator, tolerance_self_consistency) {
    std::mt19937_64 rng(43);
    const auto h = oscillating_hamiltonian(random_hermitian(4, rng), random_hermitian(4, rng),
                                           random_hermitian(4, rng), 3.0, 1.0);
    const auto fine = reference_propagator(h, 0.0, 0.5, 1e-10);
    const auto coarse = reference_propagator(h, 0.0, 0.5, 1e-8);
    EXPECT_LT(dist(fine.propagator.matrix(), coarse.propagator.matrix()), 1e-8);
    EXPECT_GT(fine.halvings, 0);
}

TEST(qhop_step, constant_and_single_node) {
    std::mt19937_64 rng(44);
    const HermitianOperator h0(random_hermitian(4, rng));
    const auto hc = TimeDependentHamiltonian::constant(h0);
    const StepPlan plan = StepPlan::make(1.0, 10, {QuadratureKind::kMidpoint, 7});
    EXPECT_LT(dist(qhop_step(hc, plan, 3).matrix(), herm_exp(h0, 0.1).matrix()), 1e-12);

    const auto h = oscillating_hamiltonian(random_hermitian(4, rng), random_hermitian(4, rng),
                                           random_hermitian(4, rng), 2.0, 1.0);
    const StepPlan left = StepPlan::make(1.0, 10, {QuadratureKind::kRiemannLeft, 1});
    EXPECT_LT(dist(qhop_step(h, left, 4).matrix(), herm_exp(h(0.4), 0.1).matrix()), 1e-12);
    EXPECT_THROW(qhop_step(h, left, 10), ValidationError);
}

TEST(qhop_step, local_error_bound_on_random_instances) {
    std::mt19937_64 rng(45);
    std::uniform_real_distribution<double> freq(0.5, 8.0);
    for (int trial = 0; trial < 10; ++trial) {
        const auto h = oscillating_hamiltonian(random_hermitian(3, rng), random_hermitian(3, rng),
                                               random_hermitian(3, rng), freq(rng), 1.0);
        for (int m : {1, 4}) {
            const StepPlan plan = StepPlan::make(1.0, 8, {QuadratureKind::kRiemannLeft, m});
            const int j = trial % 8;
            const double t0 = j * plan.step;
            const auto ref = reference_propagator(h, t0, t0 + plan.step, 1e-12);
            const double err = dist(qhop_step(h, plan, j).matrix(), ref.propagator.matrix());
            double comm = 0.0;
            double deriv = 0.0;
            for (int a = 0; a <= 32; ++a) {
                const double ta = t0 + plan.step * a / 32;
                deriv = std::max(deriv, spectral_norm(h.derivative(ta).matrix()));
                for (int b = a + 1; b <= 32; ++b) {
                    const double tb = t0 + plan.step * b / 32;
                    comm = std::max(comm, spectral_norm(commutator(h(ta).matrix(), h(tb).matrix())));
                }
            }
            EXPECT_LE(err, 1.05 * local_error_bound(plan.step, m, comm, deriv));
        }
    }
}

TEST(interaction_step, zero_a_and_first_step) {
    std::mt19937_64 rng(46);
    const auto b = oscillating_hamiltonian(random_hermitian(4, rng), random_hermitian(4, rng),
                                           random_hermitian(4, rng), 2.0, 1.0);
    const SplitSystem s(HermitianOperator::zero(4), b);
    const StepPlan plan = StepPlan::make(1.0, 5, {QuadratureKind::kMidpoint, 3});
    for (int j : {0, 2, 4}) {
        EXPECT_LT(dist(qhop_interaction_step(s, plan, j).matrix(), qhop_step(b, plan, j).matrix()), 1e-10);
    }
    const SplitSystem s2(HermitianOperator(random_hermitian(4, rng)), b);
    const StepPlan left = StepPlan::make(1.0, 5, {QuadratureKind::kRiemannLeft, 1});
    EXPECT_LT(dist(qhop_interaction_step(s2, left, 0).matrix(), herm_exp(b(0.0), 0.2).matrix()), 1e-10);
}

TEST(interaction_step, matches_direct_interaction_average) {
    std::mt19937_64 rng(47);
    for (bool constant_b : {true, false}) {
        const HermitianOperator a(3.0 * random_hermitian(5, rng));
        const TimeDependentHamiltonian b =
            constant_b ? TimeDependentHamiltonian::constant(HermitianOperator(random_hermitian(5, rng)))
                       : oscillating_hamiltonian(random_hermitian(5, rng), random_hermitian(5, rng),
                                                 random_hermitian(5, rng), 2.0, 1.0);
        const SplitSystem s(a, b);
        const StepPlan plan = StepPlan::make(1.0, 4, {QuadratureKind::kTrapezoid, 6});
        for (int j = 0; j < 4; ++j) {
            Matrix avg = Matrix::Zero(5, 5);
            for (const auto& node : nodes_weights(plan.rule, j, plan.step)) {
                avg += node.weight * interaction_hamiltonian(s, node.time).matrix();
            }
            const Matrix direct = herm_exp(HermitianOperator(Matrix(0.5 * (avg + avg.adjoint()))), plan.step).matrix();
            EXPECT_LT(dist(qhop_interaction_step(s, plan, j).matrix(), direct), 1e-10);
        }
        // Schrödinger-frame evolution is e^{-iAT} times the ordered interaction steps.
        const InteractionPicturePropagator prop(s, plan);
        const LinearOperator steps = compose([&](int j) { return LinearOperator(prop.qhop_step(j)); }, plan);
        EXPECT_LT(dist(prop.evolve_qhop().matrix(), fast_forward(s, 1.0).matrix() * steps.matrix()), 1e-10);
    }
}

TEST(trotter, commuting_pair_is_exact) {
    Matrix a = Matrix::Zero(3, 3);
    Matrix b = Matrix::Zero(3, 3);
    for (Index i = 0; i < 3; ++i) {
        a(i, i) = i + 0.5;
        b(i, i) = 1.0 - i;
    }
    const SplitSystem s(HermitianOperator(a), TimeDependentHamiltonian::constant(HermitianOperator(b)));
    const Matrix exact = herm_exp(HermitianOperator(Matrix(a + b)), 0.3).matrix();
    EXPECT_LT(dist(trotter1_step(s, 0.3).matrix(), exact), 1e-12);
    EXPECT_LT(dist(trotter2_step(s, 0.3).matrix(), exact), 1e-12);
}

TEST(trotter, second_order_local_slope) {
    std::mt19937_64 rng(48);
    const SplitSystem s = random_split(rng, 8);
    const HermitianOperator full(Matrix(s.a().matrix() + s.b()(0.0).matrix()));
    std::vector<double> hs;
    std::vector<double> errs;
    for (int k = 4; k <= 8; ++k) {
        const double h = std::ldexp(1.0, -k);
        hs.push_back(h);
        errs.push_back(dist(trotter2_step(s, h).matrix(), herm_exp(full, h).matrix()));
    }
    EXPECT_NEAR(loglog_slope(hs, errs), 3.0, 0.15);
}

TEST(trotter, rejects_time_dependent_b) {
    std::mt19937_64 rng(49);
    const auto b = oscillating_hamiltonian(random_hermitian(3, rng), random_hermitian(3, rng),
                                           random_hermitian(3, rng), 1.0, 1.0);
    const SplitSystem s(HermitianOperator(random_hermitian(3, rng)), b);
    EXPECT_THROW(trotter1_step(s, 0.1), ValidationError);
    EXPECT_THROW(trotter2_step(s, 0.1), ValidationError);
}

TEST(trotter, equivalence_identities) {
    std::mt19937_64 rng(50);
    for (const SplitSystem& s : {random_split(rng, 16), schrodinger_system(Grid{32}, cos4x, 0.5)}) {
        const int segments = 8;
        const double t = 0.5;
        const StepPlan mid = StepPlan::make(t, segments, {QuadratureKind::kMidpoint, 1});
        const StepPlan left = StepPlan::make(t, segments, {QuadratureKind::kRiemannLeft, 1});
        const double h = mid.step;
        const Matrix t2 = matrix_power(trotter2_step(s, h).matrix(), segments);
        const Matrix t1 = matrix_power(trotter1_step(s, h, TrotterOrdering::kBThenA).matrix(), segments);
        const LinearOperator q2 = compose([&](int j) { return LinearOperator(qhop_interaction_step(s, mid, j)); }, mid);
        const LinearOperator q1 =
            compose([&](int j) { return LinearOperator(qhop_interaction_step(s, left, j)); }, left);
        EXPECT_LT(dist(fast_forward(s, t).matrix() * q2.matrix(), t2), 1e-10);
        EXPECT_LT(dist(fast_forward(s, t).matrix() * q1.matrix(), t1), 1e-10);
        EXPECT_LT(dist(InteractionPicturePropagator(s, mid).evolve_qhop().matrix(), t2), 1e-10);
    }
}

TEST(dyson1, zero_and_constant_cases) {
    const auto zero = TimeDependentHamiltonian::constant(HermitianOperator::zero(3));
    EXPECT_EQ(max_abs(dyson1_step(zero, StepPlan::make(1.0, 4), 0).matrix() - Matrix::Identity(3, 3)), 0.0);

    std::mt19937_64 rng(51);
    const HermitianOperator h(random_hermitian(4, rng));
    const auto hc = TimeDependentHamiltonian::constant(h);
    const double alpha = spectral_norm(h.matrix());
    for (int l : {20, 40}) {
        const StepPlan plan = StepPlan::make(1.0, static_cast<int>(std::ceil(l * alpha)));
        const double step = alpha * plan.step;
        const Matrix w = dyson1_step(hc, plan, 0).matrix();
        EXPECT_LT(dist(w, Matrix(Matrix::Identity(4, 4) - kI * plan.step * h.matrix())), 1e-14);
        EXPECT_LE(dist(w, herm_exp(h, plan.step).matrix()), step * step);
        EXPECT_LE(spectral_norm(w), 1.0 + step * step);
    }
    EXPECT_THROW(dyson1_step(hc, StepPlan::make(1.0, 1), 0), ValidationError);
}

TEST(dyson1, first_order_global_slope) {
    std::mt19937_64 rng(52);
    const auto h = oscillating_hamiltonian(0.5 * random_hermitian(3, rng), 0.5 * random_hermitian(3, rng),
                                           0.5 * random_hermitian(3, rng), 2.0, 0.5);
    const Matrix exact = reference_propagator(h, 0.0, 0.5, 1e-11).propagator.matrix();
    std::vector<double> hs;
    std::vector<double> errs;
    for (int l : {16, 32, 64, 128}) {
        const StepPlan plan = StepPlan::make(0.5, l, {QuadratureKind::kTrapezoid, 16});
        hs.push_back(plan.step);
        errs.push_back(dist(compose([&](int j) { return dyson1_step(h, plan, j); }, plan).matrix(), exact));
    }
    EXPECT_NEAR(loglog_slope(hs, errs), 1.0, 0.15);
}

TEST(compose, trivial_cases) {
    std::mt19937_64 rng(53);
    const Matrix m = random_matrix(3, rng);
    EXPECT_EQ(max_abs(compose([&](int) { return LinearOperator(m); }, StepPlan::make(1.0, 1)).matrix() - m), 0.0);
    EXPECT_EQ(max_abs(compose([](int) { return LinearOperator::identity(3); }, StepPlan::make(1.0, 5)).matrix() -
                      Matrix::Identity(3, 3)),
              0.0);
}

TEST(compose, ordered_product) {
    std::mt19937_64 rng(54);
    const std::vector<Matrix> ms{random_matrix(3, rng), random_matrix(3, rng), random_matrix(3, rng)};
    const Matrix got = compose([&](int j) { return LinearOperator(ms[j]); }, StepPlan::make(1.0, 3)).matrix();
    EXPECT_LT(max_abs(got - ms[2] * ms[1] * ms[0]), 1e-12);
}

TEST(compose, qhop_error_accumulates_linearly) {
    std::mt19937_64 rng(55);
    const auto h = oscillating_hamiltonian(random_hermitian(3, rng), random_hermitian(3, rng),
                                           random_hermitian(3, rng), 4.0, 0.5);
    const StepPlan plan = StepPlan::make(0.5, 16, {QuadratureKind::kRiemannLeft, 4});
    const Matrix exact = reference_propagator(h, 0.0, 0.5, 1e-11).propagator.matrix();
    const double global = dist(compose([&](int j) { return LinearOperator(qhop_step(h, plan, j)); }, plan).matrix(),
                               exact);
    double local_sum = 0.0;
    for (int j = 0; j < plan.segments; ++j) {
        const auto ref = reference_propagator(h, j * plan.step, (j + 1) * plan.step, 1e-12);
        local_sum += dist(qhop_step(h, plan, j).matrix(), ref.propagator.matrix());
    }
    EXPECT_LE(global, local_sum + 1e-10);
    EXPECT_GT(global, 0.05 * local_sum);
}

TEST(errors, vector_error_below_operator_error) {
    std::mt19937_64 rng(56);
    const Matrix a = random_matrix(6, rng);
    const Matrix b = random_matrix(6, rng);
    EXPECT_EQ(operator_error(a, a), 0.0);
    for (int trial = 0; trial < 5; ++trial) {
        Vector v = random_matrix(6, rng).col(0);
        const StateVector psi(v / v.norm());
        EXPECT_LE(vector_error(a, b, psi), operator_error(a, b) + 1e-12);
    }
}

TEST(matrix_power, matches_repeated_product) {
    std::mt19937_64 rng(57);
    const Matrix a = 0.5 * random_matrix(4, rng);
    Matrix expected = Matrix::Identity(4, 4);
    for (int i = 0; i < 13; ++i) expected = expected * a;
    EXPECT_LT(max_abs(matrix_power(a, 13) - expected), 1e-10 * std::max(1.0, max_abs(expected)));
}
