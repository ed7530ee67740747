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

#include "qhop/resources.hpp"

#include <gtest/gtest.h>

#include "test_util.hpp"

using namespace qhop;
using namespace qhop::testing;

TEST(qhop_plan, first_order_commutator_example) {
    const ResourceEstimate e = qhop_plan({1.0, 1.0, 1, 1.0, 1.0, 1e-2});
    EXPECT_EQ(e.segments, 10);
    EXPECT_DOUBLE_EQ(e.delta, 1e-3);
    // M = 2 max||H'|| / (C h) with h = 0.1.
    EXPECT_EQ(e.nodes, 20);
    EXPECT_NEAR(e.ham_t_queries, 10 * (0.1 + std::log(1e3)), 1e-9);
}

TEST(qhop_plan, quartering_epsilon_doubles_segments) {
    const ResourceEstimate a = qhop_plan({1.0, 3.0, 1, 1.0, 2.0, 4e-2});
    const ResourceEstimate b = qhop_plan({1.0, 3.0, 1, 1.0, 2.0, 1e-2});
    EXPECT_NEAR(static_cast<double>(b.segments), 2.0 * a.segments, 1.0);
}

TEST(qhop_plan, zeroth_order_branch_closed_form) {
    // L = alpha~^2 T^2 / eps.
    const ResourceEstimate e = qhop_plan({1.0, 2.0, 0, 1.0, 3.0, 0.1});
    EXPECT_EQ(e.segments, 180);
}

TEST(qhop_plan, proof_inequality_and_monotonicity) {
    std::mt19937_64 rng(81);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int trial = 0; trial < 200; ++trial) {
        const double eps = std::pow(10.0, -1.0 - 3.0 * u(rng));
        const double t = eps + std::pow(10.0, 2.0 * u(rng));
        const double c = std::pow(10.0, -2.0 + 4.0 * u(rng));
        const int theta = trial % 2;
        const QhopParams p{1.0 + 5.0 * u(rng), c, theta, 10.0 * u(rng), t, eps};
        const ResourceEstimate e = qhop_plan(p);
        EXPECT_LE(plan_error(e, c, theta, t), eps);
        QhopParams looser = p;
        looser.epsilon = std::min(0.99, 2.0 * eps);
        if (looser.epsilon < t) {
            EXPECT_LE(qhop_plan(looser).segments, e.segments);
        }
        QhopParams longer = p;
        longer.total_time = 2.0 * t;
        EXPECT_GE(qhop_plan(longer).segments, e.segments);
        QhopParams bigger = p;
        bigger.prefactor = 2.0 * c;
        EXPECT_GE(qhop_plan(bigger).segments, e.segments);
        QhopParams stronger = p;
        stronger.alpha = 2.0 * p.alpha;
        EXPECT_GE(qhop_plan(stronger).ham_t_queries, e.ham_t_queries);
    }
}

TEST(qhop_plan, rejects_domain_violations) {
    EXPECT_THROW(qhop_plan({1.0, 1.0, 1, 1.0, 1.0, 1.5}), ValidationError);
    EXPECT_THROW(qhop_plan({1.0, 1.0, 1, 1.0, 0.01, 0.1}), ValidationError);
    EXPECT_THROW(qhop_plan({1.0, 1.0, 2, 1.0, 1.0, 0.1}), ValidationError);
    EXPECT_THROW(qhop_plan({1.0, 0.0, 1, 1.0, 1.0, 0.1}), ValidationError);
}

TEST(branch_plan, min_rule_selects_cheaper_branch) {
    const BranchPlan p = qhop_branch_plan({1.0, 4.0, 1.0, 2.0, 10.0, 1e-3});
    const double best = std::min(p.zeroth.ham_t_queries, p.first.ham_t_queries);
    EXPECT_EQ(p.chosen.ham_t_queries, best);
    EXPECT_EQ(p.zeroth.segments, qhop_plan({1.0, 4.0, 0, 2.0, 10.0, 1e-3}).segments);
    EXPECT_EQ(p.first.segments, qhop_plan({1.0, 1.0, 1, 2.0, 10.0, 1e-3}).segments);
}

TEST(interaction_plan, schrodinger_scaling) {
    // C_AB = 2 alpha_B (alpha_AB + beta_B), theta = 1: L ~ T^{3/2} / eps^{1/2}.
    const double alpha_b = 1.0;
    const double alpha_ab = 50.0;
    const double c = 2.0 * alpha_b * alpha_ab;
    const auto plan = [&](double t, double eps) {
        return qhop_interaction_plan({alpha_b, 0.0, alpha_ab, c, 1, t, eps});
    };
    const ResourceEstimate base = plan(4.0, 1e-4);
    const ResourceEstimate eps16 = plan(4.0, 1e-4 / 16.0);
    EXPECT_NEAR(static_cast<double>(eps16.segments) / base.segments, 4.0, 0.01);
    const ResourceEstimate t4 = plan(16.0, 1e-4);
    EXPECT_NEAR(static_cast<double>(t4.segments) / base.segments, 8.0, 0.01);
    EXPECT_GE(base.oa_queries, base.ob_queries);
    int nm = 0;
    while ((1LL << nm) < base.nodes) ++nm;
    EXPECT_DOUBLE_EQ(base.oa_queries, base.ob_queries * std::max(1, nm));
}

TEST(interaction_plan, degenerate_rejected) {
    EXPECT_THROW(qhop_interaction_plan({1.0, 0.0, 0.0, 1.0, 1, 1.0, 0.1}), ValidationError);
}

TEST(interaction_plan, commutator_min_rule_crossover) {
    const double alpha_b = 2.0;
    const double alpha_ab = 3.0;
    const double beta_b = 1.0;
    const double cross = alpha_b / (alpha_ab + beta_b);
    EXPECT_DOUBLE_EQ(interaction_commutator_bound(alpha_b, alpha_ab, beta_b, 0.5 * cross),
                     2.0 * alpha_b * (alpha_ab + beta_b) * 0.5 * cross);
    EXPECT_DOUBLE_EQ(interaction_commutator_bound(alpha_b, alpha_ab, beta_b, 2.0 * cross), 2.0 * alpha_b * alpha_b);
    EXPECT_NEAR(interaction_commutator_bound(alpha_b, alpha_ab, beta_b, cross), 2.0 * alpha_b * alpha_b, 1e-12);
    const BranchPlan p = qhop_interaction_branch_plan(alpha_b, beta_b, alpha_ab, 5.0, 1e-2);
    EXPECT_EQ(p.chosen.ob_queries, std::min(p.zeroth.ob_queries, p.first.ob_queries));
}

TEST(baselines, formula_examples) {
    BaselineParams p;
    p.alpha = 1.0;
    p.total_time = 1.0;
    p.epsilon = 1e-2;
    const ResourceEstimate d = baseline_queries("dyson1", p);
    EXPECT_EQ(d.segments, 100);
    EXPECT_NEAR(d.delta, 1e-4, 1e-18);

    p.norm_integral = 3.0 * 2.0;  // alpha T with alpha = 3, T = 2
    p.total_time = 2.0;
    EXPECT_EQ(baseline_queries("qdrift", p).segments, 3600);

    p.commutator_ab = 128.0;  // ||[A, B]|| = N
    EXPECT_EQ(baseline_queries("trotter1", p).segments, 128 * 4 * 100);

    p.nested_bba = 9.0;
    p.nested_aab = 16.0;
    EXPECT_EQ(baseline_queries("trotter2", p).segments, static_cast<long long>(std::ceil(5.0 * std::pow(2.0, 1.5) * 10.0)));
    EXPECT_THROW(baseline_queries("trotter3", p), ValidationError);
}

TEST(local_error_bound, formula) {
    EXPECT_DOUBLE_EQ(local_error_bound(0.2, 4, 3.0, 5.0), 0.04 / 4.0 * 3.0 + 0.04 / 8.0 * 5.0);
}

TEST(fit_commutator_profile, commuting_family_is_degenerate) {
    std::mt19937_64 rng(82);
    const Matrix h0 = random_hermitian(3, rng);
    TimeDependentHamiltonian::Options options;
    options.derivative = [h0](double t) { return Matrix(std::cos(t) * h0); };
    const TimeDependentHamiltonian h(3, [h0](double t) { return Matrix(std::sin(t) * h0); }, options);
    const CommutatorProfile p = fit_commutator_profile(h, {1e-3, 1e-2, 1e-1, 0.5});
    EXPECT_TRUE(p.degenerate);
    EXPECT_EQ(p.prefactor, 0.0);
}

TEST(fit_commutator_profile, random_split_is_linear_within_envelope) {
    std::mt19937_64 rng(83);
    const HermitianOperator a(20.0 * random_hermitian(6, rng));
    const SplitSystem s(a, TimeDependentHamiltonian::constant(HermitianOperator(random_hermitian(6, rng))));
    const std::vector<double> steps{1e-5, 1e-4, 1e-3, 1e-2};
    const CommutatorProfile p = fit_commutator_profile(s, steps);
    EXPECT_FALSE(p.degenerate);
    EXPECT_NEAR(p.fitted_slope, 1.0, 0.1);
    EXPECT_EQ(p.exponent, 1);
    EXPECT_LE(p.prefactor, 2.0 * s.alpha_b() * (s.alpha_ab() + s.beta_b()) * (1.0 + 1e-9));
}

TEST(fit_commutator_profile, input_validation) {
    EXPECT_THROW(fit_commutator_profile({1e-3, 1e-2, 1e-1}, {1.0, 1.0, 1.0}), ValidationError);
    EXPECT_THROW(fit_commutator_profile({1e-2, 2e-2, 5e-2, 1e-1}, {1.0, 1.0, 1.0, 1.0}), ValidationError);
}
