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

#include <string>
#include <string_view>
#include <vector>

#include "qhop/hamiltonian.hpp"

namespace qhop {

// Formula-level estimates: every big-O is instantiated with constant one,
// logarithms are natural, and counts are rounded up.

/// max ||[., .]|| <= prefactor * h^exponent.
struct CommutatorProfile {
    enum class Provenance { kDeclared, kFitted };

    double prefactor = 0.0;
    int exponent = 1;  // 0 or 1
    Provenance provenance = Provenance::kDeclared;
    bool degenerate = false;  // all measured commutators vanish
    double fitted_slope = 0.0;
    double fitted_prefactor = 0.0;
    std::vector<double> steps;
    std::vector<double> measured;
};

struct ResourceEstimate {
    std::string method;
    long long segments = 0;      // L
    long long nodes = 1;         // M
    double step = 0.0;           // h = T / L
    double delta = 0.0;          // per-step simulation error budget
    double step_error = 0.0;     // per-step total error delta'
    double ham_t_queries = 0.0;  // also the generic "queries" of baselines
    double oa_queries = 0.0;
    double ob_queries = 0.0;
    double gate_count = 0.0;
    int ancillas = 0;
};

struct QhopParams {
    double alpha;           // max ||H||
    double prefactor;       // C_H
    int exponent;           // theta in {0, 1}
    double max_derivative;  // max ||H'||
    double total_time;
    double epsilon;
    int ancillas = 1;  // n_a of the HAM-T oracle
};

ResourceEstimate qhop_plan(const QhopParams& p);

/// Left-hand side L delta / 2 + C T^{2+theta} / (2 L^{1+theta}).
double plan_error(const ResourceEstimate& e, double prefactor, int exponent, double total_time);

struct QhopBranchParams {
    double alpha;
    double window_commutator;      // max_{|s-u|<=h} ||[H(u), H(s)]||, theta = 0 branch
    double derivative_commutator;  // max ||[H'(u), H(s)]||, theta = 1 branch
    double max_derivative;
    double total_time;
    double epsilon;
    int ancillas = 1;
};

struct BranchPlan {
    ResourceEstimate chosen;
    ResourceEstimate zeroth;  // theta = 0
    ResourceEstimate first;   // theta = 1
};

/// Evaluates both commutator branches and keeps the one with fewer HAM-T queries.
BranchPlan qhop_branch_plan(const QhopBranchParams& p);

struct InteractionParams {
    double alpha_b;
    double beta_b;
    double alpha_ab;
    double prefactor;  // C_AB
    int exponent;
    double total_time;
    double epsilon;
    int ancillas = 1;  // n_B
};

ResourceEstimate qhop_interaction_plan(const InteractionParams& p);

/// Both branches C_AB = 2 alpha_B^2 (theta 0) and 2 alpha_B (alpha_AB + beta_B)
/// (theta 1); keeps the one with fewer O_B queries.
BranchPlan qhop_interaction_branch_plan(double alpha_b, double beta_b, double alpha_ab, double total_time,
                                              double epsilon, int ancillas = 1);

/// min{window maximum, h * derivative-commutator maximum}.
double general_commutator_bound(double window_max, double derivative_commutator_max, double h);
/// min{2 alpha_B^2, 2 alpha_B (alpha_AB + beta_B) h}.
double interaction_commutator_bound(double alpha_b, double alpha_ab, double beta_b, double h);

/// (h^2 / 4) max ||[H(tau), H(s)]|| + (h^2 / 2M) max ||H'||.
double local_error_bound(double h, int nodes, double max_commutator, double max_derivative);

enum class BaselineMethod { kTrotter1, kTrotter2, kQdrift, kDyson1 };

BaselineMethod parse_baseline_method(std::string_view name);
std::string_view to_string(BaselineMethod method);

struct BaselineParams {
    double total_time = 1.0;
    double epsilon = 1e-2;
    double commutator_ab = 0.0;    // ||[A, B]||
    double nested_bba = 0.0;       // ||[B, [B, A]]||
    double nested_aab = 0.0;       // ||[A, [A, B]]||
    double norm_integral = 0.0;    // int_0^T ||H||
    double alpha = 0.0;            // max ||H||
};

ResourceEstimate baseline_queries(BaselineMethod method, const BaselineParams& p);
ResourceEstimate baseline_queries(std::string_view method, const BaselineParams& p);

/// Sampled max over windows [t, t + h] of ||[H(tau), H(s)]||.
double sampled_window_commutator(const TimeDependentHamiltonian& h, double step, int windows = 9, int points = 9);
/// Sampled max over t and |u| <= h of ||[B(t), e^{iAu} B(t + u) e^{-iAu}]||.
double sampled_interaction_commutator(const SplitSystem& system, double step, int windows = 9, int points = 9);
/// ||[B(t), e^{iAs} B(t + s) e^{-iAs}]||.
double interaction_commutator(const SplitSystem& system, double t, double s);

inline constexpr int kMinFitSteps = 4;
inline constexpr double kMinFitDecades = 2.0;

/// Log-log least squares of measured commutators against h; exponent snapped
/// to {0, 1} and prefactor chosen as max m(h) / h^theta.
CommutatorProfile fit_commutator_profile(const std::vector<double>& steps, const std::vector<double>& measured);
CommutatorProfile fit_commutator_profile(const TimeDependentHamiltonian& h, const std::vector<double>& steps);
CommutatorProfile fit_commutator_profile(const SplitSystem& system, const std::vector<double>& steps);

}  // namespace qhop
