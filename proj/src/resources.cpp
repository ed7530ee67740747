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

#include <algorithm>
#include <cmath>
#include <sstream>

namespace qhop {

namespace {

constexpr double kCountLimit = 1e15;
// Keeps 10.000000000000002 from rounding up to 11.
constexpr double kCeilShave = 1e-12;
constexpr double kDegenerateCommutator = 1e-12;

long long ceil_count(double x, const char* what) {
    if (!std::isfinite(x) || x > kCountLimit) {
        std::ostringstream os;
        os << what << ": count " << x << " out of range";
        throw ValidationError(os.str());
    }
    return std::max(1LL, static_cast<long long>(std::ceil(x * (1.0 - kCeilShave))));
}

int control_qubits(long long nodes) {
    int n = 0;
    while ((1LL << n) < nodes) ++n;
    return n;
}

void require_positive(double v, const char* name) {
    if (!(v > 0.0) || !std::isfinite(v)) {
        throw ValidationError(std::string(name) + " must be positive");
    }
}

void require_nonnegative(double v, const char* name) {
    if (!(v >= 0.0) || !std::isfinite(v)) {
        throw ValidationError(std::string(name) + " must be non-negative");
    }
}

void require_time_and_error(double total_time, double epsilon) {
    if (!(epsilon > 0.0 && epsilon < 1.0)) {
        throw ValidationError("epsilon must lie in (0, 1)");
    }
    if (!(total_time > epsilon) || !std::isfinite(total_time)) {
        throw ValidationError("total time must exceed epsilon");
    }
}

void require_exponent(int exponent) {
    if (exponent != 0 && exponent != 1) {
        throw ValidationError("commutator exponent must be 0 or 1");
    }
}

// L, h and delta shared by the plain and interaction-picture plans.
ResourceEstimate segment_plan(const char* method, double prefactor, int exponent, double total_time,
                              double epsilon) {
    const double q = 1.0 / (1.0 + exponent);
    const double raw = std::pow(prefactor, q) * std::pow(total_time, 1.0 + q) / std::pow(epsilon, q);
    ResourceEstimate e;
    e.method = method;
    e.segments = ceil_count(raw, method);
    auto settle = [&] {
        e.step = total_time / static_cast<double>(e.segments);
        e.delta = epsilon / static_cast<double>(e.segments);
    };
    settle();
    while (plan_error(e, prefactor, exponent, total_time) > epsilon) {
        ++e.segments;
        settle();
    }
    e.step_error = 0.5 * e.delta + 0.5 * prefactor * std::pow(e.step, 2.0 + exponent);
    return e;
}

}  // namespace

double plan_error(const ResourceEstimate& e, double prefactor, int exponent, double total_time) {
    const double l = static_cast<double>(e.segments);
    return 0.5 * l * e.delta + prefactor * std::pow(total_time, 2.0 + exponent) / (2.0 * std::pow(l, 1.0 + exponent));
}

ResourceEstimate qhop_plan(const QhopParams& p) {
    require_time_and_error(p.total_time, p.epsilon);
    require_exponent(p.exponent);
    require_positive(p.alpha, "alpha");
    require_positive(p.prefactor, "commutator prefactor");
    require_nonnegative(p.max_derivative, "max derivative norm");
    if (p.ancillas < 1) {
        throw ValidationError("ancilla count must be >= 1");
    }
    ResourceEstimate e = segment_plan("qhop", p.prefactor, p.exponent, p.total_time, p.epsilon);
    e.nodes = ceil_count(2.0 * p.max_derivative / (p.prefactor * std::pow(e.step, p.exponent)), "qhop nodes");
    const int nm = control_qubits(e.nodes);
    const double per_step = p.alpha * e.step + std::log(1.0 / e.delta);
    e.ham_t_queries = static_cast<double>(e.segments) * per_step;
    e.gate_count = (p.ancillas + nm) * e.ham_t_queries;
    e.ancillas = p.ancillas + nm + 2;
    return e;
}

BranchPlan qhop_branch_plan(const QhopBranchParams& p) {
    BranchPlan out;
    out.zeroth = qhop_plan({p.alpha, p.window_commutator, 0, p.max_derivative, p.total_time, p.epsilon, p.ancillas});
    out.first =
        qhop_plan({p.alpha, p.derivative_commutator, 1, p.max_derivative, p.total_time, p.epsilon, p.ancillas});
    out.chosen = out.first.ham_t_queries < out.zeroth.ham_t_queries ? out.first : out.zeroth;
    return out;
}

ResourceEstimate qhop_interaction_plan(const InteractionParams& p) {
    require_time_and_error(p.total_time, p.epsilon);
    require_exponent(p.exponent);
    require_positive(p.alpha_b, "alpha_B");
    require_nonnegative(p.beta_b, "beta_B");
    require_nonnegative(p.alpha_ab, "alpha_AB");
    require_positive(p.prefactor, "commutator prefactor");
    if (!(p.alpha_ab + p.beta_b > 0.0)) {
        throw ValidationError("alpha_AB + beta_B vanishes: quadrature node count undefined");
    }
    if (p.ancillas < 1) {
        throw ValidationError("ancilla count must be >= 1");
    }
    ResourceEstimate e = segment_plan("qhop-interaction", p.prefactor, p.exponent, p.total_time, p.epsilon);
    e.nodes = ceil_count(2.0 * (p.alpha_ab + p.beta_b) / (p.prefactor * std::pow(e.step, p.exponent)),
                         "qhop-interaction nodes");
    const int nm = control_qubits(e.nodes);
    const double per_step = p.alpha_b * e.step + std::log(1.0 / e.delta);
    e.ob_queries = static_cast<double>(e.segments) * per_step;
    e.oa_queries = e.ob_queries * std::max(1, nm);
    e.ham_t_queries = e.ob_queries;
    e.gate_count = (p.ancillas + nm) * e.ob_queries;
    e.ancillas = p.ancillas + nm + 2;
    return e;
}

BranchPlan qhop_interaction_branch_plan(double alpha_b, double beta_b, double alpha_ab, double total_time,
                                              double epsilon, int ancillas) {
    BranchPlan out;
    out.zeroth = qhop_interaction_plan(
        {alpha_b, beta_b, alpha_ab, 2.0 * alpha_b * alpha_b, 0, total_time, epsilon, ancillas});
    out.first = qhop_interaction_plan(
        {alpha_b, beta_b, alpha_ab, 2.0 * alpha_b * (alpha_ab + beta_b), 1, total_time, epsilon, ancillas});
    out.chosen = out.first.ob_queries < out.zeroth.ob_queries ? out.first : out.zeroth;
    return out;
}

double general_commutator_bound(double window_max, double derivative_commutator_max, double h) {
    return std::min(window_max, derivative_commutator_max * h);
}

double interaction_commutator_bound(double alpha_b, double alpha_ab, double beta_b, double h) {
    return std::min(2.0 * alpha_b * alpha_b, 2.0 * alpha_b * (alpha_ab + beta_b) * h);
}

double local_error_bound(double h, int nodes, double max_commutator, double max_derivative) {
    if (nodes < 1) {
        throw ValidationError("local_error_bound: node count must be >= 1");
    }
    return 0.25 * h * h * max_commutator + h * h / (2.0 * nodes) * max_derivative;
}

BaselineMethod parse_baseline_method(std::string_view name) {
    if (name == "trotter1") return BaselineMethod::kTrotter1;
    if (name == "trotter2") return BaselineMethod::kTrotter2;
    if (name == "qdrift") return BaselineMethod::kQdrift;
    if (name == "dyson1") return BaselineMethod::kDyson1;
    throw ValidationError("unknown baseline method '" + std::string(name) + "'");
}

std::string_view to_string(BaselineMethod method) {
    switch (method) {
        case BaselineMethod::kTrotter1:
            return "trotter1";
        case BaselineMethod::kTrotter2:
            return "trotter2";
        case BaselineMethod::kQdrift:
            return "qdrift";
        case BaselineMethod::kDyson1:
            return "dyson1";
    }
    return "unknown";
}

ResourceEstimate baseline_queries(BaselineMethod method, const BaselineParams& p) {
    require_time_and_error(p.total_time, p.epsilon);
    const double t = p.total_time;
    const double eps = p.epsilon;
    ResourceEstimate e;
    e.method = std::string(to_string(method));
    switch (method) {
        case BaselineMethod::kTrotter1:
            require_nonnegative(p.commutator_ab, "||[A,B]||");
            e.segments = ceil_count(p.commutator_ab * t * t / eps, "trotter1");
            e.ham_t_queries = static_cast<double>(e.segments);
            break;
        case BaselineMethod::kTrotter2:
            require_nonnegative(p.nested_bba, "||[B,[B,A]]||");
            require_nonnegative(p.nested_aab, "||[A,[A,B]]||");
            e.segments = ceil_count(std::sqrt(p.nested_bba + p.nested_aab) * std::pow(t, 1.5) / std::sqrt(eps),
                                    "trotter2");
            e.ham_t_queries = static_cast<double>(e.segments);
            break;
        case BaselineMethod::kQdrift:
            require_positive(p.norm_integral, "int ||H||");
            e.segments = ceil_count(p.norm_integral * p.norm_integral / eps, "qdrift");
            e.ham_t_queries = static_cast<double>(e.segments);
            break;
        case BaselineMethod::kDyson1: {
            require_positive(p.alpha, "alpha");
            // alpha h <= 1/2 as well as the accuracy requirement.
            e.segments = std::max(ceil_count(p.alpha * p.alpha * t * t / eps, "dyson1"),
                                  ceil_count(2.0 * p.alpha * t, "dyson1"));
            break;
        }
    }
    e.step = t / static_cast<double>(e.segments);
    if (method == BaselineMethod::kDyson1) {
        e.delta = p.alpha * p.alpha * e.step * e.step;
        e.ham_t_queries = static_cast<double>(e.segments) * std::log(1.0 / e.delta);
    }
    return e;
}

ResourceEstimate baseline_queries(std::string_view method, const BaselineParams& p) {
    return baseline_queries(parse_baseline_method(method), p);
}

namespace {

std::vector<double> window_starts(double horizon, double step, int windows) {
    if (windows < 1) {
        throw ValidationError("sampled commutator: window count must be >= 1");
    }
    const double span = std::max(0.0, horizon - step);
    std::vector<double> out;
    for (int w = 0; w < windows; ++w) {
        out.push_back(windows == 1 ? 0.0 : span * w / (windows - 1));
    }
    return out;
}

void require_sampling(double step, int points) {
    if (!(step > 0.0)) {
        throw ValidationError("sampled commutator: step must be positive");
    }
    if (points < 2) {
        throw ValidationError("sampled commutator: need at least 2 points per window");
    }
}

}  // namespace

double sampled_window_commutator(const TimeDependentHamiltonian& h, double step, int windows, int points) {
    require_sampling(step, points);
    double worst = 0.0;
    for (double t : window_starts(h.horizon(), step, windows)) {
        std::vector<Matrix> samples;
        for (int i = 0; i < points; ++i) {
            samples.push_back(h(t + step * i / (points - 1)).matrix());
        }
        for (int i = 0; i < points; ++i) {
            for (int j = i + 1; j < points; ++j) {
                worst = std::max(worst, spectral_norm(commutator(samples[i], samples[j])));
            }
        }
    }
    return worst;
}

double interaction_commutator(const SplitSystem& system, double t, double s) {
    const Matrix rotated =
        fast_forward(system, -s).matrix() * system.b()(t + s).matrix() * fast_forward(system, s).matrix();
    return spectral_norm(commutator(system.b()(t).matrix(), rotated));
}

double sampled_interaction_commutator(const SplitSystem& system, double step, int windows, int points) {
    require_sampling(step, points);
    const double horizon = system.horizon();
    double worst = 0.0;
    for (double t : window_starts(horizon, 0.0, windows)) {
        for (int i = -(points - 1); i <= points - 1; ++i) {
            const double u = step * i / (points - 1);
            if (i == 0 || t + u < 0.0 || t + u > horizon) continue;
            worst = std::max(worst, interaction_commutator(system, t, u));
        }
    }
    return worst;
}

CommutatorProfile fit_commutator_profile(const std::vector<double>& steps, const std::vector<double>& measured) {
    if (steps.size() != measured.size()) {
        throw ValidationError("fit_commutator_profile: steps and measurements differ in length");
    }
    if (steps.size() < static_cast<std::size_t>(kMinFitSteps)) {
        throw ValidationError("fit_commutator_profile: need at least 4 step values");
    }
    double lo = steps.front();
    double hi = steps.front();
    for (std::size_t i = 0; i < steps.size(); ++i) {
        require_positive(steps[i], "step");
        require_nonnegative(measured[i], "measured commutator");
        lo = std::min(lo, steps[i]);
        hi = std::max(hi, steps[i]);
    }
    if (std::log10(hi / lo) < kMinFitDecades - 1e-12) {
        throw ValidationError("fit_commutator_profile: steps must span at least two decades");
    }
    CommutatorProfile out;
    out.provenance = CommutatorProfile::Provenance::kFitted;
    out.steps = steps;
    out.measured = measured;

    std::vector<double> xs;
    std::vector<double> ys;
    for (std::size_t i = 0; i < steps.size(); ++i) {
        if (measured[i] > kDegenerateCommutator) {
            xs.push_back(std::log(steps[i]));
            ys.push_back(std::log(measured[i]));
        }
    }
    if (xs.size() < 2) {
        out.degenerate = true;
        out.prefactor = 0.0;
        return out;
    }
    const double n = static_cast<double>(xs.size());
    double mx = 0.0;
    double my = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        mx += xs[i] / n;
        my += ys[i] / n;
    }
    double sxx = 0.0;
    double sxy = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        sxx += (xs[i] - mx) * (xs[i] - mx);
        sxy += (xs[i] - mx) * (ys[i] - my);
    }
    out.fitted_slope = sxy / sxx;
    out.fitted_prefactor = std::exp(my - out.fitted_slope * mx);
    out.exponent = out.fitted_slope < 0.5 ? 0 : 1;
    for (std::size_t i = 0; i < steps.size(); ++i) {
        out.prefactor = std::max(out.prefactor, measured[i] / std::pow(steps[i], out.exponent));
    }
    return out;
}

CommutatorProfile fit_commutator_profile(const TimeDependentHamiltonian& h, const std::vector<double>& steps) {
    std::vector<double> measured;
    for (double s : steps) {
        measured.push_back(sampled_window_commutator(h, s));
    }
    return fit_commutator_profile(steps, measured);
}

CommutatorProfile fit_commutator_profile(const SplitSystem& system, const std::vector<double>& steps) {
    std::vector<double> measured;
    for (double s : steps) {
        measured.push_back(sampled_interaction_commutator(system, s));
    }
    return fit_commutator_profile(steps, measured);
}

}  // namespace qhop
