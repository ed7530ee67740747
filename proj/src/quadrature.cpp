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

#include "qhop/quadrature.hpp"

#include <cmath>

namespace qhop {

std::string_view to_string(QuadratureKind kind) {
    switch (kind) {
        case QuadratureKind::kRiemannLeft:
            return "riemann-left";
        case QuadratureKind::kMidpoint:
            return "midpoint";
        case QuadratureKind::kTrapezoid:
            return "trapezoid";
    }
    return "unknown";
}

QuadratureKind parse_quadrature_kind(std::string_view name) {
    if (name == "riemann-left" || name == "left") return QuadratureKind::kRiemannLeft;
    if (name == "midpoint") return QuadratureKind::kMidpoint;
    if (name == "trapezoid") return QuadratureKind::kTrapezoid;
    throw ValidationError("unknown quadrature rule '" + std::string(name) + "'");
}

QuadratureRule::QuadratureRule(QuadratureKind kind_, int nodes_) : kind(kind_), nodes(nodes_) {
    if (nodes < 1) {
        throw ValidationError("QuadratureRule: node count must be >= 1");
    }
    if (kind == QuadratureKind::kTrapezoid && nodes < 2) {
        throw ValidationError("QuadratureRule: trapezoid rule needs at least 2 nodes");
    }
}

std::vector<QuadratureNode> nodes_weights(const QuadratureRule& rule, int step, double h) {
    // Re-validate: the fields are public.
    const QuadratureRule checked(rule.kind, rule.nodes);
    if (!(h > 0.0) || !std::isfinite(h)) {
        throw ValidationError("nodes_weights: step size must be positive");
    }
    if (step < 0) {
        throw ValidationError("nodes_weights: step index must be non-negative");
    }
    const int m = checked.nodes;
    const double start = static_cast<double>(step) * h;
    std::vector<QuadratureNode> out;
    out.reserve(static_cast<std::size_t>(m));
    switch (checked.kind) {
        case QuadratureKind::kRiemannLeft:
            for (int k = 0; k < m; ++k) {
                out.push_back({start + k * h / m, 1.0 / m});
            }
            break;
        case QuadratureKind::kMidpoint:
            for (int k = 0; k < m; ++k) {
                out.push_back({start + (k + 0.5) * h / m, 1.0 / m});
            }
            break;
        case QuadratureKind::kTrapezoid: {
            const double inner = 1.0 / (m - 1);
            for (int k = 0; k < m; ++k) {
                const bool end = (k == 0 || k == m - 1);
                out.push_back({start + k * h / (m - 1), end ? 0.5 * inner : inner});
            }
            break;
        }
    }
    return out;
}

HermitianOperator averaged_hamiltonian(const TimeDependentHamiltonian& h, const QuadratureRule& rule, int step,
                                       double step_size) {
    if (h.time_independent()) {
        nodes_weights(rule, step, step_size);  // validation only
        return h(static_cast<double>(step) * step_size);
    }
    Matrix sum = Matrix::Zero(h.dim(), h.dim());
    for (const QuadratureNode& node : nodes_weights(rule, step, step_size)) {
        sum += node.weight * h(node.time).matrix();
    }
    return HermitianOperator(0.5 * (sum + sum.adjoint()));
}

}  // namespace qhop
