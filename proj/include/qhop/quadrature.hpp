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

enum class QuadratureKind { kRiemannLeft, kMidpoint, kTrapezoid };

std::string_view to_string(QuadratureKind kind);
QuadratureKind parse_quadrature_kind(std::string_view name);

/// M-node rule on one step, weights normalized to sum to one (an average; the
/// step length multiplies the exponent separately). Trapezoid nodes include
/// both endpoints, so it needs M >= 2.
struct QuadratureRule {
    QuadratureKind kind = QuadratureKind::kRiemannLeft;
    int nodes = 1;

    QuadratureRule() = default;
    QuadratureRule(QuadratureKind kind, int nodes);
};

struct QuadratureNode {
    double time;
    double weight;
};

/// Nodes on [j h, (j + 1) h] in ascending time.
std::vector<QuadratureNode> nodes_weights(const QuadratureRule& rule, int step, double h);

/// sum_k w_k H(t_k) over the nodes of step j.
HermitianOperator averaged_hamiltonian(const TimeDependentHamiltonian& h, const QuadratureRule& rule, int step,
                                       double step_size);

}  // namespace qhop
