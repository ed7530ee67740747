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

#include <cmath>
#include <random>
#include <vector>

#include "qhop/hamiltonian.hpp"

namespace qhop::testing {

inline Matrix random_matrix(Index n, std::mt19937_64& rng) {
    std::normal_distribution<double> normal;
    Matrix m(n, n);
    for (Index i = 0; i < n; ++i) {
        for (Index j = 0; j < n; ++j) {
            m(i, j) = Complex(normal(rng), normal(rng));
        }
    }
    return m;
}

inline Matrix random_hermitian(Index n, std::mt19937_64& rng) {
    const Matrix m = random_matrix(n, rng);
    return 0.5 * (m + m.adjoint());
}

inline Matrix pauli_x() {
    Matrix m(2, 2);
    m << 0, 1, 1, 0;
    return m;
}

inline Matrix pauli_y() {
    Matrix m(2, 2);
    m << 0, Complex(0, -1), Complex(0, 1), 0;
    return m;
}

inline Matrix pauli_z() {
    Matrix m(2, 2);
    m << 1, 0, 0, -1;
    return m;
}

/// sum_{k <= terms} (-iHt)^k / k!.
inline Matrix taylor_exp(const Matrix& h, double t, int terms = 40) {
    const Index n = h.rows();
    Matrix out = Matrix::Identity(n, n);
    Matrix term = Matrix::Identity(n, n);
    for (int k = 1; k <= terms; ++k) {
        term = term * (Complex(0.0, -t) * h) / static_cast<double>(k);
        out += term;
    }
    return out;
}

/// H(t) = H0 + cos(w t) H1 + sin(w t) H2 with analytic derivative.
inline TimeDependentHamiltonian oscillating_hamiltonian(const Matrix& h0, const Matrix& h1, const Matrix& h2,
                                                        double w, double horizon) {
    TimeDependentHamiltonian::Options options;
    options.horizon = horizon;
    options.derivative = [h1, h2, w](double t) {
        return Matrix(-w * std::sin(w * t) * h1 + w * std::cos(w * t) * h2);
    };
    return TimeDependentHamiltonian(
        h0.rows(), [h0, h1, h2, w](double t) { return Matrix(h0 + std::cos(w * t) * h1 + std::sin(w * t) * h2); },
        std::move(options));
}

/// Least-squares slope of log(y) against log(x).
inline double loglog_slope(const std::vector<double>& x, const std::vector<double>& y) {
    const double n = static_cast<double>(x.size());
    double mx = 0.0;
    double my = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        mx += std::log(x[i]) / n;
        my += std::log(y[i]) / n;
    }
    double sxx = 0.0;
    double sxy = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sxx += (std::log(x[i]) - mx) * (std::log(x[i]) - mx);
        sxy += (std::log(x[i]) - mx) * (std::log(y[i]) - my);
    }
    return sxy / sxx;
}

}  // namespace qhop::testing
