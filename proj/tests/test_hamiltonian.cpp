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

#include <gtest/gtest.h>

#include <limits>

#include "test_util.hpp"

using namespace qhop;
using namespace qhop::testing;

TEST(fd_laplacian, four_point_spectrum) {
    const Grid grid{4};
    const HermitianSpectrum spec(build_fd_laplacian(grid));
    const double s = 1.0 / (grid.dx() * grid.dx());
    std::vector<double> got(spec.values().data(), spec.values().data() + 4);
    std::sort(got.begin(), got.end());
    const std::vector<double> expected{0.0, 2 * s, 2 * s, 4 * s};
    for (int i = 0; i < 4; ++i) {
        EXPECT_NEAR(got[i], expected[i], 1e-12 * s);
    }
}

TEST(fd_laplacian, constant_vector_in_kernel) {
    const HermitianOperator lap = build_fd_laplacian(Grid{16});
    EXPECT_LT((lap.matrix() * Vector::Ones(16)).norm(), 1e-10);
}

TEST(fd_laplacian, norm_matches_analytic_maximum) {
    const Grid grid{128};
    const double dx = grid.dx();
    EXPECT_NEAR(spectral_norm(build_fd_laplacian(grid).matrix()), 4.0 / (dx * dx), 1e-9 * 4.0 / (dx * dx));
}

TEST(fd_laplacian, psd_with_single_zero_mode) {
    const Grid grid{32};
    const HermitianSpectrum spec(build_fd_laplacian(grid));
    int zeros = 0;
    for (Index i = 0; i < spec.dim(); ++i) {
        EXPECT_GT(spec.values()(i), -1e-9);
        if (std::abs(spec.values()(i)) < 1e-9) ++zeros;
    }
    EXPECT_EQ(zeros, 1);
    RealVector analytic = fd_laplacian_eigenvalues(grid);
    std::sort(analytic.data(), analytic.data() + analytic.size());
    RealVector numeric = spec.values();
    std::sort(numeric.data(), numeric.data() + numeric.size());
    EXPECT_LT((analytic - numeric).cwiseAbs().maxCoeff(), 1e-9);
}

TEST(fd_laplacian, rejects_small_grid) { EXPECT_THROW(build_fd_laplacian(Grid{3}), ValidationError); }

TEST(potential, zero_and_cosine) {
    EXPECT_EQ(max_abs(build_potential(Grid{8}, [](double) { return 0.0; }).matrix()), 0.0);
    const Grid grid{8};
    const HermitianOperator v = build_potential(grid, cos4x);
    for (Index j = 0; j < 8; ++j) {
        EXPECT_NEAR(v.matrix()(j, j).real(), std::cos(4.0 * grid.x(j)), 1e-15);
    }
    EXPECT_LE(spectral_norm(v.matrix()), 1.0 + 1e-14);
}

TEST(potential, norm_matches_grid_scan) {
    const Grid grid{128};
    double scan = 0.0;
    for (Index j = 0; j < grid.n; ++j) scan = std::max(scan, std::abs(std::cos(4.0 * grid.x(j))));
    EXPECT_NEAR(spectral_norm(build_potential(grid, cos4x).matrix()), scan, 1e-14);
}

TEST(potential, rejects_non_finite) {
    EXPECT_THROW(build_potential(Grid{8}, [](double) { return std::numeric_limits<double>::infinity(); }),
                 ValidationError);
}

namespace {

SplitSystem random_split(std::mt19937_64& rng, Index n) {
    const HermitianOperator a(random_hermitian(n, rng));
    return SplitSystem(a, TimeDependentHamiltonian::constant(HermitianOperator(random_hermitian(n, rng))));
}

}  // namespace

TEST(fast_forward, identity_inverse_and_exponential) {
    std::mt19937_64 rng(21);
    const SplitSystem s = random_split(rng, 6);
    EXPECT_LT(max_abs(fast_forward(s, 0.0).matrix() - Matrix::Identity(6, 6)), 1e-12);
    std::uniform_real_distribution<double> u(-3.0, 3.0);
    for (int trial = 0; trial < 5; ++trial) {
        const double t = u(rng);
        const Matrix prod = fast_forward(s, t).matrix() * fast_forward(s, -t).matrix();
        EXPECT_LT(spectral_norm(Matrix(prod - Matrix::Identity(6, 6))), 1e-10);
        EXPECT_LT(spectral_norm(Matrix(fast_forward(s, t).matrix() - taylor_exp(s.a().matrix(), t, 80))), 1e-10);
    }
}

TEST(interaction_hamiltonian, initial_time_commuting_case_and_norm) {
    std::mt19937_64 rng(22);
    const SplitSystem s = random_split(rng, 6);
    EXPECT_LT(max_abs(interaction_hamiltonian(s, 0.0).matrix() - s.b()(0.0).matrix()), 1e-12);
    for (double t : {0.1, 0.7, 2.3}) {
        EXPECT_NEAR(spectral_norm(interaction_hamiltonian(s, t).matrix()), spectral_norm(s.b()(t).matrix()), 1e-10);
    }

    Matrix a = Matrix::Zero(4, 4);
    Matrix b = Matrix::Zero(4, 4);
    for (Index i = 0; i < 4; ++i) {
        a(i, i) = 0.5 * i;
        b(i, i) = 1.0 - 0.3 * i;
    }
    const SplitSystem diag(HermitianOperator(a), TimeDependentHamiltonian::constant(HermitianOperator(b)));
    for (double t : {0.2, 1.4}) {
        EXPECT_LT(max_abs(interaction_hamiltonian(diag, t).matrix() - b), 1e-12);
    }
}

TEST(interaction_hamiltonian, explicit_conjugation) {
    std::mt19937_64 rng(23);
    const SplitSystem s = random_split(rng, 5);
    const double t = 0.45;
    const Matrix a = s.a().matrix();
    const Matrix expected = taylor_exp(a, -t, 80) * s.b()(t).matrix() * taylor_exp(a, t, 80);
    EXPECT_LT(max_abs(interaction_hamiltonian(s, t).matrix() - expected), 1e-10);
    const TimeDependentHamiltonian hi = s.interaction_hamiltonian();
    EXPECT_LT(max_abs(hi(t).matrix() - expected), 1e-10);
}

TEST(wavepacket, unit_norm_and_shape) {
    const Grid grid{64};
    const StateVector psi = build_wavepacket(grid, -1.0, 4.0, 1.0);
    EXPECT_NEAR(psi.amplitudes().norm(), 1.0, 1e-12);
    const Index j = 20;
    const double y = grid.x(j) - (-1.0);
    const Complex ratio = psi.amplitudes()(j) / psi.amplitudes()(j + 1);
    const double y1 = grid.x(j + 1) + 1.0;
    const Complex expected = std::exp(-4.0 * y * y + kI * y) / std::exp(-4.0 * y1 * y1 + kI * y1);
    EXPECT_LT(std::abs(ratio - expected), 1e-10);

    std::mt19937_64 rng(24);
    std::uniform_real_distribution<double> u(0.5, 30.0);
    for (int trial = 0; trial < 5; ++trial) {
        EXPECT_NEAR(build_wavepacket(Grid{128}, -1.0, u(rng), u(rng)).amplitudes().norm(), 1.0, 1e-12);
    }
}

TEST(hamiltonian, declared_alpha_is_spot_checked) {
    std::mt19937_64 rng(25);
    const Matrix h0 = random_hermitian(4, rng);
    TimeDependentHamiltonian::Options options;
    options.alpha = 0.1 * spectral_norm(h0);
    EXPECT_THROW(TimeDependentHamiltonian(4, [h0](double) { return h0; }, options), ValidationError);
}

TEST(hamiltonian, wrong_derivative_rejected) {
    std::mt19937_64 rng(26);
    const Matrix h1 = random_hermitian(4, rng);
    TimeDependentHamiltonian::Options options;
    options.derivative = [h1](double) { return Matrix(2.0 * h1); };
    EXPECT_THROW(TimeDependentHamiltonian(4, [h1](double t) { return Matrix(t * h1); }, options), ValidationError);
}

TEST(hamiltonian, measured_bounds_cover_samples) {
    std::mt19937_64 rng(27);
    const Matrix h0 = random_hermitian(4, rng);
    const Matrix h1 = random_hermitian(4, rng);
    const Matrix h2 = random_hermitian(4, rng);
    const TimeDependentHamiltonian h = oscillating_hamiltonian(h0, h1, h2, 5.0, 1.0);
    for (int i = 0; i <= 50; ++i) {
        const double t = i / 50.0;
        EXPECT_LE(spectral_norm(h(t).matrix()), h.alpha());
        EXPECT_LE(spectral_norm(h.derivative(t).matrix()), h.beta() * 1.05);
    }
}

TEST(schrodinger, potential_bound_at_most_one) {
    for (Index n : {8, 16, 64, 128}) {
        EXPECT_LE(schrodinger_system(Grid{n}, cos4x).alpha_b(), 1.0);
    }
}
