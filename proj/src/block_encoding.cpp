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

#include "qhop/block_encoding.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

namespace qhop {

namespace {

constexpr double kBlockNormSlack = 1e-10;

Index pow2(int n) { return Index{1} << n; }

}  // namespace

int exact_log2(Index value, const char* what) {
    if (value < 1 || (value & (value - 1)) != 0) {
        std::ostringstream os;
        os << what << ": " << value << " is not a power of two";
        throw ValidationError(os.str());
    }
    int n = 0;
    while ((Index{1} << n) < value) ++n;
    return n;
}

BlockEncoding::BlockEncoding(UnitaryMatrix unitary, double alpha, int ancillas, double epsilon, Index system_dim,
                             int control_qubits)
    : unitary_(std::move(unitary)),
      alpha_(alpha),
      ancillas_(ancillas),
      epsilon_(epsilon),
      system_dim_(system_dim),
      control_qubits_(control_qubits) {
    if (!(alpha_ > 0.0) || !std::isfinite(alpha_)) {
        throw ValidationError("BlockEncoding: factor must be positive");
    }
    if (ancillas_ < 0 || control_qubits_ < 0 || !(epsilon_ >= 0.0)) {
        throw ValidationError("BlockEncoding: negative ancilla count, control count or error");
    }
    if (system_dim_ < 1 || (system_dim_ % pow2(control_qubits_)) != 0) {
        throw ValidationError("BlockEncoding: system dimension inconsistent with control register");
    }
    require_same_dim(unitary_.dim(), pow2(ancillas_) * system_dim_, "BlockEncoding");
    const double norm = spectral_norm(block());
    if (norm > 1.0 + kBlockNormSlack) {
        std::ostringstream os;
        os << "BlockEncoding: block norm " << norm << " exceeds one";
        throw ValidationError(os.str());
    }
}

Matrix BlockEncoding::block() const { return unitary_.matrix().topLeftCorner(system_dim_, system_dim_); }

double encoding_error(const BlockEncoding& be, const Matrix& target) {
    require_same_dim(target.rows(), be.system_dim(), "encoding_error");
    return spectral_norm(Matrix(target - be.alpha() * be.block()));
}

BlockEncoding dilate(const Matrix& a, double alpha, double epsilon) {
    if (a.rows() != a.cols() || a.rows() == 0) {
        throw ValidationError("dilate: matrix must be square and non-empty");
    }
    if (!(alpha > 0.0)) {
        throw ValidationError("dilate: factor must be positive");
    }
    const double norm = spectral_norm(a);
    if (norm > alpha * (1.0 + kBlockNormSlack)) {
        std::ostringstream os;
        os << "dilate: ||A|| = " << norm << " exceeds factor " << alpha;
        throw ValidationError(os.str());
    }
    const Index d = a.rows();
    const Matrix c = a / alpha;
    Eigen::JacobiSVD<Matrix> svd(c, Eigen::ComputeFullU | Eigen::ComputeFullV);
    Eigen::VectorXd comp = svd.singularValues();
    for (Index i = 0; i < d; ++i) {
        const double s = std::min(comp(i), 1.0);
        comp(i) = std::sqrt(std::max(0.0, (1.0 - s) * (1.0 + s)));
    }
    const Matrix& u = svd.matrixU();
    const Matrix& v = svd.matrixV();
    Matrix w(2 * d, 2 * d);
    w.topLeftCorner(d, d) = c;
    w.topRightCorner(d, d) = u * comp.cast<Complex>().asDiagonal() * u.adjoint();
    w.bottomLeftCorner(d, d) = v * comp.cast<Complex>().asDiagonal() * v.adjoint();
    w.bottomRightCorner(d, d) = -c.adjoint();
    return BlockEncoding(UnitaryMatrix(std::move(w)), alpha, 1, epsilon, d);
}

BlockEncoding product(const BlockEncoding& ua, const BlockEncoding& ub) {
    require_same_dim(ua.system_dim(), ub.system_dim(), "product");
    const Index d = ua.system_dim();
    const Index na = pow2(ua.ancillas());
    const Index nb = pow2(ub.ancillas());
    const Matrix left = kron(Matrix::Identity(nb, nb), ua.unitary().matrix());
    // U_B acts on (b-ancilla, system) with identity on the a-ancilla in between.
    Matrix right = Matrix::Zero(nb * na * d, nb * na * d);
    const Matrix& u = ub.unitary().matrix();
    for (Index b = 0; b < nb; ++b) {
        for (Index b2 = 0; b2 < nb; ++b2) {
            const auto tile = u.block(b * d, b2 * d, d, d);
            for (Index x = 0; x < na; ++x) {
                right.block((b * na + x) * d, (b2 * na + x) * d, d, d) = tile;
            }
        }
    }
    return BlockEncoding(UnitaryMatrix(left * right), ua.alpha() * ub.alpha(), ua.ancillas() + ub.ancillas(),
                         ua.alpha() * ub.epsilon() + ub.alpha() * ua.epsilon(), d, ua.control_qubits());
}

BlockEncoding ham_t(const std::vector<Matrix>& samples, double alpha) {
    if (samples.empty()) {
        throw ValidationError("ham_t: no samples");
    }
    const Index m = static_cast<Index>(samples.size());
    const int nm = exact_log2(m, "ham_t sample count");
    const Index d = samples.front().rows();
    Matrix u = Matrix::Zero(2 * m * d, 2 * m * d);
    for (Index k = 0; k < m; ++k) {
        require_same_dim(samples[static_cast<std::size_t>(k)].rows(), d, "ham_t");
        const Matrix w = dilate(samples[static_cast<std::size_t>(k)], alpha).unitary().matrix();
        for (Index a = 0; a < 2; ++a) {
            for (Index a2 = 0; a2 < 2; ++a2) {
                u.block((a * m + k) * d, (a2 * m + k) * d, d, d) = w.block(a * d, a2 * d, d, d);
            }
        }
    }
    return BlockEncoding(UnitaryMatrix(std::move(u)), alpha, 1, 0.0, m * d, nm);
}

Matrix hadamard_transform(int qubits) {
    const double r = 1.0 / std::numbers::sqrt2;
    Matrix h1(2, 2);
    h1 << r, r, r, -r;
    Matrix out = Matrix::Identity(1, 1);
    for (int q = 0; q < qubits; ++q) {
        out = kron(out, h1);
    }
    return out;
}

BlockEncoding lcu_average(const BlockEncoding& ht) {
    const int nm = ht.control_qubits();
    const Index d = ht.state_dim();
    const Index na = pow2(ht.ancillas());
    const Matrix sandwich = kron(kron(Matrix::Identity(na, na), hadamard_transform(nm)), Matrix::Identity(d, d));
    const Matrix u = sandwich * ht.unitary().matrix() * sandwich;
    return BlockEncoding(UnitaryMatrix(u), ht.alpha(), ht.ancillas() + nm, ht.epsilon(), d);
}

BlockEncoding interaction_ham_t(const SplitSystem& system, int step, double h, int nodes) {
    if (step < 0 || !(h > 0.0)) {
        throw ValidationError("interaction_ham_t: need step >= 0 and h > 0");
    }
    const Index m = nodes;
    const int nm = exact_log2(m, "interaction_ham_t node count");
    const Index d = system.dim();
    std::vector<Matrix> samples;
    samples.reserve(static_cast<std::size_t>(m));
    for (Index k = 0; k < m; ++k) {
        samples.push_back(system.b()(step * h + k * h / m).matrix());
    }
    const BlockEncoding ob = ham_t(samples, system.alpha_b());

    Matrix rotate = Matrix::Zero(m * d, m * d);
    for (Index k = 0; k < m; ++k) {
        rotate.block(k * d, k * d, d, d) = fast_forward(system, -(k * h / m)).matrix();
    }
    const Matrix frame = fast_forward(system, -(step * h)).matrix();
    const Index outer = 2 * m;
    const Matrix ra = kron(Matrix::Identity(2, 2), rotate);
    const Matrix fr = kron(Matrix::Identity(outer, outer), frame);
    const Matrix u = fr * ra * ob.unitary().matrix() * ra.adjoint() * fr.adjoint();
    return BlockEncoding(UnitaryMatrix(u), system.alpha_b(), 1, 0.0, m * d, nm);
}

BlockEncoding qsvt_hamiltonian_simulation(const BlockEncoding& be, double t, double epsilon) {
    if (be.epsilon() != 0.0) {
        throw ValidationError("qsvt_hamiltonian_simulation: input encoding must be exact");
    }
    if (!(epsilon > 0.0 && epsilon < 1.0)) {
        throw ValidationError("qsvt_hamiltonian_simulation: error budget must lie in (0, 1)");
    }
    const Matrix scaled = be.alpha() * be.block();
    const HermitianOperator hamiltonian(Matrix(0.5 * (scaled + scaled.adjoint())));
    if (max_abs(scaled - hamiltonian.matrix()) > 1e-12 * std::max(1.0, max_abs(scaled))) {
        throw ValidationError("qsvt_hamiltonian_simulation: encoded block is not Hermitian");
    }
    const Index anc = pow2(be.ancillas() + 2);
    const Matrix u = kron(Matrix::Identity(anc, anc), herm_exp(hamiltonian, t).matrix());
    return BlockEncoding(UnitaryMatrix(u), 1.0, be.ancillas() + 2, epsilon, be.system_dim(), be.control_qubits());
}

}  // namespace qhop
