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

#include "qhop/qdrift.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace qhop {

DensityMatrix::DensityMatrix(Matrix entries) : entries_(std::move(entries)) {
    if (entries_.rows() != entries_.cols() || entries_.rows() == 0) {
        throw ValidationError("DensityMatrix: must be square and non-empty");
    }
    if (max_abs(entries_ - entries_.adjoint()) > kTolerance) {
        throw ValidationError("DensityMatrix: not Hermitian");
    }
    const Complex tr = entries_.trace();
    if (std::abs(tr - Complex(1.0, 0.0)) > kTolerance) {
        std::ostringstream os;
        os << "DensityMatrix: trace " << tr.real() << " differs from one";
        throw ValidationError(os.str());
    }
    const Matrix sym = 0.5 * (entries_ + entries_.adjoint());
    Eigen::SelfAdjointEigenSolver<Matrix> solver(sym, Eigen::EigenvaluesOnly);
    if (solver.eigenvalues().minCoeff() < -kTolerance) {
        throw ValidationError("DensityMatrix: negative eigenvalue");
    }
}

DensityMatrix DensityMatrix::pure(const StateVector& psi) {
    return DensityMatrix(psi.amplitudes() * psi.amplitudes().adjoint());
}

Matrix conjugation_superoperator(const Matrix& u) { return kron(u.conjugate(), u); }

Matrix apply_superoperator(const Matrix& superop, const Matrix& rho) {
    const Index d = rho.rows();
    require_same_dim(superop.rows(), d * d, "apply_superoperator");
    const Vector flat = Eigen::Map<const Vector>(rho.data(), d * d);
    const Vector out = superop * flat;
    return Eigen::Map<const Matrix>(out.data(), d, d);
}

MixedUnitaryChannel::MixedUnitaryChannel(std::vector<double> weights, std::vector<UnitaryMatrix> unitaries)
    : weights_(std::move(weights)), unitaries_(std::move(unitaries)) {
    if (weights_.empty() || weights_.size() != unitaries_.size()) {
        throw ValidationError("MixedUnitaryChannel: need matching, non-empty weights and unitaries");
    }
    double total = 0.0;
    for (double w : weights_) {
        if (!(w >= 0.0)) {
            throw ValidationError("MixedUnitaryChannel: negative weight");
        }
        total += w;
    }
    if (std::abs(total - 1.0) > 1e-12) {
        throw ValidationError("MixedUnitaryChannel: weights must sum to one");
    }
    for (const UnitaryMatrix& u : unitaries_) {
        require_same_dim(u.dim(), unitaries_.front().dim(), "MixedUnitaryChannel");
    }
}

Matrix MixedUnitaryChannel::apply(const Matrix& rho) const {
    require_same_dim(rho.rows(), dim(), "MixedUnitaryChannel::apply");
    Matrix out = Matrix::Zero(dim(), dim());
    for (std::size_t q = 0; q < weights_.size(); ++q) {
        const Matrix& u = unitaries_[q].matrix();
        out += weights_[q] * (u * rho * u.adjoint());
    }
    return out;
}

DensityMatrix MixedUnitaryChannel::apply(const DensityMatrix& rho) const {
    const Matrix out = apply(rho.matrix());
    return DensityMatrix(0.5 * (out + out.adjoint()));
}

Matrix MixedUnitaryChannel::superoperator() const {
    const Index d2 = dim() * dim();
    Matrix out = Matrix::Zero(d2, d2);
    for (std::size_t q = 0; q < weights_.size(); ++q) {
        out += weights_[q] * conjugation_superoperator(unitaries_[q].matrix());
    }
    return out;
}

namespace {

void require_segment(double t0, double t1, int nodes) {
    if (!(t1 > t0)) {
        throw ValidationError("qdrift: require t1 > t0");
    }
    if (nodes < kQdriftMinNodes) {
        std::ostringstream os;
        os << "qdrift: node count " << nodes << " below " << kQdriftMinNodes;
        throw ValidationError(os.str());
    }
}

double checked_norm(const TimeDependentHamiltonian& h, double tau) {
    const double n = spectral_norm(h(tau).matrix());
    if (!(n > 0.0)) {
        std::ostringstream os;
        os << "qdrift: ||H(" << tau << ")|| vanishes, sampling density undefined";
        throw ValidationError(os.str());
    }
    return n;
}

UnitaryMatrix scaled_exponential(const TimeDependentHamiltonian& h, double tau, double norm, double integral) {
    return herm_exp(h(tau), integral / norm);
}

}  // namespace

MixedUnitaryChannel qdrift_channel(const TimeDependentHamiltonian& h, double t0, double t1, int nodes) {
    require_segment(t0, t1, nodes);
    const double dt = (t1 - t0) / (nodes - 1);
    std::vector<double> times(nodes);
    std::vector<double> norms(nodes);
    std::vector<double> trapezoid(nodes);
    double integral = 0.0;
    for (int q = 0; q < nodes; ++q) {
        times[q] = q == nodes - 1 ? t1 : t0 + q * dt;
        norms[q] = checked_norm(h, times[q]);
        trapezoid[q] = (q == 0 || q == nodes - 1) ? 0.5 * dt : dt;
        integral += trapezoid[q] * norms[q];
    }
    std::vector<double> weights(nodes);
    std::vector<UnitaryMatrix> unitaries;
    unitaries.reserve(nodes);
    double total = 0.0;
    for (int q = 0; q < nodes; ++q) {
        weights[q] = trapezoid[q] * norms[q] / integral;
        total += weights[q];
        unitaries.push_back(scaled_exponential(h, times[q], norms[q], integral));
    }
    for (double& w : weights) {
        w /= total;
    }
    return MixedUnitaryChannel(std::move(weights), std::move(unitaries));
}

QdriftSampler::QdriftSampler(const TimeDependentHamiltonian& h, double t0, double t1, int nodes)
    : h_(h), t0_(t0), t1_(t1) {
    require_segment(t0, t1, nodes);
    const double dt = (t1 - t0) / (nodes - 1);
    times_.resize(nodes);
    norms_.resize(nodes);
    cumulative_.assign(nodes, 0.0);
    for (int q = 0; q < nodes; ++q) {
        times_[q] = q == nodes - 1 ? t1 : t0 + q * dt;
        norms_[q] = checked_norm(h, times_[q]);
        if (q > 0) {
            cumulative_[q] = cumulative_[q - 1] + 0.5 * (norms_[q - 1] + norms_[q]) * (times_[q] - times_[q - 1]);
        }
    }
    integral_ = cumulative_.back();
}

double QdriftSampler::interpolated_norm(double tau) const {
    if (tau <= t0_) return norms_.front();
    if (tau >= t1_) return norms_.back();
    const auto it = std::upper_bound(times_.begin(), times_.end(), tau);
    const std::size_t q = static_cast<std::size_t>(it - times_.begin()) - 1;
    const double s = (tau - times_[q]) / (times_[q + 1] - times_[q]);
    return (1.0 - s) * norms_[q] + s * norms_[q + 1];
}

double QdriftSampler::cdf(double tau) const {
    if (tau <= t0_) return 0.0;
    if (tau >= t1_) return 1.0;
    const auto it = std::upper_bound(times_.begin(), times_.end(), tau);
    const std::size_t q = static_cast<std::size_t>(it - times_.begin()) - 1;
    const double partial = 0.5 * (norms_[q] + interpolated_norm(tau)) * (tau - times_[q]);
    return (cumulative_[q] + partial) / integral_;
}

double QdriftSampler::sample_time(std::mt19937_64& rng) const {
    std::uniform_real_distribution<double> uniform(0.0, 1.0);
    const double target = uniform(rng) * integral_;
    auto it = std::upper_bound(cumulative_.begin(), cumulative_.end(), target);
    std::size_t q = it == cumulative_.begin() ? 0 : static_cast<std::size_t>(it - cumulative_.begin()) - 1;
    q = std::min(q, cumulative_.size() - 2);
    // Solve a s + b s^2 / 2 = r on the linear piece, s the offset into the cell.
    const double width = times_[q + 1] - times_[q];
    const double a = norms_[q];
    const double b = (norms_[q + 1] - norms_[q]) / width;
    const double r = target - cumulative_[q];
    double s;
    if (std::abs(b) < 1e-14 * std::max(1.0, a)) {
        s = r / a;
    } else {
        const double disc = std::max(0.0, a * a + 2.0 * b * r);
        s = 2.0 * r / (a + std::sqrt(disc));
    }
    return std::clamp(times_[q] + s, times_[q], times_[q + 1]);
}

UnitaryMatrix QdriftSampler::unitary_at(double tau) const {
    return scaled_exponential(h_, tau, interpolated_norm(tau), integral_);
}

UnitaryMatrix QdriftSampler::sample(std::mt19937_64& rng) const { return unitary_at(sample_time(rng)); }

UnitaryMatrix qdrift_sample(const TimeDependentHamiltonian& h, double t0, double t1, std::uint64_t seed, int nodes) {
    std::mt19937_64 rng(seed);
    return QdriftSampler(h, t0, t1, nodes).sample(rng);
}

double trace_norm(const Matrix& hermitian) {
    const Matrix sym = 0.5 * (hermitian + hermitian.adjoint());
    Eigen::SelfAdjointEigenSolver<Matrix> solver(sym, Eigen::EigenvaluesOnly);
    return solver.eigenvalues().cwiseAbs().sum();
}

StateVector random_state(Index dim, std::mt19937_64& rng) {
    std::normal_distribution<double> normal;
    Vector v(dim);
    for (Index i = 0; i < dim; ++i) {
        v(i) = Complex(normal(rng), normal(rng));
    }
    return StateVector(v / v.norm());
}

ChannelDistance channel_distance(const Matrix& lhs, const Matrix& rhs, std::uint64_t seed, int probes) {
    require_same_dim(lhs.rows(), rhs.rows(), "channel_distance");
    const Index d = static_cast<Index>(std::llround(std::sqrt(static_cast<double>(lhs.rows()))));
    if (d * d != lhs.rows()) {
        throw ValidationError("channel_distance: superoperator size is not a square");
    }
    std::mt19937_64 rng(seed);
    const Matrix diff = lhs - rhs;
    double worst = 0.0;
    for (int p = 0; p < probes; ++p) {
        const Vector psi = random_state(d, rng).amplitudes();
        worst = std::max(worst, trace_norm(apply_superoperator(diff, psi * psi.adjoint())));
    }
    return {worst, diff.norm()};
}

}  // namespace qhop
