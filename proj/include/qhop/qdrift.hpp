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

#include <cstdint>
#include <random>
#include <vector>

#include "qhop/hamiltonian.hpp"

namespace qhop {

/// Hermitian, PSD (eigenvalues >= -1e-10) and unit trace (within 1e-10).
class DensityMatrix {
  public:
    static constexpr double kTolerance = 1e-10;

    explicit DensityMatrix(Matrix entries);
    static DensityMatrix pure(const StateVector& psi);

    Index dim() const { return entries_.rows(); }
    const Matrix& matrix() const { return entries_; }

  private:
    Matrix entries_;
};

/// Column-stacked superoperator: vec(U rho U^†) = (conj(U) kron U) vec(rho).
Matrix conjugation_superoperator(const Matrix& u);
Matrix apply_superoperator(const Matrix& superop, const Matrix& rho);

/// rho -> sum_q w_q U_q rho U_q^† with w_q >= 0 summing to one.
class MixedUnitaryChannel {
  public:
    MixedUnitaryChannel(std::vector<double> weights, std::vector<UnitaryMatrix> unitaries);

    Index dim() const { return unitaries_.front().dim(); }
    const std::vector<double>& weights() const { return weights_; }
    const std::vector<UnitaryMatrix>& unitaries() const { return unitaries_; }

    Matrix apply(const Matrix& rho) const;
    DensityMatrix apply(const DensityMatrix& rho) const;
    Matrix superoperator() const;

  private:
    std::vector<double> weights_;
    std::vector<UnitaryMatrix> unitaries_;
};

inline constexpr int kQdriftMinNodes = 64;

/// Trapezoid discretization of the continuous channel on [t0, t1]
///   rho -> int p(tau) e^{-iH(tau)/p(tau)} rho e^{iH(tau)/p(tau)} dtau,
///   p(tau) = ||H(tau)|| / int ||H||.
MixedUnitaryChannel qdrift_channel(const TimeDependentHamiltonian& h, double t0, double t1,
                                   int nodes = kQdriftMinNodes);

/// Draws tau from the piecewise-linear interpolant of ||H|| on the trapezoid
/// nodes by inverse CDF and returns e^{-iH(tau)/p(tau)}.
class QdriftSampler {
  public:
    QdriftSampler(const TimeDependentHamiltonian& h, double t0, double t1, int nodes = kQdriftMinNodes);

    double norm_integral() const { return integral_; }
    double cdf(double tau) const;
    double sample_time(std::mt19937_64& rng) const;
    UnitaryMatrix unitary_at(double tau) const;
    UnitaryMatrix sample(std::mt19937_64& rng) const;

  private:
    double interpolated_norm(double tau) const;

    TimeDependentHamiltonian h_;
    double t0_;
    double t1_;
    std::vector<double> times_;
    std::vector<double> norms_;
    std::vector<double> cumulative_;
    double integral_ = 0.0;
};

UnitaryMatrix qdrift_sample(const TimeDependentHamiltonian& h, double t0, double t1, std::uint64_t seed,
                            int nodes = kQdriftMinNodes);

struct ChannelDistance {
    double trace_norm;  // max over sampled pure inputs of ||E(rho) - F(rho)||_1
    double frobenius;   // ||S_E - S_F||_F
};

inline constexpr int kChannelProbeStates = 32;

/// Compares two superoperators of the same dimension.
ChannelDistance channel_distance(const Matrix& lhs, const Matrix& rhs, std::uint64_t seed = 0x9e3779b97f4a7c15ULL,
                                 int probes = kChannelProbeStates);

double trace_norm(const Matrix& hermitian);

/// Random unit vector with i.i.d. complex Gaussian entries.
StateVector random_state(Index dim, std::mt19937_64& rng);

}  // namespace qhop
