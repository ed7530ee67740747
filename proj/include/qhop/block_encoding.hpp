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

#include <vector>

#include "qhop/hamiltonian.hpp"

namespace qhop {

/// Matrix-level (alpha, n_a, epsilon) block encoding.
///
/// Register order is ancilla (most significant), then any control register,
/// then the system; `system_dim` counts control and system together. The
/// encoded block is the top-left system_dim x system_dim corner of the unitary.
class BlockEncoding {
  public:
    BlockEncoding(UnitaryMatrix unitary, double alpha, int ancillas, double epsilon, Index system_dim,
                  int control_qubits = 0);

    const UnitaryMatrix& unitary() const { return unitary_; }
    double alpha() const { return alpha_; }
    int ancillas() const { return ancillas_; }
    double epsilon() const { return epsilon_; }
    Index system_dim() const { return system_dim_; }
    int control_qubits() const { return control_qubits_; }
    /// System dimension without the control register.
    Index state_dim() const { return system_dim_ >> control_qubits_; }

    Matrix block() const;

  private:
    UnitaryMatrix unitary_;
    double alpha_;
    int ancillas_;
    double epsilon_;
    Index system_dim_;
    int control_qubits_;
};

inline Matrix extract_block(const BlockEncoding& be) { return be.block(); }

/// ||target - alpha * block||.
double encoding_error(const BlockEncoding& be, const Matrix& target);

/// One-ancilla unitary completion [[C, sqrt(I - CC^†)], [sqrt(I - C^†C), -C^†]]
/// of C = a / alpha. `epsilon` is carried as the declared error.
BlockEncoding dilate(const Matrix& a, double alpha, double epsilon = 0.0);

/// (I_{n_b} kron U_A)(U_B with identity on the ancillas of A): encodes AB with
/// factor alpha beta and error alpha epsilon_B + beta epsilon_A.
BlockEncoding product(const BlockEncoding& ua, const BlockEncoding& ub);

/// Select oracle whose block is sum_k |k><k| kron H_k / alpha; needs a
/// power-of-two sample count.
BlockEncoding ham_t(const std::vector<Matrix>& samples, double alpha);

/// Hadamard sandwich on the control register: block = (1/M) sum_k H_k / alpha.
BlockEncoding lcu_average(const BlockEncoding& ht);

/// (I kron e^{iAjh}) R_A O_B R_A^† (I kron e^{-iAjh}) with
/// R_A = sum_k |k><k| kron e^{iAkh/M} and O_B the select oracle of B(jh + kh/M).
BlockEncoding interaction_ham_t(const SplitSystem& system, int step, double h, int nodes);

/// Emulated (1, n_a + 2, epsilon) encoding of e^{-iHt} for an exact encoding of
/// a Hermitian H. Built as identity on the ancillas times the exact exponential.
BlockEncoding qsvt_hamiltonian_simulation(const BlockEncoding& be, double t, double epsilon);

/// H^{kron m}.
Matrix hadamard_transform(int qubits);

int exact_log2(Index value, const char* what);

}  // namespace qhop
