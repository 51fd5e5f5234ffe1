// Copyright 2026 the qbayes authors
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

#include "qbayes/qstate.hpp"

namespace qbayes {

/// The two partition-averaged negativities. For four qubits n1 averages the
/// three 2-2 cuts and n2 the four 1-3 cuts; for other sizes n1 uses the
/// floor(n/2)-vs-rest cuts and n2 the single-qubit-vs-rest cuts (for n = 2, 3
/// those coincide and n1 == n2).
struct NegativityPair {
  double n1 = 0.0;
  double n2 = 0.0;
};

/// All floor(n/2)-vs-rest cuts, complements deduplicated when n is even.
std::vector<Bipartition> balanced_cuts(int n_qubits);

/// Y = {q} for each qubit q; n cuts.
std::vector<Bipartition> single_qubit_cuts(int n_qubits);

/// (||rho^{Gamma_Y}||_1 - 1) / 2, the absolute sum of the negative
/// eigenvalues of the partial transpose; clamped to 0 when below 1e-10.
/// 0.5 for a Bell pair, 0 on PPT states.
double negativity(const DensityMatrix& rho, const Bipartition& part);

/// Geometric means over the two cut families. A zero cut forces the mean to
/// exactly zero without touching logs.
NegativityPair negativity_pair(const DensityMatrix& rho);

/// rho(q) = q |W><W| + (1-q) I/2^n, with |W> the equal superposition of the
/// single-excitation basis states.
DensityMatrix w_noise_state(double q, int n_qubits);

/// Equal mixture of the four Bell-pair products on AB x CD; separable across
/// every 2-2 cut yet entangled across every 1-3 cut.
DensityMatrix smolin_state();

}  // namespace qbayes
