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

#include <string>

#include "qbayes/qstate.hpp"
#include "qbayes/rng.hpp"

namespace qbayes {

enum class PriorKind { Z, GH };

/// Which measure over states to sample. `beta` is the identity-mixing
/// distortion exponent and only takes effect when `mixed` is set; the
/// defaults (0.66 for Z, 0.50 for GH) balance entangled and separable weight
/// at four qubits.
struct PriorSpec {
  PriorKind kind = PriorKind::GH;
  bool mixed = false;
  double beta = 0.50;

  static PriorSpec z(bool mixed = false) { return {PriorKind::Z, mixed, 0.66}; }
  static PriorSpec gh(bool mixed = false) { return {PriorKind::GH, mixed, 0.50}; }

  void validate() const;
  /// "Z", "GH", "Zmix", "GHmix"; used in file names and reports.
  std::string label() const;
};

/// rho = H H^dag / Tr(H H^dag) with Re and Im of each H entry uniform on
/// (-1, 1). Full rank with probability 1.
DensityMatrix sample_gh(Rng& rng, int n_qubits);

/// rho = V E V^dag with E a uniform draw from the probability simplex and V
/// Haar-random.
DensityMatrix sample_z(Rng& rng, int n_qubits);

/// Uniform point on the (dim-1)-simplex via normalized Exp(1) draws.
std::vector<double> sample_simplex(Rng& rng, int dim);

/// Haar-distributed unitary: QR of a complex Ginibre matrix with the R
/// diagonal phases folded into Q.
CMatrix haar_unitary(Rng& rng, int dim);

/// lambda rho + (1-lambda) I/d with lambda = u^beta, u uniform on [0,1].
DensityMatrix mix_identity(const DensityMatrix& rho, Rng& rng, double beta);

/// Deterministic core of mix_identity for a given u.
DensityMatrix mix_identity_from_u(const DensityMatrix& rho, double u, double beta);

/// Draw from the full spec: base measure plus optional identity mixing.
DensityMatrix sample_prior(const PriorSpec& spec, Rng& rng, int n_qubits);

}  // namespace qbayes
