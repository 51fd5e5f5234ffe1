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

#include <complex>
#include <vector>

#include <Eigen/Dense>

#include "qbayes/errors.hpp"

namespace qbayes {

using Complex = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;
using RVector = Eigen::VectorXd;
using FrameMatrix =
    Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

// Tensor layout convention, fixed here and used by every module:
// qubit 0 is the MOST significant factor. A basis index b carries qubit q's
// bit at position (n-1-q), so kron_all({A, B}) applies A to qubit 0 and B to
// qubit 1, and b = sum_q bit_q * 2^(n-1-q).

namespace tol {
inline constexpr double hermitian = 1e-12;
inline constexpr double trace = 1e-12;
// Eigenvalues in [-psd, 0) are float noise from d<=16 eigensolves and count
// as zero everywhere.
inline constexpr double psd = 1e-10;
inline constexpr double negativity_clamp = 1e-10;
}  // namespace tol

/// Hermitian, unit-trace, positive-semidefinite matrix of dimension 2^n.
/// Immutable after construction; safe to share across threads.
class DensityMatrix {
 public:
  /// Full validation: Hermiticity and trace entrywise, PSD via eigensolve.
  /// Throws argument_error naming the violated invariant.
  static DensityMatrix from_matrix(int n_qubits, CMatrix matrix);

  /// For matrices PSD by construction (HH^dag, V E V^dag, convex mixtures).
  /// Still checks the cheap invariants (Hermiticity, trace), skips the
  /// eigensolve.
  static DensityMatrix unchecked(int n_qubits, CMatrix matrix);

  int n_qubits() const { return n_qubits_; }
  int dim() const { return static_cast<int>(matrix_.rows()); }
  const CMatrix& matrix() const { return matrix_; }

  /// Re-runs the full invariant set; throws argument_error on violation.
  void check_invariants() const;

 private:
  DensityMatrix(int n_qubits, CMatrix matrix)
      : n_qubits_(n_qubits), matrix_(std::move(matrix)) {}

  int n_qubits_;
  CMatrix matrix_;
};

/// A cut of the qubits into side Y (transposed side) and its complement.
class Bipartition {
 public:
  Bipartition(int n_qubits, const std::vector<int>& side_y);

  int n_qubits() const { return n_qubits_; }
  /// Bit q set iff qubit q belongs to Y.
  unsigned mask() const { return mask_; }
  std::vector<int> side_y() const;

 private:
  int n_qubits_;
  unsigned mask_;
};

CMatrix kron(const CMatrix& a, const CMatrix& b);

/// Left-to-right Kronecker product; factors[0] acts on qubit 0 (most
/// significant). Throws argument_error on an empty list.
CMatrix kron_all(const std::vector<CMatrix>& factors);

/// rho^{Gamma_Y}: pure index permutation (swaps the Y sub-indices between row
/// and column), so Hermiticity and trace are preserved exactly.
CMatrix partial_transpose(const CMatrix& rho, int n_qubits, unsigned y_mask);
CMatrix partial_transpose(const DensityMatrix& rho, const Bipartition& part);

/// Ascending eigenvalues of a Hermitian matrix.
RVector hermitian_eigenvalues(const CMatrix& h);

/// Sum of |eigenvalue| over the spectrum. Input must be Hermitian within
/// 1e-10 entrywise, else argument_error.
double trace_norm(const CMatrix& h);

/// Clamp negative eigenvalues to zero and renormalize to unit trace.
/// Idempotent on physical states. Throws degenerate_input_error when no
/// eigenvalue is positive.
DensityMatrix project_to_physical(const CMatrix& h);

/// Isometric real embedding of Hermitian matrices:
/// Tr(X Y) = hvec(X) . hvec(Y). Layout: d diagonal entries, then
/// sqrt(2)*Re X_ij, sqrt(2)*Im X_ij for i<j in row-major order.
void hvec(const CMatrix& x, double* out);
RVector hvec(const CMatrix& x);
CMatrix hvec_inverse(const double* v, int dim);

}  // namespace qbayes
