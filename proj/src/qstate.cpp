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

#include "qbayes/qstate.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace qbayes {

namespace {

void check_dims(int n_qubits, const CMatrix& m, const char* who) {
  if (n_qubits < 1) {
    throw argument_error(std::string(who) + ": n_qubits must be positive");
  }
  const Eigen::Index d = Eigen::Index(1) << n_qubits;
  if (m.rows() != d || m.cols() != d) {
    throw argument_error(std::string(who) + ": matrix dimension " +
                         std::to_string(m.rows()) + "x" +
                         std::to_string(m.cols()) + " does not match 2^" +
                         std::to_string(n_qubits));
  }
}

double max_hermitian_defect(const CMatrix& m) {
  return (m - m.adjoint()).cwiseAbs().maxCoeff();
}

int infer_n_qubits(const CMatrix& m, const char* who) {
  if (m.rows() != m.cols() || m.rows() < 2) {
    throw argument_error(std::string(who) + ": expected a square matrix");
  }
  Eigen::Index d = m.rows();
  int n = 0;
  while (d > 1 && (d & 1) == 0) {
    d >>= 1;
    ++n;
  }
  if (d != 1) {
    throw argument_error(std::string(who) +
                         ": dimension is not a power of two");
  }
  return n;
}

}  // namespace

DensityMatrix DensityMatrix::unchecked(int n_qubits, CMatrix matrix) {
  check_dims(n_qubits, matrix, "DensityMatrix");
  const double herm = max_hermitian_defect(matrix);
  if (herm > tol::hermitian) {
    throw argument_error("DensityMatrix: Hermiticity defect " +
                         std::to_string(herm));
  }
  const double tr_err = std::abs(matrix.trace() - Complex(1.0, 0.0));
  if (tr_err > tol::trace) {
    throw argument_error("DensityMatrix: trace deviates from 1 by " +
                         std::to_string(tr_err));
  }
  return DensityMatrix(n_qubits, std::move(matrix));
}

DensityMatrix DensityMatrix::from_matrix(int n_qubits, CMatrix matrix) {
  DensityMatrix dm = unchecked(n_qubits, std::move(matrix));
  const double min_eig = hermitian_eigenvalues(dm.matrix_).minCoeff();
  if (min_eig < -tol::psd) {
    throw argument_error("DensityMatrix: minimum eigenvalue " +
                         std::to_string(min_eig) + " below -1e-10");
  }
  return dm;
}

void DensityMatrix::check_invariants() const {
  from_matrix(n_qubits_, matrix_);
}

Bipartition::Bipartition(int n_qubits, const std::vector<int>& side_y)
    : n_qubits_(n_qubits), mask_(0) {
  if (n_qubits < 1 || n_qubits > 30) {
    throw argument_error("Bipartition: n_qubits out of range");
  }
  for (int q : side_y) {
    if (q < 0 || q >= n_qubits) {
      throw argument_error("Bipartition: qubit index " + std::to_string(q) +
                           " out of range");
    }
    mask_ |= 1u << q;
  }
  const unsigned full = (1u << n_qubits) - 1u;
  if (mask_ == 0 || mask_ == full) {
    throw argument_error("Bipartition: side_y must be a nonempty proper subset");
  }
}

std::vector<int> Bipartition::side_y() const {
  std::vector<int> out;
  for (int q = 0; q < n_qubits_; ++q) {
    if (mask_ & (1u << q)) out.push_back(q);
  }
  return out;
}

CMatrix kron(const CMatrix& a, const CMatrix& b) {
  CMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    }
  }
  return out;
}

CMatrix kron_all(const std::vector<CMatrix>& factors) {
  if (factors.empty()) {
    throw argument_error("kron_all: empty factor list");
  }
  for (const CMatrix& f : factors) {
    if (f.rows() != f.cols() || f.rows() == 0) {
      throw argument_error("kron_all: factors must be square and nonempty");
    }
  }
  CMatrix out = factors.front();
  for (std::size_t i = 1; i < factors.size(); ++i) out = kron(out, factors[i]);
  return out;
}

CMatrix partial_transpose(const CMatrix& rho, int n_qubits, unsigned y_mask) {
  check_dims(n_qubits, rho, "partial_transpose");
  const unsigned full = (1u << n_qubits) - 1u;
  if (y_mask == 0 || (y_mask & ~full) != 0 || y_mask == full) {
    throw argument_error("partial_transpose: invalid subsystem mask");
  }
  // Qubit q lives at bit position n-1-q of the basis index.
  unsigned pos_mask = 0;
  for (int q = 0; q < n_qubits; ++q) {
    if (y_mask & (1u << q)) pos_mask |= 1u << (n_qubits - 1 - q);
  }
  const Eigen::Index d = Eigen::Index(1) << n_qubits;
  CMatrix out(d, d);
  for (Eigen::Index r = 0; r < d; ++r) {
    const unsigned ru = static_cast<unsigned>(r);
    for (Eigen::Index c = 0; c < d; ++c) {
      const unsigned cu = static_cast<unsigned>(c);
      const unsigned rr = (ru & ~pos_mask) | (cu & pos_mask);
      const unsigned cc = (cu & ~pos_mask) | (ru & pos_mask);
      out(r, c) = rho(rr, cc);
    }
  }
  return out;
}

CMatrix partial_transpose(const DensityMatrix& rho, const Bipartition& part) {
  if (part.n_qubits() != rho.n_qubits()) {
    throw argument_error("partial_transpose: partition qubit count " +
                         std::to_string(part.n_qubits()) +
                         " does not match state");
  }
  return partial_transpose(rho.matrix(), rho.n_qubits(), part.mask());
}

RVector hermitian_eigenvalues(const CMatrix& h) {
  Eigen::SelfAdjointEigenSolver<CMatrix> solver(h, Eigen::EigenvaluesOnly);
  return solver.eigenvalues();
}

double trace_norm(const CMatrix& h) {
  if (h.rows() != h.cols()) {
    throw argument_error("trace_norm: matrix must be square");
  }
  const double defect = max_hermitian_defect(h);
  if (defect > 1e-10) {
    throw argument_error("trace_norm: input not Hermitian (defect " +
                         std::to_string(defect) + ")");
  }
  return hermitian_eigenvalues(h).cwiseAbs().sum();
}

DensityMatrix project_to_physical(const CMatrix& h) {
  const int n = infer_n_qubits(h, "project_to_physical");
  const double defect = max_hermitian_defect(h);
  if (defect > 1e-10) {
    throw argument_error("project_to_physical: input not Hermitian (defect " +
                         std::to_string(defect) + ")");
  }
  Eigen::SelfAdjointEigenSolver<CMatrix> solver(h);
  RVector vals = solver.eigenvalues();
  double total = 0.0;
  for (Eigen::Index i = 0; i < vals.size(); ++i) {
    vals[i] = std::max(vals[i], 0.0);
    total += vals[i];
  }
  if (total <= 0.0) {
    throw degenerate_input_error(
        "project_to_physical: no positive eigenvalues");
  }
  vals /= total;
  const CMatrix& v = solver.eigenvectors();
  CMatrix out = v * vals.asDiagonal() * v.adjoint();
  // the reconstruction is Hermitian up to rounding; symmetrize so the result
  // meets the 1e-12 entrywise invariant
  out = 0.5 * (out + out.adjoint().eval());
  return DensityMatrix::unchecked(n, std::move(out));
}

void hvec(const CMatrix& x, double* out) {
  const Eigen::Index d = x.rows();
  static const double sqrt2 = std::sqrt(2.0);
  std::size_t k = 0;
  for (Eigen::Index i = 0; i < d; ++i) out[k++] = x(i, i).real();
  for (Eigen::Index i = 0; i < d; ++i) {
    for (Eigen::Index j = i + 1; j < d; ++j) {
      out[k++] = sqrt2 * x(i, j).real();
      out[k++] = sqrt2 * x(i, j).imag();
    }
  }
}

RVector hvec(const CMatrix& x) {
  RVector out(x.rows() * x.rows());
  hvec(x, out.data());
  return out;
}

CMatrix hvec_inverse(const double* v, int dim) {
  static const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
  CMatrix out(dim, dim);
  std::size_t k = 0;
  for (int i = 0; i < dim; ++i) out(i, i) = Complex(v[k++], 0.0);
  for (int i = 0; i < dim; ++i) {
    for (int j = i + 1; j < dim; ++j) {
      const double re = v[k++] * inv_sqrt2;
      const double im = v[k++] * inv_sqrt2;
      out(i, j) = Complex(re, im);
      out(j, i) = Complex(re, -im);
    }
  }
  return out;
}

}  // namespace qbayes
