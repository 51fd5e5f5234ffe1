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

#include "qbayes/priors.hpp"

#include <cmath>

namespace qbayes {

void PriorSpec::validate() const {
  if (mixed && !(beta > 0.0)) {
    throw argument_error("PriorSpec: beta must be positive when mixed");
  }
}

std::string PriorSpec::label() const {
  std::string base = kind == PriorKind::Z ? "Z" : "GH";
  return mixed ? base + "mix" : base;
}

DensityMatrix sample_gh(Rng& rng, int n_qubits) {
  if (n_qubits < 1) throw argument_error("sample_gh: n_qubits must be positive");
  const Eigen::Index d = Eigen::Index(1) << n_qubits;
  CMatrix h(d, d);
  for (Eigen::Index i = 0; i < d; ++i) {
    for (Eigen::Index j = 0; j < d; ++j) {
      const double re = rng.uniform_sym();
      const double im = rng.uniform_sym();
      h(i, j) = Complex(re, im);
    }
  }
  CMatrix gram = h * h.adjoint();
  gram = (0.5 * (gram + gram.adjoint())).eval();
  gram /= gram.trace().real();
  return DensityMatrix::unchecked(n_qubits, std::move(gram));
}

std::vector<double> sample_simplex(Rng& rng, int dim) {
  if (dim < 1) throw argument_error("sample_simplex: dim must be positive");
  std::vector<double> e(dim);
  double total = 0.0;
  for (double& v : e) {
    v = -std::log1p(-rng.uniform());  // Exp(1)
    total += v;
  }
  for (double& v : e) v /= total;
  return e;
}

CMatrix haar_unitary(Rng& rng, int dim) {
  if (dim < 1) throw argument_error("haar_unitary: dim must be positive");
  const double scale = 1.0 / std::sqrt(2.0);
  CMatrix g(dim, dim);
  for (int i = 0; i < dim; ++i) {
    for (int j = 0; j < dim; ++j) {
      g(i, j) = Complex(scale * rng.normal(), scale * rng.normal());
    }
  }
  Eigen::HouseholderQR<CMatrix> qr(g);
  CMatrix q = qr.householderQ();
  const CMatrix& r = qr.matrixQR();
  // fold the R diagonal phases into Q so the distribution is exactly Haar
  for (int j = 0; j < dim; ++j) {
    const Complex rjj = r(j, j);
    const double mag = std::abs(rjj);
    const Complex phase = mag > 0.0 ? rjj / mag : Complex(1.0, 0.0);
    q.col(j) *= phase;
  }
  return q;
}

DensityMatrix sample_z(Rng& rng, int n_qubits) {
  if (n_qubits < 1) throw argument_error("sample_z: n_qubits must be positive");
  const int d = 1 << n_qubits;
  const std::vector<double> eigs = sample_simplex(rng, d);
  const CMatrix v = haar_unitary(rng, d);
  RVector e(d);
  for (int i = 0; i < d; ++i) e[i] = eigs[i];
  CMatrix rho = v * e.asDiagonal() * v.adjoint();
  rho = (0.5 * (rho + rho.adjoint())).eval();
  return DensityMatrix::unchecked(n_qubits, std::move(rho));
}

DensityMatrix mix_identity_from_u(const DensityMatrix& rho, double u, double beta) {
  if (!(beta > 0.0)) throw argument_error("mix_identity: beta must be positive");
  if (!(u >= 0.0 && u <= 1.0)) throw argument_error("mix_identity: u must lie in [0,1]");
  const double lambda = std::pow(u, beta);
  const Eigen::Index d = rho.dim();
  CMatrix out = lambda * rho.matrix();
  out += ((1.0 - lambda) / static_cast<double>(d)) * CMatrix::Identity(d, d);
  return DensityMatrix::unchecked(rho.n_qubits(), std::move(out));
}

DensityMatrix mix_identity(const DensityMatrix& rho, Rng& rng, double beta) {
  return mix_identity_from_u(rho, rng.uniform(), beta);
}

DensityMatrix sample_prior(const PriorSpec& spec, Rng& rng, int n_qubits) {
  spec.validate();
  DensityMatrix base = spec.kind == PriorKind::Z ? sample_z(rng, n_qubits)
                                                 : sample_gh(rng, n_qubits);
  if (!spec.mixed) return base;
  return mix_identity(base, rng, spec.beta);
}

}  // namespace qbayes
