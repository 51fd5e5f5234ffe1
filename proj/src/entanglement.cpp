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

#include "qbayes/entanglement.hpp"

#include <bit>
#include <cmath>
#include <map>

namespace qbayes {

namespace {

std::vector<Bipartition> cuts_from_masks(int n, const std::vector<unsigned>& masks) {
  std::vector<Bipartition> out;
  out.reserve(masks.size());
  for (unsigned m : masks) {
    std::vector<int> idx;
    for (int q = 0; q < n; ++q) {
      if (m & (1u << q)) idx.push_back(q);
    }
    out.emplace_back(n, idx);
  }
  return out;
}

double negativity_from_mask(const CMatrix& rho, int n, unsigned mask) {
  // (||rho^Gamma||_1 - 1)/2: the absolute sum of the negative eigenvalues.
  const double raw = 0.5 * (trace_norm(partial_transpose(rho, n, mask)) - 1.0);
  return raw > tol::negativity_clamp ? raw : 0.0;
}

double geometric_mean(const std::vector<double>& values) {
  double log_sum = 0.0;
  for (double v : values) {
    if (v <= 0.0) return 0.0;
    log_sum += std::log(v);
  }
  return std::exp(log_sum / static_cast<double>(values.size()));
}

}  // namespace

std::vector<Bipartition> balanced_cuts(int n_qubits) {
  if (n_qubits < 2) throw argument_error("balanced_cuts: need at least 2 qubits");
  const int k = n_qubits / 2;
  const unsigned full = (1u << n_qubits) - 1u;
  std::vector<unsigned> masks;
  for (unsigned m = 1; m < full; ++m) {
    if (std::popcount(m) != k) continue;
    // for even n, Y and its complement name the same cut; keep qubit 0 in Y
    if (n_qubits % 2 == 0 && !(m & 1u)) continue;
    masks.push_back(m);
  }
  return cuts_from_masks(n_qubits, masks);
}

std::vector<Bipartition> single_qubit_cuts(int n_qubits) {
  if (n_qubits < 2) throw argument_error("single_qubit_cuts: need at least 2 qubits");
  std::vector<unsigned> masks;
  for (int q = 0; q < n_qubits; ++q) masks.push_back(1u << q);
  return cuts_from_masks(n_qubits, masks);
}

double negativity(const DensityMatrix& rho, const Bipartition& part) {
  if (part.n_qubits() != rho.n_qubits()) {
    throw argument_error("negativity: partition does not match state");
  }
  return negativity_from_mask(rho.matrix(), rho.n_qubits(), part.mask());
}

NegativityPair negativity_pair(const DensityMatrix& rho) {
  const int n = rho.n_qubits();
  if (n < 2) throw argument_error("negativity_pair: need at least 2 qubits");
  const unsigned full = (1u << n) - 1u;

  // N(Y) = N(complement of Y), so cache per canonical mask
  std::map<unsigned, double> cache;
  auto value = [&](unsigned mask) {
    const unsigned key = std::min(mask, full & ~mask);
    auto it = cache.find(key);
    if (it != cache.end()) return it->second;
    const double v = negativity_from_mask(rho.matrix(), n, mask);
    cache.emplace(key, v);
    return v;
  };

  std::vector<double> singles;
  for (const Bipartition& cut : single_qubit_cuts(n)) singles.push_back(value(cut.mask()));

  NegativityPair pair;
  pair.n2 = geometric_mean(singles);
  if (n <= 3) {
    pair.n1 = pair.n2;
  } else {
    std::vector<double> balanced;
    for (const Bipartition& cut : balanced_cuts(n)) balanced.push_back(value(cut.mask()));
    pair.n1 = geometric_mean(balanced);
  }
  return pair;
}

DensityMatrix w_noise_state(double q, int n_qubits) {
  if (!(q >= 0.0 && q <= 1.0)) {
    throw argument_error("w_noise_state: q must lie in [0,1]");
  }
  if (n_qubits < 2) {
    throw argument_error("w_noise_state: need at least 2 qubits");
  }
  const Eigen::Index d = Eigen::Index(1) << n_qubits;
  CVector w = CVector::Zero(d);
  const double amp = 1.0 / std::sqrt(static_cast<double>(n_qubits));
  for (int qubit = 0; qubit < n_qubits; ++qubit) {
    w[Eigen::Index(1) << (n_qubits - 1 - qubit)] = Complex(amp, 0.0);
  }
  CMatrix rho = q * (w * w.adjoint());
  rho += ((1.0 - q) / static_cast<double>(d)) * CMatrix::Identity(d, d);
  return DensityMatrix::unchecked(n_qubits, std::move(rho));
}

DensityMatrix smolin_state() {
  CVector phi_plus(4), phi_minus(4), psi_plus(4), psi_minus(4);
  const double s = 1.0 / std::sqrt(2.0);
  phi_plus << s, 0, 0, s;
  phi_minus << s, 0, 0, -s;
  psi_plus << 0, s, s, 0;
  psi_minus << 0, s, -s, 0;

  CMatrix rho = CMatrix::Zero(16, 16);
  for (const CVector& bell : {psi_plus, psi_minus, phi_plus, phi_minus}) {
    const CMatrix proj = bell * bell.adjoint();
    rho += 0.25 * kron(proj, proj);
  }
  return DensityMatrix::unchecked(4, std::move(rho));
}

}  // namespace qbayes
