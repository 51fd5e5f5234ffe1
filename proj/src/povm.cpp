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

#include "qbayes/povm.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "qbayes/kernels.hpp"

namespace qbayes {

std::array<Eigen::Matrix2cd, 4> sic_qubit() {
  const double s = 1.0 / std::sqrt(3.0);
  const std::array<std::array<double, 3>, 4> bloch = {{
      {s, s, s},
      {s, -s, -s},
      {-s, s, -s},
      {-s, -s, s},
  }};
  std::array<Eigen::Matrix2cd, 4> out;
  for (int a = 0; a < 4; ++a) {
    const double x = bloch[a][0], y = bloch[a][1], z = bloch[a][2];
    Eigen::Matrix2cd m;
    m(0, 0) = Complex(1.0 + z, 0.0);
    m(0, 1) = Complex(x, -y);
    m(1, 0) = Complex(x, y);
    m(1, 1) = Complex(1.0 - z, 0.0);
    out[a] = 0.25 * m;
  }
  return out;
}

SicPovm::SicPovm(int n_qubits) : n_qubits_(n_qubits), qubit_elements_(sic_qubit()) {
  // the frame matrix holds 16^n doubles; five qubits is 8.4 MB, six would be
  // 134 GB
  if (n_qubits < 1 || n_qubits > 5) {
    throw argument_error("SicPovm: n_qubits out of supported range [1,5]");
  }
  const std::size_t outcomes = n_outcomes();
  const Eigen::Index d2 = Eigen::Index(dim()) * dim();
  frame_.resize(static_cast<Eigen::Index>(outcomes), d2);
  for (std::size_t k = 0; k < outcomes; ++k) {
    hvec(element(k), frame_.row(static_cast<Eigen::Index>(k)).data());
  }
}

CMatrix SicPovm::element(std::size_t k) const {
  if (k >= n_outcomes()) throw argument_error("SicPovm: outcome index out of range");
  std::vector<CMatrix> factors(n_qubits_);
  for (int q = 0; q < n_qubits_; ++q) {
    factors[q] = qubit_elements_[(k >> (2 * q)) & 3];
  }
  return kron_all(factors);
}

void SicPovm::probabilities(const CMatrix& rho, double* hv_scratch,
                            double* out) const {
  hvec(rho, hv_scratch);
  const std::size_t rows = n_outcomes();
  const std::size_t cols = static_cast<std::size_t>(frame_.cols());
  kernels::matvec(frame_.data(), hv_scratch, out, rows, cols);
  for (std::size_t k = 0; k < rows; ++k) {
    if (out[k] < 0.0) out[k] = 0.0;
  }
}

MeasurementRecord MeasurementRecord::empty(int n_qubits) {
  MeasurementRecord rec;
  rec.n_qubits = n_qubits;
  rec.counts.assign(std::size_t(1) << (2 * n_qubits), 0);
  rec.total_m = 0;
  return rec;
}

void MeasurementRecord::validate() const {
  if (n_qubits < 1) throw argument_error("MeasurementRecord: n_qubits must be positive");
  if (counts.size() != (std::size_t(1) << (2 * n_qubits))) {
    throw argument_error("MeasurementRecord: counts length must be 4^n");
  }
  const std::uint64_t sum = std::accumulate(counts.begin(), counts.end(), std::uint64_t(0));
  if (sum != total_m) {
    throw argument_error("MeasurementRecord: counts sum to " + std::to_string(sum) +
                         ", expected total_m = " + std::to_string(total_m));
  }
}

std::vector<double> MeasurementRecord::frequencies() const {
  if (total_m == 0) {
    throw argument_error("MeasurementRecord: frequencies undefined for an empty record");
  }
  std::vector<double> f(counts.size());
  const double inv = 1.0 / static_cast<double>(total_m);
  for (std::size_t k = 0; k < counts.size(); ++k) {
    f[k] = static_cast<double>(counts[k]) * inv;
  }
  return f;
}

std::vector<double> outcome_probabilities(const DensityMatrix& rho,
                                          const SicPovm& povm) {
  if (rho.n_qubits() != povm.n_qubits()) {
    throw argument_error("outcome_probabilities: dimension mismatch");
  }
  std::vector<double> hv(static_cast<std::size_t>(rho.dim()) * rho.dim());
  std::vector<double> p(povm.n_outcomes());
  povm.probabilities(rho.matrix(), hv.data(), p.data());
  return p;
}

std::vector<std::uint64_t> multinomial_counts(const std::vector<double>& p,
                                              std::uint64_t m, Rng& rng) {
  const std::size_t k = p.size();
  if (k == 0) throw argument_error("multinomial_counts: empty probability vector");
  std::vector<double> cdf(k);
  double acc = 0.0;
  for (std::size_t i = 0; i < k; ++i) {
    acc += p[i];
    cdf[i] = acc;
  }
  cdf[k - 1] = std::max(cdf[k - 1], 1.0);  // guard against rounding below 1
  std::vector<std::uint64_t> counts(k, 0);
  for (std::uint64_t shot = 0; shot < m; ++shot) {
    const double u = rng.uniform();
    const std::size_t cell =
        std::upper_bound(cdf.begin(), cdf.end(), u) - cdf.begin();
    ++counts[std::min(cell, k - 1)];
  }
  return counts;
}

MeasurementRecord simulate_counts(const DensityMatrix& rho, const SicPovm& povm,
                                  std::uint64_t m, Rng& rng) {
  if (m < 1) throw argument_error("simulate_counts: m must be at least 1");
  const std::vector<double> p = outcome_probabilities(rho, povm);
  MeasurementRecord rec;
  rec.n_qubits = rho.n_qubits();
  rec.total_m = m;
  rec.counts = multinomial_counts(p, m, rng);
  return rec;
}

}  // namespace qbayes
