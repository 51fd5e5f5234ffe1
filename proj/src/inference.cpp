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

#include "qbayes/inference.hpp"

#include "qbayes/kernels.hpp"

namespace qbayes {

LogLikelihood log_likelihood(const DensityMatrix& rho,
                             const MeasurementRecord& record,
                             const SicPovm& povm) {
  if (rho.n_qubits() != povm.n_qubits() || record.n_qubits != povm.n_qubits()) {
    throw argument_error("log_likelihood: dimension mismatch");
  }
  const std::vector<double> p = outcome_probabilities(rho, povm);
  std::vector<double> w(record.counts.size());
  for (std::size_t k = 0; k < w.size(); ++k) {
    w[k] = static_cast<double>(record.counts[k]);
  }
  return {kernels::log_dot(w.data(), p.data(), w.size())};
}

CMatrix linear_inversion_from_frequencies(const std::vector<double>& frequencies,
                                          const SicPovm& povm) {
  const std::size_t outcomes = povm.n_outcomes();
  if (frequencies.size() != outcomes) {
    throw argument_error("linear_inversion: frequency vector length mismatch");
  }
  // dual-frame coefficients: q = 6 f - (axis sum), applied per qubit axis
  std::vector<double> q(frequencies);
  const int n = povm.n_qubits();
  for (int axis = 0; axis < n; ++axis) {
    const std::size_t stride = std::size_t(1) << (2 * axis);
    for (std::size_t block = 0; block < outcomes; block += 4 * stride) {
      for (std::size_t off = 0; off < stride; ++off) {
        const std::size_t i0 = block + off;
        const std::size_t i1 = i0 + stride;
        const std::size_t i2 = i1 + stride;
        const std::size_t i3 = i2 + stride;
        const double s = q[i0] + q[i1] + q[i2] + q[i3];
        q[i0] = 6.0 * q[i0] - s;
        q[i1] = 6.0 * q[i1] - s;
        q[i2] = 6.0 * q[i2] - s;
        q[i3] = 6.0 * q[i3] - s;
      }
    }
  }
  // synthesize: hvec(rho_tomo) = frame^T q
  Eigen::Map<const Eigen::VectorXd> qv(q.data(), static_cast<Eigen::Index>(outcomes));
  const Eigen::VectorXd hv = povm.frame().transpose() * qv;
  return hvec_inverse(hv.data(), povm.dim());
}

CMatrix linear_inversion(const MeasurementRecord& record, const SicPovm& povm) {
  record.validate();
  if (record.n_qubits != povm.n_qubits()) {
    throw argument_error("linear_inversion: record does not match POVM");
  }
  return linear_inversion_from_frequencies(record.frequencies(), povm);
}

DensityMatrix mle_estimate(const MeasurementRecord& record, const SicPovm& povm) {
  CMatrix tomo = linear_inversion(record, povm);
  const double min_eig = hermitian_eigenvalues(tomo).minCoeff();
  if (min_eig >= -tol::psd) {
    return DensityMatrix::unchecked(povm.n_qubits(), std::move(tomo));
  }
  return project_to_physical(tomo);
}

std::vector<NegativityPair> bootstrap_negativity(const DensityMatrix& rho_mle,
                                                 const SicPovm& povm,
                                                 std::uint64_t m,
                                                 int k_resamples, Rng& rng) {
  if (k_resamples < 2) {
    throw argument_error("bootstrap_negativity: need at least 2 resamples");
  }
  if (m < 1) throw argument_error("bootstrap_negativity: m must be at least 1");
  std::vector<std::uint64_t> seeds(k_resamples);
  for (auto& s : seeds) s = rng.next_u64();

  const std::vector<double> p = outcome_probabilities(rho_mle, povm);
  std::vector<NegativityPair> out;
  out.reserve(k_resamples);
  for (int i = 0; i < k_resamples; ++i) {
    Rng local(seeds[i]);
    MeasurementRecord rec;
    rec.n_qubits = rho_mle.n_qubits();
    rec.total_m = m;
    rec.counts = multinomial_counts(p, m, local);
    out.push_back(negativity_pair(mle_estimate(rec, povm)));
  }
  return out;
}

}  // namespace qbayes
