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

#include "qbayes/entanglement.hpp"
#include "qbayes/povm.hpp"

namespace qbayes {

/// Multinomial log-likelihood, natural-log scale. The -infinity sentinel
/// marks a state that assigns probability zero to an observed outcome; it is
/// an ordinary comparable value (always rejected by the sampler).
struct LogLikelihood {
  double value = 0.0;
  bool finite() const { return std::isfinite(value); }
};

LogLikelihood log_likelihood(const DensityMatrix& rho,
                             const MeasurementRecord& record,
                             const SicPovm& povm);

/// Closed-form tomographic inversion. Applies the single-qubit dual-frame
/// map q = 6 f - (sum over that qubit's outcomes) along every tensor axis,
/// then synthesizes rho_tomo = sum_k q_k element(k). Hermitian with unit
/// trace up to rounding; NOT necessarily positive semidefinite.
CMatrix linear_inversion_from_frequencies(const std::vector<double>& frequencies,
                                          const SicPovm& povm);
CMatrix linear_inversion(const MeasurementRecord& record, const SicPovm& povm);

/// rho_tomo when it is already physical, otherwise the clip-and-renormalize
/// projection of it.
DensityMatrix mle_estimate(const MeasurementRecord& record, const SicPovm& povm);

/// For each resample: simulate m shots from rho_mle, re-estimate, evaluate
/// the negativity pair. Resample seeds derive from rng up front, so the
/// resamples form independent streams.
std::vector<NegativityPair> bootstrap_negativity(const DensityMatrix& rho_mle,
                                                 const SicPovm& povm,
                                                 std::uint64_t m,
                                                 int k_resamples, Rng& rng);

}  // namespace qbayes
