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

#include <array>
#include <cstdint>
#include <vector>

#include "qbayes/qstate.hpp"
#include "qbayes/rng.hpp"

namespace qbayes {

/// The four tetrahedral single-qubit elements (I + v.sigma)/4 with v the
/// Bloch vectors (1,1,1), (1,-1,-1), (-1,1,-1), (-1,-1,1) over sqrt(3).
std::array<Eigen::Matrix2cd, 4> sic_qubit();

/// n-qubit tensor-product SIC-POVM.
///
/// Compound outcome indexing is base-4 little-endian over the qubit order
/// fixed in qstate: digit q of a flat index k is (k >> 2q) & 3 and selects
/// qubit q's single-qubit outcome. The frame matrix caches hvec of every
/// compound element, so outcome probabilities are one real matvec.
class SicPovm {
 public:
  explicit SicPovm(int n_qubits);

  int n_qubits() const { return n_qubits_; }
  int dim() const { return 1 << n_qubits_; }
  std::size_t n_outcomes() const { return std::size_t(1) << (2 * n_qubits_); }
  const std::array<Eigen::Matrix2cd, 4>& qubit_elements() const {
    return qubit_elements_;
  }

  /// Dense compound element for flat index k (built on demand).
  CMatrix element(std::size_t k) const;

  /// Row k equals hvec(element(k)); shape (4^n, d^2), row-major.
  const FrameMatrix& frame() const { return frame_; }

  /// p[k] = Tr(rho element(k)). hv_scratch must hold d^2 doubles and out 4^n.
  /// Tiny negative values from rounding are clamped to zero.
  void probabilities(const CMatrix& rho, double* hv_scratch, double* out) const;

 private:
  int n_qubits_;
  std::array<Eigen::Matrix2cd, 4> qubit_elements_;
  FrameMatrix frame_;
};

/// Outcome counts over the 4^n compound outcomes. total_m == 0 encodes the
/// empty record used to sample a bare prior through the chain machinery.
struct MeasurementRecord {
  int n_qubits = 0;
  std::vector<std::uint64_t> counts;
  std::uint64_t total_m = 0;

  static MeasurementRecord empty(int n_qubits);
  void validate() const;
  std::vector<double> frequencies() const;
};

std::vector<double> outcome_probabilities(const DensityMatrix& rho,
                                          const SicPovm& povm);

/// Multinomial draw of m shots from the outcome distribution of rho.
MeasurementRecord simulate_counts(const DensityMatrix& rho, const SicPovm& povm,
                                  std::uint64_t m, Rng& rng);

/// Multinomial sampling from an explicit probability vector (inverse-CDF).
std::vector<std::uint64_t> multinomial_counts(const std::vector<double>& p,
                                              std::uint64_t m, Rng& rng);

}  // namespace qbayes
