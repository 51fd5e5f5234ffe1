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

#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "qbayes/entanglement.hpp"

namespace qbayes {

enum class SummarySource { Z, GH, MleBootstrap };
enum class Measure { N1, N2 };
enum class CriterionKind { C1, C1_5 };

/// Mean and spread of one estimator's negativity distribution at a given M.
struct PosteriorSummary {
  double mean_n1 = 0.0;
  double mean_n2 = 0.0;
  double err_n1 = 0.0;  // sample standard deviation
  double err_n2 = 0.0;
  SummarySource source = SummarySource::GH;
  std::uint64_t m = 0;
};

/// One criterion evaluation: satisfied iff gap < budget (strict).
struct CriterionReport {
  std::uint64_t m = 0;
  double gap = 0.0;
  double budget = 0.0;
  bool satisfied = false;
  CriterionKind which = CriterionKind::C1;
  Measure measure = Measure::N1;
};

PosteriorSummary summarize(const std::vector<NegativityPair>& samples,
                           SummarySource source, std::uint64_t m);

/// |<N>_Z - <N>_GH| < deltaN_Z + deltaN_GH. The width multiplier scales the
/// budget for sensitivity checks; the criterion as written uses 1.
CriterionReport criterion_1(const PosteriorSummary& sz, const PosteriorSummary& sgh,
                            Measure measure, double width_multiplier = 1.0);

/// |<N>_P - N_MLE| < deltaN_P + deltaN_MLE for a prior P; callers apply it
/// per prior and keep the more conservative (larger) sufficient M.
CriterionReport criterion_1_5(const PosteriorSummary& sp,
                              const PosteriorSummary& smle, Measure measure,
                              double width_multiplier = 1.0);

struct PowerLawFit {
  double amplitude = 0.0;  // c  in y = c / m^alpha
  double exponent = 0.0;   // alpha
};

/// Least squares of ln y = ln c - alpha ln m. Requires >= 2 distinct m and
/// strictly positive y.
PowerLawFit fit_power_law(const std::vector<std::pair<std::uint64_t, double>>& points);

/// Smallest m of the trailing all-satisfied run ("satisfied at m and at every
/// larger tested m"); nullopt when the largest tested m fails.
std::optional<std::uint64_t> sufficient_m(const std::vector<CriterionReport>& series);

}  // namespace qbayes
