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

#include "qbayes/criteria.hpp"

#include <cmath>
#include <set>

namespace qbayes {

namespace {

struct MeanStd {
  double mean;
  double std;
};

MeanStd mean_and_std(const std::vector<double>& xs) {
  const double n = static_cast<double>(xs.size());
  double mean = 0.0;
  for (double x : xs) mean += x;
  mean /= n;
  double ss = 0.0;
  for (double x : xs) ss += (x - mean) * (x - mean);
  return {mean, std::sqrt(ss / (n - 1.0))};
}

CriterionReport compare(const PosteriorSummary& a, const PosteriorSummary& b,
                        Measure measure, double width_multiplier,
                        CriterionKind which) {
  if (a.m != b.m) {
    throw argument_error("criterion: summaries taken at different m");
  }
  if (!(width_multiplier > 0.0)) {
    throw argument_error("criterion: width multiplier must be positive");
  }
  const bool n1 = measure == Measure::N1;
  CriterionReport rep;
  rep.m = a.m;
  rep.gap = std::abs((n1 ? a.mean_n1 : a.mean_n2) - (n1 ? b.mean_n1 : b.mean_n2));
  rep.budget = width_multiplier * ((n1 ? a.err_n1 : a.err_n2) + (n1 ? b.err_n1 : b.err_n2));
  rep.satisfied = rep.gap < rep.budget;
  rep.which = which;
  rep.measure = measure;
  return rep;
}

}  // namespace

PosteriorSummary summarize(const std::vector<NegativityPair>& samples,
                           SummarySource source, std::uint64_t m) {
  if (samples.size() < 2) {
    throw argument_error("summarize: need at least 2 samples");
  }
  std::vector<double> n1s, n2s;
  n1s.reserve(samples.size());
  n2s.reserve(samples.size());
  for (const NegativityPair& s : samples) {
    n1s.push_back(s.n1);
    n2s.push_back(s.n2);
  }
  const MeanStd s1 = mean_and_std(n1s);
  const MeanStd s2 = mean_and_std(n2s);
  PosteriorSummary out;
  out.mean_n1 = s1.mean;
  out.err_n1 = s1.std;
  out.mean_n2 = s2.mean;
  out.err_n2 = s2.std;
  out.source = source;
  out.m = m;
  return out;
}

CriterionReport criterion_1(const PosteriorSummary& sz, const PosteriorSummary& sgh,
                            Measure measure, double width_multiplier) {
  return compare(sz, sgh, measure, width_multiplier, CriterionKind::C1);
}

CriterionReport criterion_1_5(const PosteriorSummary& sp,
                              const PosteriorSummary& smle, Measure measure,
                              double width_multiplier) {
  return compare(sp, smle, measure, width_multiplier, CriterionKind::C1_5);
}

PowerLawFit fit_power_law(const std::vector<std::pair<std::uint64_t, double>>& points) {
  std::set<std::uint64_t> distinct;
  for (const auto& [m, y] : points) {
    if (m < 1) throw argument_error("fit_power_law: m values must be positive");
    if (!(y > 0.0)) throw argument_error("fit_power_law: y values must be positive");
    distinct.insert(m);
  }
  if (distinct.size() < 2) {
    throw argument_error("fit_power_law: need at least 2 distinct m values");
  }
  const double n = static_cast<double>(points.size());
  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  for (const auto& [m, y] : points) {
    const double x = std::log(static_cast<double>(m));
    const double ly = std::log(y);
    sx += x;
    sy += ly;
    sxx += x * x;
    sxy += x * ly;
  }
  const double slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
  const double intercept = (sy - slope * sx) / n;
  return {std::exp(intercept), -slope};
}

std::optional<std::uint64_t> sufficient_m(const std::vector<CriterionReport>& series) {
  if (series.empty()) throw argument_error("sufficient_m: empty series");
  for (std::size_t i = 1; i < series.size(); ++i) {
    if (series[i].m <= series[i - 1].m) {
      throw argument_error("sufficient_m: series must be strictly increasing in m");
    }
  }
  std::optional<std::uint64_t> threshold;
  for (std::size_t i = series.size(); i-- > 0;) {
    if (!series[i].satisfied) break;
    threshold = series[i].m;
  }
  return threshold;
}

}  // namespace qbayes
