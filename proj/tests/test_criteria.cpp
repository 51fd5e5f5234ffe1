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

#include <doctest.h>

#include <cmath>

#include "qbayes/criteria.hpp"
#include "qbayes/rng.hpp"

using namespace qbayes;

namespace {

PosteriorSummary make_summary(double mean, double err, std::uint64_t m,
                              SummarySource source = SummarySource::Z) {
  PosteriorSummary s;
  s.mean_n1 = mean;
  s.mean_n2 = mean;
  s.err_n1 = err;
  s.err_n2 = err;
  s.m = m;
  s.source = source;
  return s;
}

CriterionReport make_report(std::uint64_t m, bool satisfied) {
  CriterionReport r;
  r.m = m;
  r.gap = satisfied ? 0.1 : 1.0;
  r.budget = 0.5;
  r.satisfied = satisfied;
  return r;
}

}  // namespace

TEST_CASE("summarize") {
  std::vector<NegativityPair> constant(5, NegativityPair{0.3, 0.4});
  const PosteriorSummary s = summarize(constant, SummarySource::GH, 100);
  CHECK(s.mean_n1 == doctest::Approx(0.3));
  CHECK(s.err_n1 == 0.0);
  CHECK(s.err_n2 == 0.0);

  std::vector<NegativityPair> pair{{0.0, 0.0}, {1.0, 1.0}};
  const PosteriorSummary t = summarize(pair, SummarySource::Z, 10);
  CHECK(t.mean_n1 == doctest::Approx(0.5));

  CHECK_THROWS_AS(summarize({NegativityPair{0, 0}}, SummarySource::Z, 1),
                  argument_error);
}

TEST_CASE("criterion 1") {
  const PosteriorSummary sz = make_summary(0.3, 0.05, 1000, SummarySource::Z);
  const PosteriorSummary sgh = make_summary(0.3, 0.02, 1000, SummarySource::GH);
  const CriterionReport same = criterion_1(sz, sgh, Measure::N1);
  CHECK(same.gap == 0.0);
  CHECK(same.budget == doctest::Approx(0.07));
  CHECK(same.satisfied);
  CHECK(same.which == CriterionKind::C1);

  const PosteriorSummary far = make_summary(0.5, 0.05, 1000, SummarySource::GH);
  const CriterionReport apart = criterion_1(sz, far, Measure::N1);
  CHECK(apart.gap == doctest::Approx(0.2));
  CHECK(apart.budget == doctest::Approx(0.1));
  CHECK(!apart.satisfied);

  // symmetric in its two summaries
  const CriterionReport swapped = criterion_1(far, sz, Measure::N1);
  CHECK(swapped.gap == apart.gap);
  CHECK(swapped.budget == apart.budget);
  CHECK(swapped.satisfied == apart.satisfied);

  CHECK_THROWS_AS(
      criterion_1(sz, make_summary(0.3, 0.05, 2000, SummarySource::GH), Measure::N1),
      argument_error);
}

TEST_CASE("criterion 1 scale consistency") {
  Rng rng(3);
  for (int rep = 0; rep < 50; ++rep) {
    const double k = 0.1 + 10.0 * rng.uniform();
    const double m1 = rng.uniform(), m2 = rng.uniform();
    const double e1 = 0.01 + rng.uniform(), e2 = 0.01 + rng.uniform();
    const CriterionReport base = criterion_1(make_summary(m1, e1, 100),
                                             make_summary(m2, e2, 100), Measure::N1);
    const CriterionReport scaled = criterion_1(
        make_summary(k * m1, k * e1, 100), make_summary(k * m2, k * e2, 100),
        Measure::N1);
    CHECK(scaled.gap == doctest::Approx(k * base.gap));
    CHECK(scaled.budget == doctest::Approx(k * base.budget));
    CHECK(scaled.satisfied == base.satisfied);
  }
}

TEST_CASE("criterion 1.5") {
  const PosteriorSummary sp = make_summary(0.3, 0.04, 500, SummarySource::GH);
  const PosteriorSummary smle =
      make_summary(0.3, 0.04, 500, SummarySource::MleBootstrap);
  CHECK(criterion_1_5(sp, smle, Measure::N2).satisfied);

  // strict inequality: zero gap with zero budget does not satisfy
  const PosteriorSummary degenerate_a = make_summary(0.3, 0.0, 500);
  const PosteriorSummary degenerate_b =
      make_summary(0.3, 0.0, 500, SummarySource::MleBootstrap);
  const CriterionReport r = criterion_1_5(degenerate_a, degenerate_b, Measure::N1);
  CHECK(r.gap == 0.0);
  CHECK(r.budget == 0.0);
  CHECK(!r.satisfied);
  CHECK(r.which == CriterionKind::C1_5);
}

TEST_CASE("width multiplier scales the budget") {
  const PosteriorSummary a = make_summary(0.3, 0.05, 100);
  const PosteriorSummary b = make_summary(0.42, 0.05, 100, SummarySource::GH);
  CHECK(!criterion_1(a, b, Measure::N1).satisfied);        // gap 0.12 vs 0.10
  CHECK(criterion_1(a, b, Measure::N1, 2.0).satisfied);    // budget doubled
  CHECK_THROWS_AS(criterion_1(a, b, Measure::N1, 0.0), argument_error);
}

TEST_CASE("power-law fits") {
  std::vector<std::pair<std::uint64_t, double>> sqrt_points;
  for (std::uint64_t m : {100ull, 1000ull, 10000ull, 100000ull}) {
    sqrt_points.emplace_back(m, 3.0 / std::sqrt(static_cast<double>(m)));
  }
  const PowerLawFit f1 = fit_power_law(sqrt_points);
  CHECK(f1.exponent == doctest::Approx(0.5).epsilon(1e-10));
  CHECK(f1.amplitude == doctest::Approx(3.0).epsilon(1e-10));

  std::vector<std::pair<std::uint64_t, double>> inv_points;
  for (std::uint64_t m : {10ull, 100ull, 1000ull}) {
    inv_points.emplace_back(m, 2.0 / static_cast<double>(m));
  }
  CHECK(fit_power_law(inv_points).exponent == doctest::Approx(1.0).epsilon(1e-10));

  // exact inputs leave no residual
  const PowerLawFit f2 = fit_power_law(inv_points);
  for (const auto& [m, y] : inv_points) {
    const double predicted =
        f2.amplitude * std::pow(static_cast<double>(m), -f2.exponent);
    CHECK(std::abs(predicted - y) < 1e-10);
  }

  CHECK_THROWS_AS(fit_power_law({{10, 1.0}}), argument_error);
  CHECK_THROWS_AS(fit_power_law({{10, 1.0}, {10, 2.0}}), argument_error);
  CHECK_THROWS_AS(fit_power_law({{10, 1.0}, {100, 0.0}}), argument_error);
  CHECK_THROWS_AS(fit_power_law({{10, 1.0}, {100, -0.5}}), argument_error);
}

TEST_CASE("sufficient m") {
  SUBCASE("all satisfied returns the smallest m") {
    std::vector<CriterionReport> series{make_report(100, true), make_report(1000, true),
                                        make_report(10000, true)};
    CHECK(sufficient_m(series) == 100);
  }
  SUBCASE("none satisfied returns nothing") {
    std::vector<CriterionReport> series{make_report(100, false),
                                        make_report(1000, false)};
    CHECK(!sufficient_m(series).has_value());
  }
  SUBCASE("threshold is the start of the trailing satisfied run") {
    std::vector<CriterionReport> series{
        make_report(1000, false), make_report(10000, false),
        make_report(100000, true), make_report(1000000, true)};
    CHECK(sufficient_m(series) == 100000);
  }
  SUBCASE("a late failure pushes the threshold past it") {
    std::vector<CriterionReport> series{
        make_report(1000, true), make_report(10000, false),
        make_report(100000, true), make_report(1000000, true)};
    CHECK(sufficient_m(series) == 100000);
  }
  SUBCASE("input validation") {
    CHECK_THROWS_AS(sufficient_m({}), argument_error);
    std::vector<CriterionReport> unordered{make_report(1000, true),
                                           make_report(100, true)};
    CHECK_THROWS_AS(sufficient_m(unordered), argument_error);
  }
}
