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

#include "qbayes/entanglement.hpp"
#include "qbayes/priors.hpp"

using namespace qbayes;

namespace {

DensityMatrix product_state(Rng& rng, int n_qubits) {
  std::vector<CMatrix> factors;
  for (int q = 0; q < n_qubits; ++q) factors.push_back(sample_gh(rng, 1).matrix());
  return DensityMatrix::unchecked(n_qubits, kron_all(factors));
}

}  // namespace

TEST_CASE("cut families") {
  CHECK(balanced_cuts(4).size() == 3);
  CHECK(single_qubit_cuts(4).size() == 4);
  CHECK(balanced_cuts(2).size() == 1);
  CHECK(single_qubit_cuts(2).size() == 2);
  CHECK(balanced_cuts(3).size() == 3);
  CHECK(balanced_cuts(6).size() == 10);
}

TEST_CASE("negativity basics") {
  const DensityMatrix mixed = w_noise_state(0.0, 2);
  CHECK(negativity(mixed, Bipartition(2, {0})) == 0.0);

  // Bell pair: PT spectrum {1/2, 1/2, 1/2, -1/2}
  CVector bell(4);
  bell << 1.0 / std::sqrt(2.0), 0, 0, 1.0 / std::sqrt(2.0);
  const DensityMatrix rho =
      DensityMatrix::unchecked(2, CMatrix(bell * bell.adjoint()));
  CHECK(negativity(rho, Bipartition(2, {1})) == doctest::Approx(0.5).epsilon(1e-12));
}

TEST_CASE("Smolin state") {
  const DensityMatrix smolin = smolin_state();
  CHECK_NOTHROW(smolin.check_invariants());

  const RVector eigs = hermitian_eigenvalues(smolin.matrix());
  int rank = 0;
  for (Eigen::Index i = 0; i < eigs.size(); ++i) {
    if (eigs[i] > 1e-12) {
      ++rank;
      CHECK(eigs[i] == doctest::Approx(0.25).epsilon(1e-12));
    }
  }
  CHECK(rank == 4);

  for (const Bipartition& cut : balanced_cuts(4)) {
    CHECK(negativity(smolin, cut) == 0.0);
  }
  for (const Bipartition& cut : single_qubit_cuts(4)) {
    CHECK(negativity(smolin, cut) == doctest::Approx(0.5).epsilon(1e-10));
  }

  const NegativityPair pair = negativity_pair(smolin);
  CHECK(pair.n1 == 0.0);  // a zero cut zeroes the geometric mean exactly
  CHECK(pair.n2 == doctest::Approx(0.5).epsilon(1e-10));
}

TEST_CASE("noisy W state values") {
  SUBCASE("q = 0 is the maximally mixed state") {
    const DensityMatrix rho = w_noise_state(0.0, 4);
    CHECK((rho.matrix() - CMatrix::Identity(16, 16) / 16.0).cwiseAbs().maxCoeff() <
          1e-15);
  }
  SUBCASE("q = 1 is a rank-1 projector") {
    const DensityMatrix rho = w_noise_state(1.0, 4);
    CHECK(std::abs(rho.matrix().trace() - Complex(1, 0)) < 1e-14);
    const RVector eigs = hermitian_eigenvalues(rho.matrix());
    CHECK(eigs[eigs.size() - 1] == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(std::abs(eigs[eigs.size() - 2]) < 1e-12);
    // projector check
    CHECK((rho.matrix() * rho.matrix() - rho.matrix()).cwiseAbs().maxCoeff() < 1e-12);
  }
  SUBCASE("rho(q=0.8) matches the reference negativities") {
    const NegativityPair pair = negativity_pair(w_noise_state(0.8, 4));
    CHECK(pair.n1 == doctest::Approx(0.3875).epsilon(1.3e-3));
    CHECK(pair.n2 == doctest::Approx(0.3339).epsilon(1.5e-3));
  }
  SUBCASE("argument validation") {
    CHECK_THROWS_AS(w_noise_state(-0.1, 4), argument_error);
    CHECK_THROWS_AS(w_noise_state(1.1, 4), argument_error);
    CHECK_THROWS_AS(w_noise_state(0.5, 1), argument_error);
  }
}

TEST_CASE("negativities are nondecreasing in q") {
  double last1 = -1.0, last2 = -1.0;
  for (int i = 0; i <= 20; ++i) {
    const double q = 0.05 * i;
    const NegativityPair p = negativity_pair(w_noise_state(q, 4));
    CHECK(p.n1 >= last1 - 1e-12);
    CHECK(p.n2 >= last2 - 1e-12);
    last1 = p.n1;
    last2 = p.n2;
  }
}

TEST_CASE("product states have zero negativity everywhere") {
  Rng rng(41);
  for (int rep = 0; rep < 5; ++rep) {
    const NegativityPair p = negativity_pair(product_state(rng, 4));
    CHECK(p.n1 == 0.0);
    CHECK(p.n2 == 0.0);
  }
}

TEST_CASE("negativity pair is invariant under local unitaries") {
  Rng rng(43);
  const DensityMatrix rho = w_noise_state(0.7, 4);
  const NegativityPair base = negativity_pair(rho);
  for (int rep = 0; rep < 5; ++rep) {
    std::vector<CMatrix> locals;
    for (int q = 0; q < 4; ++q) locals.push_back(haar_unitary(rng, 2));
    const CMatrix u = kron_all(locals);
    const CMatrix rotated = u * rho.matrix() * u.adjoint();
    const NegativityPair p =
        negativity_pair(DensityMatrix::unchecked(4, rotated));
    CHECK(p.n1 == doctest::Approx(base.n1).epsilon(1e-9));
    CHECK(p.n2 == doctest::Approx(base.n2).epsilon(1e-9));
  }
}

TEST_CASE("single-cut negativity is convex") {
  Rng rng(47);
  const Bipartition cut(3, {1});
  for (int rep = 0; rep < 20; ++rep) {
    const DensityMatrix a = sample_gh(rng, 3);
    const DensityMatrix b = sample_z(rng, 3);
    const double lambda = rng.uniform();
    const CMatrix mix = lambda * a.matrix() + (1.0 - lambda) * b.matrix();
    const double left = negativity(DensityMatrix::unchecked(3, mix), cut);
    const double right =
        lambda * negativity(a, cut) + (1.0 - lambda) * negativity(b, cut);
    CHECK(left <= right + 1e-10);
  }
}

TEST_CASE("n1 equals n2 for two and three qubits") {
  Rng rng(53);
  for (int n : {2, 3}) {
    for (int rep = 0; rep < 5; ++rep) {
      const NegativityPair p = negativity_pair(sample_gh(rng, n));
      CHECK(p.n1 == p.n2);
    }
  }
}
