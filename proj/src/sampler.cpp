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

#include "qbayes/sampler.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>

#include "qbayes/kernels.hpp"

namespace qbayes {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
// The controller fires every 100 steps on the accept/reject history gathered
// since the last step change. Resetting on change keeps stale decisions out
// of the running rate (a lagging estimate makes the loop oscillate), and the
// growing window makes the target window absorbing once the step is right.
constexpr std::size_t kAdaptInterval = 100;
constexpr std::size_t kAdaptHistory = 2000;

// Fold x into [lo, hi] by repeated reflection at the boundaries. The folded
// Gaussian proposal stays symmetric, so no Hastings correction is needed.
double reflect_interval(double x, double lo, double hi) {
  const double width = hi - lo;
  double t = std::fmod(x - lo, 2.0 * width);
  if (t < 0.0) t += 2.0 * width;
  return lo + (t <= width ? t : 2.0 * width - t);
}

struct GhWalk {
  Eigen::Index d = 0;
  CMatrix h, h_prop;

  void init(Rng& rng) {
    h.resize(d, d);
    h_prop.resize(d, d);
    for (Eigen::Index i = 0; i < d; ++i) {
      for (Eigen::Index j = 0; j < d; ++j) {
        const double re = rng.uniform_sym();
        const double im = rng.uniform_sym();
        h(i, j) = Complex(re, im);
      }
    }
  }

  // H = c sqrt(rho) U reproduces rho for any unitary U (the normalization
  // cancels c). The Haar rotation lands on a typical point of rho's fiber,
  // and c matches the box-typical Frobenius norm -- rho is invariant under
  // scaling H, so |H| is a slow free mode of the walk, and starting it away
  // from its equilibrium value would leave the tuned step size drifting.
  // Entries pushed past the box fold back in; the start point only needs to
  // be near the mode, not exactly on it.
  void init_from_state(const CMatrix& rho, Rng& rng) {
    Eigen::SelfAdjointEigenSolver<CMatrix> es(rho);
    RVector root = es.eigenvalues().cwiseMax(0.0).cwiseSqrt();
    h = es.eigenvectors() * root.asDiagonal() * es.eigenvectors().adjoint() *
        haar_unitary(rng, static_cast<int>(d));
    // box-uniform entries have E|entry|^2 = 2/3, so |H|_F^2 = 2 d^2 / 3;
    // the root times a unitary has |.|_F = 1
    h *= static_cast<double>(d) * std::sqrt(2.0 / 3.0);
    for (Eigen::Index i = 0; i < d; ++i) {
      for (Eigen::Index j = 0; j < d; ++j) {
        h(i, j) = Complex(reflect_interval(h(i, j).real(), -1.0, 1.0),
                          reflect_interval(h(i, j).imag(), -1.0, 1.0));
      }
    }
    h_prop = h;
  }

  bool propose(Rng& rng, double step) {
    for (Eigen::Index i = 0; i < d; ++i) {
      for (Eigen::Index j = 0; j < d; ++j) {
        const double re =
            reflect_interval(h(i, j).real() + step * rng.normal(), -1.0, 1.0);
        const double im =
            reflect_interval(h(i, j).imag() + step * rng.normal(), -1.0, 1.0);
        h_prop(i, j) = Complex(re, im);
      }
    }
    return true;
  }

  void accept() { h.swap(h_prop); }

  void densify(bool proposal, CMatrix& rho) const {
    const CMatrix& src = proposal ? h_prop : h;
    rho.noalias() = src * src.adjoint();
    rho = (0.5 * (rho + rho.adjoint())).eval();
    rho /= rho.trace().real();
  }
};

struct ZWalk {
  Eigen::Index d = 0;
  std::vector<double> e, e_prop;
  CMatrix v, v_prop;

  void init(Rng& rng) {
    e = sample_simplex(rng, static_cast<int>(d));
    e_prop = e;
    v = haar_unitary(rng, static_cast<int>(d));
    v_prop = v;
  }

  void init_from_state(const CMatrix& rho, Rng&) {
    Eigen::SelfAdjointEigenSolver<CMatrix> es(rho);
    e.resize(d);
    double total = 0.0;
    for (Eigen::Index i = 0; i < d; ++i) {
      e[i] = std::max(es.eigenvalues()[i], 0.0);
      total += e[i];
    }
    for (double& ei : e) ei /= total;
    e_prop = e;
    v = es.eigenvectors();
    v_prop = v;
  }

  bool propose(Rng& rng, double step) {
    // zero-sum Gaussian jitter on the eigenvalue simplex
    std::vector<double> z(e.size());
    double mean = 0.0;
    for (double& zi : z) {
      zi = rng.normal();
      mean += zi;
    }
    mean /= static_cast<double>(z.size());
    double sum = 0.0;
    for (std::size_t i = 0; i < e.size(); ++i) {
      e_prop[i] = e[i] + step * (z[i] - mean);
      if (e_prop[i] < 0.0) return false;  // off the simplex: reject the step
      sum += e_prop[i];
    }
    for (double& ei : e_prop) ei /= sum;  // rounding-level renormalization

    // eigenbasis rotation by exp(i step G), G from the GUE (G ~ -G, so the
    // proposal is symmetric)
    const double off_scale = 1.0 / std::sqrt(2.0);
    CMatrix g(d, d);
    for (Eigen::Index i = 0; i < d; ++i) {
      g(i, i) = Complex(rng.normal(), 0.0);
      for (Eigen::Index j = i + 1; j < d; ++j) {
        const double re = off_scale * rng.normal();
        const double im = off_scale * rng.normal();
        g(i, j) = Complex(re, im);
        g(j, i) = Complex(re, -im);
      }
    }
    Eigen::SelfAdjointEigenSolver<CMatrix> es(g);
    CVector phases(d);
    for (Eigen::Index i = 0; i < d; ++i) {
      const double a = step * es.eigenvalues()[i];
      phases[i] = Complex(std::cos(a), std::sin(a));
    }
    v_prop.noalias() = es.eigenvectors() * phases.asDiagonal() *
                       es.eigenvectors().adjoint() * v;
    return true;
  }

  void accept() {
    std::swap(e, e_prop);
    v.swap(v_prop);
  }

  void densify(bool proposal, CMatrix& rho) const {
    const std::vector<double>& ee = proposal ? e_prop : e;
    const CMatrix& vv = proposal ? v_prop : v;
    Eigen::Map<const RVector> em(ee.data(), d);
    rho.noalias() = vv * em.asDiagonal() * vv.adjoint();
    rho = (0.5 * (rho + rho.adjoint())).eval();
    rho /= rho.trace().real();
  }
};

// Adds the identity-mixing coordinate: lambda = u^beta with u walked on [0,1].
template <class Base>
struct MixedWalk {
  Base base;
  double beta = 0.5;
  double u = 0.0, u_prop = 0.0;

  void init(Rng& rng) {
    base.init(rng);
    u = rng.uniform();
  }

  void init_from_state(const CMatrix& rho, Rng& rng) {
    base.init_from_state(rho, rng);
    u = 1.0;  // lambda = 1: the walk starts at the unmixed warm state
  }

  bool propose(Rng& rng, double step) {
    if (!base.propose(rng, step)) return false;
    u_prop = reflect_interval(u + step * rng.normal(), 0.0, 1.0);
    return true;
  }

  void accept() {
    base.accept();
    std::swap(u, u_prop);
  }

  void densify(bool proposal, CMatrix& rho) const {
    base.densify(proposal, rho);
    const double lambda = std::pow(proposal ? u_prop : u, beta);
    rho *= lambda;
    rho.diagonal().array() += (1.0 - lambda) / static_cast<double>(base.d);
  }
};

template <class Walk>
PosteriorChain run_chain(Walk& walk, const CMatrix* warm_state,
                         const MeasurementRecord& record, const SicPovm& povm,
                         const ChainConfig& cfg, ChainDebug* debug) {
  Rng rng(cfg.seed);
  if (warm_state != nullptr) {
    walk.init_from_state(*warm_state, rng);
  } else {
    walk.init(rng);
  }

  const std::size_t outcomes = povm.n_outcomes();
  const Eigen::Index d = povm.dim();
  std::vector<double> weights(outcomes);
  for (std::size_t k = 0; k < outcomes; ++k) {
    weights[k] = static_cast<double>(record.counts[k]);
  }
  std::vector<double> hv(static_cast<std::size_t>(d) * d);
  std::vector<double> prob(outcomes);
  const auto loglik = [&](const CMatrix& rho) {
    povm.probabilities(rho, hv.data(), prob.data());
    return kernels::log_dot(weights.data(), prob.data(), outcomes);
  };

  CMatrix rho_cur(d, d), rho_prop(d, d);
  walk.densify(false, rho_cur);
  double ll_cur = loglik(rho_cur);
  if (debug) debug->initial_log_likelihood = ll_cur;

  double step = cfg.initial_step_size;
  bool history[kAdaptHistory];
  std::size_t history_fill = 0, history_next = 0, since_adapt = 0;
  // step value the controller last left unchanged through >= 1000 decisions;
  // freezing this instead of a just-jumped value keeps the post-burn-in
  // acceptance inside the target band
  double settled_step = 0.0;
  std::uint64_t accepted_burn = 0, accepted_post = 0;

  PosteriorChain chain;
  const std::uint64_t post_steps = cfg.total_steps - cfg.burn_in;
  chain.samples.reserve(static_cast<std::size_t>(post_steps / cfg.thinning) + 1);

  for (std::uint64_t t = 0; t < cfg.total_steps; ++t) {
    if (debug) debug->step_sizes.push_back(step);
    bool accepted = false;
    if (walk.propose(rng, step)) {
      walk.densify(true, rho_prop);
      const double ll_prop = loglik(rho_prop);
      if (ll_prop == -kInf) {
        accepted = false;
      } else if (ll_cur == -kInf) {
        accepted = true;
      } else {
        const double log_ratio = ll_prop - ll_cur;
        accepted = log_ratio >= 0.0 || mh_accept(log_ratio, rng.uniform());
      }
      if (accepted) {
        walk.accept();
        rho_cur.swap(rho_prop);
        ll_cur = ll_prop;
      }
    }

    if (t < cfg.burn_in) {
      accepted_burn += accepted ? 1 : 0;
      history[history_next] = accepted;
      history_next = (history_next + 1) % kAdaptHistory;
      history_fill = std::min(history_fill + 1, kAdaptHistory);
      if (++since_adapt == kAdaptInterval) {
        const double next_step = adapt_step_size(
            std::span<const bool>(history, history_fill), step,
            cfg.target_acceptance);
        if (next_step != step) {
          step = next_step;
          history_fill = 0;
          history_next = 0;
          // any correction means the last validated value went stale
          settled_step = 0.0;
        } else if (history_fill >= 1000) {
          std::size_t acc_count = 0;
          for (std::size_t i = 0; i < history_fill; ++i) acc_count += history[i];
          const double rate =
              static_cast<double>(acc_count) / static_cast<double>(history_fill);
          if (rate >= cfg.target_acceptance.lo && rate <= cfg.target_acceptance.hi) {
            settled_step = step;
          }
        }
        since_adapt = 0;
      }
      if (t + 1 == cfg.burn_in) {
        // only diagnosable once the controller had a real chance to recover
        if (cfg.burn_in >= 5 * kAdaptInterval && accepted_burn == 0) {
          throw diagnostic_error(
              "mh_chain: every proposal rejected during burn-in; step size "
              "adaptation failed");
        }
        if (settled_step > 0.0) step = settled_step;
      }
    } else {
      accepted_post += accepted ? 1 : 0;
      if ((t - cfg.burn_in) % cfg.thinning == 0) {
        chain.sample_steps.push_back(t);
        chain.log_likelihood_trace.push_back(ll_cur);
        chain.samples.push_back(
            negativity_pair(DensityMatrix::unchecked(povm.n_qubits(), rho_cur)));
      }
    }
  }

  chain.acceptance_rate =
      post_steps > 0 ? static_cast<double>(accepted_post) / static_cast<double>(post_steps)
                     : 0.0;
  chain.final_step_size = step;
  return chain;
}

}  // namespace

void ChainConfig::validate() const {
  if (total_steps < 1) throw argument_error("ChainConfig: total_steps must be positive");
  if (burn_in >= total_steps) {
    throw argument_error("ChainConfig: burn_in must be smaller than total_steps");
  }
  if (thinning < 1) throw argument_error("ChainConfig: thinning must be positive");
  if (!(initial_step_size > 0.0)) {
    throw argument_error("ChainConfig: initial_step_size must be positive");
  }
  if (!(target_acceptance.lo > 0.0 && target_acceptance.hi < 1.0 &&
        target_acceptance.lo < target_acceptance.hi)) {
    throw argument_error("ChainConfig: target acceptance window must satisfy 0 < lo < hi < 1");
  }
}

bool mh_accept(double log_likelihood_ratio, double u) {
  if (log_likelihood_ratio >= 0.0) return true;
  return std::log(u) < log_likelihood_ratio;
}

double adapt_step_size(std::span<const bool> accept_history, double current_step,
                       AcceptanceWindow target) {
  if (accept_history.empty()) return current_step;
  const double n = static_cast<double>(accept_history.size());
  std::size_t accepted = 0;
  for (bool a : accept_history) accepted += a ? 1 : 0;
  const double rate = static_cast<double>(accepted) / n;
  // act only on departures the history can actually resolve; otherwise
  // estimator noise keeps the controller jumping around the window forever
  const double margin = 2.0 * std::sqrt(rate * (1.0 - rate) / n);
  if (rate - margin > target.hi) return current_step * 1.1;
  if (rate + margin < target.lo) return current_step * 0.9;
  return current_step;
}

PosteriorChain mh_chain(const PriorSpec& prior, const MeasurementRecord& record,
                        const SicPovm& povm, const ChainConfig& config,
                        ChainDebug* debug) {
  prior.validate();
  config.validate();
  record.validate();
  if (record.n_qubits != povm.n_qubits()) {
    throw argument_error("mh_chain: record does not match POVM");
  }

  const Eigen::Index d = povm.dim();

  // warm start: adapt and sample in equilibrium geometry from step one
  std::optional<CMatrix> warm;
  if (config.warm_start && record.total_m > 0) {
    const DensityMatrix mle = mle_estimate(record, povm);
    CMatrix reg = 0.999 * mle.matrix();
    reg.diagonal().array() += 0.001 / static_cast<double>(d);
    warm = std::move(reg);
  }
  const CMatrix* warm_ptr = warm ? &*warm : nullptr;

  if (prior.kind == PriorKind::GH) {
    if (prior.mixed) {
      MixedWalk<GhWalk> walk;
      walk.base.d = d;
      walk.beta = prior.beta;
      return run_chain(walk, warm_ptr, record, povm, config, debug);
    }
    GhWalk walk;
    walk.d = d;
    return run_chain(walk, warm_ptr, record, povm, config, debug);
  }
  if (prior.mixed) {
    MixedWalk<ZWalk> walk;
    walk.base.d = d;
    walk.beta = prior.beta;
    return run_chain(walk, warm_ptr, record, povm, config, debug);
  }
  ZWalk walk;
  walk.d = d;
  return run_chain(walk, warm_ptr, record, povm, config, debug);
}

}  // namespace qbayes
