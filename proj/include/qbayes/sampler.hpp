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

#include <span>

#include "qbayes/inference.hpp"
#include "qbayes/priors.hpp"

namespace qbayes {

struct AcceptanceWindow {
  double lo = 0.35;
  double hi = 0.40;
};

struct ChainConfig {
  std::uint64_t total_steps = 100000;
  std::uint64_t burn_in = 1000;
  std::uint64_t thinning = 10;
  AcceptanceWindow target_acceptance{};
  double initial_step_size = 0.1;
  std::uint64_t seed = 0;
  // Start the walk at the (regularized) MLE of the record instead of a prior
  // draw. Step-size adaptation then happens in equilibrium geometry, so the
  // frozen step's acceptance does not drift after burn-in. Ignored when the
  // record is empty.
  bool warm_start = true;

  void validate() const;
};

/// Thinned post-burn-in trajectory. The step size is frozen once burn-in
/// ends, so the retained stretch satisfies detailed balance.
struct PosteriorChain {
  std::vector<NegativityPair> samples;
  std::vector<std::uint64_t> sample_steps;   // absolute step index per sample
  std::vector<double> log_likelihood_trace;  // aligned with samples
  double acceptance_rate = 0.0;              // post-burn-in steps only
  double final_step_size = 0.0;
};

/// Per-step internals exposed for tests.
struct ChainDebug {
  std::vector<double> step_sizes;           // proposal scale at every step
  double initial_log_likelihood = 0.0;
};

/// The acceptance rule: a proposal with likelihood ratio r >= 1 is always
/// taken; otherwise it is taken with probability r.
bool mh_accept(double log_likelihood_ratio, double u);

/// Burn-in step-size controller: x1.1 when the running acceptance sits above
/// the target window, x0.9 below it, unchanged inside.
double adapt_step_size(std::span<const bool> accept_history, double current_step,
                       AcceptanceWindow target);

/// Random-walk Metropolis in the prior's native parameter space, weighted by
/// the likelihood of `record`. With an empty record (total_m == 0) the chain
/// reproduces the prior itself.
///
/// GH walks the 2d^2 real entries of H with Gaussian perturbations reflected
/// at (-1,1). Z jitters the eigenvalue simplex with zero-sum Gaussian noise
/// (proposals leaving the simplex are rejected) and rotates the eigenbasis by
/// exp(i * step * G) with G drawn from the GUE. Mixed priors additionally walk
/// the u coordinate of lambda = u^beta, reflected at [0,1]. All proposals are
/// symmetric, so acceptance uses the likelihood ratio alone.
PosteriorChain mh_chain(const PriorSpec& prior, const MeasurementRecord& record,
                        const SicPovm& povm, const ChainConfig& config,
                        ChainDebug* debug = nullptr);

}  // namespace qbayes
