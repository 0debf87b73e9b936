// Copyright 2026 The LETW Authors.
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

#include "letw/model.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "letw/error.hpp"

namespace letw {
namespace {

void require(bool ok, const char* what) {
  if (!ok) throw InvalidArgument(what);
}

void require_latency(double latency, const char* name) {
  if (!std::isfinite(latency) || latency < 0.0) {
    throw InvalidArgument(std::string(name) + " must be a finite non-negative number");
  }
}

}  // namespace

void ModelParams::validate() const {
  const double all[] = {alpha,      beta,        gamma,        k,      eta,    lambda0, budget_b_l,
                        budget_soft, hysteresis_h, theta1, theta2, lambda1, lambda2};
  for (double v : all) require(std::isfinite(v), "model parameters must be finite");
  require(beta > 0.0, "beta must be positive");
  require(gamma >= 0.0, "gamma must be non-negative");
  require(k >= 0.0, "k must be non-negative");
  require(eta > 0.0, "eta must be positive");
  require(lambda0 > 0.0, "lambda0 must be positive");
  require(budget_b_l > 0.0 && budget_b_l < budget_soft,
          "budgets must satisfy 0 < budget_b_l < budget_soft");
  require(hysteresis_h > 0.0 && hysteresis_h < budget_b_l,
          "hysteresis_h must satisfy 0 < h < budget_b_l");
  require(theta2 >= 0.0 && theta2 < theta1 && theta1 <= 1.0,
          "thresholds must satisfy 0 <= theta2 < theta1 <= 1");
}

double sigmoid(double x) noexcept {
  if (x >= 0.0) return 1.0 / (1.0 + std::exp(-x));
  const double e = std::exp(x);
  return e / (1.0 + e);
}

double logit(double p) {
  require(p > 0.0 && p < 1.0, "probability must lie in (0, 1)");
  return std::log(p / (1.0 - p));
}

double conversion_probability(double perceived_latency, const ModelParams& params) {
  require_latency(perceived_latency, "perceived latency");
  return sigmoid(params.alpha - params.beta * perceived_latency);
}

double latency_elasticity(double latency, const ModelParams& params) {
  const double p = conversion_probability(latency, params);
  return -params.beta * latency * (1.0 - p);
}

double abandonment_hazard(double latency, const ModelParams& params) {
  require_latency(latency, "latency");
  require(params.lambda0 > 0.0, "lambda0 must be positive");
  return params.lambda0 * std::exp(params.gamma * latency);
}

double median_abandon_time(double latency, const ModelParams& params) {
  const double hazard = abandonment_hazard(latency, params);
  require(hazard > 0.0 && std::isfinite(hazard), "hazard must be positive and finite");
  return std::numbers::ln2 / hazard;
}

double calibrate_lambda0(double anchor_latency, double anchor_median, double gamma) {
  require_latency(anchor_latency, "anchor latency");
  require(std::isfinite(anchor_median) && anchor_median > 0.0, "anchor median must be positive");
  require(std::isfinite(gamma), "gamma must be finite");
  return std::numbers::ln2 / (anchor_median * std::exp(gamma * anchor_latency));
}

double perceived_latency(double mean_latency, double std_latency, double k, double s_u) {
  require_latency(mean_latency, "mean latency");
  require_latency(std_latency, "latency std");
  require(std::isfinite(k) && k >= 0.0, "k must be non-negative");
  require(std::isfinite(s_u) && s_u > 0.0, "s_u must be positive");
  return mean_latency + s_u * k * std_latency;
}

double latency_budget(double tau, const ModelParams& params) {
  require(tau > 0.0 && tau < 1.0, "tau must lie in (0, 1)");
  require(params.beta > 0.0, "beta must be positive");
  return (params.alpha - logit(tau)) / params.beta;
}

double trust_score(double perceived_latency, const ModelParams& params) {
  require(std::isfinite(perceived_latency), "perceived latency must be finite");
  return sigmoid(-params.eta * (perceived_latency - params.budget_b_l));
}

double latency_utility(double delta_conv, double delta_churn, double delta_trust,
                       const ModelParams& params) {
  return delta_conv - params.lambda1 * delta_churn - params.lambda2 * delta_trust;
}

double context_conversion(double latency, const ContextProfile& ctx, const ModelParams& params) {
  require_latency(latency, "latency");
  require(std::isfinite(ctx.m_c) && ctx.m_c > 0.0, "context multiplier must be positive");
  return sigmoid(params.alpha - params.beta * ctx.m_c * latency);
}

double effective_budget(const ModelParams& params, const ContextProfile& ctx) {
  require(std::isfinite(ctx.m_c) && ctx.m_c > 0.0, "context multiplier must be positive");
  return params.budget_b_l / ctx.m_c;
}

double expected_revenue(const RevenueParams& rev, double perceived_latency,
                        const ModelParams& params) {
  return rev.n_intents * rev.revenue_per_payment *
         conversion_probability(perceived_latency, params);
}

double revenue_gradient(const RevenueParams& rev, double perceived_latency,
                        const ModelParams& params) {
  const double p = conversion_probability(perceived_latency, params);
  return -rev.n_intents * rev.revenue_per_payment * params.beta * p * (1.0 - p);
}

LogisticFit fit_logistic_two_point(LatencyPoint p1, LatencyPoint p2) {
  require(std::isfinite(p1.latency) && std::isfinite(p2.latency), "latencies must be finite");
  require(p1.latency != p2.latency, "fit points must have distinct latencies");
  const double l1 = logit(p1.probability);
  const double l2 = logit(p2.probability);
  const double beta = (l1 - l2) / (p2.latency - p1.latency);
  return {l1 + beta * p1.latency, beta};
}

ModelParams outcome_bucket_params() {
  const LogisticFit fit = fit_logistic_two_point({0.5, 0.16}, {2.5, 0.104});
  ModelParams p;
  p.alpha = fit.alpha;
  p.beta = fit.beta;
  return p;
}

UserProfile update_sensitivity(UserProfile profile, SessionOutcomeKind outcome,
                               double perceived_latency, const ModelParams& params, double delta) {
  require(delta >= 0.0 && delta <= 0.5, "delta must lie in [0, 0.5]");
  require_latency(perceived_latency, "perceived latency");
  if (outcome == SessionOutcomeKind::kCompleted) {
    ++profile.completed_count;
    if (perceived_latency > params.budget_b_l) profile.s_u *= 1.0 - delta;
  } else {
    ++profile.abandoned_count;
    profile.s_u *= 1.0 + delta;
  }
  profile.s_u = std::clamp(profile.s_u, kSensitivityMin, kSensitivityMax);
  return profile;
}

}  // namespace letw
