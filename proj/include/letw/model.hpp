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

// Closed-form behavioral model linking payment-confirmation latency to
// conversion, abandonment and trust.
//
// Every function here is pure. Latencies are in seconds, hazards in events
// per second. Inputs that violate a precondition (negative latency, NaN,
// probabilities outside their open interval) raise letw::InvalidArgument.

#ifndef LETW_MODEL_HPP_
#define LETW_MODEL_HPP_

#include <cstdint>

namespace letw {

// Anchor used to derive the baseline hazard: users waiting at L = 1 s
// abandon after a median of 7 s.
inline constexpr double kHazardAnchorLatency = 1.0;
inline constexpr double kHazardAnchorMedian = 7.0;

double calibrate_lambda0(double anchor_latency, double anchor_median, double gamma);

struct ModelParams {
  double alpha = 1.95;  // conversion intercept
  double beta = 0.45;   // latency sensitivity, 1/s
  double gamma = 0.38;  // abandonment sensitivity, 1/s
  double k = 0.8;       // jitter weight
  double eta = 2.0;     // trust-score steepness, 1/s
  double lambda0 = calibrate_lambda0(kHazardAnchorLatency, kHazardAnchorMedian, 0.38);
  double budget_b_l = 2.0;    // trust-window budget, s
  double budget_soft = 3.0;   // soft limit, s
  double hysteresis_h = 0.25; // s
  double theta1 = 0.5;        // instant-mode trust threshold
  double theta2 = 0.2;        // deferred-mode trust threshold
  double lambda1 = 1.0;       // churn weight in the utility
  double lambda2 = 0.5;       // trust weight in the utility

  // Throws InvalidArgument naming the first violated invariant.
  void validate() const;

  friend bool operator==(const ModelParams&, const ModelParams&) = default;
};

struct ContextProfile {
  double m_c = 1.0;  // context multiplier on latency sensitivity
  friend bool operator==(const ContextProfile&, const ContextProfile&) = default;
};

struct UserProfile {
  double s_u = 1.0;
  std::uint64_t completed_count = 0;
  std::uint64_t abandoned_count = 0;
};

struct RevenueParams {
  double n_intents = 0.0;
  double revenue_per_payment = 0.0;
};

enum class SessionOutcomeKind { kCompleted, kAbandoned };

struct LatencyPoint {
  double latency;
  double probability;
};

struct LogisticFit {
  double alpha;
  double beta;
};

// Numerically stable logistic function.
double sigmoid(double x) noexcept;
double logit(double p);

double conversion_probability(double perceived_latency, const ModelParams& params);

// -beta * L * (1 - P(L)). Never positive.
double latency_elasticity(double latency, const ModelParams& params);

double abandonment_hazard(double latency, const ModelParams& params);

// Median of the exponential patience time at the hazard for `latency`.
double median_abandon_time(double latency, const ModelParams& params);

// mean + s_u * k * std. With s_u = 1 this is the plain jitter-penalized latency.
double perceived_latency(double mean_latency, double std_latency, double k, double s_u = 1.0);

// Largest perceived latency that keeps conversion at or above tau.
double latency_budget(double tau, const ModelParams& params);

double trust_score(double perceived_latency, const ModelParams& params);

// Deltas are baseline-relative and supplied by the caller.
double latency_utility(double delta_conv, double delta_churn, double delta_trust,
                       const ModelParams& params);

double context_conversion(double latency, const ContextProfile& ctx, const ModelParams& params);
double effective_budget(const ModelParams& params, const ContextProfile& ctx);

double expected_revenue(const RevenueParams& rev, double perceived_latency,
                        const ModelParams& params);
double revenue_gradient(const RevenueParams& rev, double perceived_latency,
                        const ModelParams& params);

// Exact solve of logit(P) = alpha - beta * L through two points.
LogisticFit fit_logistic_two_point(LatencyPoint p1, LatencyPoint p2);

// Defaults with alpha and beta refit to the observed outcome buckets
// (16% conversion at 0.5 s, 10.4% at 2.5 s). The headline coefficients and
// the bucketed outcomes do not describe the same curve, so both are offered.
ModelParams outcome_bucket_params();

inline constexpr double kSensitivityMin = 0.25;
inline constexpr double kSensitivityMax = 4.0;
inline constexpr double kDefaultSensitivityDelta = 0.05;

// Multiplicative trust-sensitivity update. Completing a session that ran past
// the budget shrinks s_u; abandoning grows it. Result is clamped to
// [kSensitivityMin, kSensitivityMax].
UserProfile update_sensitivity(UserProfile profile, SessionOutcomeKind outcome,
                               double perceived_latency, const ModelParams& params,
                               double delta = kDefaultSensitivityDelta);

}  // namespace letw

#endif  // LETW_MODEL_HPP_
