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

// Seeded Monte-Carlo simulation of payment sessions under a governance policy.
//
// Each session draws a log-normal confirmation latency, derives the perceived
// latency from the window of previously observed latencies, picks a UX mode
// from the policy, then races an exponential patience clock against the
// latency. Sessions that survive convert with the context-scaled logistic
// probability; converted sessions re-engage with probability
// engagement_ceiling * trust.
//
// Soft and Deferred feedback scale the abandonment hazard by rho < 1. Since
// rho * lambda0 * exp(gamma * L) = lambda0 * exp(gamma * (L + ln(rho) / gamma)),
// the same feedback is treated as shortening the perceived latency by
// -ln(rho) / gamma when computing the session's experienced trust.

#ifndef LETW_SIMULATOR_HPP_
#define LETW_SIMULATOR_HPP_

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "letw/governor.hpp"
#include "letw/model.hpp"
#include "letw/rng.hpp"
#include "letw/telemetry.hpp"

namespace letw {

// log-space sigma that puts the p99 of a 1.4 s-median rail at 4.7 s.
inline constexpr double kBaselineSigmaLog = 0.5207;
inline constexpr double kBaselineMedian = 1.4;
inline constexpr double kBurstMedian = 2.8;
inline constexpr double kBurstStd = 1.1;

struct RailDistribution {
  double mu_log = 0.33647223662121289;  // ln(1.4)
  double sigma_log = kBaselineSigmaLog;
  double shift_s = 0.0;

  void validate() const;

  double median() const noexcept;
  // q-quantile of the shifted log-normal, q in (0, 1).
  double quantile(double q) const;

  // Log-normal with the given median whose (unshifted) standard deviation is
  // `std_s`.
  static RailDistribution from_median_std(double median_s, double std_s);
  static RailDistribution baseline();
  // Congested regime: median 2.8 s, std 1.1 s.
  static RailDistribution burst();

  friend bool operator==(const RailDistribution&, const RailDistribution&) = default;
};

enum class PolicyKind { kNone, kStaticMessaging, kLetw };

std::string_view to_string(PolicyKind p) noexcept;
std::optional<PolicyKind> parse_policy(std::string_view s) noexcept;

struct PolicySpec {
  PolicyKind kind = PolicyKind::kLetw;
  double static_threshold_s = 2.0;
  friend bool operator==(const PolicySpec&, const PolicySpec&) = default;
};

struct Mitigation {
  double rho_soft = 0.6;
  double rho_deferred = 0.3;
  friend bool operator==(const Mitigation&, const Mitigation&) = default;
};

struct SimConfig {
  std::uint64_t sessions = 10000;
  std::uint64_t seed = 42;
  RailDistribution rail;
  PolicySpec policy;
  ModelParams params;
  ContextProfile ctx;
  Mitigation mitigation;
  double engagement_ceiling = 0.12;
  std::size_t window_size = LatencyWindow::kDefaultCapacity;

  void validate() const;
  friend bool operator==(const SimConfig&, const SimConfig&) = default;
};

struct SessionOutcome {
  GovernorState governor;  // state after this session
  Mode mode = Mode::kInstant;
  double perceived_latency = 0.0;
  double trust = 0.0;  // experienced trust, after mitigation
  bool abandoned = false;
  bool converted = false;
  bool repeated = false;
};

struct SimResult {
  std::uint64_t sessions = 0;
  std::uint64_t converted = 0;
  std::uint64_t abandoned = 0;
  std::uint64_t repeated = 0;
  double conversion_rate = 0.0;
  double abandonment_rate = 0.0;
  double repeat_rate = 0.0;
  double mean_trust = 0.0;
  std::array<double, kModeCount> mode_shares{};
  double latency_p50 = 0.0;
  double latency_p90 = 0.0;
  double latency_p99 = 0.0;

  friend bool operator==(const SimResult&, const SimResult&) = default;
};

double sample_latency(SessionRng& rng, const RailDistribution& rail);

// Hazard multiplier applied for the given mode.
double mitigation_factor(Mode mode, const Mitigation& m) noexcept;

// Perceived latency net of the feedback credit for `mode`, floored at zero.
double experienced_latency(double perceived_latency, Mode mode, const SimConfig& cfg) noexcept;

// Simulates one session. `rng` must already have produced the session's
// latency draw. Only count, mean_s and std_s of `window` are read.
SessionOutcome simulate_session(SessionRng& rng, double latency, const WindowStats& window,
                                const GovernorState& gov, const SimConfig& cfg);

SimResult run_simulation(const SimConfig& cfg);

struct BurstComparison {
  SimResult without_letw;
  SimResult with_letw;
};

BurstComparison run_burst(const SimConfig& base, const RailDistribution& burst_rail);

struct PolicyComparison {
  SimResult none;
  SimResult static_messaging;
  SimResult letw;
};

PolicyComparison compare_policies(const SimConfig& cfg);

struct QuantileRow {
  std::string name;
  double latency = 0.0;
  Mode mode = Mode::kInstant;
  double expected_conversion = 0.0;
};

// p50/p90/p99 rows built from explicit latencies.
std::vector<QuantileRow> quantile_rows(double p50, double p90, double p99,
                                       const ModelParams& params);

// The rail's analytic quantiles mapped through decide_simple and the
// conversion model.
std::vector<QuantileRow> quantile_mode_report(const SimConfig& cfg);

}  // namespace letw

#endif  // LETW_SIMULATOR_HPP_
