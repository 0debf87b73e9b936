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

#include "letw/simulator.hpp"

#include <algorithm>
#include <boost/math/distributions/normal.hpp>
#include <cmath>

#include "letw/error.hpp"

namespace letw {
namespace {

void require(bool ok, const char* what) {
  if (!ok) throw InvalidArgument(what);
}

double rate(std::uint64_t n, std::uint64_t total) {
  return static_cast<double>(n) / static_cast<double>(total);
}

}  // namespace

void RailDistribution::validate() const {
  require(std::isfinite(mu_log), "rail mu_log must be finite");
  require(std::isfinite(sigma_log) && sigma_log >= 0.0, "rail sigma_log must be non-negative");
  require(std::isfinite(shift_s) && shift_s >= 0.0, "rail shift_s must be non-negative");
}

double RailDistribution::median() const noexcept { return std::exp(mu_log) + shift_s; }

double RailDistribution::quantile(double q) const {
  require(q > 0.0 && q < 1.0, "quantile must lie in (0, 1)");
  const boost::math::normal_distribution<double> std_normal;
  return std::exp(mu_log + sigma_log * boost::math::quantile(std_normal, q)) + shift_s;
}

RailDistribution RailDistribution::from_median_std(double median_s, double std_s) {
  require(std::isfinite(median_s) && median_s > 0.0, "median must be positive");
  require(std::isfinite(std_s) && std_s >= 0.0, "std must be non-negative");
  // var = m^2 * w * (w - 1) with w = exp(sigma^2).
  const double r = std_s / median_s;
  const double w = 0.5 * (1.0 + std::sqrt(1.0 + 4.0 * r * r));
  return {std::log(median_s), std::sqrt(std::log(w)), 0.0};
}

RailDistribution RailDistribution::baseline() { return {}; }

RailDistribution RailDistribution::burst() {
  return from_median_std(kBurstMedian, kBurstStd);
}

std::string_view to_string(PolicyKind p) noexcept {
  switch (p) {
    case PolicyKind::kNone:
      return "none";
    case PolicyKind::kStaticMessaging:
      return "static";
    case PolicyKind::kLetw:
      return "letw";
  }
  return "none";
}

std::optional<PolicyKind> parse_policy(std::string_view s) noexcept {
  if (s == "none") return PolicyKind::kNone;
  if (s == "static" || s == "static_messaging") return PolicyKind::kStaticMessaging;
  if (s == "letw") return PolicyKind::kLetw;
  return std::nullopt;
}

void SimConfig::validate() const {
  require(sessions > 0, "sessions must be positive");
  rail.validate();
  params.validate();
  require(std::isfinite(policy.static_threshold_s) && policy.static_threshold_s > 0.0,
          "static_threshold_s must be positive");
  require(std::isfinite(ctx.m_c) && ctx.m_c > 0.0, "context multiplier must be positive");
  require(mitigation.rho_deferred > 0.0 && mitigation.rho_deferred <= mitigation.rho_soft &&
              mitigation.rho_soft <= 1.0,
          "mitigation must satisfy 0 < rho_deferred <= rho_soft <= 1");
  require(engagement_ceiling > 0.0 && engagement_ceiling < 1.0,
          "engagement_ceiling must lie in (0, 1)");
  require(window_size > 0, "window_size must be positive");
}

double sample_latency(SessionRng& rng, const RailDistribution& rail) {
  const double z = rng.normal();
  return std::exp(rail.mu_log + rail.sigma_log * z) + rail.shift_s;
}

double mitigation_factor(Mode mode, const Mitigation& m) noexcept {
  switch (mode) {
    case Mode::kInstant:
      return 1.0;
    case Mode::kSoft:
      return m.rho_soft;
    case Mode::kDeferred:
      return m.rho_deferred;
  }
  return 1.0;
}

double experienced_latency(double lp, Mode mode, const SimConfig& cfg) noexcept {
  const double rho = mitigation_factor(mode, cfg.mitigation);
  if (rho >= 1.0 || cfg.params.gamma <= 0.0) return lp;
  return std::max(0.0, lp + std::log(rho) / cfg.params.gamma);
}

SessionOutcome simulate_session(SessionRng& rng, double latency, const WindowStats& window,
                                const GovernorState& gov, const SimConfig& cfg) {
  const ModelParams& params = cfg.params;
  SessionOutcome out;
  out.perceived_latency = perceived_latency(window.mean_s, window.std_s, params.k);
  out.governor = gov;

  switch (cfg.policy.kind) {
    case PolicyKind::kNone:
      out.mode = Mode::kInstant;
      break;
    case PolicyKind::kStaticMessaging:
      out.mode = latency > cfg.policy.static_threshold_s ? Mode::kSoft : Mode::kInstant;
      break;
    case PolicyKind::kLetw:
      out.governor = step(gov, out.perceived_latency, params).state;
      out.mode = out.governor.mode;
      break;
  }

  // Fixed draw order keeps sessions coupled across policies.
  const double patience = rng.exponential();
  const double u_convert = rng.uniform();
  const double u_repeat = rng.uniform();

  const double hazard = mitigation_factor(out.mode, cfg.mitigation) *
                        abandonment_hazard(out.perceived_latency, params);
  // Patience ~ Exp(hazard): abandoned iff patience / hazard < latency.
  out.abandoned = patience < hazard * latency;
  out.converted =
      !out.abandoned && u_convert < context_conversion(out.perceived_latency, cfg.ctx, params);
  out.trust = trust_score(experienced_latency(out.perceived_latency, out.mode, cfg), params);
  out.repeated = out.converted && u_repeat < cfg.engagement_ceiling * out.trust;
  return out;
}

SimResult run_simulation(const SimConfig& cfg) {
  cfg.validate();
  LatencyWindow window(cfg.window_size);
  GovernorState gov;
  std::vector<double> latencies;
  latencies.reserve(cfg.sessions);

  SimResult r;
  r.sessions = cfg.sessions;
  std::array<std::uint64_t, kModeCount> mode_counts{};
  double trust_sum = 0.0;

  for (std::uint64_t i = 0; i < cfg.sessions; ++i) {
    SessionRng rng(cfg.seed, i);
    const double latency = sample_latency(rng, cfg.rail);
    const Moments m = window.moments();
    WindowStats ws;
    ws.count = window.size();
    ws.mean_s = m.mean;
    ws.std_s = m.std;

    const SessionOutcome o = simulate_session(rng, latency, ws, gov, cfg);
    gov = o.governor;
    window.push(latency);
    latencies.push_back(latency);

    ++mode_counts[mode_index(o.mode)];
    trust_sum += o.trust;
    r.abandoned += o.abandoned ? 1 : 0;
    r.converted += o.converted ? 1 : 0;
    r.repeated += o.repeated ? 1 : 0;
  }

  r.conversion_rate = rate(r.converted, r.sessions);
  r.abandonment_rate = rate(r.abandoned, r.sessions);
  r.repeat_rate = rate(r.repeated, r.sessions);
  r.mean_trust = trust_sum / static_cast<double>(r.sessions);
  for (int m = 0; m < kModeCount; ++m) r.mode_shares[m] = rate(mode_counts[m], r.sessions);

  const WindowStats q = compute_stats(latencies);
  r.latency_p50 = q.p50_s;
  r.latency_p90 = q.p90_s;
  r.latency_p99 = q.p99_s;
  return r;
}

BurstComparison run_burst(const SimConfig& base, const RailDistribution& burst_rail) {
  SimConfig cfg = base;
  cfg.rail = burst_rail;
  cfg.policy.kind = PolicyKind::kNone;
  BurstComparison out;
  out.without_letw = run_simulation(cfg);
  cfg.policy.kind = PolicyKind::kLetw;
  out.with_letw = run_simulation(cfg);
  return out;
}

PolicyComparison compare_policies(const SimConfig& cfg) {
  SimConfig c = cfg;
  PolicyComparison out;
  c.policy.kind = PolicyKind::kNone;
  out.none = run_simulation(c);
  c.policy.kind = PolicyKind::kStaticMessaging;
  out.static_messaging = run_simulation(c);
  c.policy.kind = PolicyKind::kLetw;
  out.letw = run_simulation(c);
  return out;
}

std::vector<QuantileRow> quantile_rows(double p50, double p90, double p99,
                                       const ModelParams& params) {
  std::vector<QuantileRow> rows;
  for (const auto& [name, latency] :
       {std::pair{"p50", p50}, std::pair{"p90", p90}, std::pair{"p99", p99}}) {
    rows.push_back({name, latency, decide_simple(latency, 0.0, params),
                    conversion_probability(latency, params)});
  }
  return rows;
}

std::vector<QuantileRow> quantile_mode_report(const SimConfig& cfg) {
  cfg.rail.validate();
  cfg.params.validate();
  const RailDistribution& rail = cfg.rail;
  // A degenerate rail has every quantile at its median.
  if (rail.sigma_log == 0.0) {
    const double m = rail.median();
    return quantile_rows(m, m, m, cfg.params);
  }
  return quantile_rows(rail.quantile(0.50), rail.quantile(0.90), rail.quantile(0.99), cfg.params);
}

}  // namespace letw
