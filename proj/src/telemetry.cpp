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

#include "letw/telemetry.hpp"

#include <algorithm>
#include <cmath>
#include <nlohmann/json.hpp>

#include "letw/error.hpp"

namespace letw {
namespace {

using nlohmann::json;

// Absorbs representation error in q * n so that, e.g., 0.9 * 10 lands on 9.
constexpr double kRankEpsilon = 1e-9;

const json& require_field(const json& obj, const char* name, std::size_t line_no) {
  auto it = obj.find(name);
  if (it == obj.end() || it->is_null()) {
    throw SchemaError(std::string("missing required field \"") + name + "\"", name, line_no);
  }
  return *it;
}

[[noreturn]] void wrong_type(const char* name, const char* expected, std::size_t line_no) {
  throw SchemaError(std::string("field \"") + name + "\" must be " + expected, name, line_no);
}

std::int64_t int_field(const json& obj, const char* name, std::size_t line_no) {
  const json& v = require_field(obj, name, line_no);
  if (!v.is_number_integer()) wrong_type(name, "an integer", line_no);
  return v.get<std::int64_t>();
}

double number_field(const json& obj, const char* name, std::size_t line_no) {
  const json& v = require_field(obj, name, line_no);
  if (!v.is_number()) wrong_type(name, "a number", line_no);
  return v.get<double>();
}

std::string string_field(const json& obj, const char* name, std::size_t line_no) {
  const json& v = require_field(obj, name, line_no);
  if (!v.is_string()) wrong_type(name, "a string", line_no);
  return v.get<std::string>();
}

std::optional<std::string> optional_string(const json& obj, const char* name,
                                           std::size_t line_no) {
  auto it = obj.find(name);
  if (it == obj.end() || it->is_null()) return std::nullopt;
  if (!it->is_string()) wrong_type(name, "a string", line_no);
  return it->get<std::string>();
}

// Two-pass mean and sample (n - 1) standard deviation.
template <typename Range>
Moments moments_of(const Range& values) noexcept {
  Moments m;
  if (values.empty()) return m;
  double sum = 0.0;
  for (double v : values) sum += v;
  const auto n = static_cast<double>(values.size());
  m.mean = sum / n;
  if (values.size() < 2) return m;
  double ss = 0.0;
  for (double v : values) ss += (v - m.mean) * (v - m.mean);
  m.std = std::sqrt(ss / (n - 1.0));
  return m;
}

}  // namespace

TelemetryEvent parse_event(std::string_view line, std::size_t line_no) {
  json obj;
  try {
    obj = json::parse(line);
  } catch (const json::parse_error& e) {
    throw ParseError(std::string("malformed JSON: ") + e.what(), line_no);
  }
  if (!obj.is_object()) throw SchemaError("telemetry record must be a JSON object", "", line_no);

  TelemetryEvent ev;
  ev.session_id = string_field(obj, "session_id", line_no);
  ev.intent_ts = int_field(obj, "intent_ts", line_no);
  ev.confirm_ts = int_field(obj, "confirm_ts", line_no);
  ev.media_rtt_ms = number_field(obj, "media_rtt_ms", line_no);
  ev.media_jitter_ms = number_field(obj, "media_jitter_ms", line_no);
  const std::string mode = string_field(obj, "ux_mode", line_no);
  const auto parsed_mode = parse_mode(mode);
  if (!parsed_mode) wrong_type("ux_mode", "one of instant, soft, deferred", line_no);
  ev.ux_mode = *parsed_mode;
  const json& engaged = require_field(obj, "engaged_60s", line_no);
  if (!engaged.is_boolean()) wrong_type("engaged_60s", "a boolean", line_no);
  ev.engaged_60s = engaged.get<bool>();
  ev.region = optional_string(obj, "region", line_no);
  ev.device = optional_string(obj, "device", line_no);

  if (ev.confirm_ts < ev.intent_ts) {
    throw SchemaError("confirm before intent", "confirm_ts", line_no);
  }
  if (!(ev.media_rtt_ms >= 0.0)) {
    throw SchemaError("media_rtt_ms must be non-negative", "media_rtt_ms", line_no);
  }
  if (!(ev.media_jitter_ms >= 0.0)) {
    throw SchemaError("media_jitter_ms must be non-negative", "media_jitter_ms", line_no);
  }
  return ev;
}

std::string serialize_event(const TelemetryEvent& ev) {
  nlohmann::ordered_json obj;
  obj["session_id"] = ev.session_id;
  obj["intent_ts"] = ev.intent_ts;
  obj["confirm_ts"] = ev.confirm_ts;
  obj["media_rtt_ms"] = ev.media_rtt_ms;
  obj["media_jitter_ms"] = ev.media_jitter_ms;
  obj["ux_mode"] = std::string(to_string(ev.ux_mode));
  obj["engaged_60s"] = ev.engaged_60s;
  if (ev.region) obj["region"] = *ev.region;
  if (ev.device) obj["device"] = *ev.device;
  return obj.dump();
}

double confirmation_latency(const TelemetryEvent& ev) noexcept {
  return static_cast<double>(ev.confirm_ts - ev.intent_ts) / 1000.0;
}

double nearest_rank(std::span<const double> sorted, double q) {
  if (sorted.empty()) throw InvalidArgument("nearest_rank of an empty sample");
  if (!(q > 0.0 && q <= 1.0)) throw InvalidArgument("quantile must lie in (0, 1]");
  double whole = 0.0;
  const double frac = std::modf(q * static_cast<double>(sorted.size()), &whole);
  auto rank = static_cast<std::size_t>(whole);
  if (frac > kRankEpsilon) ++rank;
  rank = std::clamp<std::size_t>(rank, 1, sorted.size());
  return sorted[rank - 1];
}

Moments compute_moments(std::span<const double> values) noexcept {
  return moments_of(values);
}

WindowStats compute_stats(std::span<const double> values) {
  WindowStats s;
  if (values.empty()) return s;
  const Moments m = compute_moments(values);
  std::vector<double> sorted(values.begin(), values.end());
  std::sort(sorted.begin(), sorted.end());
  s.count = sorted.size();
  s.mean_s = m.mean;
  s.std_s = m.std;
  s.p50_s = nearest_rank(sorted, 0.50);
  s.p90_s = nearest_rank(sorted, 0.90);
  s.p99_s = nearest_rank(sorted, 0.99);
  return s;
}

LatencyWindow::LatencyWindow(std::size_t capacity) : capacity_(capacity) {
  if (capacity == 0) throw InvalidArgument("window capacity must be positive");
}

void LatencyWindow::push(double latency_s) {
  if (!std::isfinite(latency_s) || latency_s < 0.0) {
    throw InvalidArgument("latency must be a finite non-negative number");
  }
  values_.push_back(latency_s);
  if (values_.size() > capacity_) values_.pop_front();
}

WindowStats LatencyWindow::stats() const {
  const std::vector<double> v = values();
  return compute_stats(v);
}

Moments LatencyWindow::moments() const noexcept { return moments_of(values_); }

void SloConfig::validate() const {
  const double targets[] = {p50_max_s, p90_max_s, p99_max_s, jitter_std_max_s,
                            p90_alert_s, p99_alert_s, jitter_alert_s, conv_min, repeat_min};
  for (double v : targets) {
    if (!std::isfinite(v) || v <= 0.0) throw InvalidArgument("SLO thresholds must be positive");
  }
  if (!(p90_max_s < p90_alert_s && p99_max_s < p99_alert_s && jitter_std_max_s < jitter_alert_s)) {
    throw InvalidArgument("each SLO target must be below its alert threshold");
  }
}

MetricSet slo_evaluate(const WindowStats& stats, const SloConfig& cfg) {
  MetricSet out;
  if (stats.p50_s > cfg.p50_max_s) out.emplace(kMetricP50);
  if (stats.p90_s > cfg.p90_max_s) out.emplace(kMetricP90);
  if (stats.p99_s > cfg.p99_max_s) out.emplace(kMetricP99);
  if (stats.std_s > cfg.jitter_std_max_s) out.emplace(kMetricJitter);
  return out;
}

MetricSet slo_alerts(const WindowStats& stats, const SloConfig& cfg) {
  MetricSet out;
  if (stats.p90_s > cfg.p90_alert_s) out.emplace(kMetricP90);
  if (stats.p99_s > cfg.p99_alert_s) out.emplace(kMetricP99);
  if (stats.std_s > cfg.jitter_alert_s) out.emplace(kMetricJitter);
  return out;
}

MetricSet outcome_alerts(double conversion_rate, double repeat_rate, const SloConfig& cfg) {
  MetricSet out;
  if (conversion_rate < cfg.conv_min) out.emplace(kMetricConversion);
  if (repeat_rate < cfg.repeat_min) out.emplace(kMetricRepeat);
  return out;
}

SloStatus slo_track(SloStatus status, const MetricSet& breaches) {
  const bool governed = breaches.contains(kMetricP90) || breaches.contains(kMetricJitter);
  status.breached_metrics = breaches;
  if (governed) {
    ++status.consecutive_breaches;
  } else {
    status.consecutive_breaches = 0;
  }
  status.escalated = status.consecutive_breaches >= kEscalationWindows;
  return status;
}

}  // namespace letw
