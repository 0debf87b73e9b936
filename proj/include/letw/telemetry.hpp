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

// Telemetry ingestion and sliding-window latency statistics.
//
// Events arrive as one JSON object per line. A LatencyWindow keeps the last
// W confirmation latencies and reports their mean, sample standard deviation
// and exact nearest-rank quantiles. SLO evaluation and consecutive-breach
// tracking sit on top of the window statistics.

#ifndef LETW_TELEMETRY_HPP_
#define LETW_TELEMETRY_HPP_

#include <cstddef>
#include <cstdint>
#include <deque>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "letw/mode.hpp"

namespace letw {

struct TelemetryEvent {
  std::string session_id;
  std::int64_t intent_ts = 0;   // ms since epoch
  std::int64_t confirm_ts = 0;  // ms since epoch
  double media_rtt_ms = 0.0;
  double media_jitter_ms = 0.0;
  Mode ux_mode = Mode::kInstant;
  bool engaged_60s = false;
  std::optional<std::string> region;
  std::optional<std::string> device;

  friend bool operator==(const TelemetryEvent&, const TelemetryEvent&) = default;
};

// Parses one JSONL record. `line_no` is only used in error messages.
// Throws ParseError for malformed JSON and SchemaError for missing fields or
// invariant violations. Unknown fields are ignored.
TelemetryEvent parse_event(std::string_view line, std::size_t line_no = 0);

// Compact single-line JSON; optional fields are omitted when absent.
std::string serialize_event(const TelemetryEvent& event);

// Seconds between intent and confirmation.
double confirmation_latency(const TelemetryEvent& event) noexcept;

struct WindowStats {
  std::size_t count = 0;
  double mean_s = 0.0;
  double std_s = 0.0;
  double p50_s = 0.0;
  double p90_s = 0.0;
  double p99_s = 0.0;
};

// Value at rank ceil(q * n) of an ascending-sorted, non-empty sample.
double nearest_rank(std::span<const double> sorted, double q);

// Stats over an arbitrary sample; all-zero for an empty span.
WindowStats compute_stats(std::span<const double> values);

struct Moments {
  double mean = 0.0;
  double std = 0.0;
};

Moments compute_moments(std::span<const double> values) noexcept;

class LatencyWindow {
 public:
  static constexpr std::size_t kDefaultCapacity = 256;

  explicit LatencyWindow(std::size_t capacity = kDefaultCapacity);

  // Appends, evicting the oldest value once over capacity.
  void push(double latency_s);

  std::size_t size() const noexcept { return values_.size(); }
  std::size_t capacity() const noexcept { return capacity_; }
  bool empty() const noexcept { return values_.empty(); }

  // Retained values, oldest first.
  std::vector<double> values() const { return {values_.begin(), values_.end()}; }

  WindowStats stats() const;
  // Mean and sample std only; skips the sort needed for quantiles.
  Moments moments() const noexcept;

 private:
  std::size_t capacity_;
  std::deque<double> values_;
};

struct SloConfig {
  double p50_max_s = 1.0;
  double p90_max_s = 2.0;
  double p99_max_s = 4.0;
  double jitter_std_max_s = 0.7;

  double p90_alert_s = 2.5;
  double p99_alert_s = 5.0;
  double jitter_alert_s = 1.0;
  double conv_min = 0.08;
  double repeat_min = 0.04;

  void validate() const;
};

inline constexpr std::string_view kMetricP50 = "p50";
inline constexpr std::string_view kMetricP90 = "p90";
inline constexpr std::string_view kMetricP99 = "p99";
inline constexpr std::string_view kMetricJitter = "jitter_std";
inline constexpr std::string_view kMetricConversion = "conversion";
inline constexpr std::string_view kMetricRepeat = "repeat";

using MetricSet = std::set<std::string, std::less<>>;

// Metrics strictly above their targets.
MetricSet slo_evaluate(const WindowStats& stats, const SloConfig& cfg);

// Metrics strictly above their dashboard alert thresholds.
MetricSet slo_alerts(const WindowStats& stats, const SloConfig& cfg);

// Batch-only outcome alerts (need conversion labels, so never streamed).
MetricSet outcome_alerts(double conversion_rate, double repeat_rate, const SloConfig& cfg);

// Escalation fires once p90 or jitter breach more than two windows in a row.
inline constexpr int kEscalationWindows = 3;

struct SloStatus {
  int consecutive_breaches = 0;
  MetricSet breached_metrics;
  bool escalated = false;
};

SloStatus slo_track(SloStatus status, const MetricSet& breaches);

}  // namespace letw

#endif  // LETW_TELEMETRY_HPP_
