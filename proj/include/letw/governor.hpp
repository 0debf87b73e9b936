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

// The trust-window control loop: a three-mode state machine with hysteresis,
// the stateless budget rule, trust-threshold mode selection, the SLO
// escalation hook and the sequential rollout guard.

#ifndef LETW_GOVERNOR_HPP_
#define LETW_GOVERNOR_HPP_

#include <cstdint>
#include <optional>
#include <string_view>

#include "letw/mode.hpp"
#include "letw/model.hpp"
#include "letw/telemetry.hpp"

namespace letw {

enum class Reason {
  kWithinBudget,
  kBudgetExceeded,
  kSoftLimitExceeded,
  kHysteresisHold,
  kSloEscalation,
};

std::string_view to_string(Reason r) noexcept;
std::optional<Reason> parse_reason(std::string_view s) noexcept;

struct GovernorState {
  Mode mode = Mode::kInstant;
  double last_perceived_latency = 0.0;
  std::uint64_t transitions = 0;
};

struct Decision {
  Mode mode = Mode::kInstant;
  double trust = 0.0;
  double perceived_latency = 0.0;
  Reason reason = Reason::kWithinBudget;
};

struct StepResult {
  GovernorState state;
  Decision decision;
};

// Instant if T >= theta1, Soft if theta2 <= T < theta1, Deferred otherwise.
Mode select_mode_by_trust(double trust, const ModelParams& params);

// Stateless budget rule: Instant up to the budget, Soft up to the soft limit,
// Deferred beyond.
Mode decide_simple(double mean_latency, double std_latency, const ModelParams& params);

// One transition of the hysteresis machine. Upward moves use strict
// comparisons against B_L and B_soft, downward moves against B_L - h and
// B_soft - h. The mode index moves by at most one per call.
StepResult step(const GovernorState& state, double perceived_latency, const ModelParams& params);

// Forces Instant up to Soft while the SLO tracker is escalated. Never moves
// the mode toward Instant.
GovernorState apply_slo_escalation(GovernorState state, const SloStatus& slo);

// step() followed by SLO escalation. A step that would land in Instant while
// escalated stays in Soft with reason kSloEscalation; the transition count
// reflects only the net mode change.
StepResult step(const GovernorState& state, double perceived_latency, const ModelParams& params,
                const SloStatus& slo);

enum class RolloutStage { kContinue, kPause };

struct RolloutState {
  RolloutStage stage = RolloutStage::kContinue;
  std::optional<Mode> forced_mode;
};

inline constexpr double kDefaultMaxConversionDrop = 0.02;

// Pauses the ramp (and forces Soft) when trust falls below `theta` or the
// absolute conversion drop exceeds `max_drop`.
RolloutState rollout_guard(double trust, double conv_drop, double theta,
                           double max_drop = kDefaultMaxConversionDrop);

}  // namespace letw

#endif  // LETW_GOVERNOR_HPP_
