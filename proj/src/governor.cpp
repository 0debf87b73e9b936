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

#include "letw/governor.hpp"

#include <cmath>

#include "letw/error.hpp"

namespace letw {

std::string_view to_string(Reason r) noexcept {
  switch (r) {
    case Reason::kWithinBudget:
      return "within_budget";
    case Reason::kBudgetExceeded:
      return "budget_exceeded";
    case Reason::kSoftLimitExceeded:
      return "soft_limit_exceeded";
    case Reason::kHysteresisHold:
      return "hysteresis_hold";
    case Reason::kSloEscalation:
      return "slo_escalation";
  }
  return "within_budget";
}

std::optional<Reason> parse_reason(std::string_view s) noexcept {
  for (Reason r : {Reason::kWithinBudget, Reason::kBudgetExceeded, Reason::kSoftLimitExceeded,
                   Reason::kHysteresisHold, Reason::kSloEscalation}) {
    if (to_string(r) == s) return r;
  }
  return std::nullopt;
}

Mode select_mode_by_trust(double trust, const ModelParams& params) {
  if (!(trust >= 0.0 && trust <= 1.0)) throw InvalidArgument("trust must lie in [0, 1]");
  if (trust >= params.theta1) return Mode::kInstant;
  if (trust >= params.theta2) return Mode::kSoft;
  return Mode::kDeferred;
}

Mode decide_simple(double mean_latency, double std_latency, const ModelParams& params) {
  const double lp = perceived_latency(mean_latency, std_latency, params.k);
  if (lp <= params.budget_b_l) return Mode::kInstant;
  if (lp <= params.budget_soft) return Mode::kSoft;
  return Mode::kDeferred;
}

StepResult step(const GovernorState& state, double lp, const ModelParams& params) {
  if (!std::isfinite(lp) || lp < 0.0) {
    throw InvalidArgument("perceived latency must be a finite non-negative number");
  }
  const double b_l = params.budget_b_l;
  const double b_soft = params.budget_soft;
  const double h = params.hysteresis_h;

  Mode next = state.mode;
  Reason reason = Reason::kWithinBudget;
  switch (state.mode) {
    case Mode::kInstant:
      if (lp > b_l) {
        next = Mode::kSoft;
        reason = Reason::kBudgetExceeded;
      }
      break;
    case Mode::kSoft:
      if (lp > b_soft) {
        next = Mode::kDeferred;
        reason = Reason::kSoftLimitExceeded;
      } else if (lp < b_l - h) {
        next = Mode::kInstant;
      } else {
        reason = lp > b_l ? Reason::kBudgetExceeded : Reason::kHysteresisHold;
      }
      break;
    case Mode::kDeferred:
      if (lp < b_soft - h) {
        next = Mode::kSoft;
        reason = lp > b_l ? Reason::kBudgetExceeded : Reason::kHysteresisHold;
      } else {
        reason = lp > b_soft ? Reason::kSoftLimitExceeded : Reason::kHysteresisHold;
      }
      break;
  }

  StepResult out;
  out.state.mode = next;
  out.state.last_perceived_latency = lp;
  out.state.transitions = state.transitions + (next != state.mode ? 1 : 0);
  out.decision = {next, trust_score(lp, params), lp, reason};
  return out;
}

GovernorState apply_slo_escalation(GovernorState state, const SloStatus& slo) {
  if (slo.escalated && state.mode == Mode::kInstant) {
    state.mode = Mode::kSoft;
    ++state.transitions;
  }
  return state;
}

StepResult step(const GovernorState& state, double lp, const ModelParams& params,
                const SloStatus& slo) {
  StepResult out = step(state, lp, params);
  if (slo.escalated && out.state.mode == Mode::kInstant) {
    out.state.mode = Mode::kSoft;
    out.state.transitions = state.transitions + (state.mode != Mode::kSoft ? 1 : 0);
    out.decision.mode = Mode::kSoft;
    out.decision.reason = Reason::kSloEscalation;
  }
  return out;
}

RolloutState rollout_guard(double trust, double conv_drop, double theta, double max_drop) {
  if (!std::isfinite(trust) || !std::isfinite(conv_drop) || !std::isfinite(theta) ||
      !std::isfinite(max_drop)) {
    throw InvalidArgument("rollout guard inputs must be finite");
  }
  if (trust < theta || conv_drop > max_drop) return {RolloutStage::kPause, Mode::kSoft};
  return {RolloutStage::kContinue, std::nullopt};
}

}  // namespace letw
