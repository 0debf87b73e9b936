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

#include <gtest/gtest.h>

#include <cstdlib>
#include <random>

#include "letw/error.hpp"

namespace letw {
namespace {

const ModelParams kParams{};

GovernorState in(Mode m) {
  GovernorState s;
  s.mode = m;
  return s;
}

TEST(SelectModeByTrustTest, Examples) {
  EXPECT_EQ(select_mode_by_trust(0.5, kParams), Mode::kInstant);
  EXPECT_EQ(select_mode_by_trust(0.35, kParams), Mode::kSoft);
  EXPECT_EQ(select_mode_by_trust(0.2, kParams), Mode::kSoft);
  EXPECT_EQ(select_mode_by_trust(0.1, kParams), Mode::kDeferred);
  EXPECT_THROW(select_mode_by_trust(1.1, kParams), InvalidArgument);
}

TEST(SelectModeByTrustTest, AgreesWithBudgetRuleAtBudget) {
  // theta1 = 0.5 puts the Instant/Soft boundary exactly at L_p = B_L.
  EXPECT_EQ(select_mode_by_trust(trust_score(kParams.budget_b_l, kParams), kParams),
            Mode::kInstant);
  EXPECT_EQ(select_mode_by_trust(trust_score(kParams.budget_b_l + 1e-9, kParams), kParams),
            Mode::kSoft);
}

TEST(DecideSimpleTest, QuantileTableMapping) {
  EXPECT_EQ(decide_simple(1.4, 0.0, kParams), Mode::kInstant);
  EXPECT_EQ(decide_simple(2.2, 0.0, kParams), Mode::kSoft);
  EXPECT_EQ(decide_simple(4.7, 0.0, kParams), Mode::kDeferred);
  EXPECT_EQ(decide_simple(2.0, 0.0, kParams), Mode::kInstant);
  EXPECT_EQ(decide_simple(3.0, 0.0, kParams), Mode::kSoft);
  // 1.6 + 0.8 * 0.6 = 2.08 > B_L
  EXPECT_EQ(decide_simple(1.6, 0.6, kParams), Mode::kSoft);
}

TEST(StepTest, Examples) {
  StepResult r = step(in(Mode::kInstant), 2.1, kParams);
  EXPECT_EQ(r.state.mode, Mode::kSoft);
  EXPECT_EQ(r.decision.reason, Reason::kBudgetExceeded);
  EXPECT_EQ(r.state.transitions, 1u);

  r = step(in(Mode::kInstant), 2.0, kParams);
  EXPECT_EQ(r.state.mode, Mode::kInstant);
  EXPECT_EQ(r.decision.reason, Reason::kWithinBudget);
  EXPECT_EQ(r.decision.trust, 0.5);

  r = step(in(Mode::kSoft), 1.80, kParams);
  EXPECT_EQ(r.state.mode, Mode::kSoft);
  EXPECT_EQ(r.decision.reason, Reason::kHysteresisHold);
  EXPECT_EQ(r.state.transitions, 0u);

  r = step(in(Mode::kDeferred), 2.70, kParams);
  EXPECT_EQ(r.state.mode, Mode::kSoft);
  EXPECT_EQ(r.decision.reason, Reason::kBudgetExceeded);
  EXPECT_DOUBLE_EQ(r.state.last_perceived_latency, 2.70);
  EXPECT_DOUBLE_EQ(r.decision.perceived_latency, 2.70);
}

TEST(StepTest, RemainingTransitionsAndReasons) {
  EXPECT_EQ(step(in(Mode::kSoft), 3.01, kParams).state.mode, Mode::kDeferred);
  EXPECT_EQ(step(in(Mode::kSoft), 3.01, kParams).decision.reason, Reason::kSoftLimitExceeded);
  EXPECT_EQ(step(in(Mode::kSoft), 3.0, kParams).state.mode, Mode::kSoft);
  EXPECT_EQ(step(in(Mode::kSoft), 1.74, kParams).state.mode, Mode::kInstant);
  EXPECT_EQ(step(in(Mode::kSoft), 1.74, kParams).decision.reason, Reason::kWithinBudget);
  EXPECT_EQ(step(in(Mode::kSoft), 1.75, kParams).state.mode, Mode::kSoft);
  EXPECT_EQ(step(in(Mode::kSoft), 2.5, kParams).decision.reason, Reason::kBudgetExceeded);
  EXPECT_EQ(step(in(Mode::kDeferred), 2.75, kParams).state.mode, Mode::kDeferred);
  EXPECT_EQ(step(in(Mode::kDeferred), 2.9, kParams).decision.reason, Reason::kHysteresisHold);
  EXPECT_EQ(step(in(Mode::kDeferred), 9.0, kParams).decision.reason, Reason::kSoftLimitExceeded);
  EXPECT_EQ(step(in(Mode::kDeferred), 0.5, kParams).state.mode, Mode::kSoft);
  EXPECT_EQ(step(in(Mode::kDeferred), 0.5, kParams).decision.reason, Reason::kHysteresisHold);
}

TEST(StepTest, NoDirectJumpBetweenInstantAndDeferred) {
  StepResult r = step(in(Mode::kInstant), 9.0, kParams);
  EXPECT_EQ(r.state.mode, Mode::kSoft);
  r = step(r.state, 9.0, kParams);
  EXPECT_EQ(r.state.mode, Mode::kDeferred);
  EXPECT_EQ(r.state.transitions, 2u);
  EXPECT_EQ(step(in(Mode::kDeferred), 0.0, kParams).state.mode, Mode::kSoft);
}

TEST(StepTest, RejectsNegativeLatency) {
  EXPECT_THROW(step(GovernorState{}, -0.5, kParams), InvalidArgument);
}

TEST(StepPropertiesTest, NoFlappingInsideBand) {
  const double lo = kParams.budget_b_l - kParams.hysteresis_h;
  const double hi = kParams.budget_soft - kParams.hysteresis_h;
  std::mt19937_64 gen(99);
  std::uniform_real_distribution<double> d(0.0, 1.0);
  for (int trial = 0; trial < 1000; ++trial) {
    GovernorState s;
    for (int i = 0; i < 50; ++i) {
      double lp = lo + (hi - lo) * (1.0 - d(gen));  // (lo, hi]
      s = step(s, lp, kParams).state;
    }
    ASSERT_LE(s.transitions, 1u);
  }
  GovernorState alt;
  for (int i = 0; i < 100; ++i) {
    const double lp = kParams.budget_b_l + (i % 2 == 0 ? 0.5 : -0.5) * kParams.hysteresis_h;
    alt = step(alt, lp, kParams).state;
  }
  EXPECT_EQ(alt.transitions, 1u);
  EXPECT_EQ(alt.mode, Mode::kSoft);
}

TEST(StepPropertiesTest, SingleStepLocality) {
  std::mt19937_64 gen(4);
  std::uniform_real_distribution<double> d(0.0, 6.0);
  GovernorState s;
  for (int i = 0; i < 20000; ++i) {
    const StepResult r = step(s, d(gen), kParams);
    ASSERT_LE(std::abs(mode_index(r.state.mode) - mode_index(s.mode)), 1);
    ASSERT_EQ(r.decision.mode, r.state.mode);
    s = r.state;
  }
}

TEST(StepPropertiesTest, SteadyStateAgreesWithStatelessRule) {
  const double b_l = kParams.budget_b_l, b_soft = kParams.budget_soft, h = kParams.hysteresis_h;
  for (int i = 0; i <= 600; ++i) {
    const double lp = 0.01 * i;
    const bool in_band = (lp >= b_l - h && lp <= b_l) || (lp >= b_soft - h && lp <= b_soft);
    if (in_band) continue;
    GovernorState s;
    for (int k = 0; k < 3; ++k) s = step(s, lp, kParams).state;
    EXPECT_EQ(s.mode, decide_simple(lp, 0.0, kParams)) << "L_p=" << lp;
  }
}

TEST(SloEscalationTest, Examples) {
  SloStatus hot;
  hot.consecutive_breaches = 3;
  hot.escalated = true;
  const SloStatus calm;

  EXPECT_EQ(apply_slo_escalation(in(Mode::kInstant), hot).mode, Mode::kSoft);
  EXPECT_EQ(apply_slo_escalation(in(Mode::kDeferred), hot).mode, Mode::kDeferred);
  EXPECT_EQ(apply_slo_escalation(in(Mode::kInstant), calm).mode, Mode::kInstant);
  EXPECT_EQ(apply_slo_escalation(in(Mode::kSoft), hot).mode, Mode::kSoft);
}

TEST(SloEscalationTest, EscalatedStepHoldsSoft) {
  SloStatus hot;
  hot.consecutive_breaches = 3;
  hot.escalated = true;
  StepResult r = step(in(Mode::kSoft), 0.5, kParams, hot);
  EXPECT_EQ(r.state.mode, Mode::kSoft);
  EXPECT_EQ(r.decision.reason, Reason::kSloEscalation);
  EXPECT_EQ(r.state.transitions, 0u);

  r = step(in(Mode::kInstant), 0.5, kParams, hot);
  EXPECT_EQ(r.state.mode, Mode::kSoft);
  EXPECT_EQ(r.state.transitions, 1u);

  r = step(in(Mode::kSoft), 3.5, kParams, hot);
  EXPECT_EQ(r.state.mode, Mode::kDeferred);
  EXPECT_EQ(r.decision.reason, Reason::kSoftLimitExceeded);

  r = step(in(Mode::kSoft), 0.5, kParams, SloStatus{});
  EXPECT_EQ(r.state.mode, Mode::kInstant);
}

TEST(SloEscalationTest, NeverMovesTowardInstant) {
  SloStatus hot;
  hot.consecutive_breaches = 4;
  hot.escalated = true;
  for (Mode m : {Mode::kInstant, Mode::kSoft, Mode::kDeferred}) {
    for (const SloStatus& s : {hot, SloStatus{}}) {
      EXPECT_GE(mode_index(apply_slo_escalation(in(m), s).mode), mode_index(m));
    }
  }
}

TEST(RolloutGuardTest, Examples) {
  RolloutState r = rollout_guard(0.3, 0.0, 0.5, 0.02);
  EXPECT_EQ(r.stage, RolloutStage::kPause);
  EXPECT_EQ(r.forced_mode, Mode::kSoft);

  r = rollout_guard(0.8, 0.0, 0.5, 0.02);
  EXPECT_EQ(r.stage, RolloutStage::kContinue);
  EXPECT_FALSE(r.forced_mode.has_value());

  r = rollout_guard(0.8, 0.05, 0.5, 0.02);
  EXPECT_EQ(r.stage, RolloutStage::kPause);
  EXPECT_EQ(r.forced_mode, Mode::kSoft);

  EXPECT_EQ(rollout_guard(0.8, 0.02, 0.5).stage, RolloutStage::kContinue);
  EXPECT_THROW(rollout_guard(std::nan(""), 0.0, 0.5), InvalidArgument);
}

TEST(RolloutGuardTest, Monotone) {
  std::mt19937_64 gen(8);
  std::uniform_real_distribution<double> t(0.0, 1.0), c(-0.05, 0.1), dl(0.0, 0.3);
  for (int i = 0; i < 5000; ++i) {
    const double trust = t(gen), drop = c(gen);
    if (rollout_guard(trust, drop, 0.5).stage != RolloutStage::kPause) continue;
    EXPECT_EQ(rollout_guard(trust - dl(gen), drop, 0.5).stage, RolloutStage::kPause);
    EXPECT_EQ(rollout_guard(trust, drop + dl(gen), 0.5).stage, RolloutStage::kPause);
  }
}

TEST(ReasonTest, StringRoundTrip) {
  for (Reason r : {Reason::kWithinBudget, Reason::kBudgetExceeded, Reason::kSoftLimitExceeded,
                   Reason::kHysteresisHold, Reason::kSloEscalation}) {
    EXPECT_EQ(parse_reason(to_string(r)), r);
  }
  EXPECT_FALSE(parse_reason("nope").has_value());
}

}  // namespace
}  // namespace letw
