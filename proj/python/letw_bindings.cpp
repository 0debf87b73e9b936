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

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "letw/error.hpp"
#include "letw/governor.hpp"
#include "letw/io.hpp"
#include "letw/model.hpp"
#include "letw/simulator.hpp"
#include "letw/telemetry.hpp"

namespace py = pybind11;
using namespace letw;

PYBIND11_MODULE(_letw, m) {
  m.doc() = "Latency-elastic trust window: behavioral model, governor and simulator.";

  py::register_exception<InvalidArgument>(m, "InvalidArgument", PyExc_ValueError);
  py::register_exception<ParseError>(m, "ParseError", PyExc_ValueError);

  // model
  py::class_<ModelParams>(m, "ModelParams")
      .def(py::init<>())
      .def_readwrite("alpha", &ModelParams::alpha)
      .def_readwrite("beta", &ModelParams::beta)
      .def_readwrite("gamma", &ModelParams::gamma)
      .def_readwrite("k", &ModelParams::k)
      .def_readwrite("eta", &ModelParams::eta)
      .def_readwrite("lambda0", &ModelParams::lambda0)
      .def_readwrite("budget_b_l", &ModelParams::budget_b_l)
      .def_readwrite("budget_soft", &ModelParams::budget_soft)
      .def_readwrite("hysteresis_h", &ModelParams::hysteresis_h)
      .def_readwrite("theta1", &ModelParams::theta1)
      .def_readwrite("theta2", &ModelParams::theta2)
      .def_readwrite("lambda1", &ModelParams::lambda1)
      .def_readwrite("lambda2", &ModelParams::lambda2)
      .def("validate", &ModelParams::validate)
      .def("to_json", [](const ModelParams& p) { return to_json(p).dump(); });

  py::class_<ContextProfile>(m, "ContextProfile")
      .def(py::init([](double m_c) { return ContextProfile{m_c}; }), py::arg("m_c") = 1.0)
      .def_readwrite("m_c", &ContextProfile::m_c);

  py::class_<RevenueParams>(m, "RevenueParams")
      .def(py::init([](double n, double r) { return RevenueParams{n, r}; }),
           py::arg("n_intents") = 0.0, py::arg("revenue_per_payment") = 0.0)
      .def_readwrite("n_intents", &RevenueParams::n_intents)
      .def_readwrite("revenue_per_payment", &RevenueParams::revenue_per_payment);

  py::class_<UserProfile>(m, "UserProfile")
      .def(py::init([](double s_u) { return UserProfile{s_u, 0, 0}; }), py::arg("s_u") = 1.0)
      .def_readwrite("s_u", &UserProfile::s_u)
      .def_readwrite("completed_count", &UserProfile::completed_count)
      .def_readwrite("abandoned_count", &UserProfile::abandoned_count);

  py::enum_<SessionOutcomeKind>(m, "SessionOutcomeKind")
      .value("COMPLETED", SessionOutcomeKind::kCompleted)
      .value("ABANDONED", SessionOutcomeKind::kAbandoned);

  const ModelParams defaults;
  m.def("sigmoid", &sigmoid);
  m.def("conversion_probability", &conversion_probability, py::arg("perceived_latency"),
        py::arg("params") = defaults);
  m.def("latency_elasticity", &latency_elasticity, py::arg("latency"),
        py::arg("params") = defaults);
  m.def("abandonment_hazard", &abandonment_hazard, py::arg("latency"),
        py::arg("params") = defaults);
  m.def("median_abandon_time", &median_abandon_time, py::arg("latency"),
        py::arg("params") = defaults);
  m.def("calibrate_lambda0", &calibrate_lambda0, py::arg("anchor_latency"),
        py::arg("anchor_median"), py::arg("gamma"));
  m.def("perceived_latency", &perceived_latency, py::arg("mean_latency"), py::arg("std_latency"),
        py::arg("k"), py::arg("s_u") = 1.0);
  m.def("latency_budget", &latency_budget, py::arg("tau"), py::arg("params") = defaults);
  m.def("trust_score", &trust_score, py::arg("perceived_latency"), py::arg("params") = defaults);
  m.def("latency_utility", &latency_utility, py::arg("delta_conv"), py::arg("delta_churn"),
        py::arg("delta_trust"), py::arg("params") = defaults);
  m.def("context_conversion", &context_conversion, py::arg("latency"), py::arg("ctx"),
        py::arg("params") = defaults);
  m.def("effective_budget", &effective_budget, py::arg("params"), py::arg("ctx"));
  m.def("expected_revenue", &expected_revenue, py::arg("rev"), py::arg("perceived_latency"),
        py::arg("params") = defaults);
  m.def("revenue_gradient", &revenue_gradient, py::arg("rev"), py::arg("perceived_latency"),
        py::arg("params") = defaults);
  m.def(
      "fit_logistic_two_point",
      [](std::pair<double, double> a, std::pair<double, double> b) {
        const LogisticFit f = fit_logistic_two_point({a.first, a.second}, {b.first, b.second});
        return std::make_pair(f.alpha, f.beta);
      },
      py::arg("point1"), py::arg("point2"), "Returns (alpha, beta).");
  m.def("outcome_bucket_params", &outcome_bucket_params);
  m.def("update_sensitivity", &update_sensitivity, py::arg("profile"), py::arg("outcome"),
        py::arg("perceived_latency"), py::arg("params") = defaults,
        py::arg("delta") = kDefaultSensitivityDelta);

  // governor
  py::enum_<Mode>(m, "Mode")
      .value("INSTANT", Mode::kInstant)
      .value("SOFT", Mode::kSoft)
      .value("DEFERRED", Mode::kDeferred);
  py::enum_<Reason>(m, "Reason")
      .value("WITHIN_BUDGET", Reason::kWithinBudget)
      .value("BUDGET_EXCEEDED", Reason::kBudgetExceeded)
      .value("SOFT_LIMIT_EXCEEDED", Reason::kSoftLimitExceeded)
      .value("HYSTERESIS_HOLD", Reason::kHysteresisHold)
      .value("SLO_ESCALATION", Reason::kSloEscalation);

  py::class_<GovernorState>(m, "GovernorState")
      .def(py::init<>())
      .def_readwrite("mode", &GovernorState::mode)
      .def_readwrite("last_perceived_latency", &GovernorState::last_perceived_latency)
      .def_readwrite("transitions", &GovernorState::transitions);
  py::class_<Decision>(m, "Decision")
      .def_readonly("mode", &Decision::mode)
      .def_readonly("trust", &Decision::trust)
      .def_readonly("perceived_latency", &Decision::perceived_latency)
      .def_readonly("reason", &Decision::reason);

  m.def("select_mode_by_trust", &select_mode_by_trust, py::arg("trust"),
        py::arg("params") = defaults);
  m.def("decide_simple", &decide_simple, py::arg("mean_latency"), py::arg("std_latency"),
        py::arg("params") = defaults);
  m.def(
      "step",
      [](const GovernorState& s, double lp, const ModelParams& p) {
        const StepResult r = step(s, lp, p);
        return std::make_pair(r.state, r.decision);
      },
      py::arg("state"), py::arg("perceived_latency"), py::arg("params") = defaults,
      "Returns (next_state, decision).");

  py::enum_<RolloutStage>(m, "RolloutStage")
      .value("CONTINUE", RolloutStage::kContinue)
      .value("PAUSE", RolloutStage::kPause);
  py::class_<RolloutState>(m, "RolloutState")
      .def_readonly("stage", &RolloutState::stage)
      .def_readonly("forced_mode", &RolloutState::forced_mode);
  m.def("rollout_guard", &rollout_guard, py::arg("trust"), py::arg("conv_drop"), py::arg("theta"),
        py::arg("max_drop") = kDefaultMaxConversionDrop);

  // telemetry
  py::class_<TelemetryEvent>(m, "TelemetryEvent")
      .def_readonly("session_id", &TelemetryEvent::session_id)
      .def_readonly("intent_ts", &TelemetryEvent::intent_ts)
      .def_readonly("confirm_ts", &TelemetryEvent::confirm_ts)
      .def_readonly("media_rtt_ms", &TelemetryEvent::media_rtt_ms)
      .def_readonly("media_jitter_ms", &TelemetryEvent::media_jitter_ms)
      .def_readonly("ux_mode", &TelemetryEvent::ux_mode)
      .def_readonly("engaged_60s", &TelemetryEvent::engaged_60s)
      .def_readonly("region", &TelemetryEvent::region)
      .def_readonly("device", &TelemetryEvent::device);
  m.def("parse_event", &parse_event, py::arg("line"), py::arg("line_no") = 0);
  m.def("serialize_event", &serialize_event);
  m.def("confirmation_latency", &confirmation_latency);

  py::class_<WindowStats>(m, "WindowStats")
      .def_readonly("count", &WindowStats::count)
      .def_readonly("mean_s", &WindowStats::mean_s)
      .def_readonly("std_s", &WindowStats::std_s)
      .def_readonly("p50_s", &WindowStats::p50_s)
      .def_readonly("p90_s", &WindowStats::p90_s)
      .def_readonly("p99_s", &WindowStats::p99_s);
  py::class_<LatencyWindow>(m, "LatencyWindow")
      .def(py::init<std::size_t>(), py::arg("capacity") = LatencyWindow::kDefaultCapacity)
      .def("push", &LatencyWindow::push)
      .def("stats", &LatencyWindow::stats)
      .def("values", &LatencyWindow::values)
      .def("__len__", &LatencyWindow::size)
      .def_property_readonly("capacity", &LatencyWindow::capacity);

  py::class_<SloConfig>(m, "SloConfig").def(py::init<>());
  py::class_<SloStatus>(m, "SloStatus")
      .def(py::init<>())
      .def_readonly("consecutive_breaches", &SloStatus::consecutive_breaches)
      .def_readonly("breached_metrics", &SloStatus::breached_metrics)
      .def_readonly("escalated", &SloStatus::escalated);
  m.def(
      "slo_evaluate",
      [](const WindowStats& s, const SloConfig& c) { return slo_evaluate(s, c); },
      py::arg("stats"), py::arg("cfg") = SloConfig{});
  m.def("slo_track", &slo_track, py::arg("status"), py::arg("breaches"));

  // simulator
  py::enum_<PolicyKind>(m, "PolicyKind")
      .value("NONE", PolicyKind::kNone)
      .value("STATIC_MESSAGING", PolicyKind::kStaticMessaging)
      .value("LETW", PolicyKind::kLetw);
  py::class_<RailDistribution>(m, "RailDistribution")
      .def(py::init<>())
      .def(py::init([](double mu, double sigma, double shift) {
             return RailDistribution{mu, sigma, shift};
           }),
           py::arg("mu_log"), py::arg("sigma_log"), py::arg("shift_s") = 0.0)
      .def_readwrite("mu_log", &RailDistribution::mu_log)
      .def_readwrite("sigma_log", &RailDistribution::sigma_log)
      .def_readwrite("shift_s", &RailDistribution::shift_s)
      .def("quantile", &RailDistribution::quantile)
      .def_static("baseline", &RailDistribution::baseline)
      .def_static("burst", &RailDistribution::burst)
      .def_static("from_median_std", &RailDistribution::from_median_std);

  py::class_<SimConfig>(m, "SimConfig")
      .def(py::init<>())
      .def_readwrite("sessions", &SimConfig::sessions)
      .def_readwrite("seed", &SimConfig::seed)
      .def_readwrite("rail", &SimConfig::rail)
      .def_readwrite("params", &SimConfig::params)
      .def_readwrite("ctx", &SimConfig::ctx)
      .def_readwrite("engagement_ceiling", &SimConfig::engagement_ceiling)
      .def_readwrite("window_size", &SimConfig::window_size)
      .def_property(
          "policy", [](const SimConfig& c) { return c.policy.kind; },
          [](SimConfig& c, PolicyKind k) { c.policy.kind = k; })
      .def_property(
          "static_threshold_s", [](const SimConfig& c) { return c.policy.static_threshold_s; },
          [](SimConfig& c, double t) { c.policy.static_threshold_s = t; })
      .def_property(
          "rho_soft", [](const SimConfig& c) { return c.mitigation.rho_soft; },
          [](SimConfig& c, double r) { c.mitigation.rho_soft = r; })
      .def_property(
          "rho_deferred", [](const SimConfig& c) { return c.mitigation.rho_deferred; },
          [](SimConfig& c, double r) { c.mitigation.rho_deferred = r; })
      .def("validate", &SimConfig::validate)
      .def_static("from_json",
                  [](const std::string& s) { return sim_config_from_json(Json::parse(s)); });

  py::class_<SimResult>(m, "SimResult")
      .def_readonly("sessions", &SimResult::sessions)
      .def_readonly("converted", &SimResult::converted)
      .def_readonly("abandoned", &SimResult::abandoned)
      .def_readonly("repeated", &SimResult::repeated)
      .def_readonly("conversion_rate", &SimResult::conversion_rate)
      .def_readonly("abandonment_rate", &SimResult::abandonment_rate)
      .def_readonly("repeat_rate", &SimResult::repeat_rate)
      .def_readonly("mean_trust", &SimResult::mean_trust)
      .def_readonly("mode_shares", &SimResult::mode_shares)
      .def_readonly("latency_p50", &SimResult::latency_p50)
      .def_readonly("latency_p90", &SimResult::latency_p90)
      .def_readonly("latency_p99", &SimResult::latency_p99)
      .def("to_json", [](const SimResult& r) { return to_json(r).dump(); })
      .def("__eq__", [](const SimResult& a, const SimResult& b) { return a == b; });

  py::class_<QuantileRow>(m, "QuantileRow")
      .def_readonly("name", &QuantileRow::name)
      .def_readonly("latency", &QuantileRow::latency)
      .def_readonly("mode", &QuantileRow::mode)
      .def_readonly("expected_conversion", &QuantileRow::expected_conversion);

  m.def("run_simulation", &run_simulation, py::arg("cfg"),
        py::call_guard<py::gil_scoped_release>());
  m.def(
      "run_burst",
      [](const SimConfig& base, const RailDistribution& rail) {
        const BurstComparison b = run_burst(base, rail);
        return std::make_pair(b.without_letw, b.with_letw);
      },
      py::arg("base"), py::arg("burst_rail") = RailDistribution::burst(),
      "Returns (without_letw, with_letw).");
  m.def(
      "compare_policies",
      [](const SimConfig& cfg) {
        const PolicyComparison c = compare_policies(cfg);
        py::dict d;
        d["none"] = c.none;
        d["static"] = c.static_messaging;
        d["letw"] = c.letw;
        return d;
      },
      py::arg("cfg"));
  m.def("quantile_mode_report", &quantile_mode_report, py::arg("cfg"));
}
