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

#include "letw/io.hpp"

#include <fstream>
#include <initializer_list>
#include <sstream>

#include "letw/error.hpp"

namespace letw {
namespace {

void reject_unknown(const Json& j, std::string_view where,
                    std::initializer_list<std::string_view> known) {
  if (!j.is_object()) throw InvalidArgument(std::string(where) + " must be a JSON object");
  for (const auto& [key, _] : j.items()) {
    bool found = false;
    for (auto k : known) found = found || k == key;
    if (!found) throw InvalidArgument("unknown field \"" + key + "\" in " + std::string(where));
  }
}

template <typename T>
void read(const Json& j, const char* key, T& out) {
  auto it = j.find(key);
  if (it == j.end()) return;
  try {
    out = it->template get<T>();
  } catch (const nlohmann::json::exception&) {
    throw InvalidArgument(std::string("field \"") + key + "\" has the wrong type");
  }
}

}  // namespace

Json to_json(const ModelParams& p) {
  return Json{{"alpha", p.alpha},
              {"beta", p.beta},
              {"gamma", p.gamma},
              {"k", p.k},
              {"eta", p.eta},
              {"lambda0", p.lambda0},
              {"budget_b_l", p.budget_b_l},
              {"budget_soft", p.budget_soft},
              {"hysteresis_h", p.hysteresis_h},
              {"theta1", p.theta1},
              {"theta2", p.theta2},
              {"lambda1", p.lambda1},
              {"lambda2", p.lambda2}};
}

ModelParams model_params_from_json(const Json& j) {
  reject_unknown(j, "params",
                 {"alpha", "beta", "gamma", "k", "eta", "lambda0", "budget_b_l", "budget_soft",
                  "hysteresis_h", "theta1", "theta2", "lambda1", "lambda2"});
  ModelParams p;
  read(j, "alpha", p.alpha);
  read(j, "beta", p.beta);
  read(j, "gamma", p.gamma);
  read(j, "k", p.k);
  read(j, "eta", p.eta);
  read(j, "budget_b_l", p.budget_b_l);
  read(j, "budget_soft", p.budget_soft);
  read(j, "hysteresis_h", p.hysteresis_h);
  read(j, "theta1", p.theta1);
  read(j, "theta2", p.theta2);
  read(j, "lambda1", p.lambda1);
  read(j, "lambda2", p.lambda2);
  if (j.contains("lambda0")) {
    read(j, "lambda0", p.lambda0);
  } else {
    p.lambda0 = calibrate_lambda0(kHazardAnchorLatency, kHazardAnchorMedian, p.gamma);
  }
  p.validate();
  return p;
}

Json to_json(const SimConfig& c) {
  return Json{
      {"sessions", c.sessions},
      {"seed", c.seed},
      {"rail", {{"mu_log", c.rail.mu_log}, {"sigma_log", c.rail.sigma_log}, {"shift_s", c.rail.shift_s}}},
      {"policy",
       {{"kind", std::string(to_string(c.policy.kind))},
        {"static_threshold_s", c.policy.static_threshold_s}}},
      {"params", to_json(c.params)},
      {"ctx", {{"m_c", c.ctx.m_c}}},
      {"mitigation",
       {{"rho_soft", c.mitigation.rho_soft}, {"rho_deferred", c.mitigation.rho_deferred}}},
      {"engagement_ceiling", c.engagement_ceiling},
      {"window_size", c.window_size}};
}

SimConfig sim_config_from_json(const Json& j) {
  reject_unknown(j, "config",
                 {"sessions", "seed", "rail", "policy", "params", "ctx", "mitigation",
                  "engagement_ceiling", "window_size"});
  SimConfig c;
  read(j, "sessions", c.sessions);
  read(j, "seed", c.seed);
  read(j, "engagement_ceiling", c.engagement_ceiling);
  read(j, "window_size", c.window_size);
  if (auto it = j.find("rail"); it != j.end()) {
    reject_unknown(*it, "rail", {"mu_log", "sigma_log", "shift_s"});
    read(*it, "mu_log", c.rail.mu_log);
    read(*it, "sigma_log", c.rail.sigma_log);
    read(*it, "shift_s", c.rail.shift_s);
  }
  if (auto it = j.find("policy"); it != j.end()) {
    reject_unknown(*it, "policy", {"kind", "static_threshold_s"});
    std::string kind(to_string(c.policy.kind));
    read(*it, "kind", kind);
    const auto parsed = parse_policy(kind);
    if (!parsed) throw InvalidArgument("unknown policy kind \"" + kind + "\"");
    c.policy.kind = *parsed;
    read(*it, "static_threshold_s", c.policy.static_threshold_s);
  }
  if (auto it = j.find("params"); it != j.end()) c.params = model_params_from_json(*it);
  if (auto it = j.find("ctx"); it != j.end()) {
    reject_unknown(*it, "ctx", {"m_c"});
    read(*it, "m_c", c.ctx.m_c);
  }
  if (auto it = j.find("mitigation"); it != j.end()) {
    reject_unknown(*it, "mitigation", {"rho_soft", "rho_deferred"});
    read(*it, "rho_soft", c.mitigation.rho_soft);
    read(*it, "rho_deferred", c.mitigation.rho_deferred);
  }
  return c;
}

SimConfig load_sim_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InvalidArgument("cannot open config file " + path);
  Json j;
  try {
    j = Json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw InvalidArgument("config " + path + " is not valid JSON: " + e.what());
  }
  return sim_config_from_json(j);
}

Json to_json(const SimResult& r) {
  return Json{{"sessions", r.sessions},
              {"converted", r.converted},
              {"abandoned", r.abandoned},
              {"repeated", r.repeated},
              {"conversion_rate", r.conversion_rate},
              {"abandonment_rate", r.abandonment_rate},
              {"repeat_rate", r.repeat_rate},
              {"mean_trust", r.mean_trust},
              {"mode_shares",
               {{"instant", r.mode_shares[0]}, {"soft", r.mode_shares[1]}, {"deferred", r.mode_shares[2]}}},
              {"latency_p50", r.latency_p50},
              {"latency_p90", r.latency_p90},
              {"latency_p99", r.latency_p99}};
}

SimResult sim_result_from_json(const Json& j) {
  SimResult r;
  try {
    r.sessions = j.at("sessions").get<std::uint64_t>();
    r.converted = j.at("converted").get<std::uint64_t>();
    r.abandoned = j.at("abandoned").get<std::uint64_t>();
    r.repeated = j.at("repeated").get<std::uint64_t>();
    r.conversion_rate = j.at("conversion_rate").get<double>();
    r.abandonment_rate = j.at("abandonment_rate").get<double>();
    r.repeat_rate = j.at("repeat_rate").get<double>();
    r.mean_trust = j.at("mean_trust").get<double>();
    const Json& shares = j.at("mode_shares");
    r.mode_shares = {shares.at("instant").get<double>(), shares.at("soft").get<double>(),
                     shares.at("deferred").get<double>()};
    r.latency_p50 = j.at("latency_p50").get<double>();
    r.latency_p90 = j.at("latency_p90").get<double>();
    r.latency_p99 = j.at("latency_p99").get<double>();
  } catch (const nlohmann::json::exception& e) {
    throw InvalidArgument(std::string("malformed simulation result: ") + e.what());
  }
  return r;
}

Json to_json(const SloConfig& c) {
  return Json{{"p50_max_s", c.p50_max_s},     {"p90_max_s", c.p90_max_s},
              {"p99_max_s", c.p99_max_s},     {"jitter_std_max_s", c.jitter_std_max_s},
              {"p90_alert_s", c.p90_alert_s}, {"p99_alert_s", c.p99_alert_s},
              {"jitter_alert_s", c.jitter_alert_s}, {"conv_min", c.conv_min},
              {"repeat_min", c.repeat_min}};
}

SloConfig slo_config_from_json(const Json& j) {
  reject_unknown(j, "slo",
                 {"p50_max_s", "p90_max_s", "p99_max_s", "jitter_std_max_s", "p90_alert_s",
                  "p99_alert_s", "jitter_alert_s", "conv_min", "repeat_min"});
  SloConfig c;
  read(j, "p50_max_s", c.p50_max_s);
  read(j, "p90_max_s", c.p90_max_s);
  read(j, "p99_max_s", c.p99_max_s);
  read(j, "jitter_std_max_s", c.jitter_std_max_s);
  read(j, "p90_alert_s", c.p90_alert_s);
  read(j, "p99_alert_s", c.p99_alert_s);
  read(j, "jitter_alert_s", c.jitter_alert_s);
  read(j, "conv_min", c.conv_min);
  read(j, "repeat_min", c.repeat_min);
  c.validate();
  return c;
}

std::string serialize_decision(const DecisionRecord& rec) {
  const Json j{{"session_id", rec.session_id},
               {"perceived_latency_s", rec.decision.perceived_latency},
               {"trust", rec.decision.trust},
               {"mode", std::string(to_string(rec.decision.mode))},
               {"reason", std::string(to_string(rec.decision.reason))}};
  return j.dump();
}

DecisionRecord parse_decision(std::string_view line) {
  DecisionRecord rec;
  try {
    const Json j = Json::parse(line);
    rec.session_id = j.at("session_id").get<std::string>();
    rec.decision.perceived_latency = j.at("perceived_latency_s").get<double>();
    rec.decision.trust = j.at("trust").get<double>();
    const auto mode = parse_mode(j.at("mode").get<std::string>());
    const auto reason = parse_reason(j.at("reason").get<std::string>());
    if (!mode || !reason) throw ParseError("unknown mode or reason in decision record", 0);
    rec.decision.mode = *mode;
    rec.decision.reason = *reason;
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("malformed decision record: ") + e.what(), 0);
  }
  return rec;
}

}  // namespace letw
