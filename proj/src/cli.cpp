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

#include "letw/cli.hpp"

#include <CLI11.hpp>
#include <fmt/format.h>

#include <array>
#include <cstdint>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "letw/error.hpp"
#include "letw/governor.hpp"
#include "letw/io.hpp"
#include "letw/simulator.hpp"
#include "letw/telemetry.hpp"

namespace letw::cli {
namespace {

// Thrown for usage/config problems detected after flag parsing.
struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Runtime failure that maps to exit code 1.
struct RuntimeError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct GlobalFlags {
  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::string out_path;
};

struct Telemetry {
  std::vector<TelemetryEvent> events;
  std::vector<std::size_t> lines;
};

SimConfig base_config(const GlobalFlags& g) {
  SimConfig cfg = g.config_path.empty() ? SimConfig{} : load_sim_config(g.config_path);
  if (g.seed) cfg.seed = *g.seed;
  return cfg;
}

Telemetry load_telemetry(const std::string& path, bool skip_bad, std::ostream& err) {
  std::ifstream in(path);
  if (!in) throw UsageError("cannot open telemetry file " + path);
  Telemetry t;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    try {
      t.events.push_back(parse_event(line, line_no));
      t.lines.push_back(line_no);
    } catch (const ParseError& e) {
      if (!skip_bad) throw;
      err << "skipping " << e.what() << '\n';
    }
  }
  return t;
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw RuntimeError("cannot write " + path);
  f << content;
  if (!f) throw RuntimeError("write failed for " + path);
}

std::string pct(double x) { return fmt::format("{:.2f}", 100.0 * x); }

// ---------------------------------------------------------------- simulate

struct SimulateFlags {
  std::optional<long long> sessions;
  std::string policy;
  std::string scenario = "baseline";
};

Json result_entry(const SimResult& r) {
  Json j = to_json(r);
  Json alerts = Json::array();
  for (const auto& m : outcome_alerts(r.conversion_rate, r.repeat_rate, SloConfig{})) {
    alerts.push_back(m);
  }
  j["outcome_alerts"] = std::move(alerts);
  return j;
}

void print_result_table(std::ostream& out,
                        const std::vector<std::pair<std::string, SimResult>>& rows) {
  out << fmt::format("{:<18} {:>14} {:>15} {:>12} {:>8} {:>26}\n", "Policy", "Conversion (%)",
                     "Abandonment (%)", "Repeat (%)", "Trust", "Modes (inst/soft/def %)");
  for (const auto& [name, r] : rows) {
    out << fmt::format("{:<18} {:>14} {:>15} {:>12} {:>8.3f} {:>26}\n", name, pct(r.conversion_rate),
                       pct(r.abandonment_rate), pct(r.repeat_rate), r.mean_trust,
                       fmt::format("{:.1f}/{:.1f}/{:.1f}", 100 * r.mode_shares[0],
                                   100 * r.mode_shares[1], 100 * r.mode_shares[2]));
  }
}

int cmd_simulate(const GlobalFlags& g, const SimulateFlags& f, std::ostream& out) {
  SimConfig cfg = base_config(g);
  if (f.sessions) {
    if (*f.sessions <= 0) throw UsageError("sessions must be positive");
    cfg.sessions = static_cast<std::uint64_t>(*f.sessions);
  }
  bool all = false;
  if (!f.policy.empty()) {
    if (f.policy == "all") {
      all = true;
    } else {
      const auto kind = parse_policy(f.policy);
      if (!kind) throw UsageError("unknown policy \"" + f.policy + "\"");
      cfg.policy.kind = *kind;
    }
  }
  try {
    cfg.validate();
  } catch (const InvalidArgument& e) {
    throw UsageError(e.what());
  }

  std::vector<std::pair<std::string, SimResult>> rows;
  if (f.scenario == "burst") {
    const BurstComparison b = run_burst(cfg, RailDistribution::burst());
    rows = {{"none", b.without_letw}, {"letw", b.with_letw}};
    cfg.rail = RailDistribution::burst();
  } else if (f.scenario == "baseline") {
    if (all) {
      const PolicyComparison c = compare_policies(cfg);
      rows = {{"none", c.none}, {"static", c.static_messaging}, {"letw", c.letw}};
    } else {
      rows = {{std::string(to_string(cfg.policy.kind)), run_simulation(cfg)}};
    }
  } else {
    throw UsageError("unknown scenario \"" + f.scenario + "\"");
  }

  static constexpr std::array<const char*, 3> kDisplay = {"No governance", "Static messaging",
                                                           "LETW governor"};
  std::vector<std::pair<std::string, SimResult>> display;
  for (const auto& [name, r] : rows) {
    const auto kind = parse_policy(name);
    display.emplace_back(kDisplay[static_cast<int>(*kind)], r);
  }
  out << fmt::format("scenario={} sessions={} seed={}\n", f.scenario, cfg.sessions, cfg.seed);
  print_result_table(out, display);

  if (!g.out_path.empty()) {
    Json results = Json::object();
    for (const auto& [name, r] : rows) results[name] = result_entry(r);
    Json doc{{"scenario", f.scenario},
             {"config", to_json(cfg)},
             {"model",
              {{"composition", "abandonment race on exponential patience, then conversion draw"},
               {"repeat_engagement", "converted sessions only, probability ceiling * trust"},
               {"trust", "trust score at perceived latency net of feedback credit -ln(rho)/gamma"}}},
             {"results", std::move(results)}};
    write_file(g.out_path, doc.dump(2) + "\n");
  }
  return kExitOk;
}

// ------------------------------------------------------------------ replay

struct TelemetryFlags {
  std::string telemetry_path;
  std::size_t window = LatencyWindow::kDefaultCapacity;
  bool skip_bad = false;
  bool slo = false;
};

int cmd_replay(const GlobalFlags& g, const TelemetryFlags& f, std::ostream& out,
               std::ostream& err) {
  const SimConfig cfg = base_config(g);
  const ModelParams& params = cfg.params;
  if (f.window == 0) throw UsageError("window must be positive");
  const Telemetry t = load_telemetry(f.telemetry_path, f.skip_bad, err);

  LatencyWindow window(f.window);
  GovernorState gov;
  SloStatus slo;
  const SloConfig slo_cfg;
  std::vector<double> chunk;
  std::array<std::uint64_t, kModeCount> counts{};
  std::string lines;

  for (const TelemetryEvent& ev : t.events) {
    const double latency = confirmation_latency(ev);
    window.push(latency);
    const Moments m = window.moments();
    const double lp = perceived_latency(m.mean, m.std, params.k);
    const StepResult r = f.slo ? step(gov, lp, params, slo) : step(gov, lp, params);
    gov = r.state;
    ++counts[mode_index(r.decision.mode)];
    lines += serialize_decision({ev.session_id, r.decision});
    lines += '\n';

    if (f.slo) {
      chunk.push_back(latency);
      if (chunk.size() == f.window) {
        slo = slo_track(slo, slo_evaluate(compute_stats(chunk), slo_cfg));
        chunk.clear();
      }
    }
  }

  const double n = t.events.empty() ? 1.0 : static_cast<double>(t.events.size());
  const std::string summary = fmt::format(
      "decisions={} instant={}% soft={}% deferred={}% transitions={}\n", t.events.size(),
      pct(counts[0] / n), pct(counts[1] / n), pct(counts[2] / n), gov.transitions);
  if (g.out_path.empty()) {
    out << lines;
    err << summary;
  } else {
    write_file(g.out_path, lines);
    out << summary;
  }
  return kExitOk;
}

// ------------------------------------------------------------------ report

int cmd_report(const GlobalFlags& g, const TelemetryFlags& f, std::ostream& out,
               std::ostream& err) {
  const SimConfig cfg = base_config(g);
  std::vector<QuantileRow> rows;
  std::string source;
  std::size_t count = 0;
  if (!f.telemetry_path.empty()) {
    const Telemetry t = load_telemetry(f.telemetry_path, f.skip_bad, err);
    if (t.events.empty()) throw RuntimeError("no telemetry events in " + f.telemetry_path);
    std::vector<double> latencies;
    for (const auto& ev : t.events) latencies.push_back(confirmation_latency(ev));
    const WindowStats s = compute_stats(latencies);
    rows = quantile_rows(s.p50_s, s.p90_s, s.p99_s, cfg.params);
    source = "telemetry";
    count = s.count;
  } else {
    rows = quantile_mode_report(cfg);
    source = "rail";
  }

  out << fmt::format("source={}{}\n", source, count ? fmt::format(" events={}", count) : "");
  out << fmt::format("{:<10} {:>12} {:>10} {:>24}\n", "Statistic", "Latency (s)", "Trust mode",
                     "Expected conversion (%)");
  Json jrows = Json::array();
  for (const auto& r : rows) {
    out << fmt::format("{:<10} {:>12.3f} {:>10} {:>24}\n", r.name, r.latency, to_string(r.mode),
                       pct(r.expected_conversion));
    jrows.push_back({{"statistic", r.name},
                     {"latency_s", r.latency},
                     {"mode", std::string(to_string(r.mode))},
                     {"expected_conversion", r.expected_conversion}});
  }
  if (!g.out_path.empty()) {
    Json doc{{"source", source}, {"events", count}, {"rows", std::move(jrows)}};
    write_file(g.out_path, doc.dump(2) + "\n");
  }
  return kExitOk;
}

// --------------------------------------------------------------------- slo

std::string metric_list(const MetricSet& s) {
  std::string out;
  for (const auto& m : s) out += (out.empty() ? "" : ",") + m;
  return out.empty() ? "-" : out;
}

int cmd_slo(const GlobalFlags& g, const TelemetryFlags& f, const std::string& slo_path,
            std::ostream& out, std::ostream& err) {
  if (f.window == 0) throw UsageError("window must be positive");
  SloConfig cfg;
  if (!slo_path.empty()) {
    std::ifstream in(slo_path);
    if (!in) throw UsageError("cannot open SLO config " + slo_path);
    try {
      cfg = slo_config_from_json(Json::parse(in));
    } catch (const nlohmann::json::parse_error& e) {
      throw UsageError(std::string("SLO config is not valid JSON: ") + e.what());
    }
  }
  const Telemetry t = load_telemetry(f.telemetry_path, f.skip_bad, err);
  if (t.events.empty()) throw RuntimeError("no telemetry events in " + f.telemetry_path);

  out << fmt::format("{:>6} {:>6} {:>8} {:>8} {:>8} {:>8}  {:<24} {:<18} {:>5} {}\n", "window",
                     "count", "p50", "p90", "p99", "std", "breaches", "alerts", "run",
                     "escalated");
  SloStatus status;
  bool ever = false;
  Json windows = Json::array();
  Json escalations = Json::array();
  for (std::size_t start = 0, idx = 0; start < t.events.size(); start += f.window, ++idx) {
    const std::size_t end = std::min(start + f.window, t.events.size());
    std::vector<double> lat;
    for (std::size_t i = start; i < end; ++i) lat.push_back(confirmation_latency(t.events[i]));
    const WindowStats s = compute_stats(lat);
    const MetricSet breaches = slo_evaluate(s, cfg);
    const MetricSet alerts = slo_alerts(s, cfg);
    status = slo_track(status, breaches);
    ever = ever || status.escalated;
    if (status.escalated) escalations.push_back(idx);

    out << fmt::format("{:>6} {:>6} {:>8.3f} {:>8.3f} {:>8.3f} {:>8.3f}  {:<24} {:<18} {:>5} {}\n",
                       idx, s.count, s.p50_s, s.p90_s, s.p99_s, s.std_s, metric_list(breaches),
                       metric_list(alerts), status.consecutive_breaches,
                       status.escalated ? "yes" : "no");
    windows.push_back({{"index", idx},
                       {"first_line", t.lines[start]},
                       {"count", s.count},
                       {"mean_s", s.mean_s},
                       {"std_s", s.std_s},
                       {"p50_s", s.p50_s},
                       {"p90_s", s.p90_s},
                       {"p99_s", s.p99_s},
                       {"breaches", Json(std::vector<std::string>(breaches.begin(), breaches.end()))},
                       {"alerts", Json(std::vector<std::string>(alerts.begin(), alerts.end()))},
                       {"consecutive_breaches", status.consecutive_breaches},
                       {"escalated", status.escalated}});
  }
  out << (ever ? "SLO escalation: yes\n" : "SLO escalation: no\n");
  if (!g.out_path.empty()) {
    Json doc{{"window", f.window},
             {"slo", to_json(cfg)},
             {"escalated", ever},
             {"escalation_windows", std::move(escalations)},
             {"windows", std::move(windows)}};
    write_file(g.out_path, doc.dump(2) + "\n");
  }
  return ever ? kExitSloEscalated : kExitOk;
}

// --------------------------------------------------------------------- fit

std::pair<double, double> parse_pair(const std::string& s) {
  const auto colon = s.find(':');
  if (colon == std::string::npos) throw UsageError("expected L:P but got \"" + s + "\"");
  try {
    std::size_t used_a = 0, used_b = 0;
    const std::string a = s.substr(0, colon), b = s.substr(colon + 1);
    const double x = std::stod(a, &used_a);
    const double y = std::stod(b, &used_b);
    if (used_a != a.size() || used_b != b.size()) throw std::invalid_argument(s);
    return {x, y};
  } catch (const std::logic_error&) {
    throw UsageError("cannot parse \"" + s + "\" as two numbers");
  }
}

struct FitFlags {
  std::string points;
  std::string hazard_anchor;
  std::optional<double> gamma;
};

int cmd_fit(const GlobalFlags& g, const FitFlags& f, std::ostream& out) {
  if (f.points.empty() && f.hazard_anchor.empty()) {
    throw UsageError("fit needs --points and/or --hazard-anchor");
  }
  const SimConfig cfg = base_config(g);
  Json doc = Json::object();
  try {
    if (!f.points.empty()) {
      const auto comma = f.points.find(',');
      if (comma == std::string::npos || f.points.find(',', comma + 1) != std::string::npos) {
        throw UsageError("--points expects exactly two L:P pairs");
      }
      const auto [l1, p1] = parse_pair(f.points.substr(0, comma));
      const auto [l2, p2] = parse_pair(f.points.substr(comma + 1));
      const LogisticFit fit = fit_logistic_two_point({l1, p1}, {l2, p2});
      doc["alpha"] = fit.alpha;
      doc["beta"] = fit.beta;
      out << fmt::format("alpha={:.6f} beta={:.6f}\n", fit.alpha, fit.beta);
    }
    if (!f.hazard_anchor.empty()) {
      const auto [latency, median] = parse_pair(f.hazard_anchor);
      const double gamma = f.gamma.value_or(cfg.params.gamma);
      const double lambda0 = calibrate_lambda0(latency, median, gamma);
      doc["lambda0"] = lambda0;
      doc["gamma"] = gamma;
      out << fmt::format("lambda0={:.6f} gamma={:.6f}\n", lambda0, gamma);
    }
  } catch (const InvalidArgument& e) {
    throw UsageError(e.what());
  }
  if (!g.out_path.empty()) write_file(g.out_path, doc.dump(2) + "\n");
  return kExitOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Latency-elastic trust window toolkit", "letw"};
  app.require_subcommand(1);
  app.fallthrough();

  GlobalFlags g;
  app.add_option("--config", g.config_path, "Simulation/model config JSON");
  app.add_option("--seed", g.seed, "RNG seed (default 42)");
  app.add_option("--out", g.out_path, "Write the JSON artifact here");

  SimulateFlags sim;
  auto* simulate = app.add_subcommand("simulate", "Run the seeded session simulator");
  simulate->add_option("--sessions", sim.sessions, "Number of sessions");
  simulate->add_option("--policy", sim.policy, "none | static | letw | all");
  simulate->add_option("--scenario", sim.scenario, "baseline | burst");

  TelemetryFlags tel;
  auto* replay = app.add_subcommand("replay", "Replay telemetry through the governor");
  replay->add_option("--telemetry", tel.telemetry_path, "Telemetry JSONL")->required();
  replay->add_option("--window", tel.window, "Window size in events");
  replay->add_flag("--skip-bad", tel.skip_bad, "Skip malformed lines");
  replay->add_flag("--slo", tel.slo, "Apply SLO escalation per completed window");

  auto* report = app.add_subcommand("report", "Quantile to mode table");
  report->add_option("--telemetry", tel.telemetry_path, "Telemetry JSONL (default: config rail)");
  report->add_flag("--skip-bad", tel.skip_bad, "Skip malformed lines");

  std::string slo_path;
  auto* slo = app.add_subcommand("slo", "Evaluate SLOs over successive windows");
  slo->add_option("--telemetry", tel.telemetry_path, "Telemetry JSONL")->required();
  slo->add_option("--window", tel.window, "Events per window");
  slo->add_option("--slo-config", slo_path, "SLO thresholds JSON");
  slo->add_flag("--skip-bad", tel.skip_bad, "Skip malformed lines");

  FitFlags fit;
  auto* fitcmd = app.add_subcommand("fit", "Two-point logistic fit and hazard calibration");
  fitcmd->add_option("--points", fit.points, "L1:P1,L2:P2");
  fitcmd->add_option("--hazard-anchor", fit.hazard_anchor, "L:median");
  fitcmd->add_option("--gamma", fit.gamma, "Abandonment sensitivity for the anchor");

  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (*simulate) return cmd_simulate(g, sim, out);
    if (*replay) return cmd_replay(g, tel, out, err);
    if (*report) return cmd_report(g, tel, out, err);
    if (*slo) return cmd_slo(g, tel, slo_path, out, err);
    if (*fitcmd) return cmd_fit(g, fit, out);
  } catch (const UsageError& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const InvalidArgument& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitRuntime;
  }
  return kExitUsage;
}

}  // namespace letw::cli
