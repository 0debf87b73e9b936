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

// JSON forms of the configuration, result and replay records.
//
// Config documents use the same field names as the C++ structs. Every field
// is optional and falls back to its default; unknown keys are rejected so a
// misspelt parameter cannot go unnoticed. When "lambda0" is absent it is
// recalibrated from the configured gamma and the 7 s-at-1 s hazard anchor.

#ifndef LETW_IO_HPP_
#define LETW_IO_HPP_

#include <nlohmann/json.hpp>
#include <string>
#include <string_view>

#include "letw/governor.hpp"
#include "letw/model.hpp"
#include "letw/simulator.hpp"
#include "letw/telemetry.hpp"

namespace letw {

using Json = nlohmann::ordered_json;

Json to_json(const ModelParams& p);
ModelParams model_params_from_json(const Json& j);

Json to_json(const SimConfig& cfg);
SimConfig sim_config_from_json(const Json& j);
SimConfig load_sim_config(const std::string& path);

Json to_json(const SimResult& r);
SimResult sim_result_from_json(const Json& j);

Json to_json(const SloConfig& cfg);
SloConfig slo_config_from_json(const Json& j);

struct DecisionRecord {
  std::string session_id;
  Decision decision;
};

// One replay output line: {session_id, perceived_latency_s, trust, mode, reason}.
std::string serialize_decision(const DecisionRecord& rec);
DecisionRecord parse_decision(std::string_view line);

}  // namespace letw

#endif  // LETW_IO_HPP_
