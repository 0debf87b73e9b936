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

#ifndef LETW_MODE_HPP_
#define LETW_MODE_HPP_

#include <optional>
#include <string_view>

namespace letw {

// UX confirmation mode. Underlying values are the escalation index used by
// the single-step locality rule (Instant=0, Soft=1, Deferred=2).
enum class Mode : int { kInstant = 0, kSoft = 1, kDeferred = 2 };

inline constexpr int kModeCount = 3;

constexpr int mode_index(Mode m) noexcept { return static_cast<int>(m); }

constexpr std::string_view to_string(Mode m) noexcept {
  switch (m) {
    case Mode::kInstant:
      return "instant";
    case Mode::kSoft:
      return "soft";
    case Mode::kDeferred:
      return "deferred";
  }
  return "instant";
}

inline std::optional<Mode> parse_mode(std::string_view s) noexcept {
  if (s == "instant") return Mode::kInstant;
  if (s == "soft") return Mode::kSoft;
  if (s == "deferred") return Mode::kDeferred;
  return std::nullopt;
}

}  // namespace letw

#endif  // LETW_MODE_HPP_
