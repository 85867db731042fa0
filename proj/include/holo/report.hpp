// Copyright 2026 The holo-refocus Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// JSON serialization of gate reports, phases, metrics and sweep fits.

#pragma once

#include <string>

#include <json.hpp>

#include "holo/config.hpp"
#include "holo/holonomy.hpp"
#include "holo/schemes.hpp"

namespace holo {

inline constexpr const char* kToolVersion = "0.1.0";

nlohmann::json to_json(Complex z);
nlohmann::json to_json(const Mat2& m);
nlohmann::json to_json(const GateReport& r);
nlohmann::json to_json(const PhaseReport& r);
nlohmann::json to_json(const DistortionMetrics& m);
nlohmann::json to_json(const SchemeResult& r);
nlohmann::json sweep_fit_json(const SweepResult& sweep);

nlohmann::json resolved_parameters(const SchemeSpec& spec);

/// Writes to a sibling temporary file and renames it into place.
void write_atomic(const std::string& path, const std::string& content);

/// ISO-8601 UTC timestamp.
std::string utc_timestamp();

}  // namespace holo
