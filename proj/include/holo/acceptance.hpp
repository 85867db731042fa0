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

// Built-in acceptance suite shared by `holonomy verify` and the ctest binary.

#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace holo {

struct CriterionResult {
  int id = 0;
  std::string name;
  bool passed = false;
  std::vector<std::string> lines;  // measured values next to their limits
  double seconds = 0.0;
};

struct AcceptanceOptions {
  std::string filter;     // substring of the criterion name
  double dt_scale = 1.0;  // multiplies every step size
  std::ostream* log = nullptr;
};

std::vector<CriterionResult> run_acceptance(const AcceptanceOptions& options);

/// One "[PASS]/[FAIL]" line per criterion followed by its details.
void print_acceptance(std::ostream& os, const std::vector<CriterionResult>& results);

}  // namespace holo
