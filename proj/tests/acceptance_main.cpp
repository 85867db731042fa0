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

// Acceptance suite: one [PASS]/[FAIL] line per criterion, exit 1 on any failure.

#include <iostream>

#include "holo/acceptance.hpp"

int main() {
  holo::AcceptanceOptions opt;
  opt.log = &std::cout;
  const auto results = holo::run_acceptance(opt);
  int failed = 0;
  for (const auto& r : results) failed += r.passed ? 0 : 1;
  std::cout << "\nsummary\n";
  for (const auto& r : results) std::cout << (r.passed ? "[PASS] " : "[FAIL] ") << r.id << ' ' << r.name << '\n';
  std::cout << (results.size() - failed) << "/" << results.size() << " criteria passed\n";
  return failed ? 1 : 0;
}
