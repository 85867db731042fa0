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

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "holo/config.hpp"
#include "holo/report.hpp"

using namespace holo;
using nlohmann::json;

namespace {

std::string field_of(const json& doc) {
  try {
    parse_config(doc);
  } catch (const ValidationError& e) {
    return e.field();
  }
  return "";
}

}  // namespace

TEST_CASE("defaults and unit scaling") {
  const auto c = parse_config(json{{"scheme", "lambda_double"}, {"omega", 2.0}, {"kappa", 0.01}});
  CHECK(c.model == ModelId::kLambdaFirst);
  const SchemeSpec s = to_scheme_spec(c);
  CHECK(s.omega == 2.0);
  CHECK(s.gamma == doctest::Approx(0.01));
  CHECK(s.kappa == doctest::Approx(0.02));

  const auto a = parse_config(
      json{{"scheme", "single"}, {"omega", 2.0}, {"gamma", 0.01}, {"units", {{"rates", "absolute"}}}});
  CHECK(to_scheme_spec(a).gamma == doctest::Approx(0.01));

  CHECK(parse_config(json{{"scheme", "nmr_double"}}).model == ModelId::kNmrSpinHalf);
  CHECK(parse_config(json{{"scheme", "superposed"}}).model == ModelId::kSuperposedDual);
}

TEST_CASE("validation names the offending field") {
  CHECK(field_of(json{{"scheme", "single"}, {"kappa", -1.0}}) == "kappa");
  CHECK(field_of(json{{"scheme", "single"}, {"gamma", 0.0}}) == "gamma");
  CHECK(field_of(json{{"scheme", "single"}, {"kappa", 1.5}}) == "kappa");
  CHECK(field_of(json{{"scheme", "single"}, {"bogus", 1}}) == "bogus");
  CHECK(field_of(json{{"scheme", "single"}, {"numeric", {{"dtt", 0.1}}}}) == "numeric.dtt");
  CHECK(field_of(json{{"scheme", "single"}, {"numeric", {{"trajectories", -3}}}}) == "numeric.trajectories");
  CHECK(field_of(json{{"scheme", "single"}, {"theta0", 2.0}}) == "theta0");
  CHECK(field_of(json{{"scheme", "single"}, {"pulse_axis", "z"}}) == "pulse_axis");
  CHECK(field_of(json{{"scheme", "nmr_double"}, {"model", "lambda_first"}}) == "model");
  CHECK(field_of(json{{"model", "lambda_first"}}) == "scheme");
  CHECK(field_of(json{{"scheme", "warp"}}) == "scheme");
  CHECK(field_of(json{{"scheme", "single"}, {"omega", "fast"}}) == "omega");
  CHECK(field_of(json::array()) == "config");
}

TEST_CASE("grid block") {
  const auto c = parse_config(
      json{{"scheme", "single"}, {"grid", {{"kappa_over_gamma", {0.1, 0.2}}, {"kappa_over_omega", {0.001}}}}});
  REQUIRE(c.grid.has_value());
  CHECK(c.grid->kappa_over_gamma.size() == 2);
  CHECK(field_of(json{{"scheme", "single"}, {"grid", {{"kappa_over_gamma", {"x"}}}}}) == "grid.kappa_over_gamma");
}

TEST_CASE("json encodings") {
  const json z = to_json(Complex(1.5, -2.0));
  CHECK(z["re"] == 1.5);
  CHECK(z["im"] == -2.0);
  const json m = to_json(Mat2(Mat2::Identity()));
  CHECK(m.size() == 2);
  CHECK(m[1][1]["re"] == 1.0);
}
