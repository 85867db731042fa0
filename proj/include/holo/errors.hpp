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

#pragma once

#include <stdexcept>
#include <string>

namespace holo {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Operands live on different bases or have mismatched dimensions.
class DimensionError : public Error {
 public:
  using Error::Error;
};

/// A level label is not part of the basis.
class LookupError : public Error {
 public:
  using Error::Error;
};

/// Amplitudes or density-matrix entries became non-finite.
class NumericalInstabilityError : public Error {
 public:
  using Error::Error;
};

/// The integrator broke a structural guarantee (e.g. the no-jump norm grew).
class IntegratorViolationError : public Error {
 public:
  using Error::Error;
};

/// The requested operation is not defined for this model.
class UnsupportedModelError : public Error {
 public:
  using Error::Error;
};

/// Loop parameters or the resulting evolution are too fast to be adiabatic.
class AdiabaticityError : public Error {
 public:
  using Error::Error;
};

/// The dark subspace changes dimension along a path.
class DegeneracyCrossingError : public Error {
 public:
  using Error::Error;
};

/// Invalid user-supplied parameter; `field()` names the offending input.
class ValidationError : public Error {
 public:
  ValidationError(std::string field, const std::string& message)
      : Error(field + ": " + message), field_(std::move(field)) {}

  const std::string& field() const noexcept { return field_; }

 private:
  std::string field_;
};

}  // namespace holo
