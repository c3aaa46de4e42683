// Copyright 2026 The qcool Authors
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

#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace qcool {

enum class ErrorKind {
  NotHermitian,
  DimensionMismatch,
  InvalidState,
  BadLabel,
  DegenerateGround,
  MultipleFrequencies,
  StepTooLarge,
  DegenerateSteadyState,
  ZeroRabi,
  NotConverged,
  NonMonotone,
  BadConfig,
  UsageError,
};

constexpr std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::NotHermitian: return "NotHermitian";
    case ErrorKind::DimensionMismatch: return "DimensionMismatch";
    case ErrorKind::InvalidState: return "InvalidState";
    case ErrorKind::BadLabel: return "BadLabel";
    case ErrorKind::DegenerateGround: return "DegenerateGround";
    case ErrorKind::MultipleFrequencies: return "MultipleFrequencies";
    case ErrorKind::StepTooLarge: return "StepTooLarge";
    case ErrorKind::DegenerateSteadyState: return "DegenerateSteadyState";
    case ErrorKind::ZeroRabi: return "ZeroRabi";
    case ErrorKind::NotConverged: return "NotConverged";
    case ErrorKind::NonMonotone: return "NonMonotone";
    case ErrorKind::BadConfig: return "BadConfig";
    case ErrorKind::UsageError: return "UsageError";
  }
  return "Unknown";
}

// Every failure in the library is reported through this one exception type;
// callers dispatch on kind().
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

  // Failures that come from the numerics rather than from bad input.
  bool is_numerical() const noexcept {
    return kind_ == ErrorKind::DegenerateSteadyState || kind_ == ErrorKind::StepTooLarge ||
           kind_ == ErrorKind::NotConverged || kind_ == ErrorKind::NonMonotone;
  }

 private:
  ErrorKind kind_;
};

}  // namespace qcool
