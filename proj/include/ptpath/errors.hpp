// Copyright 2026 The ptpath Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//    http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef PTPATH_ERRORS_HPP
#define PTPATH_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace ptpath {

/// An argument lies outside the domain of an operation (e.g. t outside [0,1]).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Spline knots, schedules or configs violate a structural invariant.
class ConstraintError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Annealing coordinates for which exp(eta^T W) is not integrable.
class NonNormalizableError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// A log-density or acceptance evaluation produced a non-finite value.
class EvaluationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed or unknown configuration content.
class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A file could not be read or written.
class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace ptpath

#endif  // PTPATH_ERRORS_HPP
