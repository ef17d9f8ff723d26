// Copyright 2026 The casbi authors
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

#ifndef CASBI_ERRORS_HPP
#define CASBI_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace casbi {

/// Base class for all casbi errors.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Invalid argument outside a function's mathematical domain (non-finite cost, shape < 1, ...).
class DomainError : public Error {
 public:
  using Error::Error;
};

/// Malformed or inconsistent experiment configuration. CLI exit code 2.
class ConfigError : public Error {
 public:
  using Error::Error;
};

/// A cost model evaluated non-positive where a strictly positive cost surface is required.
class InvalidCostError : public Error {
 public:
  using Error::Error;
};

/// Penalty bounds are inconsistent with observed acceptance probabilities.
class BoundsInvalidError : public Error {
 public:
  using Error::Error;
};

/// Rejection sampling exceeded its attempt budget. CLI exit code 4.
class BudgetExceededError : public Error {
 public:
  BudgetExceededError(const std::string& what, double empirical_acceptance_rate)
      : Error(what), acceptance_rate(empirical_acceptance_rate) {}
  double acceptance_rate;
};

/// ABC produced zero acceptances. CLI exit code 3.
class EmptyPosteriorError : public Error {
 public:
  using Error::Error;
};

/// Filesystem failure while reading or writing artifacts.
class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace casbi

#endif
