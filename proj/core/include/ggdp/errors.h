//
// Copyright 2026 The ggdp Authors
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
//

#ifndef GGDP_ERRORS_H_
#define GGDP_ERRORS_H_

#include <stdexcept>
#include <string>

namespace ggdp {

// Root of every error raised by the library. The CLI maps all of these to
// exit code 1; flag parsing problems are reported separately with code 2.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A distribution or mechanism parameter lies outside its domain
// (beta < 1, sigma <= 0, u outside (0,1), ...).
class ParameterError : public Error {
 public:
  using Error::Error;
};

// Accountant configuration is inconsistent (grid mismatch, L not a multiple
// of h, ...).
class ConfigError : public Error {
 public:
  using Error::Error;
};

// The truncation window [-L, L] keeps too little of a PRV's mass.
class TruncationError : public Error {
 public:
  using Error::Error;
};

// A requested privacy value is not reachable on the computed curve.
class RangeError : public Error {
 public:
  using Error::Error;
};

// The sigma solver could not bracket the target or saw inconsistent
// accountant observations.
class SolverError : public Error {
 public:
  using Error::Error;
};

// Malformed user data: non-finite values, bad CSV rows, too few classes.
class InputError : public Error {
 public:
  using Error::Error;
};

// Training cannot take a single step within the privacy budget.
class BudgetError : public Error {
 public:
  using Error::Error;
};

// A constructive procedure (histogram generation) failed to produce a
// valid object within its attempt budget.
class ConstructionError : public Error {
 public:
  using Error::Error;
};

}  // namespace ggdp

#endif  // GGDP_ERRORS_H_
