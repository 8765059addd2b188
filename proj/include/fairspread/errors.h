// Copyright 2026 The Authors.
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

#ifndef FAIRSPREAD_ERRORS_H_
#define FAIRSPREAD_ERRORS_H_

#include <stdexcept>
#include <string>

namespace fairspread {

// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed input text. `location` is "line N" or a field path such as
// "nodes[3].groups".
class ParseError : public Error {
 public:
  ParseError(const std::string& location, const std::string& message)
      : Error(location + ": " + message), location_(location) {}
  const std::string& location() const { return location_; }

 private:
  std::string location_;
};

// Well-formed input that violates a model invariant (uncovered node, empty
// group, probability outside [0, 1], ...).
class ValidationError : public Error {
 public:
  using Error::Error;
};

// Caller-supplied argument outside the documented domain.
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

// Exhaustive enumeration requested above the configured cap.
class EnumerationCapError : public Error {
 public:
  using Error::Error;
};

// Threshold step selected more items than the budget allows.
class InfeasibleBudgetError : public Error {
 public:
  using Error::Error;
};

// A stochastic oracle failed its success event after all escalations.
class OracleFailure : public Error {
 public:
  using Error::Error;
};

}  // namespace fairspread

#endif  // FAIRSPREAD_ERRORS_H_
