// Copyright 2026 The dpswarm Authors
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

#ifndef DPSWARM_ERRORS_HPP_
#define DPSWARM_ERRORS_HPP_

#include <stdexcept>
#include <string>

namespace dpswarm {

// Root of every exception thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Invalid numeric input: dimension mismatch, non-finite value, bad length.
class DomainError : public Error {
 public:
  using Error::Error;
};

// Invalid parameters supplied by the caller (budgets, counts, labels).
class ConfigError : public Error {
 public:
  using Error::Error;
};

// A swarm state is missing data the requested step needs.
class StateError : public Error {
 public:
  using Error::Error;
};

// The privacy ledger would be overdrawn by the next selection.
class BudgetExhaustedError : public Error {
 public:
  using Error::Error;
};

// A protocol message could not be decoded.
class ParseError : public Error {
 public:
  using Error::Error;
};

// Malformed input file (CSV or JSON).
class LoadError : public Error {
 public:
  using Error::Error;
};

class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace dpswarm

#endif  // DPSWARM_ERRORS_HPP_
