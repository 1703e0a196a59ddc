// Copyright 2026 The shufdp Authors
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

#include <cstdint>
#include <stdexcept>
#include <string>

namespace shufdp {

// Bad caller-supplied data (value out of domain, mismatched lengths, ...).
class InputError : public std::invalid_argument {
 public:
  explicit InputError(const std::string& what) : std::invalid_argument(what) {}
};

// Inconsistent or unusable configuration.
class ConfigError : public std::invalid_argument {
 public:
  explicit ConfigError(const std::string& what) : std::invalid_argument(what) {}
};

// A requested allocation would exceed a configured cap.
class ResourceError : public std::runtime_error {
 public:
  explicit ResourceError(const std::string& what) : std::runtime_error(what) {}
};

// A multi-party run aborted; `step` names the failing sub-protocol step.
class ProtocolError : public std::runtime_error {
 public:
  ProtocolError(const std::string& step, const std::string& what)
      : std::runtime_error(step + ": " + what), step_(step) {}
  const std::string& step() const { return step_; }

 private:
  std::string step_;
};

// Parameters admit no solution.  When the binding constraint is the user
// count, `min_feasible_n` carries the smallest n that would work (0 when
// not applicable).
class InfeasibleError : public std::runtime_error {
 public:
  explicit InfeasibleError(const std::string& what, uint64_t min_feasible_n = 0)
      : std::runtime_error(what), min_feasible_n_(min_feasible_n) {}
  uint64_t min_feasible_n() const { return min_feasible_n_; }

 private:
  uint64_t min_feasible_n_;
};

}  // namespace shufdp
