// Copyright 2026 The rmap Authors
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

#ifndef RMAP_ERROR_HPP_
#define RMAP_ERROR_HPP_

#include <cstdint>
#include <stdexcept>
#include <string>

namespace rmap {

// Mirrors rmap_status in rmap.h; values must stay in sync.
enum class ErrorCode : int {
  kInvalidArgument = 1,
  kBudgetExceeded = 2,
  kFitFailure = 3,
  kOutOfDomain = 4,
  kIndeterminate = 5,
  kRejectionExhausted = 6,
  kIo = 7,
  kInternal = 8,
};

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}
  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

class InvalidArgument : public Error {
 public:
  explicit InvalidArgument(const std::string& what)
      : Error(ErrorCode::kInvalidArgument, what) {}
};

class BudgetExceeded : public Error {
 public:
  explicit BudgetExceeded(const std::string& what)
      : Error(ErrorCode::kBudgetExceeded, what) {}
};

class FitFailure : public Error {
 public:
  explicit FitFailure(const std::string& what)
      : Error(ErrorCode::kFitFailure, what) {}
};

// Asymptotic formula evaluated outside the range it was derived for.
class OutOfDomain : public Error {
 public:
  explicit OutOfDomain(const std::string& what)
      : Error(ErrorCode::kOutOfDomain, what) {}
};

class RejectionExhausted : public Error {
 public:
  RejectionExhausted(const std::string& what, std::uint64_t attempts,
                     std::uint64_t truncated)
      : Error(ErrorCode::kRejectionExhausted, what),
        attempts_(attempts),
        truncated_(truncated) {}
  std::uint64_t attempts() const noexcept { return attempts_; }
  // Attempts that hit the progeny cap before going extinct.
  std::uint64_t truncated() const noexcept { return truncated_; }

 private:
  std::uint64_t attempts_;
  std::uint64_t truncated_;
};

}  // namespace rmap

#endif  // RMAP_ERROR_HPP_
