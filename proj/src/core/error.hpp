// Copyright 2026 The pinlf authors.
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

#ifndef PINLF_CORE_ERROR_HPP
#define PINLF_CORE_ERROR_HPP

#include <cstdint>
#include <stdexcept>
#include <string>

namespace pinlf {

// Malformed input text: wrong field count, non-numeric value. Carries the
// 1-based line number.
class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& msg, std::size_t line)
      : std::runtime_error("line " + std::to_string(line) + ": " + msg),
        line_(line) {}
  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

// Violated data or configuration contract: negative rating, duplicate
// coordinate, bad split parameters, shape mismatch.
class DataError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Training produced a non-finite objective or validation error. Carries the
// iteration at which the blow-up was observed.
class DivergenceError : public std::runtime_error {
 public:
  DivergenceError(const std::string& msg, std::uint32_t iteration)
      : std::runtime_error(msg + " at iteration " + std::to_string(iteration)),
        iteration_(iteration) {}
  std::uint32_t iteration() const noexcept { return iteration_; }

 private:
  std::uint32_t iteration_;
};

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace pinlf

#endif  // PINLF_CORE_ERROR_HPP
