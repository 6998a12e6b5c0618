// Copyright 2026 The SpanGraph Authors.
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

#include <cstddef>
#include <stdexcept>
#include <string>

namespace spangraph {

enum class ErrorKind {
  kConfig,
  kParse,
  kRange,
  kShape,
  kNumerical,
  kRequest,
  kEmptyDistribution,
  kConsistency,
  kTraining,
  kWeighting,
};

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

class ConfigError : public Error {
 public:
  explicit ConfigError(const std::string& what)
      : Error(ErrorKind::kConfig, "config error: " + what) {}
};

class ParseError : public Error {
 public:
  ParseError(const std::string& source, std::size_t line, const std::string& what)
      : Error(ErrorKind::kParse, "parse error: " + source + ":" +
                                     std::to_string(line) + ": " + what),
        line_(line) {}

  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

class RangeError : public Error {
 public:
  explicit RangeError(const std::string& what)
      : Error(ErrorKind::kRange, "range error: " + what) {}
};

class ShapeError : public Error {
 public:
  explicit ShapeError(const std::string& what)
      : Error(ErrorKind::kShape, "shape error: " + what) {}
};

class NumericalError : public Error {
 public:
  explicit NumericalError(const std::string& what)
      : Error(ErrorKind::kNumerical, "numerical error: " + what) {}
};

class RequestError : public Error {
 public:
  explicit RequestError(const std::string& what)
      : Error(ErrorKind::kRequest, "sample request error: " + what) {}
};

class EmptyDistributionError : public Error {
 public:
  explicit EmptyDistributionError(const std::string& what)
      : Error(ErrorKind::kEmptyDistribution, "empty distribution: " + what) {}
};

class ConsistencyError : public Error {
 public:
  explicit ConsistencyError(const std::string& what)
      : Error(ErrorKind::kConsistency, "consistency error: " + what) {}
};

class TrainingError : public Error {
 public:
  explicit TrainingError(const std::string& what)
      : Error(ErrorKind::kTraining, "training error: " + what) {}
};

class WeightingError : public Error {
 public:
  explicit WeightingError(const std::string& what)
      : Error(ErrorKind::kWeighting, "weighting error: " + what) {}
};

// Process exit codes: 0 success, 1 config, 2 data, 3 numerical.
inline int exit_code_for(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::kConfig:
    case ErrorKind::kRequest:
      return 1;
    case ErrorKind::kParse:
    case ErrorKind::kRange:
    case ErrorKind::kShape:
    case ErrorKind::kEmptyDistribution:
    case ErrorKind::kConsistency:
    case ErrorKind::kTraining:
    case ErrorKind::kWeighting:
      return 2;
    case ErrorKind::kNumerical:
      return 3;
  }
  return 1;
}

}  // namespace spangraph
