/* Copyright 2026 The dermseg Authors. All Rights Reserved.

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

    http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
==============================================================================*/

#ifndef DERMSEG_ERROR_HPP_
#define DERMSEG_ERROR_HPP_

#include <stdexcept>
#include <string>

namespace dermseg {

/// Process exit codes used by the command-line tool.
enum class ExitCode : int {
  kOk = 0,
  kValidation = 2,
  kData = 3,
  kPredictorContract = 4,
};

/// Root of the library's exception hierarchy.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
  virtual ExitCode exit_code() const noexcept = 0;
};

/// Invalid arguments, configuration, or malformed structured input.
class ValidationError : public Error {
 public:
  using Error::Error;
  ExitCode exit_code() const noexcept override { return ExitCode::kValidation; }
};

/// A numeric parameter lies outside its admissible range.
class ParameterError : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

/// Two rasters (or lists) that must agree in shape do not.
class DimensionError : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

/// Problems with files on disk: missing, unreadable, wrong encoding, or
/// contents contradicting what a manifest declares.
class DataError : public Error {
 public:
  using Error::Error;
  ExitCode exit_code() const noexcept override { return ExitCode::kData; }
};

/// A class required for an operation has no members.
class EmptyClassError : public DataError {
 public:
  using DataError::DataError;
};

/// A predictor broke its contract (wrong output dims, missing fixture,
/// failed external command).
class PredictorContractError : public Error {
 public:
  using Error::Error;
  ExitCode exit_code() const noexcept override {
    return ExitCode::kPredictorContract;
  }
};

}  // namespace dermseg

#endif  // DERMSEG_ERROR_HPP_
