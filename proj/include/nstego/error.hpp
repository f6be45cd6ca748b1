// Copyright 2026 The nstego Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <stdexcept>
#include <string>

namespace nstego {

// Numeric values double as CLI exit codes and C API status codes.
enum class ErrorCode : int {
  kOk = 0,
  kInvalidArgument = 1,
  kConfig = 2,
  kCapacity = 3,
  kConvergence = 4,
  kIo = 5,
  kFormat = 6,
  kShape = 7,
  kNumerical = 8,
  kInternal = 9,
};

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}
  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

class ConfigError : public Error {
 public:
  explicit ConfigError(const std::string& what) : Error(ErrorCode::kConfig, what) {}
};

class CapacityError : public Error {
 public:
  CapacityError(const std::string& what, long long max_bits)
      : Error(ErrorCode::kCapacity, what), max_bits_(max_bits) {}
  long long max_bits() const noexcept { return max_bits_; }

 private:
  long long max_bits_;
};

class ConvergenceError : public Error {
 public:
  ConvergenceError(const std::string& what, int step, double residual)
      : Error(ErrorCode::kConvergence, what), step_(step), residual_(residual) {}
  int step() const noexcept { return step_; }
  double residual() const noexcept { return residual_; }

 private:
  int step_;
  double residual_;
};

class ShapeError : public Error {
 public:
  explicit ShapeError(const std::string& what) : Error(ErrorCode::kShape, what) {}
};

class NumericalError : public Error {
 public:
  explicit NumericalError(const std::string& what) : Error(ErrorCode::kNumerical, what) {}
};

class FormatError : public Error {
 public:
  explicit FormatError(const std::string& what) : Error(ErrorCode::kFormat, what) {}
};

class IoError : public Error {
 public:
  explicit IoError(const std::string& what) : Error(ErrorCode::kIo, what) {}
};

}  // namespace nstego
