// Copyright 2026 The cavnet Authors.
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

#include <stdexcept>
#include <string>

namespace cavnet {

/// Base of every error thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Caller supplied a value outside an operation's domain (bad n, R, p, ...).
/// The CLI maps this family to exit code 2.
class ParameterError : public Error {
 public:
  using Error::Error;
};

class InvalidLabelError : public ParameterError {
 public:
  using ParameterError::ParameterError;
};

class GraphError : public ParameterError {
 public:
  using ParameterError::ParameterError;
};

class DegenerateCouplingError : public ParameterError {
 public:
  using ParameterError::ParameterError;
};

class AccuracyContractError : public ParameterError {
 public:
  using ParameterError::ParameterError;
};

/// Operands do not fit together (register mismatch, wrong matrix size).
class ShapeError : public Error {
 public:
  using Error::Error;
};

/// An internal invariant failed: non-unitary matrix, lossy wiring, a field
/// block hit by the two-excitation sector. Exit code 3 in the CLI.
class ContractViolation : public Error {
 public:
  using Error::Error;
};

class InvalidConfigurationError : public ContractViolation {
 public:
  using ContractViolation::ContractViolation;
};

class LossyWiringError : public ContractViolation {
 public:
  using ContractViolation::ContractViolation;
};

class NotSingleExcitationError : public ContractViolation {
 public:
  using ContractViolation::ContractViolation;
};

class NumericalBlowupError : public ContractViolation {
 public:
  using ContractViolation::ContractViolation;
};

}  // namespace cavnet
