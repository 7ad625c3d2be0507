// Copyright 2026 The dsttomo Authors
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

namespace dsttomo {

/// Invalid user-supplied input (bad state, bad probabilities, bad config).
class ValidationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A numerical precondition failed (singular Fisher matrix, lambda at the
/// weak-measurement pole, ...).
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class BlochOutOfBall : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

class InvalidState : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

class ConstraintViolation : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

class DegenerateStrength : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

class DegenerateProjection : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

class SingularFisher : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

class IllConditioned : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

class NoCrossover : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

}  // namespace dsttomo
