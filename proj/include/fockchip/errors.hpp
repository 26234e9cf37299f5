// Copyright 2026 The fockchip Authors
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

#include <stdexcept>
#include <string>

namespace fockchip {

/// Base class of every error thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Matrix or vector shapes that do not fit together.
class DimensionError : public Error {
 public:
  using Error::Error;
};

/// A scalar argument outside the range where the operation is defined.
class DomainError : public Error {
 public:
  using Error::Error;
};

/// Input and output Fock states that cannot be connected by a passive network.
class InvalidTransitionError : public Error {
 public:
  using Error::Error;
};

/// Post-selection left nothing to normalize.
class DegenerateError : public Error {
 public:
  using Error::Error;
};

/// Least-squares fit failed or the data cannot constrain the model.
class FitError : public Error {
 public:
  using Error::Error;
};

/// Malformed external input (files, streams, JSON documents).
class InputError : public Error {
 public:
  using Error::Error;
};

}  // namespace fockchip
