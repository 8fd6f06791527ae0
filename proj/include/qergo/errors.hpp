// Copyright 2026 The qergo Authors
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

#ifndef QERGO_ERRORS_HPP
#define QERGO_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace qergo {

/// Base class for every error raised by the toolkit.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Mismatched dimensions, site counts or empty operator lists.
class ShapeError : public Error {
 public:
  using Error::Error;
};

/// A dense cap or enumeration cap would be exceeded.
class ResourceError : public Error {
 public:
  ResourceError(const std::string& what, std::size_t cap)
      : Error(what + " (cap " + std::to_string(cap) + ")"), cap_(cap) {}
  std::size_t cap() const { return cap_; }

 private:
  std::size_t cap_;
};

/// Input violates a documented invariant (stochasticity, normalization, ...).
class ValidationError : public Error {
 public:
  using Error::Error;
};

/// Parameter outside its documented range.
class ParameterError : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

/// Quantum alphabet is not unit-norm or not linearly independent.
class InvalidAlphabetError : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

/// Site count not compatible with a block channel's block size.
class AlignmentError : public Error {
 public:
  using Error::Error;
};

/// Correlation backend cannot evaluate the requested source.
class UnsupportedBackendError : public Error {
 public:
  using Error::Error;
};

}  // namespace qergo

#endif  // QERGO_ERRORS_HPP
