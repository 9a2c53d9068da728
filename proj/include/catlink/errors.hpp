// Copyright 2026 The catlink Authors
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

#ifndef CATLINK_ERRORS_HPP
#define CATLINK_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace catlink {

/// Base class for failures raised by the simulator itself (as opposed to
/// std::invalid_argument, which signals a violated precondition).
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A state does not fit the Fock cutoff within the configured tail tolerance.
class TruncationError : public Error {
 public:
  TruncationError(const std::string& what, int required_cutoff)
      : Error(what), required_cutoff_(required_cutoff) {}

  /// Smallest cutoff at which the discarded tail would be acceptable.
  int required_cutoff() const noexcept { return required_cutoff_; }

 private:
  int required_cutoff_;
};

/// A conditioning event whose probability is numerically zero.
class HeraldError : public Error {
 public:
  HeraldError() : Error("herald event has vanishing probability") {}
};

/// Normalizing a state whose norm (or trace) is below resolution.
class NullStateError : public Error {
 public:
  NullStateError() : Error("null state after conditioning") {}
};

/// Matrix that is not Hermitian or not positive within tolerance.
class InvalidStateError : public Error {
 public:
  explicit InvalidStateError(const std::string& detail)
      : Error("invalid density operator: " + detail) {}
};

}  // namespace catlink

#endif  // CATLINK_ERRORS_HPP
