// Copyright 2026 The pwnorm Authors
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

namespace pwnorm {

/// Base of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Bad parameters, arity mismatches, points outside a family's base set.
class ValidationError : public Error {
 public:
  using Error::Error;
};

/// An enumeration or search would exceed a configured cap.
class CapacityError : public Error {
 public:
  using Error::Error;
};

/// A symbolic query has no decidable answer for the given descriptor.
class UndecidableError : public Error {
 public:
  using Error::Error;
};

/// Overflow or another non-finite intermediate value.
class NumericError : public Error {
 public:
  using Error::Error;
};

namespace detail {

[[noreturn]] inline void fail_validation(const std::string& what) {
  throw ValidationError(what);
}

inline void require(bool cond, const std::string& what) {
  if (!cond) throw ValidationError(what);
}

}  // namespace detail
}  // namespace pwnorm
