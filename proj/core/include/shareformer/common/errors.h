// Copyright 2026 The Shareformer Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//   http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <sstream>
#include <stdexcept>
#include <string>

namespace shareformer {

// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A caller broke a documented precondition (shape mismatch, bad nesting...).
class ContractViolation : public Error {
 public:
  using Error::Error;
};

// A value cannot be represented in the fixed-point ring.
class RangeError : public Error {
 public:
  using Error::Error;
};

// Peer disconnected, timed out, or sent a malformed frame.
class TransportError : public Error {
 public:
  using Error::Error;
};

// Both parties are connected but their step sequences diverged.
class ProtocolError : public Error {
 public:
  using Error::Error;
};

// Correlated randomness could not be produced or did not match the request.
class DealerError : public Error {
 public:
  using Error::Error;
};

// Training diverged (NaN/Inf loss or exploding gradients).
class TrainingError : public Error {
 public:
  using Error::Error;
};

namespace internal {

template <typename... Args>
std::string StrCat(const Args&... args) {
  std::ostringstream os;
  (os << ... << args);
  return os.str();
}

}  // namespace internal
}  // namespace shareformer

#define SF_ENFORCE(cond, ...)                                                 \
  do {                                                                        \
    if (!(cond)) {                                                            \
      throw ::shareformer::ContractViolation(::shareformer::internal::StrCat( \
          __FILE__, ":", __LINE__, ": ", #cond, " failed. ", __VA_ARGS__));   \
    }                                                                         \
  } while (false)
