// Copyright 2026 The rsqrt2pc Authors.
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

#include <stdexcept>
#include <string>

namespace rsqrt2pc {

// Base of every error thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A value falls outside the representable range of a codec or bit field.
class RangeError : public Error {
 public:
  using Error::Error;
};

// Zero, subnormal, NaN or infinite inputs to the binary32 bit pipeline.
class UnsupportedValueError : public Error {
 public:
  using Error::Error;
};

// Caller violated an API contract (mixed parties, bad shapes, ...).
class UsageError : public Error {
 public:
  using Error::Error;
};

// Two-party protocol invariant broken (triple reuse, exhausted budget).
class ProtocolError : public Error {
 public:
  using Error::Error;
};

// Channel I/O failure, peer close or oversize frame.
class TransportError : public Error {
 public:
  using Error::Error;
};

// Invalid configuration values or config file problems.
class ConfigError : public Error {
 public:
  using Error::Error;
};

// Mathematical domain violation (e.g. rsqrt of a non-positive value).
class DomainError : public Error {
 public:
  using Error::Error;
};

}  // namespace rsqrt2pc
