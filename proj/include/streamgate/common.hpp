// Copyright 2026 The streamgate Authors
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

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace streamgate {

using Bytes = std::vector<std::uint8_t>;

/// Base class for every error thrown by this library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed or truncated binary input.
class SerializationError : public Error {
 public:
  using Error::Error;
};

/// A peer violated the message protocol (bad frame, wrong order, oversize).
class ProtocolError : public Error {
 public:
  using Error::Error;
};

/// Invalid configuration (CLI flags, scenario files, role setup).
class ConfigError : public Error {
 public:
  using Error::Error;
};

}  // namespace streamgate
