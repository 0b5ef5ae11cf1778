// Copyright 2026 The pedtrack Authors
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

#include <cstddef>
#include <stdexcept>
#include <string>

namespace pedtrack {

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Wrong invocation: bad flags, unknown kinds, invalid configuration.
/// Mapped to CLI exit code 2.
struct UsageError : Error {
  using Error::Error;
};

/// Invalid or insufficient data. Mapped to CLI exit code 1.
struct DataError : Error {
  using Error::Error;
};

/// Malformed input file; carries the 1-based offending line.
class ParseError : public DataError {
 public:
  ParseError(const std::string& msg, std::size_t line)
      : DataError(msg + " (line " + std::to_string(line) + ")"), line_(line) {}

  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

/// No dominant velocity peak found in a synchronization recording.
struct NoSpikeError : DataError {
  using DataError::DataError;
};

/// The subject never appeared in any LiDAR frame.
struct NoSubjectError : DataError {
  using DataError::DataError;
};

}  // namespace pedtrack
