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
#include <string>
#include <vector>

#include "pedtrack/types.hpp"

namespace pedtrack {

/// One broken invariant; names the invariant and the first offending index.
/// Violations are data, not failures.
struct Violation {
  std::string invariant;
  std::size_t index = 0;
  std::string detail;
};

/// Checks finiteness of all nine channels, strictly increasing timestamps,
/// and uniform sampling within 10% jitter of 1/rate.
std::vector<Violation> validate(const ImuRun& run);

/// Checks strictly increasing scan timestamps and the 80 m range bound on
/// every point (reference frame included).
std::vector<Violation> validate(const LidarRun& run);

/// Checks strictly increasing timestamps and finite positions.
std::vector<Violation> validate(const Trajectory& traj);

}  // namespace pedtrack
