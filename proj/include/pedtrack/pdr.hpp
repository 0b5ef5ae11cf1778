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

#include <span>
#include <vector>

#include "pedtrack/types.hpp"

namespace pedtrack::pdr {

// Merging crossings closer than this prevents double-counting the two
// accel lobes of one swing.
inline constexpr double kDefaultMinGap = 0.25;  // s

/// One detected step: sample index range and its duration.
struct StepSegment {
  std::size_t i_start = 0;
  std::size_t i_end = 0;  // inclusive
  double duration = 0.0;
};

/// Threshold stepping: a step spans from each upward threshold crossing of
/// the accel magnitude to the next downward crossing; crossings closer
/// than min_gap to the previous step are merged into it.
std::vector<StepSegment> detect_steps(std::span<const double> accel_mag,
                                      std::span<const double> t, double threshold,
                                      double min_gap = kDefaultMinGap);

/// |accel| per sample.
std::vector<double> accel_magnitudes(const ImuRun& run);

/// Distance covered during one step: norm of the trapezoidal double
/// integral of horizontal accel over the segment, zero initial velocity
/// at the step start (per-step zero-velocity reset).
double step_displacement(const ImuRun& run, const StepSegment& segment);

/// Single trapezoidal integral of the yaw rate plus theta0, wrapped to
/// (-pi, pi].
std::vector<double> heading_track(std::span<const double> gyro_z,
                                  std::span<const double> t, double theta0);

/// Classical PDR: step detection, per-step double integration, gyro
/// heading at the step midpoint. One output point per step plus the start.
Trajectory pdr_reconstruct(const ImuRun& run, double threshold, double theta0,
                           const Vec2& start, double min_gap = kDefaultMinGap);

}  // namespace pedtrack::pdr
