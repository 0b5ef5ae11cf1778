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

#include <utility>
#include <vector>

#include "pedtrack/lidartrack.hpp"
#include "pedtrack/types.hpp"

namespace pedtrack::sync {

// A trace has a usable spike when its maximum is at least this multiple
// of its median.
inline constexpr double kSpikeDominance = 5.0;
inline constexpr double kMaxVelocityWindow = 5.0;  // s, keeps drift negligible

/// Scalar speed samples derived from one sensor.
struct VelocityTrace {
  struct Sample {
    double t = 0.0;
    double v = 0.0;
  };
  std::vector<Sample> samples;
};

/// Per-recording delays plus their mean and spread. Positive delay means
/// the LiDAR timestamps run late relative to the IMU clock.
struct DelayEstimate {
  std::vector<double> per_recording;  // s
  double mean = 0.0;
  double stddev = 0.0;
};

/// Speed over [t0, t1]: norm of the trapezoidal single integral of accel
/// from t0, zero initial velocity. The window must be short (<= 5 s) so
/// integration drift stays negligible.
VelocityTrace imu_velocity(const ImuRun& run, double t0, double t1);

/// Central-difference speed of the centroid track, one-sided at the ends.
VelocityTrace lidar_velocity(const lidar::CentroidTrack& track);

/// Peak-time difference t_peak(vl) - t_peak(vi), each peak refined by
/// quadratic interpolation through the three samples around the maximum.
/// Throws NoSpikeError when either trace lacks a dominant peak.
double estimate_delay(const VelocityTrace& vi, const VelocityTrace& vl,
                      double dominance = kSpikeDominance);

/// Fallback for noisy traces: normalized cross-correlation on a common
/// uniform grid, parabolic refinement of the best lag.
double estimate_delay_xcorr(const VelocityTrace& vi, const VelocityTrace& vl);

/// Mean/std of estimate_delay over all recordings that contain a spike.
/// Throws NoSpikeError when none does.
DelayEstimate average_delay(
    const std::vector<std::pair<VelocityTrace, VelocityTrace>>& recordings,
    double dominance = kSpikeDominance);

/// Subtracts the delay from every LiDAR timestamp (reference included);
/// scan order and point data are preserved.
LidarRun apply_delay(const LidarRun& run, double delay);

}  // namespace pedtrack::sync
