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

#include <Eigen/Core>

#include <vector>

namespace pedtrack {

using Scalar = double;
using Vec2 = Eigen::Vector2d;
using Vec3 = Eigen::Vector3d;
using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

// Hokuyo-class scanner limits; points beyond these are invalid data.
inline constexpr double kLidarMaxRange = 80.0;  // m
inline constexpr double kLidarFovDeg = 190.0;   // deg
inline constexpr double kImuNominalRate = 250.0;  // Hz

/// One timestamped 9-channel inertial sample. Accel follows the
/// gravity-compensated convention (linear acceleration, world frame).
struct ImuSample {
  double t = 0.0;             // s, sensor clock
  Vec3 accel = Vec3::Zero();  // m/s^2
  Vec3 gyro = Vec3::Zero();   // rad/s
  Vec3 mag = Vec3::Zero();    // uT
};

/// Uniformly sampled inertial stream at a nominal rate.
struct ImuRun {
  double rate = kImuNominalRate;  // Hz
  std::vector<ImuSample> samples;

  double duration() const {
    return samples.size() < 2 ? 0.0 : samples.back().t - samples.front().t;
  }
};

/// One planar scan; points are Cartesian, sensor at the origin.
struct LidarScan {
  double t = 0.0;  // s, sensor clock
  std::vector<Vec2> points;  // m
};

/// Reference frame F0 (empty room) plus the moving frames Fi.
struct LidarRun {
  LidarScan reference;
  std::vector<LidarScan> scans;
};

struct TrajectoryPoint {
  double t = 0.0;  // s
  Vec2 pos = Vec2::Zero();  // m
};

/// Timestamped planar positions: ground truth, PDR output, or
/// reconstructed predictions.
struct Trajectory {
  std::vector<TrajectoryPoint> points;

  double duration() const {
    return points.size() < 2 ? 0.0 : points.back().t - points.front().t;
  }
};

}  // namespace pedtrack
