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

#include <cstdint>
#include <filesystem>

#include "pedtrack/types.hpp"

namespace pedtrack::synth {

// Scene frame: the LiDAR sits at the origin, centered in the west wall and
// facing +x. The room interior is (0, 2*hx) x (-hy, hy), so the subject is
// always inside the 190 deg field of view.

inline constexpr double kWalkerRadius = 0.2;        // m, subject disk
inline constexpr double kLidarAngularStepDeg = 0.25;
inline constexpr double kTrajectoryRate = 200.0;    // Hz, walk sampling
inline constexpr double kDefaultScanRate = 40.0;    // Hz

/// Room center in the scene frame.
Vec2 room_center(const Vec2& half_extents);

struct WalkConfig {
  double duration = 60.0;      // s
  double mean_speed = 1.4;     // m/s
  double speed_jitter = 0.1;   // m/s, std of per-stride speed
  double turn_rate_std = 0.3;  // rad/s, std of per-stride turn rate
  double step_cadence = 1.8;   // strides/s
  Vec2 room_half_extents = Vec2(6.0, 5.0);  // m
  std::uint64_t seed = 1;
};

struct SensorNoise {
  double accel_std = 0.0;  // m/s^2
  double gyro_std = 0.0;   // rad/s
  double mag_std = 0.0;    // uT
  double lidar_std = 0.03;    // m, range noise
  double clock_offset = 0.0;  // s, LiDAR clock minus IMU clock
};

/// Random walk inside the room: per-stride resampled speed and turn rate,
/// wall-avoidance steering, 200 Hz output. Deterministic in the seed.
Trajectory simulate_walk(const WalkConfig& config);

/// Short at-rest recording with a single smooth displacement burst, used
/// for clock-delay estimation.
struct SpikeConfig {
  double duration = 3.0;   // s
  double t_spike = 1.2;    // s, burst start
  double width = 0.4;      // s, burst duration
  double distance = 0.5;   // m, displaced distance
  Vec2 start = Vec2(4.0, 0.0);
  double heading = 0.0;    // rad
};

Trajectory simulate_spike(const SpikeConfig& config);

/// Noise-free foot states underlying a synthesized IMU stream. The foot
/// positions are exactly the double integral of the piecewise-linear
/// interpolant of the emitted (noise-free) accel samples, so trapezoidal
/// re-integration of the stream reproduces them to rounding error.
struct GaitTruth {
  std::vector<double> t;
  std::vector<Vec2> foot_pos;
  std::vector<Vec2> foot_vel;
};

/// Foot-mounted IMU stream for a body trajectory: world-frame linear
/// acceleration of a gait-modulated foot (stance/swing at `cadence`),
/// heading rate on gyro z, a fixed world magnetic field rotated into the
/// sensor frame, white noise per channel. cadence <= 0 disables the gait
/// modulation (rigid-body mount, used for spike recordings).
ImuRun synthesize_imu(const Trajectory& traj, double rate, const SensorNoise& noise,
                      double cadence, std::uint64_t seed, GaitTruth* truth = nullptr);

/// Ray-cast scans of the room with the subject as a 0.2 m disk: reference
/// frame F0 plus one frame per scan instant, timestamps offset by
/// noise.clock_offset, ranges perturbed by noise.lidar_std.
LidarRun render_lidar(const Trajectory& traj, const Vec2& room_half_extents,
                      double scan_rate, const SensorNoise& noise, std::uint64_t seed);

/// Scenario files: one key=value per line, '#' comments.
struct Scenario {
  WalkConfig walk;
  SensorNoise noise;
  double imu_rate = kImuNominalRate;
  double scan_rate = kDefaultScanRate;
};

Scenario read_scenario(const std::filesystem::path& path);
void write_scenario(const Scenario& scenario, const std::filesystem::path& path);

}  // namespace pedtrack::synth
