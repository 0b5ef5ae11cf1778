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

#include <filesystem>
#include <string>
#include <string_view>

#include "pedtrack/types.hpp"

namespace pedtrack {

/// Shortest decimal representation that parses back to the same bits.
std::string format_double(double value);

/// Strict double parser; `line` feeds the ParseError on failure.
double parse_double(std::string_view text, std::size_t line);

// Dataset text formats: one record per line, one-line column header.
// IMU:        t,ax,ay,az,gx,gy,gz,mx,my,mz  (header carries the rate)
// LiDAR:      t followed by space-separated x:y pairs; first record is
//             the reference scan F0
// Trajectory: t,x,y

void write_imu_run(const ImuRun& run, const std::filesystem::path& path);
ImuRun read_imu_run(const std::filesystem::path& path);

void write_lidar_run(const LidarRun& run, const std::filesystem::path& path);
LidarRun read_lidar_run(const std::filesystem::path& path);

void write_trajectory(const Trajectory& traj, const std::filesystem::path& path);
Trajectory read_trajectory(const std::filesystem::path& path);

enum class RunKind { imu, lidar };

/// "imu" or "lidar"; anything else is a usage error.
RunKind parse_run_kind(std::string_view kind);

}  // namespace pedtrack
