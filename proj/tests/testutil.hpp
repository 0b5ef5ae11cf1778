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
#include <random>
#include <string>
#include <vector>

#include "pedtrack/types.hpp"

namespace pedtrack::testutil {

/// Fresh scratch directory under the build tree.
inline std::filesystem::path tmp_dir(const std::string& name) {
  const auto dir = std::filesystem::temp_directory_path() / "pedtrack_tests" / name;
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

/// Composite trapezoid of samples y over timestamps t.
inline double trapz(const std::vector<double>& t, const std::vector<double>& y) {
  double acc = 0.0;
  for (std::size_t i = 1; i < t.size(); ++i) {
    acc += 0.5 * (t[i] - t[i - 1]) * (y[i] + y[i - 1]);
  }
  return acc;
}

/// Cumulative double trapezoid of planar accel samples: returns the
/// displacement over the whole span given the initial velocity.
inline Vec2 double_trapz(const std::vector<double>& t, const std::vector<Vec2>& a,
                         const Vec2& v0) {
  Vec2 vel = v0;
  Vec2 disp = Vec2::Zero();
  for (std::size_t i = 1; i < t.size(); ++i) {
    const double h = t[i] - t[i - 1];
    const Vec2 v_prev = vel;
    vel += 0.5 * h * (a[i] + a[i - 1]);
    disp += 0.5 * h * (v_prev + vel);
  }
  return disp;
}

/// Uniform 250 Hz IMU run from a channel generator f(t) -> (accel, gyro, mag).
template <typename F>
ImuRun make_imu_run(double duration, double rate, F&& f) {
  ImuRun run;
  run.rate = rate;
  const auto n = static_cast<std::size_t>(duration * rate) + 1;
  for (std::size_t i = 0; i < n; ++i) {
    ImuSample s;
    s.t = static_cast<double>(i) / rate;
    f(s.t, s.accel, s.gyro, s.mag);
    run.samples.push_back(s);
  }
  return run;
}

}  // namespace pedtrack::testutil
