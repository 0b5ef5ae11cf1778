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

#include "pedtrack/pdr.hpp"

#include <cmath>
#include <numbers>

#include "pedtrack/error.hpp"

namespace pedtrack::pdr {

std::vector<StepSegment> detect_steps(std::span<const double> accel_mag,
                                      std::span<const double> t, double threshold,
                                      double min_gap) {
  if (!(threshold > 0.0)) throw UsageError("step threshold must be positive");
  if (accel_mag.size() != t.size()) throw UsageError("magnitude/time length mismatch");

  std::vector<StepSegment> steps;
  bool above = false;
  std::size_t start = 0;
  auto close_segment = [&](std::size_t end) {
    if (!steps.empty() && t[start] - t[steps.back().i_end] < min_gap) {
      steps.back().i_end = end;  // merge into the previous step
      steps.back().duration = t[end] - t[steps.back().i_start];
    } else {
      steps.push_back({start, end, t[end] - t[start]});
    }
  };

  for (std::size_t i = 0; i < accel_mag.size(); ++i) {
    if (!above && accel_mag[i] > threshold) {
      above = true;
      start = i;
    } else if (above && accel_mag[i] <= threshold) {
      above = false;
      close_segment(i);
    }
  }
  if (above && !accel_mag.empty()) close_segment(accel_mag.size() - 1);
  return steps;
}

std::vector<double> accel_magnitudes(const ImuRun& run) {
  std::vector<double> mag;
  mag.reserve(run.samples.size());
  for (const ImuSample& s : run.samples) mag.push_back(s.accel.norm());
  return mag;
}

double step_displacement(const ImuRun& run, const StepSegment& segment) {
  if (segment.i_end >= run.samples.size() || segment.i_start >= segment.i_end) {
    throw UsageError("step segment outside the run");
  }

  Vec2 vel = Vec2::Zero();
  Vec2 disp = Vec2::Zero();
  for (std::size_t i = segment.i_start + 1; i <= segment.i_end; ++i) {
    const ImuSample& a = run.samples[i - 1];
    const ImuSample& b = run.samples[i];
    const double h = b.t - a.t;
    const Vec2 v_prev = vel;
    vel += 0.5 * h * (a.accel.head<2>() + b.accel.head<2>());
    disp += 0.5 * h * (v_prev + vel);
  }
  return disp.norm();
}

std::vector<double> heading_track(std::span<const double> gyro_z,
                                  std::span<const double> t, double theta0) {
  if (gyro_z.size() != t.size()) throw UsageError("gyro/time length mismatch");

  constexpr double kPi = std::numbers::pi;
  auto wrap = [](double a) {
    a = std::fmod(a + kPi, 2.0 * kPi);
    if (a <= 0.0) a += 2.0 * kPi;  // wrap to (-pi, pi]
    return a - kPi;
  };

  std::vector<double> heading(gyro_z.size());
  double theta = theta0;
  for (std::size_t i = 0; i < gyro_z.size(); ++i) {
    if (i > 0) theta += 0.5 * (t[i] - t[i - 1]) * (gyro_z[i] + gyro_z[i - 1]);
    heading[i] = wrap(theta);
  }
  return heading;
}

Trajectory pdr_reconstruct(const ImuRun& run, double threshold, double theta0,
                           const Vec2& start, double min_gap) {
  std::vector<double> t;
  std::vector<double> gyro_z;
  t.reserve(run.samples.size());
  gyro_z.reserve(run.samples.size());
  for (const ImuSample& s : run.samples) {
    t.push_back(s.t);
    gyro_z.push_back(s.gyro.z());
  }

  const std::vector<double> mag = accel_magnitudes(run);
  const std::vector<StepSegment> steps = detect_steps(mag, t, threshold, min_gap);
  const std::vector<double> heading = heading_track(gyro_z, t, theta0);

  Trajectory traj;
  Vec2 pos = start;
  traj.points.push_back({run.samples.empty() ? 0.0 : t.front(), pos});
  for (const StepSegment& step : steps) {
    const double d = step_displacement(run, step);
    const std::size_t mid = (step.i_start + step.i_end) / 2;
    pos += d * Vec2(std::cos(heading[mid]), std::sin(heading[mid]));
    traj.points.push_back({t[step.i_end], pos});
  }
  return traj;
}

}  // namespace pedtrack::pdr
