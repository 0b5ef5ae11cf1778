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

#include "pedtrack/datamodel.hpp"

#include <cmath>
#include <sstream>

namespace pedtrack {

namespace {

void check_increasing(const std::vector<double>& t, const std::string& what,
                      std::vector<Violation>& out) {
  for (std::size_t i = 1; i < t.size(); ++i) {
    if (!(t[i] > t[i - 1])) {
      out.push_back({what + " timestamps strictly increasing", i,
                     "t[" + std::to_string(i) + "] <= t[" + std::to_string(i - 1) + "]"});
      return;  // report the first offending index only
    }
  }
}

}  // namespace

std::vector<Violation> validate(const ImuRun& run) {
  std::vector<Violation> out;

  for (std::size_t i = 0; i < run.samples.size(); ++i) {
    const ImuSample& s = run.samples[i];
    const bool finite = std::isfinite(s.t) && s.accel.allFinite() &&
                        s.gyro.allFinite() && s.mag.allFinite();
    if (!finite) {
      out.push_back({"finite values", i, "non-finite channel value"});
      break;
    }
  }

  std::vector<double> t;
  t.reserve(run.samples.size());
  for (const ImuSample& s : run.samples) t.push_back(s.t);
  check_increasing(t, "imu", out);

  if (run.rate > 0.0) {
    const double dt_nominal = 1.0 / run.rate;
    for (std::size_t i = 1; i < t.size(); ++i) {
      const double dt = t[i] - t[i - 1];
      if (std::abs(dt - dt_nominal) > 0.1 * dt_nominal) {
        std::ostringstream detail;
        detail << "dt=" << dt << " vs nominal " << dt_nominal;
        out.push_back({"uniform sampling within 10% jitter", i, detail.str()});
        break;
      }
    }
  }

  return out;
}

std::vector<Violation> validate(const LidarRun& run) {
  std::vector<Violation> out;

  auto check_scan = [&out](const LidarScan& scan, const std::string& name) {
    for (std::size_t i = 0; i < scan.points.size(); ++i) {
      if (!scan.points[i].allFinite() || scan.points[i].norm() > kLidarMaxRange) {
        out.push_back({"points within max range", i,
                       name + " point exceeds " + std::to_string(kLidarMaxRange) + " m"});
        return;
      }
    }
  };

  check_scan(run.reference, "reference");
  for (std::size_t i = 0; i < run.scans.size(); ++i) {
    check_scan(run.scans[i], "scan " + std::to_string(i));
    if (!out.empty() && out.back().invariant == "points within max range" &&
        out.back().detail.rfind("scan", 0) == 0) {
      break;
    }
  }

  std::vector<double> t;
  t.reserve(run.scans.size());
  for (const LidarScan& s : run.scans) t.push_back(s.t);
  check_increasing(t, "lidar", out);

  return out;
}

std::vector<Violation> validate(const Trajectory& traj) {
  std::vector<Violation> out;

  for (std::size_t i = 0; i < traj.points.size(); ++i) {
    if (!std::isfinite(traj.points[i].t) || !traj.points[i].pos.allFinite()) {
      out.push_back({"finite values", i, "non-finite trajectory point"});
      break;
    }
  }

  std::vector<double> t;
  t.reserve(traj.points.size());
  for (const TrajectoryPoint& p : traj.points) t.push_back(p.t);
  check_increasing(t, "trajectory", out);

  return out;
}

}  // namespace pedtrack
