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
#include <optional>
#include <span>
#include <vector>

#include "pedtrack/types.hpp"

namespace pedtrack::lidar {

// About 3.3x the +-30 mm range accuracy; keeps noise-induced false movers
// below ~0.1% per point.
inline constexpr double kDefaultDistThreshold = 0.1;  // m
inline constexpr int kDefaultMinPoints = 3;
inline constexpr double kDefaultLabelPeriod = 2.0;    // s
inline constexpr double kMaxGapScanIntervals = 3.0;

/// Subject positions per scan, in the LiDAR clock and frame.
struct CentroidTrack {
  struct Point {
    double t = 0.0;
    Vec2 pos = Vec2::Zero();
  };
  std::vector<Point> points;
};

/// Displacement over one fixed labeling period, in the room frame.
struct DisplacementLabel {
  double t_start = 0.0;
  double t_end = 0.0;
  double dx = 0.0;
  double dy = 0.0;
};

/// Points of fi farther than dist_threshold from every point of f0
/// ("the points that have moved"). Grid-accelerated nearest-neighbor, O(n).
std::vector<Vec2> subtract_background(const LidarScan& f0, const LidarScan& fi,
                                      double dist_threshold = kDefaultDistThreshold);

/// Arithmetic mean, or nothing when fewer than min_points points remain
/// (frame dropped, gap recorded by the caller).
std::optional<Vec2> centroid(std::span<const Vec2> points,
                             int min_points = kDefaultMinPoints);

/// One centroid per scan that passes min_points; gaps allowed. Throws
/// NoSubjectError when no scan contains the subject.
CentroidTrack track(const LidarRun& run, double dist_threshold = kDefaultDistThreshold,
                    int min_points = kDefaultMinPoints);

/// Consecutive `period`-long windows starting at the first centroid;
/// label = interpolated end position minus interpolated start position.
/// Windows containing a gap longer than kMaxGapScanIntervals scan
/// intervals are dropped. A track shorter than one period yields an
/// empty list.
std::vector<DisplacementLabel> window_displacements(const CentroidTrack& track,
                                                    double period = kDefaultLabelPeriod);

// Label files: t_start,t_end,dx,dy with a one-line header.
void write_labels(const std::vector<DisplacementLabel>& labels,
                  const std::filesystem::path& path);
std::vector<DisplacementLabel> read_labels(const std::filesystem::path& path);

void write_track(const CentroidTrack& track, const std::filesystem::path& path);
CentroidTrack read_track(const std::filesystem::path& path);

}  // namespace pedtrack::lidar
