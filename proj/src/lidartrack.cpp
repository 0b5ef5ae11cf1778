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

#include "pedtrack/lidartrack.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <unordered_map>

#include "pedtrack/error.hpp"
#include "pedtrack/io.hpp"

namespace pedtrack::lidar {

namespace {

// Hash grid over f0 with cell size = threshold; a moved point has no f0
// point within threshold in its 3x3 cell neighborhood.
class BackgroundGrid {
 public:
  BackgroundGrid(const std::vector<Vec2>& points, double cell) : cell_(cell) {
    cells_.reserve(points.size());
    for (const Vec2& p : points) cells_[key(p)].push_back(p);
  }

  bool has_neighbor(const Vec2& p, double radius) const {
    const double r2 = radius * radius;
    const std::int64_t cx = coord(p.x());
    const std::int64_t cy = coord(p.y());
    for (std::int64_t ix = cx - 1; ix <= cx + 1; ++ix) {
      for (std::int64_t iy = cy - 1; iy <= cy + 1; ++iy) {
        const auto it = cells_.find(pack(ix, iy));
        if (it == cells_.end()) continue;
        for (const Vec2& q : it->second) {
          if ((p - q).squaredNorm() <= r2) return true;
        }
      }
    }
    return false;
  }

 private:
  std::int64_t coord(double v) const {
    return static_cast<std::int64_t>(std::floor(v / cell_));
  }
  static std::uint64_t pack(std::int64_t x, std::int64_t y) {
    return (static_cast<std::uint64_t>(x) << 32) ^
           (static_cast<std::uint64_t>(y) & 0xffffffffull);
  }
  std::uint64_t key(const Vec2& p) const { return pack(coord(p.x()), coord(p.y())); }

  double cell_;
  std::unordered_map<std::uint64_t, std::vector<Vec2>> cells_;
};

double median(std::vector<double> v) {
  if (v.empty()) return 0.0;
  const std::size_t mid = v.size() / 2;
  std::nth_element(v.begin(), v.begin() + mid, v.end());
  double m = v[mid];
  if (v.size() % 2 == 0) {
    m = 0.5 * (m + *std::max_element(v.begin(), v.begin() + mid));
  }
  return m;
}

Vec2 interpolate(const CentroidTrack& track, std::size_t seg, double t) {
  const auto& a = track.points[seg];
  const auto& b = track.points[seg + 1];
  const double u = (t - a.t) / (b.t - a.t);
  return a.pos + u * (b.pos - a.pos);
}

}  // namespace

std::vector<Vec2> subtract_background(const LidarScan& f0, const LidarScan& fi,
                                      double dist_threshold) {
  if (f0.points.empty() || fi.points.empty()) {
    throw DataError("background subtraction requires non-empty scans");
  }
  if (dist_threshold < 0.0) throw UsageError("distance threshold must be >= 0");

  if (dist_threshold == 0.0) {
    // degenerate: only exact matches count as background
    std::vector<Vec2> moved;
    for (const Vec2& p : fi.points) {
      const bool matches = std::any_of(f0.points.begin(), f0.points.end(),
                                       [&](const Vec2& q) { return p == q; });
      if (!matches) moved.push_back(p);
    }
    return moved;
  }

  const BackgroundGrid grid(f0.points, dist_threshold);
  std::vector<Vec2> moved;
  for (const Vec2& p : fi.points) {
    if (!grid.has_neighbor(p, dist_threshold)) moved.push_back(p);
  }
  return moved;
}

std::optional<Vec2> centroid(std::span<const Vec2> points, int min_points) {
  if (static_cast<int>(points.size()) < min_points) return std::nullopt;
  Vec2 sum = Vec2::Zero();
  for (const Vec2& p : points) sum += p;
  return sum / static_cast<double>(points.size());
}

CentroidTrack track(const LidarRun& run, double dist_threshold, int min_points) {
  CentroidTrack out;
  for (const LidarScan& scan : run.scans) {
    if (scan.points.empty()) continue;
    const auto moved = subtract_background(run.reference, scan, dist_threshold);
    if (const auto c = centroid(moved, min_points)) {
      out.points.push_back({scan.t, *c});
    }
  }
  if (out.points.empty()) throw NoSubjectError("subject never visible in any scan");
  return out;
}

std::vector<DisplacementLabel> window_displacements(const CentroidTrack& track,
                                                    double period) {
  if (!(period > 0.0)) throw UsageError("labeling period must be positive");
  const auto& pts = track.points;
  std::vector<DisplacementLabel> labels;
  if (pts.size() < 2 || pts.back().t - pts.front().t < period) return labels;

  std::vector<double> gaps;
  gaps.reserve(pts.size() - 1);
  for (std::size_t i = 1; i < pts.size(); ++i) gaps.push_back(pts[i].t - pts[i - 1].t);
  const double scan_interval = median(gaps);
  const double max_gap = kMaxGapScanIntervals * scan_interval;

  std::size_t seg = 0;
  for (double t_start = pts.front().t; t_start + period <= pts.back().t + 1e-12;
       t_start += period) {
    const double t_end = t_start + period;

    while (seg + 2 < pts.size() && pts[seg + 1].t <= t_start) ++seg;
    // scan forward for the segment containing t_end and the largest gap
    std::size_t end_seg = seg;
    bool gap_too_long = false;
    while (end_seg + 2 < pts.size() && pts[end_seg + 1].t < t_end) {
      if (pts[end_seg + 1].t - pts[end_seg].t > max_gap &&
          pts[end_seg + 1].t > t_start) {
        gap_too_long = true;
      }
      ++end_seg;
    }
    if (pts[end_seg + 1].t < t_end) break;  // ran out of track
    if (pts[end_seg + 1].t - pts[end_seg].t > max_gap) gap_too_long = true;
    if (pts[seg + 1].t - pts[seg].t > max_gap) gap_too_long = true;
    if (gap_too_long) continue;

    const Vec2 p0 = interpolate(track, seg, t_start);
    const Vec2 p1 = interpolate(track, end_seg, t_end);
    labels.push_back({t_start, t_end, p1.x() - p0.x(), p1.y() - p0.y()});
  }
  return labels;
}

void write_labels(const std::vector<DisplacementLabel>& labels,
                  const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw DataError("cannot open for writing: " + path.string());
  out << "t_start,t_end,dx,dy\n";
  for (const DisplacementLabel& l : labels) {
    out << format_double(l.t_start) << ',' << format_double(l.t_end) << ','
        << format_double(l.dx) << ',' << format_double(l.dy) << '\n';
  }
}

std::vector<DisplacementLabel> read_labels(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open for reading: " + path.string());

  std::vector<DisplacementLabel> labels;
  std::string line;
  std::size_t lineno = 0;
  if (!std::getline(in, line)) return labels;
  ++lineno;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    DisplacementLabel l;
    std::size_t pos = 0;
    double* fields[4] = {&l.t_start, &l.t_end, &l.dx, &l.dy};
    for (int i = 0; i < 4; ++i) {
      const std::size_t comma = line.find(',', pos);
      const bool last = (i == 3);
      if (last != (comma == std::string::npos)) {
        throw ParseError("expected 4 columns", lineno);
      }
      const std::string_view field =
          std::string_view(line).substr(pos, last ? std::string::npos : comma - pos);
      *fields[i] = parse_double(field, lineno);
      pos = comma + 1;
    }
    labels.push_back(l);
  }
  return labels;
}

void write_track(const CentroidTrack& track, const std::filesystem::path& path) {
  Trajectory traj;
  traj.points.reserve(track.points.size());
  for (const auto& p : track.points) traj.points.push_back({p.t, p.pos});
  write_trajectory(traj, path);
}

CentroidTrack read_track(const std::filesystem::path& path) {
  const Trajectory traj = read_trajectory(path);
  CentroidTrack track;
  track.points.reserve(traj.points.size());
  for (const auto& p : traj.points) track.points.push_back({p.t, p.pos});
  return track;
}

}  // namespace pedtrack::lidar
