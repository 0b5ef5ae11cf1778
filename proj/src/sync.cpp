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

#include "pedtrack/sync.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "pedtrack/error.hpp"

namespace pedtrack::sync {

namespace {

double median_value(std::vector<double> v) {
  const std::size_t mid = v.size() / 2;
  std::nth_element(v.begin(), v.begin() + mid, v.end());
  double m = v[mid];
  if (v.size() % 2 == 0 && mid > 0) {
    m = 0.5 * (m + *std::max_element(v.begin(), v.begin() + mid));
  }
  return m;
}

/// Peak time with sub-sample refinement: vertex of the parabola through
/// the maximum sample and its neighbors. Throws when the trace has no
/// dominant peak (max < dominance * median).
double peak_time(const VelocityTrace& trace, double dominance) {
  const auto& s = trace.samples;
  if (s.empty()) throw NoSpikeError("empty velocity trace");

  std::size_t imax = 0;
  std::vector<double> values(s.size());
  for (std::size_t i = 0; i < s.size(); ++i) {
    values[i] = s[i].v;
    if (s[i].v > s[imax].v) imax = i;
  }
  const double med = median_value(std::move(values));
  if (!(s[imax].v >= dominance * med) || s[imax].v <= 0.0) {
    throw NoSpikeError("no dominant velocity peak (max " + std::to_string(s[imax].v) +
                       " vs median " + std::to_string(med) + ")");
  }

  if (imax == 0 || imax + 1 == s.size()) return s[imax].t;

  const double y0 = s[imax - 1].v, y1 = s[imax].v, y2 = s[imax + 1].v;
  const double denom = y0 - 2.0 * y1 + y2;
  if (denom >= 0.0) return s[imax].t;  // flat or degenerate neighborhood
  const double delta = 0.5 * (y0 - y2) / denom;
  const double dt_left = s[imax].t - s[imax - 1].t;
  const double dt_right = s[imax + 1].t - s[imax].t;
  return s[imax].t + delta * (delta < 0.0 ? dt_left : dt_right);
}

}  // namespace

VelocityTrace imu_velocity(const ImuRun& run, double t0, double t1) {
  if (!(t1 > t0)) throw UsageError("velocity window must have positive length");
  if (t1 - t0 > kMaxVelocityWindow) {
    throw UsageError("velocity window longer than 5 s; drift would not be negligible");
  }
  if (run.samples.empty() || t0 < run.samples.front().t - 1e-9 ||
      t1 > run.samples.back().t + 1e-9) {
    throw DataError("velocity window outside the run");
  }

  VelocityTrace trace;
  Vec3 vel = Vec3::Zero();
  bool started = false;
  const ImuSample* prev = nullptr;
  for (const ImuSample& s : run.samples) {
    if (s.t < t0) continue;
    if (s.t > t1) break;
    if (started) {
      const double h = s.t - prev->t;
      vel += 0.5 * h * (prev->accel + s.accel);
    }
    trace.samples.push_back({s.t, vel.norm()});
    prev = &s;
    started = true;
  }
  if (trace.samples.empty()) throw DataError("no samples inside the velocity window");
  return trace;
}

VelocityTrace lidar_velocity(const lidar::CentroidTrack& track) {
  const auto& p = track.points;
  if (p.size() < 2) throw DataError("need at least two centroids for a velocity trace");

  VelocityTrace trace;
  trace.samples.resize(p.size());
  for (std::size_t i = 0; i < p.size(); ++i) {
    const std::size_t lo = (i == 0) ? 0 : i - 1;
    const std::size_t hi = (i + 1 == p.size()) ? i : i + 1;
    const double speed = (p[hi].pos - p[lo].pos).norm() / (p[hi].t - p[lo].t);
    trace.samples[i] = {p[i].t, speed};
  }
  return trace;
}

double estimate_delay(const VelocityTrace& vi, const VelocityTrace& vl,
                      double dominance) {
  return peak_time(vl, dominance) - peak_time(vi, dominance);
}

double estimate_delay_xcorr(const VelocityTrace& vi, const VelocityTrace& vl) {
  if (vi.samples.size() < 2 || vl.samples.size() < 2) {
    throw DataError("traces too short for cross-correlation");
  }

  // resample both traces onto the finer of the two grids
  double dt = std::numeric_limits<double>::max();
  for (std::size_t i = 1; i < vi.samples.size(); ++i) {
    dt = std::min(dt, vi.samples[i].t - vi.samples[i - 1].t);
  }
  for (std::size_t i = 1; i < vl.samples.size(); ++i) {
    dt = std::min(dt, vl.samples[i].t - vl.samples[i - 1].t);
  }

  auto resample = [dt](const VelocityTrace& trace, double t_begin, double t_end) {
    std::vector<double> out;
    const auto& s = trace.samples;
    std::size_t seg = 0;
    for (double t = t_begin; t <= t_end + 1e-12; t += dt) {
      while (seg + 2 < s.size() && s[seg + 1].t <= t) ++seg;
      const double clamped = std::clamp(t, s.front().t, s.back().t);
      const double u = (clamped - s[seg].t) / (s[seg + 1].t - s[seg].t);
      out.push_back(s[seg].v + u * (s[seg + 1].v - s[seg].v));
    }
    return out;
  };

  const double begin = std::min(vi.samples.front().t, vl.samples.front().t);
  const double end = std::max(vi.samples.back().t, vl.samples.back().t);
  const std::vector<double> a = resample(vi, begin, end);
  const std::vector<double> b = resample(vl, begin, end);
  const std::ptrdiff_t n = static_cast<std::ptrdiff_t>(a.size());

  const std::ptrdiff_t max_lag = n - 2;
  std::vector<double> score(2 * max_lag + 1, 0.0);
  double best = -std::numeric_limits<double>::max();
  std::ptrdiff_t best_lag = 0;
  for (std::ptrdiff_t lag = -max_lag; lag <= max_lag; ++lag) {
    double dot = 0.0, na = 0.0, nb = 0.0;
    for (std::ptrdiff_t i = 0; i < n; ++i) {
      const std::ptrdiff_t j = i + lag;
      if (j < 0 || j >= n) continue;
      dot += a[i] * b[j];
      na += a[i] * a[i];
      nb += b[j] * b[j];
    }
    const double denom = std::sqrt(na * nb);
    const double value = denom > 0.0 ? dot / denom : 0.0;
    score[lag + max_lag] = value;
    if (value > best) {
      best = value;
      best_lag = lag;
    }
  }

  double refined = static_cast<double>(best_lag);
  const std::size_t ib = static_cast<std::size_t>(best_lag + max_lag);
  if (ib > 0 && ib + 1 < score.size()) {
    const double y0 = score[ib - 1], y1 = score[ib], y2 = score[ib + 1];
    const double denom = y0 - 2.0 * y1 + y2;
    if (denom < 0.0) refined += 0.5 * (y0 - y2) / denom;
  }
  return refined * dt;
}

DelayEstimate average_delay(
    const std::vector<std::pair<VelocityTrace, VelocityTrace>>& recordings,
    double dominance) {
  DelayEstimate est;
  for (const auto& [vi, vl] : recordings) {
    try {
      est.per_recording.push_back(estimate_delay(vi, vl, dominance));
    } catch (const NoSpikeError&) {
      // spike-free recordings contribute nothing
    }
  }
  if (est.per_recording.empty()) {
    throw NoSpikeError("no recording contains a dominant spike");
  }

  double sum = 0.0;
  for (double d : est.per_recording) sum += d;
  est.mean = sum / static_cast<double>(est.per_recording.size());
  double sq = 0.0;
  for (double d : est.per_recording) sq += (d - est.mean) * (d - est.mean);
  est.stddev = std::sqrt(sq / static_cast<double>(est.per_recording.size()));
  return est;
}

LidarRun apply_delay(const LidarRun& run, double delay) {
  LidarRun out = run;
  out.reference.t -= delay;
  for (LidarScan& s : out.scans) s.t -= delay;
  return out;
}

}  // namespace pedtrack::sync
