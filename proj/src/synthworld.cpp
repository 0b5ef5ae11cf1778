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

#include "pedtrack/synthworld.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <numbers>
#include <random>
#include <string>

#include "pedtrack/error.hpp"
#include "pedtrack/io.hpp"

namespace pedtrack::synth {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kSpeedEps = 1e-9;   // below this the walker counts as at rest
constexpr double kSwingFraction = 0.45;  // fraction of a stride the foot moves
const Vec3 kMagFieldWorld(20.0, 0.0, -45.0);  // uT

double wrap_angle(double a) {
  a = std::fmod(a + kPi, 2.0 * kPi);
  if (a < 0.0) a += 2.0 * kPi;
  return a - kPi;
}

// Natural cubic spline through (t_i, y_i); C2, second derivatives zero at
// the ends. Thomas-algorithm construction, O(n).
class CubicSpline {
 public:
  CubicSpline(std::vector<double> t, std::vector<double> y)
      : t_(std::move(t)), y_(std::move(y)), m_(t_.size(), 0.0) {
    const std::size_t n = t_.size();
    if (n < 3) return;  // m == 0: linear interpolation

    std::vector<double> diag(n, 0.0), upper(n, 0.0), rhs(n, 0.0);
    for (std::size_t i = 1; i + 1 < n; ++i) {
      const double h0 = t_[i] - t_[i - 1];
      const double h1 = t_[i + 1] - t_[i];
      diag[i] = (h0 + h1) / 3.0;
      upper[i] = h1 / 6.0;
      rhs[i] = (y_[i + 1] - y_[i]) / h1 - (y_[i] - y_[i - 1]) / h0;
    }
    // forward sweep (lower coefficient is h0/6 = previous row's upper)
    for (std::size_t i = 2; i + 1 < n; ++i) {
      const double lower = (t_[i] - t_[i - 1]) / 6.0;
      const double w = lower / diag[i - 1];
      diag[i] -= w * upper[i - 1];
      rhs[i] -= w * rhs[i - 1];
    }
    for (std::size_t i = n - 2; i >= 1; --i) {
      m_[i] = (rhs[i] - upper[i] * m_[i + 1]) / diag[i];
      if (i == 1) break;
    }
  }

  std::size_t segment(double t) const {
    if (t <= t_.front()) return 0;
    if (t >= t_.back()) return t_.size() - 2;
    const auto it = std::upper_bound(t_.begin(), t_.end(), t);
    return static_cast<std::size_t>(it - t_.begin()) - 1;
  }

  void eval(double t, std::size_t i, double& y, double& dy, double& d2y) const {
    const double h = t_[i + 1] - t_[i];
    const double a = (t_[i + 1] - t) / h;
    const double b = (t - t_[i]) / h;
    y = a * y_[i] + b * y_[i + 1] +
        ((a * a * a - a) * m_[i] + (b * b * b - b) * m_[i + 1]) * h * h / 6.0;
    dy = (y_[i + 1] - y_[i]) / h - (3.0 * a * a - 1.0) / 6.0 * h * m_[i] +
         (3.0 * b * b - 1.0) / 6.0 * h * m_[i + 1];
    d2y = a * m_[i] + b * m_[i + 1];
  }

 private:
  std::vector<double> t_, y_, m_;
};

// Swing-phase weight of the foot-velocity profile: zero during stance,
// a sin^2 burst of unit mean over the stride during swing.
double swing_weight(double phase) {
  if (phase >= kSwingFraction) return 0.0;
  const double s = std::sin(kPi * phase / kSwingFraction);
  return 2.0 / kSwingFraction * s * s;
}

double swing_weight_derivative(double phase) {
  if (phase >= kSwingFraction) return 0.0;
  return 2.0 * kPi / (kSwingFraction * kSwingFraction) *
         std::sin(2.0 * kPi * phase / kSwingFraction);
}

bool inside_room(const Vec2& p, const Vec2& he, double inset) {
  return p.x() >= inset && p.x() <= 2.0 * he.x() - inset &&
         p.y() >= -he.y() + inset && p.y() <= he.y() - inset;
}

void check_walk_config(const WalkConfig& c) {
  if (!(c.duration > 0.0)) throw UsageError("walk duration must be positive");
  if (c.mean_speed < 0.0) throw UsageError("mean speed must be >= 0");
  if (c.speed_jitter < 0.0 || c.turn_rate_std < 0.0) {
    throw UsageError("jitter parameters must be >= 0");
  }
  if (!(c.step_cadence > 0.0)) throw UsageError("step cadence must be positive");
  if (!(c.room_half_extents.minCoeff() > 0.0)) {
    throw UsageError("room half extents must be positive");
  }
  const Vec2 far_corner(2.0 * c.room_half_extents.x(), c.room_half_extents.y());
  if (far_corner.norm() > kLidarMaxRange) {
    throw UsageError("room does not fit inside the 80 m LiDAR range");
  }
}

}  // namespace

Vec2 room_center(const Vec2& half_extents) {
  return Vec2(half_extents.x(), 0.0);
}

Trajectory simulate_walk(const WalkConfig& config) {
  check_walk_config(config);

  std::mt19937_64 rng(config.seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  const double speed_max = config.mean_speed + 4.0 * config.speed_jitter;
  auto draw_speed = [&] {
    const double v = config.mean_speed + config.speed_jitter * gauss(rng);
    return std::clamp(v, 0.0, speed_max);
  };

  const double dt = 1.0 / kTrajectoryRate;
  const double stride_period = 1.0 / config.step_cadence;
  const Vec2 he = config.room_half_extents;
  const Vec2 center = room_center(he);
  const double steer_margin = std::max(0.8, 1.2 * speed_max * stride_period);
  const double lookahead = 1.0;  // s
  const double omega_max = 2.5;  // rad/s

  const std::size_t n = static_cast<std::size_t>(std::llround(config.duration * kTrajectoryRate)) + 1;

  Vec2 pos = center;
  std::uniform_real_distribution<double> uangle(-kPi, kPi);
  double theta = uangle(rng);

  double v_start = draw_speed();  // speed at the current stride boundary
  double v_end = draw_speed();
  double omega = config.turn_rate_std * gauss(rng);
  std::size_t stride_index = 0;

  Trajectory traj;
  traj.points.reserve(n);
  traj.points.push_back({0.0, pos});

  for (std::size_t k = 1; k < n; ++k) {
    const double t_prev = static_cast<double>(k - 1) * dt;

    const auto stride_now = static_cast<std::size_t>(t_prev / stride_period);
    if (stride_now != stride_index) {
      stride_index = stride_now;
      v_start = v_end;
      v_end = draw_speed();
      omega = config.turn_rate_std * gauss(rng);

      // steer back toward the center when the lookahead point leaves the
      // inner room
      const Vec2 ahead = pos + v_start * lookahead * Vec2(std::cos(theta), std::sin(theta));
      if (!inside_room(ahead, he, steer_margin)) {
        const double bearing = std::atan2(center.y() - pos.y(), center.x() - pos.x());
        omega = std::clamp(wrap_angle(bearing - theta) / lookahead, -omega_max, omega_max);
      }
    }

    // failsafe: never let the disk touch a wall
    if (!inside_room(pos, he, kWalkerRadius + 0.1)) {
      theta = std::atan2(center.y() - pos.y(), center.x() - pos.x());
    }

    const double u_mid = (t_prev + 0.5 * dt) / stride_period - static_cast<double>(stride_index);
    const double v_mid = v_start + (v_end - v_start) * std::clamp(u_mid, 0.0, 1.0);
    const double theta_mid = theta + 0.5 * omega * dt;
    pos += v_mid * dt * Vec2(std::cos(theta_mid), std::sin(theta_mid));
    theta += omega * dt;

    traj.points.push_back({static_cast<double>(k) * dt, pos});
  }
  return traj;
}

Trajectory simulate_spike(const SpikeConfig& config) {
  if (!(config.duration > 0.0) || !(config.width > 0.0)) {
    throw UsageError("spike duration and width must be positive");
  }
  if (config.t_spike < 0.0 || config.t_spike + config.width > config.duration) {
    throw UsageError("spike burst must lie inside the recording");
  }

  const double dt = 1.0 / kTrajectoryRate;
  const std::size_t n = static_cast<std::size_t>(std::llround(config.duration * kTrajectoryRate)) + 1;
  const Vec2 dir(std::cos(config.heading), std::sin(config.heading));

  Trajectory traj;
  traj.points.reserve(n);
  for (std::size_t k = 0; k < n; ++k) {
    const double t = static_cast<double>(k) * dt;
    double s = 0.0;
    if (t >= config.t_spike) {
      const double tau = std::min(t - config.t_spike, config.width);
      // integral of the sin^2 velocity burst
      s = config.distance *
          (tau / config.width - std::sin(2.0 * kPi * tau / config.width) / (2.0 * kPi));
    }
    traj.points.push_back({t, config.start + s * dir});
  }
  return traj;
}

ImuRun synthesize_imu(const Trajectory& traj, double rate, const SensorNoise& noise,
                      double cadence, std::uint64_t seed, GaitTruth* truth) {
  if (traj.points.size() < 2) throw DataError("trajectory too short to synthesize IMU");
  if (!(rate > 0.0)) throw UsageError("IMU rate must be positive");
  const double t0 = traj.points.front().t;
  const double span = traj.points.back().t - t0;
  if (cadence > 0.0 && span < 2.0 / cadence) {
    throw DataError("trajectory shorter than two strides");
  }

  std::vector<double> kt, kx, ky;
  kt.reserve(traj.points.size());
  kx.reserve(traj.points.size());
  ky.reserve(traj.points.size());
  for (const TrajectoryPoint& p : traj.points) {
    kt.push_back(p.t);
    kx.push_back(p.pos.x());
    ky.push_back(p.pos.y());
  }
  const CubicSpline sx(kt, kx);
  const CubicSpline sy(std::move(kt), std::move(ky));

  const std::size_t count = static_cast<std::size_t>(std::floor(span * rate + 1e-9)) + 1;
  const double h = 1.0 / rate;

  std::vector<Vec2> accel_nf(count);  // noise-free planar accel samples
  std::vector<double> omega_z(count), theta_arr(count);
  Vec2 foot_v0 = Vec2::Zero();

  double theta_prev = 0.0;
  bool theta_init = false;
  for (std::size_t k = 0; k < count; ++k) {
    const double t = t0 + static_cast<double>(k) * h;
    const std::size_t seg = sx.segment(t);
    double px, vx, ax, py, vy, ay;
    sx.eval(t, seg, px, vx, ax);
    sy.eval(t, seg, py, vy, ay);

    const Vec2 v(vx, vy);
    const Vec2 a(ax, ay);
    const double speed = v.norm();

    double theta = theta_prev;
    double omega = 0.0;
    if (speed > kSpeedEps) {
      const double raw = std::atan2(vy, vx);
      theta = theta_init ? theta_prev + wrap_angle(raw - theta_prev) : raw;
      theta_init = true;
      omega = (vx * ay - vy * ax) / (speed * speed);
    }
    theta_prev = theta;
    theta_arr[k] = theta;
    omega_z[k] = omega;

    Vec2 accel = a;
    if (cadence > 0.0 && speed > kSpeedEps) {
      const double phase_abs = (t - t0) * cadence;
      const double u = phase_abs - std::floor(phase_abs);
      const double w = swing_weight(u);
      const double dw = swing_weight_derivative(u);
      const Vec2 hdir = v / speed;
      const double dspeed = v.dot(a) / speed;
      const Vec2 dhdir = (a - dspeed * hdir) / speed;
      accel += dspeed * (w - 1.0) * hdir + speed * dw * cadence * hdir +
               speed * (w - 1.0) * dhdir;
      if (k == 0) foot_v0 = v + speed * (w - 1.0) * hdir;
    } else if (k == 0) {
      foot_v0 = v;
    }
    accel_nf[k] = accel;
  }

  // Foot ground truth: exact double integral of the piecewise-linear
  // interpolant of the noise-free accel samples, so that trapezoidal
  // re-integration of the stream reproduces it.
  if (truth) {
    truth->t.resize(count);
    truth->foot_pos.resize(count);
    truth->foot_vel.resize(count);
    Vec2 pos(0.0, 0.0);
    {
      const std::size_t seg = sx.segment(t0);
      double px, vx, ax, py, vy, ay;
      sx.eval(t0, seg, px, vx, ax);
      sy.eval(t0, seg, py, vy, ay);
      pos = Vec2(px, py);
    }
    Vec2 vel = foot_v0;
    for (std::size_t k = 0; k < count; ++k) {
      truth->t[k] = t0 + static_cast<double>(k) * h;
      truth->foot_pos[k] = pos;
      truth->foot_vel[k] = vel;
      if (k + 1 < count) {
        const Vec2& a0 = accel_nf[k];
        const Vec2& a1 = accel_nf[k + 1];
        pos += h * vel + h * h * (2.0 * a0 + a1) / 6.0;
        vel += 0.5 * h * (a0 + a1);
      }
    }
  }

  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);

  ImuRun run;
  run.rate = rate;
  run.samples.resize(count);
  for (std::size_t k = 0; k < count; ++k) {
    ImuSample& s = run.samples[k];
    s.t = t0 + static_cast<double>(k) * h;
    s.accel = Vec3(accel_nf[k].x(), accel_nf[k].y(), 0.0);
    s.gyro = Vec3(0.0, 0.0, omega_z[k]);
    const double c = std::cos(theta_arr[k]);
    const double sn = std::sin(theta_arr[k]);
    s.mag = Vec3(c * kMagFieldWorld.x() + sn * kMagFieldWorld.y(),
                 -sn * kMagFieldWorld.x() + c * kMagFieldWorld.y(),
                 kMagFieldWorld.z());
    for (int i = 0; i < 3; ++i) s.accel[i] += noise.accel_std * gauss(rng);
    for (int i = 0; i < 3; ++i) s.gyro[i] += noise.gyro_std * gauss(rng);
    for (int i = 0; i < 3; ++i) s.mag[i] += noise.mag_std * gauss(rng);
  }
  return run;
}

namespace {

// Distance along (cos(phi), sin(phi)) from the origin to the room walls;
// max range when the ray exits without a hit.
double wall_range(double phi, const Vec2& he) {
  const double dx = std::cos(phi);
  const double dy = std::sin(phi);
  double best = kLidarMaxRange;
  if (dx > 1e-12) {
    const double t = 2.0 * he.x() / dx;
    if (std::abs(t * dy) <= he.y() && t < best) best = t;
  }
  if (dy > 1e-12) {
    const double t = he.y() / dy;
    const double x = t * dx;
    if (x >= 0.0 && x <= 2.0 * he.x() && t < best) best = t;
  }
  if (dy < -1e-12) {
    const double t = -he.y() / dy;
    const double x = t * dx;
    if (x >= 0.0 && x <= 2.0 * he.x() && t < best) best = t;
  }
  return best;
}

Vec2 interpolate_position(const Trajectory& traj, double t) {
  const auto& pts = traj.points;
  if (t <= pts.front().t) return pts.front().pos;
  if (t >= pts.back().t) return pts.back().pos;
  std::size_t lo = 0, hi = pts.size() - 1;
  while (hi - lo > 1) {
    const std::size_t mid = (lo + hi) / 2;
    (pts[mid].t <= t ? lo : hi) = mid;
  }
  const double u = (t - pts[lo].t) / (pts[hi].t - pts[lo].t);
  return pts[lo].pos + u * (pts[hi].pos - pts[lo].pos);
}

}  // namespace

LidarRun render_lidar(const Trajectory& traj, const Vec2& room_half_extents,
                      double scan_rate, const SensorNoise& noise, std::uint64_t seed) {
  if (traj.points.empty()) throw DataError("empty trajectory");
  if (!(scan_rate > 0.0)) throw UsageError("scan rate must be positive");
  if (!(room_half_extents.minCoeff() > 0.0)) {
    throw UsageError("room half extents must be positive");
  }

  const int ray_count = static_cast<int>(std::llround(kLidarFovDeg / kLidarAngularStepDeg)) + 1;
  std::vector<double> angles(ray_count);
  for (int i = 0; i < ray_count; ++i) {
    angles[i] = (-0.5 * kLidarFovDeg + i * kLidarAngularStepDeg) * kPi / 180.0;
  }
  std::vector<double> wall(ray_count);
  for (int i = 0; i < ray_count; ++i) wall[i] = wall_range(angles[i], room_half_extents);

  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);

  auto cast_scan = [&](double true_t, const Vec2* walker) {
    LidarScan scan;
    scan.t = true_t + noise.clock_offset;
    scan.points.reserve(ray_count);
    for (int i = 0; i < ray_count; ++i) {
      const Vec2 dir(std::cos(angles[i]), std::sin(angles[i]));
      double range = wall[i];
      // the walker only occludes from inside the room (walls block the rest)
      if (walker && walker->x() > 0.0) {
        const double proj = dir.dot(*walker);
        const double disc = proj * proj - (walker->squaredNorm() - kWalkerRadius * kWalkerRadius);
        if (disc >= 0.0) {
          const double t_hit = proj - std::sqrt(disc);
          if (t_hit > 0.0 && t_hit < range) range = t_hit;
        }
      }
      if (noise.lidar_std > 0.0) range += noise.lidar_std * gauss(rng);
      range = std::clamp(range, 0.0, kLidarMaxRange);
      scan.points.push_back(range * dir);
    }
    return scan;
  };

  const double t0 = traj.points.front().t;
  const double t_end = traj.points.back().t;

  LidarRun run;
  run.reference = cast_scan(t0 - 1.0 / scan_rate, nullptr);
  const std::size_t count = static_cast<std::size_t>(std::floor((t_end - t0) * scan_rate + 1e-9)) + 1;
  run.scans.reserve(count);
  for (std::size_t j = 0; j < count; ++j) {
    const double t = t0 + static_cast<double>(j) / scan_rate;
    const Vec2 walker = interpolate_position(traj, t);
    run.scans.push_back(cast_scan(t, &walker));
  }
  return run;
}

Scenario read_scenario(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open scenario: " + path.string());

  Scenario sc;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    // trim
    const auto b = line.find_first_not_of(" \t");
    if (b == std::string::npos) continue;
    const auto e = line.find_last_not_of(" \t");
    line = line.substr(b, e - b + 1);

    const auto eq = line.find('=');
    if (eq == std::string::npos) throw ParseError("expected key=value", lineno);
    const std::string key = line.substr(0, eq);
    const double value = parse_double(std::string_view(line).substr(eq + 1), lineno);

    if (key == "duration") sc.walk.duration = value;
    else if (key == "mean_speed") sc.walk.mean_speed = value;
    else if (key == "speed_jitter") sc.walk.speed_jitter = value;
    else if (key == "turn_rate_std") sc.walk.turn_rate_std = value;
    else if (key == "step_cadence") sc.walk.step_cadence = value;
    else if (key == "room_hx") sc.walk.room_half_extents.x() = value;
    else if (key == "room_hy") sc.walk.room_half_extents.y() = value;
    else if (key == "seed") sc.walk.seed = static_cast<std::uint64_t>(value);
    else if (key == "accel_std") sc.noise.accel_std = value;
    else if (key == "gyro_std") sc.noise.gyro_std = value;
    else if (key == "mag_std") sc.noise.mag_std = value;
    else if (key == "lidar_std") sc.noise.lidar_std = value;
    else if (key == "clock_offset") sc.noise.clock_offset = value;
    else if (key == "imu_rate") sc.imu_rate = value;
    else if (key == "scan_rate") sc.scan_rate = value;
    else throw UsageError("unknown scenario key '" + key + "'");
  }
  return sc;
}

void write_scenario(const Scenario& sc, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw DataError("cannot open for writing: " + path.string());
  out << "duration=" << format_double(sc.walk.duration) << '\n'
      << "mean_speed=" << format_double(sc.walk.mean_speed) << '\n'
      << "speed_jitter=" << format_double(sc.walk.speed_jitter) << '\n'
      << "turn_rate_std=" << format_double(sc.walk.turn_rate_std) << '\n'
      << "step_cadence=" << format_double(sc.walk.step_cadence) << '\n'
      << "room_hx=" << format_double(sc.walk.room_half_extents.x()) << '\n'
      << "room_hy=" << format_double(sc.walk.room_half_extents.y()) << '\n'
      << "seed=" << sc.walk.seed << '\n'
      << "accel_std=" << format_double(sc.noise.accel_std) << '\n'
      << "gyro_std=" << format_double(sc.noise.gyro_std) << '\n'
      << "mag_std=" << format_double(sc.noise.mag_std) << '\n'
      << "lidar_std=" << format_double(sc.noise.lidar_std) << '\n'
      << "clock_offset=" << format_double(sc.noise.clock_offset) << '\n'
      << "imu_rate=" << format_double(sc.imu_rate) << '\n'
      << "scan_rate=" << format_double(sc.scan_rate) << '\n';
}

}  // namespace pedtrack::synth
