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

#include "pedtrack/io.hpp"

#include <charconv>
#include <fstream>
#include <system_error>
#include <vector>

#include "pedtrack/error.hpp"

namespace pedtrack {

namespace {

constexpr std::string_view kImuColumns = "t,ax,ay,az,gx,gy,gz,mx,my,mz";
constexpr std::string_view kLidarHeader =
    "t x:y pairs (first record: reference scan)";
constexpr std::string_view kTrajectoryColumns = "t,x,y";

std::ofstream open_out(const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw DataError("cannot open for writing: " + path.string());
  return out;
}

std::ifstream open_in(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open for reading: " + path.string());
  return in;
}

std::vector<std::string_view> split(std::string_view line, char sep) {
  std::vector<std::string_view> fields;
  std::size_t start = 0;
  while (true) {
    const std::size_t pos = line.find(sep, start);
    if (pos == std::string_view::npos) {
      fields.push_back(line.substr(start));
      break;
    }
    fields.push_back(line.substr(start, pos - start));
    start = pos + 1;
  }
  return fields;
}

// Space-separated tokens, collapsing repeats.
std::vector<std::string_view> tokens(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && line[i] == ' ') ++i;
    std::size_t j = i;
    while (j < line.size() && line[j] != ' ') ++j;
    if (j > i) out.push_back(line.substr(i, j - i));
    i = j;
  }
  return out;
}

void strip_cr(std::string& line) {
  if (!line.empty() && line.back() == '\r') line.pop_back();
}

}  // namespace

std::string format_double(double value) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof(buf), value);
  return std::string(buf, res.ptr);
}

double parse_double(std::string_view text, std::size_t line) {
  double value = 0.0;
  const auto res = std::from_chars(text.data(), text.data() + text.size(), value);
  if (res.ec != std::errc{} || res.ptr != text.data() + text.size()) {
    throw ParseError("malformed number '" + std::string(text) + "'", line);
  }
  return value;
}

void write_imu_run(const ImuRun& run, const std::filesystem::path& path) {
  std::ofstream out = open_out(path);
  out << kImuColumns << " rate=" << format_double(run.rate) << '\n';
  for (const ImuSample& s : run.samples) {
    out << format_double(s.t);
    for (int i = 0; i < 3; ++i) out << ',' << format_double(s.accel[i]);
    for (int i = 0; i < 3; ++i) out << ',' << format_double(s.gyro[i]);
    for (int i = 0; i < 3; ++i) out << ',' << format_double(s.mag[i]);
    out << '\n';
  }
  if (!out) throw DataError("write failed: " + path.string());
}

ImuRun read_imu_run(const std::filesystem::path& path) {
  std::ifstream in = open_in(path);
  ImuRun run;

  std::string line;
  std::size_t lineno = 0;
  if (!std::getline(in, line)) return run;  // empty file: zero samples
  ++lineno;
  strip_cr(line);
  if (line.rfind(kImuColumns, 0) != 0) {
    throw ParseError("expected IMU header '" + std::string(kImuColumns) + "'", lineno);
  }
  const std::size_t rate_pos = line.find("rate=");
  if (rate_pos != std::string::npos) {
    run.rate = parse_double(std::string_view(line).substr(rate_pos + 5), lineno);
  }

  while (std::getline(in, line)) {
    ++lineno;
    strip_cr(line);
    if (line.empty()) continue;
    const auto fields = split(line, ',');
    if (fields.size() != 10) {
      throw ParseError("expected 10 columns, got " + std::to_string(fields.size()), lineno);
    }
    ImuSample s;
    s.t = parse_double(fields[0], lineno);
    for (int i = 0; i < 3; ++i) s.accel[i] = parse_double(fields[1 + i], lineno);
    for (int i = 0; i < 3; ++i) s.gyro[i] = parse_double(fields[4 + i], lineno);
    for (int i = 0; i < 3; ++i) s.mag[i] = parse_double(fields[7 + i], lineno);
    run.samples.push_back(s);
  }
  return run;
}

namespace {

void write_scan(std::ofstream& out, const LidarScan& scan) {
  out << format_double(scan.t);
  for (const Vec2& p : scan.points) {
    out << ' ' << format_double(p.x()) << ':' << format_double(p.y());
  }
  out << '\n';
}

LidarScan parse_scan(std::string_view line, std::size_t lineno) {
  LidarScan scan;
  const auto toks = tokens(line);
  if (toks.empty()) throw ParseError("empty scan record", lineno);
  scan.t = parse_double(toks[0], lineno);
  scan.points.reserve(toks.size() - 1);
  for (std::size_t i = 1; i < toks.size(); ++i) {
    const std::size_t colon = toks[i].find(':');
    if (colon == std::string_view::npos) {
      throw ParseError("expected x:y pair, got '" + std::string(toks[i]) + "'", lineno);
    }
    scan.points.emplace_back(parse_double(toks[i].substr(0, colon), lineno),
                             parse_double(toks[i].substr(colon + 1), lineno));
  }
  return scan;
}

}  // namespace

void write_lidar_run(const LidarRun& run, const std::filesystem::path& path) {
  std::ofstream out = open_out(path);
  out << kLidarHeader << '\n';
  write_scan(out, run.reference);
  for (const LidarScan& s : run.scans) write_scan(out, s);
  if (!out) throw DataError("write failed: " + path.string());
}

LidarRun read_lidar_run(const std::filesystem::path& path) {
  std::ifstream in = open_in(path);
  LidarRun run;

  std::string line;
  std::size_t lineno = 0;
  if (!std::getline(in, line)) return run;  // empty file: zero scans
  ++lineno;
  strip_cr(line);
  if (line != kLidarHeader) {
    throw ParseError("expected LiDAR header '" + std::string(kLidarHeader) + "'", lineno);
  }

  bool have_reference = false;
  while (std::getline(in, line)) {
    ++lineno;
    strip_cr(line);
    if (line.empty()) continue;
    LidarScan scan = parse_scan(line, lineno);
    if (!have_reference) {
      run.reference = std::move(scan);
      have_reference = true;
    } else {
      run.scans.push_back(std::move(scan));
    }
  }
  return run;
}

void write_trajectory(const Trajectory& traj, const std::filesystem::path& path) {
  std::ofstream out = open_out(path);
  out << kTrajectoryColumns << '\n';
  for (const TrajectoryPoint& p : traj.points) {
    out << format_double(p.t) << ',' << format_double(p.pos.x()) << ','
        << format_double(p.pos.y()) << '\n';
  }
  if (!out) throw DataError("write failed: " + path.string());
}

Trajectory read_trajectory(const std::filesystem::path& path) {
  std::ifstream in = open_in(path);
  Trajectory traj;

  std::string line;
  std::size_t lineno = 0;
  if (!std::getline(in, line)) return traj;
  ++lineno;
  strip_cr(line);
  if (line != kTrajectoryColumns) {
    throw ParseError("expected trajectory header '" + std::string(kTrajectoryColumns) + "'",
                     lineno);
  }

  while (std::getline(in, line)) {
    ++lineno;
    strip_cr(line);
    if (line.empty()) continue;
    const auto fields = split(line, ',');
    if (fields.size() != 3) {
      throw ParseError("expected 3 columns, got " + std::to_string(fields.size()), lineno);
    }
    TrajectoryPoint p;
    p.t = parse_double(fields[0], lineno);
    p.pos.x() = parse_double(fields[1], lineno);
    p.pos.y() = parse_double(fields[2], lineno);
    traj.points.push_back(p);
  }
  return traj;
}

RunKind parse_run_kind(std::string_view kind) {
  if (kind == "imu") return RunKind::imu;
  if (kind == "lidar") return RunKind::lidar;
  throw UsageError("unknown run kind '" + std::string(kind) + "' (expected imu or lidar)");
}

}  // namespace pedtrack
