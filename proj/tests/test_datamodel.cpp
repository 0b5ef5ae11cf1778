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

#include <cmath>
#include <fstream>
#include <limits>
#include <random>

#include "doctest.h"
#include "pedtrack/datamodel.hpp"
#include "pedtrack/error.hpp"
#include "pedtrack/io.hpp"
#include "testutil.hpp"

using namespace pedtrack;

namespace {

ImuRun well_formed_run(std::size_t n = 100, double rate = 250.0) {
  std::mt19937_64 rng(7);
  std::normal_distribution<double> g(0.0, 1.0);
  ImuRun run;
  run.rate = rate;
  for (std::size_t i = 0; i < n; ++i) {
    ImuSample s;
    s.t = static_cast<double>(i) / rate;
    for (int k = 0; k < 3; ++k) {
      s.accel[k] = g(rng);
      s.gyro[k] = g(rng);
      s.mag[k] = g(rng);
    }
    run.samples.push_back(s);
  }
  return run;
}

bool runs_equal(const ImuRun& a, const ImuRun& b) {
  if (a.rate != b.rate || a.samples.size() != b.samples.size()) return false;
  for (std::size_t i = 0; i < a.samples.size(); ++i) {
    if (a.samples[i].t != b.samples[i].t) return false;
    if (a.samples[i].accel != b.samples[i].accel) return false;
    if (a.samples[i].gyro != b.samples[i].gyro) return false;
    if (a.samples[i].mag != b.samples[i].mag) return false;
  }
  return true;
}

}  // namespace

TEST_CASE("validate passes a well-formed 250 Hz run") {
  const ImuRun run = well_formed_run();
  CHECK(validate(run).empty());
}

TEST_CASE("validate flags a duplicate timestamp") {
  ImuRun run;
  run.rate = 250.0;
  for (double t : {0.0, 0.004, 0.004}) {
    ImuSample s;
    s.t = t;
    run.samples.push_back(s);
  }
  const auto violations = validate(run);
  REQUIRE(!violations.empty());
  bool found = false;
  for (const Violation& v : violations) {
    if (v.invariant.find("strictly increasing") != std::string::npos && v.index == 2) {
      found = true;
    }
  }
  CHECK(found);
}

TEST_CASE("validate flags a NaN accel value") {
  ImuRun run = well_formed_run(10);
  run.samples[4].accel[1] = std::numeric_limits<double>::quiet_NaN();
  const auto violations = validate(run);
  REQUIRE(!violations.empty());
  CHECK(violations.front().invariant == "finite values");
  CHECK(violations.front().index == 4);
}

TEST_CASE("validate flags sampling jitter beyond 10%") {
  ImuRun run = well_formed_run(10);
  run.samples[5].t += 0.002;  // half a sample late at 250 Hz
  const auto violations = validate(run);
  bool found = false;
  for (const Violation& v : violations) {
    if (v.invariant.find("uniform sampling") != std::string::npos) found = true;
  }
  CHECK(found);
}

TEST_CASE("validate is pure") {
  ImuRun run = well_formed_run(10);
  run.samples[3].gyro[0] = std::numeric_limits<double>::infinity();
  const auto a = validate(run);
  const auto b = validate(run);
  REQUIRE(a.size() == b.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    CHECK(a[i].invariant == b[i].invariant);
    CHECK(a[i].index == b[i].index);
  }
}

TEST_CASE("lidar validation checks range and ordering") {
  LidarRun run;
  run.reference.t = 0.0;
  run.reference.points = {Vec2(1.0, 2.0)};
  LidarScan s1;
  s1.t = 0.025;
  s1.points = {Vec2(3.0, 4.0)};
  LidarScan s2 = s1;  // duplicate timestamp
  run.scans = {s1, s2};
  auto violations = validate(run);
  REQUIRE(violations.size() == 1);
  CHECK(violations[0].invariant.find("strictly increasing") != std::string::npos);

  run.scans[1].t = 0.05;
  run.scans[1].points = {Vec2(90.0, 0.0)};  // beyond the 80 m range
  violations = validate(run);
  REQUIRE(violations.size() == 1);
  CHECK(violations[0].invariant.find("max range") != std::string::npos);
}

TEST_CASE("imu run round-trips bit-exactly through text") {
  const auto dir = testutil::tmp_dir("datamodel_imu_roundtrip");
  const ImuRun run = well_formed_run(257);
  const auto path = dir / "run.imu";
  write_imu_run(run, path);
  const ImuRun back = read_imu_run(path);
  CHECK(runs_equal(run, back));
  CHECK(validate(back).empty());
}

TEST_CASE("lidar run round-trips bit-exactly through text") {
  const auto dir = testutil::tmp_dir("datamodel_lidar_roundtrip");
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(-40.0, 40.0);

  LidarRun run;
  run.reference.t = -0.025;
  for (int i = 0; i < 50; ++i) run.reference.points.emplace_back(u(rng), u(rng));
  for (int j = 0; j < 20; ++j) {
    LidarScan s;
    s.t = 0.025 * j;
    for (int i = 0; i < 30 + j; ++i) s.points.emplace_back(u(rng), u(rng));
    run.scans.push_back(s);
  }

  const auto path = dir / "run.lidar";
  write_lidar_run(run, path);
  const LidarRun back = read_lidar_run(path);
  REQUIRE(back.scans.size() == run.scans.size());
  CHECK(back.reference.t == run.reference.t);
  REQUIRE(back.reference.points.size() == run.reference.points.size());
  for (std::size_t i = 0; i < run.reference.points.size(); ++i) {
    CHECK(back.reference.points[i] == run.reference.points[i]);
  }
  for (std::size_t j = 0; j < run.scans.size(); ++j) {
    CHECK(back.scans[j].t == run.scans[j].t);
    REQUIRE(back.scans[j].points.size() == run.scans[j].points.size());
    for (std::size_t i = 0; i < run.scans[j].points.size(); ++i) {
      CHECK(back.scans[j].points[i] == run.scans[j].points[i]);
    }
  }
}

TEST_CASE("trajectory round-trips bit-exactly") {
  const auto dir = testutil::tmp_dir("datamodel_traj_roundtrip");
  Trajectory traj;
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(-5.0, 5.0);
  for (int i = 0; i < 64; ++i) traj.points.push_back({0.01 * i, Vec2(u(rng), u(rng))});
  const auto path = dir / "traj.csv";
  write_trajectory(traj, path);
  const Trajectory back = read_trajectory(path);
  REQUIRE(back.points.size() == traj.points.size());
  for (std::size_t i = 0; i < traj.points.size(); ++i) {
    CHECK(back.points[i].t == traj.points[i].t);
    CHECK(back.points[i].pos == traj.points[i].pos);
  }
}

TEST_CASE("a row with the wrong arity names its line") {
  const auto dir = testutil::tmp_dir("datamodel_arity");
  const auto path = dir / "bad.imu";
  {
    std::ofstream out(path);
    out << "t,ax,ay,az,gx,gy,gz,mx,my,mz rate=250\n";
    out << "0,0,0,0,0,0,0,0,0,0\n";
    out << "0.004,0,0,0,0,0,0,0,0,0,0\n";  // 11 columns
  }
  try {
    read_imu_run(path);
    FAIL("expected a parse error");
  } catch (const ParseError& e) {
    CHECK(e.line() == 3);
    CHECK(std::string(e.what()).find("line 3") != std::string::npos);
  }
}

TEST_CASE("an empty file reads as a run with zero samples") {
  const auto dir = testutil::tmp_dir("datamodel_empty");
  const auto path = dir / "empty.imu";
  std::ofstream(path).close();
  const ImuRun run = read_imu_run(path);
  CHECK(run.samples.empty());
  CHECK(validate(run).empty());
}

TEST_CASE("run kinds parse strictly") {
  CHECK(parse_run_kind("imu") == RunKind::imu);
  CHECK(parse_run_kind("lidar") == RunKind::lidar);
  CHECK_THROWS_AS(parse_run_kind("sonar"), UsageError);
}
