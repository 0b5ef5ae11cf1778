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

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "pedtrack/lidartrack.hpp"
#include "pedtrack/types.hpp"

namespace pedtrack::segment {

inline constexpr double kDefaultClipMargin = 3.0;  // s
inline constexpr double kDefaultWindowLength = 2.0;  // s
inline constexpr double kDefaultWindowStride = 0.5;  // s
inline constexpr int kChannelCount = 12;

/// Per-channel min-max scaling to [-1, 1], fitted on training data only.
/// Constant channels map to 0.
struct Normalizer {
  Vector min;  // 12
  Vector max;  // 12

  Matrix apply(const Matrix& channels) const;
  /// Inverse on non-constant channels (constant columns come back as min).
  Matrix unapply(const Matrix& channels) const;
  std::vector<int> constant_channels() const;
};

/// Timestamped T x 12 channel matrix: accel, gyro, mag plus their norms.
struct ChannelMatrix {
  Vector t;  // T
  Matrix x;  // T x 12
};

/// One training example: a fixed-length channel window and its
/// room-frame displacement label.
struct LabeledWindow {
  Matrix x;  // T x 12
  double dx = 0.0;
  double dy = 0.0;
  double t_start = 0.0;
  std::string run_id;
};

struct DatasetSplit {
  std::vector<LabeledWindow> train;
  std::vector<LabeledWindow> val;
  std::vector<LabeledWindow> test;
  double ratio = 0.8;
  std::uint64_t seed = 0;
};

/// Drops `margin` seconds from both ends (subject entering/leaving the
/// frame). Throws when the run is not longer than 2*margin.
ImuRun clip_run(const ImuRun& run, double margin = kDefaultClipMargin);

/// Columns 0-8: accel, gyro, mag; columns 9-11: their Euclidean norms.
ChannelMatrix augment_magnitudes(const ImuRun& run);

Normalizer fit_normalizer(const Matrix& channels);
Normalizer fit_normalizer(const std::vector<const Matrix*>& channel_blocks);

/// Slices fixed-length windows every stride_s seconds and attaches the
/// displacement label whose interval matches the window within match_tol
/// (half a scan interval); unmatched windows are dropped. rate*length_s
/// must be integral.
std::vector<LabeledWindow> window_examples(const ChannelMatrix& channels,
                                           const std::vector<lidar::DisplacementLabel>& labels,
                                           double rate,
                                           double length_s = kDefaultWindowLength,
                                           double stride_s = kDefaultWindowStride,
                                           double match_tol = 0.0125,
                                           const std::string& run_id = {});

/// Deterministic shuffled split of non-test windows into train/val by
/// ratio; test windows come solely from test_runs (held-out run ids).
DatasetSplit split_dataset(std::vector<LabeledWindow> windows, double ratio,
                           std::uint64_t seed,
                           const std::vector<std::string>& test_runs);

struct RunInput {
  std::string id;
  ImuRun imu;
  std::vector<lidar::DisplacementLabel> labels;
};

struct DatasetBuildOptions {
  double clip_margin = kDefaultClipMargin;
  double length_s = kDefaultWindowLength;
  double stride_s = kDefaultWindowStride;
  double match_tol = 0.0125;
  double ratio = 0.8;
  std::uint64_t seed = 0;
  std::vector<std::string> test_runs;
};

/// Windows normalized to [-1, 1]; the normalizer is fitted on training
/// windows only (no test-set leakage). Validation/test entries may exceed
/// [-1, 1]; they are not clamped, only counted.
struct Dataset {
  DatasetSplit split;
  Normalizer normalizer;
  std::size_t overflow_entries = 0;
};

Dataset build_dataset(const std::vector<RunInput>& runs,
                      const DatasetBuildOptions& options);

// Text container per split part: header (T, C, count), then one window
// per block. The normalizer is stored as 24 decimal numbers.
void save_dataset(const Dataset& dataset, const std::filesystem::path& dir);
Dataset load_dataset(const std::filesystem::path& dir);

void save_normalizer(const Normalizer& norm, const std::filesystem::path& path);
Normalizer load_normalizer(const std::filesystem::path& path);

}  // namespace pedtrack::segment
