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
#include <span>
#include <string>
#include <vector>

#include "pedtrack/lidartrack.hpp"
#include "pedtrack/nn.hpp"
#include "pedtrack/segment.hpp"
#include "pedtrack/types.hpp"

namespace pedtrack::eval {

/// Per-axis mean absolute displacement error, in meters per labeling
/// window.
struct MaeReport {
  std::string model_name;
  std::string dataset_name;
  double mae_dx = 0.0;
  double mae_dy = 0.0;
  std::size_t n_windows = 0;
};

MaeReport mae_report(std::span<const Vec2> pred, std::span<const Vec2> truth,
                     std::string model_name = {}, std::string dataset_name = {});

/// Cumulative sum of displacements from `start`, one point per window
/// boundary. Windows must be ordered and non-overlapping (reconstruction
/// consumes consecutive labels, not overlapping training strides).
Trajectory reconstruct_trajectory(const std::vector<lidar::DisplacementLabel>& labels,
                                  const Vec2& start);

/// Named model variant of the ablation family.
struct Variant {
  std::string name;
  nn::ModelConfig config;
};

/// Known names: 2gru_att, 2gru, gru, 3gru (depth and attention knobs of
/// the shared architecture). Anything else is a usage error listing them.
Variant variant_by_name(const std::string& name, const nn::ModelConfig& base);

/// Std of the epoch-to-epoch validation-MAE deltas: the smaller, the
/// steadier the training run.
double stability_metric(const std::vector<nn::EpochStats>& history);

struct AblationEntry {
  std::string variant;
  MaeReport val;
  MaeReport test;
  double stability_dx = 0.0;
  double stability_dy = 0.0;
  bool failed = false;
  std::string error;
  std::vector<nn::EpochStats> history_dx;
  std::vector<nn::EpochStats> history_dy;
};

/// Trains every variant on the same split with the same seed (dx and dy
/// models each); training failures are recorded per variant and the rest
/// continue.
std::vector<AblationEntry> ablation_run(const std::vector<Variant>& variants,
                                        const segment::Dataset& dataset,
                                        const nn::TrainConfig& config);

void write_ablation_table(const std::vector<AblationEntry>& entries,
                          const std::filesystem::path& path);

enum class PlotKind { path, training_curve, bar };
PlotKind parse_plot_kind(const std::string& name);

struct PlotSeries {
  std::string name;
  std::vector<double> x;
  std::vector<double> y;
};

/// Standalone SVG plus a sidecar CSV holding the exact plotted numbers
/// (same basename, .csv extension). Path plots overlay ground truth and
/// prediction with a legend.
void emit_plot(const std::vector<PlotSeries>& series, PlotKind kind,
               const std::filesystem::path& svg_path);

}  // namespace pedtrack::eval
