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

#include "pedtrack/eval.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>

#include "pedtrack/error.hpp"
#include "pedtrack/io.hpp"

namespace pedtrack::eval {

MaeReport mae_report(std::span<const Vec2> pred, std::span<const Vec2> truth,
                     std::string model_name, std::string dataset_name) {
  if (pred.size() != truth.size() || pred.empty()) {
    throw UsageError("mae_report: prediction/truth length mismatch");
  }
  MaeReport report;
  report.model_name = std::move(model_name);
  report.dataset_name = std::move(dataset_name);
  report.n_windows = pred.size();
  double sx = 0.0, sy = 0.0;
  for (std::size_t i = 0; i < pred.size(); ++i) {
    sx += std::abs(pred[i].x() - truth[i].x());
    sy += std::abs(pred[i].y() - truth[i].y());
  }
  report.mae_dx = sx / static_cast<double>(pred.size());
  report.mae_dy = sy / static_cast<double>(pred.size());
  return report;
}

Trajectory reconstruct_trajectory(const std::vector<lidar::DisplacementLabel>& labels,
                                  const Vec2& start) {
  Trajectory traj;
  if (labels.empty()) {
    traj.points.push_back({0.0, start});
    return traj;
  }
  for (std::size_t i = 1; i < labels.size(); ++i) {
    if (labels[i].t_start < labels[i - 1].t_start) {
      throw DataError("displacement windows out of order");
    }
    if (labels[i].t_start < labels[i - 1].t_end - 1e-9) {
      throw DataError("overlapping displacement windows at index " + std::to_string(i));
    }
  }

  Vec2 pos = start;
  traj.points.push_back({labels.front().t_start, pos});
  for (const lidar::DisplacementLabel& l : labels) {
    pos += Vec2(l.dx, l.dy);
    traj.points.push_back({l.t_end, pos});
  }
  return traj;
}

Variant variant_by_name(const std::string& name, const nn::ModelConfig& base) {
  Variant v{name, base};
  if (name == "2gru_att") {
    v.config.depth = 2;
    v.config.attention = true;
  } else if (name == "2gru") {
    v.config.depth = 2;
    v.config.attention = false;
  } else if (name == "gru") {
    v.config.depth = 1;
    v.config.attention = false;
  } else if (name == "3gru") {
    v.config.depth = 3;
    v.config.attention = false;
  } else {
    throw UsageError("unknown variant '" + name +
                     "' (known: 2gru_att, 2gru, gru, 3gru)");
  }
  return v;
}

double stability_metric(const std::vector<nn::EpochStats>& history) {
  if (history.size() < 2) return 0.0;
  std::vector<double> deltas;
  deltas.reserve(history.size() - 1);
  for (std::size_t i = 1; i < history.size(); ++i) {
    deltas.push_back(history[i].val_mae - history[i - 1].val_mae);
  }
  double mean = 0.0;
  for (double d : deltas) mean += d;
  mean /= static_cast<double>(deltas.size());
  double sq = 0.0;
  for (double d : deltas) sq += (d - mean) * (d - mean);
  return std::sqrt(sq / static_cast<double>(deltas.size()));
}

namespace {

MaeReport evaluate_pair(const nn::ModelParams& model_dx, const nn::ModelParams& model_dy,
                        const std::vector<segment::LabeledWindow>& windows,
                        const std::string& model_name, const std::string& dataset_name) {
  std::vector<Vec2> pred, truth;
  pred.reserve(windows.size());
  truth.reserve(windows.size());
  for (const segment::LabeledWindow& w : windows) {
    pred.emplace_back(nn::predict(model_dx, w.x), nn::predict(model_dy, w.x));
    truth.emplace_back(w.dx, w.dy);
  }
  return mae_report(pred, truth, model_name, dataset_name);
}

}  // namespace

std::vector<AblationEntry> ablation_run(const std::vector<Variant>& variants,
                                        const segment::Dataset& dataset,
                                        const nn::TrainConfig& config) {
  if (variants.size() < 2) throw UsageError("ablation needs at least two variants");

  std::vector<AblationEntry> entries;
  entries.reserve(variants.size());
  for (const Variant& variant : variants) {
    AblationEntry entry;
    entry.variant = variant.name;
    try {
      nn::TrainConfig cfg = config;  // identical data and seeds per variant
      cfg.model = variant.config;
      const nn::TrainResult rx = nn::train_model(dataset.split, cfg, nn::Target::dx);
      const nn::TrainResult ry = nn::train_model(dataset.split, cfg, nn::Target::dy);
      entry.history_dx = rx.history;
      entry.history_dy = ry.history;
      entry.stability_dx = stability_metric(rx.history);
      entry.stability_dy = stability_metric(ry.history);
      entry.val = evaluate_pair(rx.params, ry.params, dataset.split.val, variant.name, "val");
      if (!dataset.split.test.empty()) {
        entry.test =
            evaluate_pair(rx.params, ry.params, dataset.split.test, variant.name, "test");
      }
    } catch (const Error& e) {
      entry.failed = true;
      entry.error = e.what();
    }
    entries.push_back(std::move(entry));
  }
  return entries;
}

void write_ablation_table(const std::vector<AblationEntry>& entries,
                          const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw DataError("cannot open for writing: " + path.string());
  out << "variant,val_mae_dx,val_mae_dy,test_mae_dx,test_mae_dy,"
         "stability_dx,stability_dy,error\n";
  for (const AblationEntry& e : entries) {
    out << e.variant << ',';
    if (e.failed) {
      out << ",,,,,," << e.error << '\n';
      continue;
    }
    out << format_double(e.val.mae_dx) << ',' << format_double(e.val.mae_dy) << ','
        << format_double(e.test.mae_dx) << ',' << format_double(e.test.mae_dy) << ','
        << format_double(e.stability_dx) << ',' << format_double(e.stability_dy) << ",\n";
  }
}

PlotKind parse_plot_kind(const std::string& name) {
  if (name == "path") return PlotKind::path;
  if (name == "training_curve") return PlotKind::training_curve;
  if (name == "bar") return PlotKind::bar;
  throw UsageError("unknown plot kind '" + name + "' (path, training_curve, bar)");
}

namespace {

constexpr double kPlotWidth = 720.0;
constexpr double kPlotHeight = 460.0;
constexpr double kMargin = 60.0;

const char* series_color(PlotKind kind, std::size_t index) {
  // path plots follow the figure convention: ground truth red, combined
  // predictions green
  static const char* kPathColors[] = {"#d62728", "#2ca02c", "#1f77b4", "#ff7f0e"};
  static const char* kCurveColors[] = {"#1f77b4", "#ff7f0e", "#2ca02c", "#d62728"};
  const auto& palette = kind == PlotKind::path ? kPathColors : kCurveColors;
  return palette[index % 4];
}

}  // namespace

void emit_plot(const std::vector<PlotSeries>& series, PlotKind kind,
               const std::filesystem::path& svg_path) {
  if (series.empty()) throw UsageError("emit_plot: no series");
  for (const PlotSeries& s : series) {
    if (s.x.size() != s.y.size() || s.x.empty()) {
      throw UsageError("emit_plot: series '" + s.name + "' is empty or ragged");
    }
  }

  double xmin = std::numeric_limits<double>::max(), xmax = -xmin;
  double ymin = xmin, ymax = -xmin;
  for (const PlotSeries& s : series) {
    for (double v : s.x) {
      xmin = std::min(xmin, v);
      xmax = std::max(xmax, v);
    }
    for (double v : s.y) {
      ymin = std::min(ymin, v);
      ymax = std::max(ymax, v);
    }
  }
  if (kind == PlotKind::bar) ymin = std::min(ymin, 0.0);
  if (xmax == xmin) {
    xmax += 0.5;
    xmin -= 0.5;
  }
  if (ymax == ymin) {
    ymax += 0.5;
    ymin -= 0.5;
  }

  double sx = kPlotWidth / (xmax - xmin);
  double sy = kPlotHeight / (ymax - ymin);
  if (kind == PlotKind::path) sx = sy = std::min(sx, sy);  // preserve aspect

  auto px = [&](double x) { return kMargin + (x - xmin) * sx; };
  auto py = [&](double y) { return kMargin + kPlotHeight - (y - ymin) * sy; };

  std::ofstream out(svg_path);
  if (!out) throw DataError("cannot open for writing: " + svg_path.string());

  const double total_w = kPlotWidth + 2.0 * kMargin;
  const double total_h = kPlotHeight + 2.0 * kMargin;
  out << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
      << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << total_w
      << "\" height=\"" << total_h << "\" viewBox=\"0 0 " << total_w << ' ' << total_h
      << "\">\n";
  out << "  <rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";

  // axes with range labels
  out << "  <line x1=\"" << kMargin << "\" y1=\"" << kMargin + kPlotHeight << "\" x2=\""
      << kMargin + kPlotWidth << "\" y2=\"" << kMargin + kPlotHeight
      << "\" stroke=\"black\"/>\n";
  out << "  <line x1=\"" << kMargin << "\" y1=\"" << kMargin << "\" x2=\"" << kMargin
      << "\" y2=\"" << kMargin + kPlotHeight << "\" stroke=\"black\"/>\n";
  out << "  <text x=\"" << kMargin << "\" y=\"" << kMargin + kPlotHeight + 20
      << "\" font-size=\"12\">" << format_double(xmin) << "</text>\n";
  out << "  <text x=\"" << kMargin + kPlotWidth - 30 << "\" y=\""
      << kMargin + kPlotHeight + 20 << "\" font-size=\"12\">" << format_double(xmax)
      << "</text>\n";
  out << "  <text x=\"" << 5 << "\" y=\"" << kMargin + kPlotHeight << "\" font-size=\"12\">"
      << format_double(ymin) << "</text>\n";
  out << "  <text x=\"" << 5 << "\" y=\"" << kMargin + 10 << "\" font-size=\"12\">"
      << format_double(ymax) << "</text>\n";

  if (kind == PlotKind::bar) {
    const double group_w = kPlotWidth / static_cast<double>(series.front().x.size());
    const double bar_w = group_w / static_cast<double>(series.size() + 1);
    for (std::size_t si = 0; si < series.size(); ++si) {
      const PlotSeries& s = series[si];
      for (std::size_t i = 0; i < s.y.size(); ++i) {
        const double x0 = kMargin + static_cast<double>(i) * group_w +
                          static_cast<double>(si) * bar_w + 0.5 * bar_w;
        const double y_top = py(std::max(s.y[i], 0.0));
        const double y_bot = py(std::min(s.y[i], 0.0));
        out << "  <rect x=\"" << x0 << "\" y=\"" << y_top << "\" width=\"" << bar_w
            << "\" height=\"" << (y_bot - y_top) << "\" fill=\""
            << series_color(kind, si) << "\"/>\n";
      }
    }
  } else {
    for (std::size_t si = 0; si < series.size(); ++si) {
      const PlotSeries& s = series[si];
      out << "  <polyline fill=\"none\" stroke=\"" << series_color(kind, si)
          << "\" stroke-width=\"1.5\" points=\"";
      for (std::size_t i = 0; i < s.x.size(); ++i) {
        if (i) out << ' ';
        out << px(s.x[i]) << ',' << py(s.y[i]);
      }
      out << "\"/>\n";
    }
  }

  // legend
  for (std::size_t si = 0; si < series.size(); ++si) {
    const double ly = kMargin + 16.0 * static_cast<double>(si + 1);
    out << "  <rect x=\"" << kMargin + kPlotWidth - 140 << "\" y=\"" << ly - 9
        << "\" width=\"10\" height=\"10\" fill=\"" << series_color(kind, si) << "\"/>\n";
    out << "  <text x=\"" << kMargin + kPlotWidth - 125 << "\" y=\"" << ly
        << "\" font-size=\"12\">" << series[si].name << "</text>\n";
  }
  out << "</svg>\n";
  if (!out) throw DataError("write failed: " + svg_path.string());

  // numeric sidecar: plots are never the sole record of a result
  std::filesystem::path csv_path = svg_path;
  csv_path.replace_extension(".csv");
  std::ofstream csv(csv_path);
  if (!csv) throw DataError("cannot open for writing: " + csv_path.string());
  csv << "series,x,y\n";
  for (const PlotSeries& s : series) {
    for (std::size_t i = 0; i < s.x.size(); ++i) {
      csv << s.name << ',' << format_double(s.x[i]) << ',' << format_double(s.y[i])
          << '\n';
    }
  }
  if (!csv) throw DataError("write failed: " + csv_path.string());
}

}  // namespace pedtrack::eval
