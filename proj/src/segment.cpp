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

#include "pedtrack/segment.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <random>
#include <sstream>

#include "pedtrack/error.hpp"
#include "pedtrack/io.hpp"

namespace pedtrack::segment {

Matrix Normalizer::apply(const Matrix& channels) const {
  if (channels.cols() != min.size()) throw UsageError("channel count mismatch");
  Matrix out(channels.rows(), channels.cols());
  for (Eigen::Index c = 0; c < channels.cols(); ++c) {
    const double span = max[c] - min[c];
    if (span > 0.0) {
      out.col(c) = 2.0 * (channels.col(c).array() - min[c]) / span - 1.0;
    } else {
      out.col(c).setZero();  // constant channel
    }
  }
  return out;
}

Matrix Normalizer::unapply(const Matrix& channels) const {
  if (channels.cols() != min.size()) throw UsageError("channel count mismatch");
  Matrix out(channels.rows(), channels.cols());
  for (Eigen::Index c = 0; c < channels.cols(); ++c) {
    const double span = max[c] - min[c];
    out.col(c) = (channels.col(c).array() + 1.0) * 0.5 * span + min[c];
  }
  return out;
}

std::vector<int> Normalizer::constant_channels() const {
  std::vector<int> out;
  for (Eigen::Index c = 0; c < min.size(); ++c) {
    if (!(max[c] > min[c])) out.push_back(static_cast<int>(c));
  }
  return out;
}

ImuRun clip_run(const ImuRun& run, double margin) {
  if (margin < 0.0) throw UsageError("clip margin must be >= 0");
  if (margin == 0.0) return run;
  if (run.duration() <= 2.0 * margin) {
    throw DataError("run too short to clip: nothing would remain");
  }
  const double lo = run.samples.front().t + margin;
  const double hi = run.samples.back().t - margin;

  ImuRun out;
  out.rate = run.rate;
  for (const ImuSample& s : run.samples) {
    if (s.t >= lo && s.t <= hi) out.samples.push_back(s);
  }
  return out;
}

ChannelMatrix augment_magnitudes(const ImuRun& run) {
  const Eigen::Index n = static_cast<Eigen::Index>(run.samples.size());
  ChannelMatrix cm;
  cm.t.resize(n);
  cm.x.resize(n, kChannelCount);
  for (Eigen::Index i = 0; i < n; ++i) {
    const ImuSample& s = run.samples[i];
    cm.t[i] = s.t;
    cm.x.block<1, 3>(i, 0) = s.accel.transpose();
    cm.x.block<1, 3>(i, 3) = s.gyro.transpose();
    cm.x.block<1, 3>(i, 6) = s.mag.transpose();
    cm.x(i, 9) = s.accel.norm();
    cm.x(i, 10) = s.gyro.norm();
    cm.x(i, 11) = s.mag.norm();
  }
  return cm;
}

Normalizer fit_normalizer(const Matrix& channels) {
  return fit_normalizer(std::vector<const Matrix*>{&channels});
}

Normalizer fit_normalizer(const std::vector<const Matrix*>& channel_blocks) {
  if (channel_blocks.empty()) throw DataError("nothing to fit the normalizer on");
  const Eigen::Index cols = (*channel_blocks.front()).cols();

  Normalizer norm;
  norm.min = Vector::Constant(cols, std::numeric_limits<double>::infinity());
  norm.max = Vector::Constant(cols, -std::numeric_limits<double>::infinity());
  bool any_rows = false;
  for (const Matrix* block : channel_blocks) {
    if (block->cols() != cols) throw UsageError("channel count mismatch");
    if (block->rows() == 0) continue;
    any_rows = true;
    norm.min = norm.min.cwiseMin(block->colwise().minCoeff().transpose());
    norm.max = norm.max.cwiseMax(block->colwise().maxCoeff().transpose());
  }
  if (!any_rows) throw DataError("nothing to fit the normalizer on");
  return norm;
}

std::vector<LabeledWindow> window_examples(const ChannelMatrix& channels,
                                           const std::vector<lidar::DisplacementLabel>& labels,
                                           double rate, double length_s, double stride_s,
                                           double match_tol, const std::string& run_id) {
  if (!(rate > 0.0) || !(length_s > 0.0) || !(stride_s > 0.0)) {
    throw UsageError("rate, window length and stride must be positive");
  }
  const double rows_exact = rate * length_s;
  const auto rows = static_cast<Eigen::Index>(std::llround(rows_exact));
  if (std::abs(rows_exact - static_cast<double>(rows)) > 1e-6 || rows < 1) {
    throw UsageError("rate * window length must be an integral row count");
  }

  std::vector<LabeledWindow> out;
  const Eigen::Index n = channels.x.rows();
  if (n < rows) return out;

  const double t0 = channels.t[0];
  const auto stride_rows = static_cast<Eigen::Index>(std::llround(stride_s * rate));
  if (stride_rows < 1) throw UsageError("stride shorter than one sample");

  std::size_t label_cursor = 0;
  for (Eigen::Index start = 0; start + rows <= n; start += stride_rows) {
    const double ws = t0 + static_cast<double>(start) / rate;
    const double we = ws + length_s;

    while (label_cursor < labels.size() &&
           labels[label_cursor].t_start < ws - match_tol) {
      ++label_cursor;
    }
    const lidar::DisplacementLabel* match = nullptr;
    for (std::size_t j = label_cursor; j < labels.size(); ++j) {
      if (labels[j].t_start > ws + match_tol) break;
      if (std::abs(labels[j].t_start - ws) <= match_tol &&
          std::abs(labels[j].t_end - we) <= match_tol) {
        match = &labels[j];
        break;
      }
    }
    if (!match) continue;  // unmatched windows are dropped

    LabeledWindow w;
    w.x = channels.x.middleRows(start, rows);
    w.dx = match->dx;
    w.dy = match->dy;
    w.t_start = ws;
    w.run_id = run_id;
    out.push_back(std::move(w));
  }
  return out;
}

DatasetSplit split_dataset(std::vector<LabeledWindow> windows, double ratio,
                           std::uint64_t seed,
                           const std::vector<std::string>& test_runs) {
  if (!(ratio > 0.0) || !(ratio < 1.0)) throw UsageError("split ratio must be in (0, 1)");

  DatasetSplit split;
  split.ratio = ratio;
  split.seed = seed;

  auto is_test_run = [&test_runs](const std::string& id) {
    return std::find(test_runs.begin(), test_runs.end(), id) != test_runs.end();
  };

  std::vector<LabeledWindow> pool;
  for (LabeledWindow& w : windows) {
    (is_test_run(w.run_id) ? split.test : pool).push_back(std::move(w));
  }

  std::vector<std::size_t> order(pool.size());
  std::iota(order.begin(), order.end(), 0);
  std::mt19937_64 rng(seed);
  std::shuffle(order.begin(), order.end(), rng);

  const auto n_train = static_cast<std::size_t>(
      std::llround(ratio * static_cast<double>(pool.size())));
  for (std::size_t i = 0; i < order.size(); ++i) {
    (i < n_train ? split.train : split.val).push_back(std::move(pool[order[i]]));
  }

  if (split.train.empty() || split.val.empty()) {
    throw DataError("split produced an empty train or validation set");
  }
  return split;
}

Dataset build_dataset(const std::vector<RunInput>& runs,
                      const DatasetBuildOptions& options) {
  if (runs.empty()) throw DataError("no runs to build a dataset from");

  std::vector<LabeledWindow> windows;
  for (const RunInput& run : runs) {
    const ImuRun clipped = clip_run(run.imu, options.clip_margin);
    const ChannelMatrix cm = augment_magnitudes(clipped);
    auto w = window_examples(cm, run.labels, run.imu.rate, options.length_s,
                             options.stride_s, options.match_tol, run.id);
    windows.insert(windows.end(), std::make_move_iterator(w.begin()),
                   std::make_move_iterator(w.end()));
  }

  Dataset dataset;
  dataset.split = split_dataset(std::move(windows), options.ratio, options.seed,
                                options.test_runs);

  // fit on training windows only
  std::vector<const Matrix*> train_blocks;
  train_blocks.reserve(dataset.split.train.size());
  for (const LabeledWindow& w : dataset.split.train) train_blocks.push_back(&w.x);
  dataset.normalizer = fit_normalizer(train_blocks);

  auto normalize_part = [&dataset](std::vector<LabeledWindow>& part, bool count_overflow) {
    for (LabeledWindow& w : part) {
      w.x = dataset.normalizer.apply(w.x);
      if (count_overflow) {
        dataset.overflow_entries += static_cast<std::size_t>(
            (w.x.array().abs() > 1.0 + 1e-12).count());
      }
    }
  };
  normalize_part(dataset.split.train, false);
  normalize_part(dataset.split.val, true);
  normalize_part(dataset.split.test, true);
  return dataset;
}

namespace {

void save_windows(const std::vector<LabeledWindow>& windows,
                  const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw DataError("cannot open for writing: " + path.string());

  const Eigen::Index t = windows.empty() ? 0 : windows.front().x.rows();
  const Eigen::Index c = windows.empty() ? kChannelCount : windows.front().x.cols();
  out << "windows T=" << t << " C=" << c << " count=" << windows.size() << '\n';
  for (const LabeledWindow& w : windows) {
    out << "window t_start=" << format_double(w.t_start) << " dx=" << format_double(w.dx)
        << " dy=" << format_double(w.dy) << " run=" << w.run_id << '\n';
    for (Eigen::Index i = 0; i < w.x.rows(); ++i) {
      for (Eigen::Index j = 0; j < w.x.cols(); ++j) {
        if (j) out << ',';
        out << format_double(w.x(i, j));
      }
      out << '\n';
    }
  }
  if (!out) throw DataError("write failed: " + path.string());
}

std::vector<LabeledWindow> load_windows(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open for reading: " + path.string());

  std::string line;
  std::size_t lineno = 1;
  if (!std::getline(in, line)) throw ParseError("missing windows header", lineno);
  Eigen::Index t = 0, c = 0;
  std::size_t count = 0;
  {
    std::istringstream hdr(line);
    std::string tag, tkv, ckv, nkv;
    hdr >> tag >> tkv >> ckv >> nkv;
    if (tag != "windows" || tkv.rfind("T=", 0) != 0 || ckv.rfind("C=", 0) != 0 ||
        nkv.rfind("count=", 0) != 0) {
      throw ParseError("malformed windows header", lineno);
    }
    t = std::stol(tkv.substr(2));
    c = std::stol(ckv.substr(2));
    count = std::stoul(nkv.substr(6));
  }

  std::vector<LabeledWindow> windows;
  windows.reserve(count);
  for (std::size_t k = 0; k < count; ++k) {
    if (!std::getline(in, line)) throw ParseError("truncated windows file", lineno);
    ++lineno;
    LabeledWindow w;
    {
      std::istringstream hdr(line);
      std::string tag, f1, f2, f3, f4;
      hdr >> tag >> f1 >> f2 >> f3 >> f4;
      if (tag != "window" || f1.rfind("t_start=", 0) != 0 || f2.rfind("dx=", 0) != 0 ||
          f3.rfind("dy=", 0) != 0 || f4.rfind("run=", 0) != 0) {
        throw ParseError("malformed window header", lineno);
      }
      w.t_start = parse_double(std::string_view(f1).substr(8), lineno);
      w.dx = parse_double(std::string_view(f2).substr(3), lineno);
      w.dy = parse_double(std::string_view(f3).substr(3), lineno);
      w.run_id = f4.substr(4);
    }
    w.x.resize(t, c);
    for (Eigen::Index i = 0; i < t; ++i) {
      if (!std::getline(in, line)) throw ParseError("truncated window block", lineno);
      ++lineno;
      if (!line.empty() && line.back() == '\r') line.pop_back();
      std::size_t pos = 0;
      for (Eigen::Index j = 0; j < c; ++j) {
        const std::size_t comma = line.find(',', pos);
        const bool last = (j + 1 == c);
        if (last != (comma == std::string::npos)) {
          throw ParseError("wrong column count in window row", lineno);
        }
        w.x(i, j) = parse_double(
            std::string_view(line).substr(pos, last ? std::string::npos : comma - pos),
            lineno);
        pos = comma + 1;
      }
    }
    windows.push_back(std::move(w));
  }
  return windows;
}

}  // namespace

void save_normalizer(const Normalizer& norm, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw DataError("cannot open for writing: " + path.string());
  out << "normalizer C=" << norm.min.size() << '\n';
  for (Eigen::Index i = 0; i < norm.min.size(); ++i) {
    if (i) out << ',';
    out << format_double(norm.min[i]);
  }
  out << '\n';
  for (Eigen::Index i = 0; i < norm.max.size(); ++i) {
    if (i) out << ',';
    out << format_double(norm.max[i]);
  }
  out << '\n';
}

Normalizer load_normalizer(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open for reading: " + path.string());
  std::string line;
  if (!std::getline(in, line) || line.rfind("normalizer C=", 0) != 0) {
    throw ParseError("malformed normalizer header", 1);
  }
  const Eigen::Index c = std::stol(line.substr(13));

  Normalizer norm;
  norm.min.resize(c);
  norm.max.resize(c);
  for (int row = 0; row < 2; ++row) {
    if (!std::getline(in, line)) throw ParseError("truncated normalizer", 2 + row);
    if (!line.empty() && line.back() == '\r') line.pop_back();
    Vector& target = row == 0 ? norm.min : norm.max;
    std::size_t pos = 0;
    for (Eigen::Index j = 0; j < c; ++j) {
      const std::size_t comma = line.find(',', pos);
      const bool last = (j + 1 == c);
      if (last != (comma == std::string::npos)) {
        throw ParseError("wrong normalizer column count", 2 + row);
      }
      target[j] = parse_double(
          std::string_view(line).substr(pos, last ? std::string::npos : comma - pos),
          2 + row);
      pos = comma + 1;
    }
  }
  return norm;
}

void save_dataset(const Dataset& dataset, const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  save_windows(dataset.split.train, dir / "train.windows");
  save_windows(dataset.split.val, dir / "val.windows");
  save_windows(dataset.split.test, dir / "test.windows");
  save_normalizer(dataset.normalizer, dir / "normalizer.txt");

  std::ofstream meta(dir / "meta.txt");
  if (!meta) throw DataError("cannot open for writing: " + (dir / "meta.txt").string());
  meta << "ratio=" << format_double(dataset.split.ratio) << '\n'
       << "seed=" << dataset.split.seed << '\n'
       << "overflow_entries=" << dataset.overflow_entries << '\n';
}

Dataset load_dataset(const std::filesystem::path& dir) {
  Dataset dataset;
  dataset.split.train = load_windows(dir / "train.windows");
  dataset.split.val = load_windows(dir / "val.windows");
  dataset.split.test = load_windows(dir / "test.windows");
  dataset.normalizer = load_normalizer(dir / "normalizer.txt");

  std::ifstream meta(dir / "meta.txt");
  if (meta) {
    std::string line;
    while (std::getline(meta, line)) {
      if (line.rfind("ratio=", 0) == 0) {
        dataset.split.ratio = parse_double(std::string_view(line).substr(6), 0);
      } else if (line.rfind("seed=", 0) == 0) {
        dataset.split.seed = std::stoull(line.substr(5));
      } else if (line.rfind("overflow_entries=", 0) == 0) {
        dataset.overflow_entries = std::stoull(line.substr(17));
      }
    }
  }
  return dataset;
}

}  // namespace pedtrack::segment
