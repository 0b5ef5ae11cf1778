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

#include "pedtrack/nn.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <random>
#include <sstream>

#include "pedtrack/error.hpp"
#include "pedtrack/io.hpp"

namespace pedtrack::nn {

namespace {

// Fixed traversal order shared by parameters, gradients, and optimizer
// state; also the on-disk order.
template <typename Params, typename F>
void visit_params(Params& p, F&& f) {
  for (std::size_t i = 0; i < p.gru.size(); ++i) {
    auto& g = p.gru[i];
    const std::string base = "gru" + std::to_string(i) + ".";
    f(base + "w_ux", g.w_ux);
    f(base + "w_uh", g.w_uh);
    f(base + "b_u", g.b_u);
    f(base + "w_rx", g.w_rx);
    f(base + "w_rh", g.w_rh);
    f(base + "b_r", g.b_r);
    f(base + "w_hx", g.w_hx);
    f(base + "w_hh", g.w_hh);
    f(base + "b_h", g.b_h);
  }
  if (p.config.attention) {
    f("attn.score_w", p.attn.score_w);
    f("attn.score_b", p.attn.score_b);
    f("attn.out_w", p.attn.out_w);
  }
  f("dense1.w", p.dense1_w);
  f("dense1.b", p.dense1_b);
  f("dense2.w", p.dense2_w);
  f("dense2.b", p.dense2_b);
}

void check_config(const ModelConfig& c) {
  if (c.input_dim < 1 || c.hidden_dim < 1 || c.depth < 1 || c.dense_width < 1 ||
      (c.attention && c.attn_width < 1)) {
    throw UsageError("model dimensions must be positive");
  }
  if (c.dropout_rate < 0.0 || c.dropout_rate >= 1.0) {
    throw UsageError("dropout rate must lie in [0, 1)");
  }
}

ModelParams make_structure(const ModelConfig& config) {
  check_config(config);
  ModelParams p;
  p.config = config;
  p.gru.resize(config.depth);
  for (int i = 0; i < config.depth; ++i) {
    const int d_in = i == 0 ? config.input_dim : config.hidden_dim;
    const int d_out = config.hidden_dim;
    GruParams& g = p.gru[i];
    g.w_ux = Matrix::Zero(d_out, d_in);
    g.w_uh = Matrix::Zero(d_out, d_out);
    g.b_u = Vector::Zero(d_out);
    g.w_rx = Matrix::Zero(d_out, d_in);
    g.w_rh = Matrix::Zero(d_out, d_out);
    g.b_r = Vector::Zero(d_out);
    g.w_hx = Matrix::Zero(d_out, d_in);
    g.w_hh = Matrix::Zero(d_out, d_out);
    g.b_h = Vector::Zero(d_out);
  }
  if (config.attention) {
    p.attn.score_w = Matrix::Zero(config.attn_width, config.hidden_dim);
    p.attn.score_b = Vector::Zero(config.attn_width);
    p.attn.out_w = Vector::Zero(config.attn_width);
  }
  p.dense1_w = Matrix::Zero(config.dense_width, config.hidden_dim);
  p.dense1_b = Vector::Zero(config.dense_width);
  p.dense2_w = Matrix::Zero(1, config.dense_width);
  p.dense2_b = Vector::Zero(1);
  return p;
}

double sigmoid(double x) { return 1.0 / (1.0 + std::exp(-x)); }

}  // namespace

ModelParams init_params(const ModelConfig& config, std::uint64_t seed) {
  ModelParams p = make_structure(config);
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(-1.0, 1.0);

  visit_params(p, [&]<typename M>(const std::string&, M& m) {
    if constexpr (std::is_same_v<M, Vector>) {
      m.setZero();  // biases stay zero; out_w handled below
    } else {
      const double fan_in = static_cast<double>(m.cols());
      const double fan_out = static_cast<double>(m.rows());
      const double s = std::sqrt(6.0 / (fan_in + fan_out));
      for (Eigen::Index i = 0; i < m.size(); ++i) m.data()[i] = s * unit(rng);
    }
  });
  if (config.attention) {
    const double s = std::sqrt(6.0 / (config.attn_width + 1.0));
    for (Eigen::Index i = 0; i < p.attn.out_w.size(); ++i) {
      p.attn.out_w[i] = s * unit(rng);
    }
  }
  return p;
}

ModelParams zeros_like(const ModelParams& like) { return make_structure(like.config); }

std::vector<Eigen::Map<Eigen::ArrayXd>> param_arrays(ModelParams& params) {
  std::vector<Eigen::Map<Eigen::ArrayXd>> views;
  visit_params(params, [&](const std::string&, auto& m) {
    views.emplace_back(m.data(), m.size());
  });
  return views;
}

GruStepResult gru_cell_step(const Vector& x, const Vector& h_prev, const GruParams& p) {
  if (x.size() != p.input_dim() || h_prev.size() != p.output_dim()) {
    throw UsageError("gru_cell_step: shape mismatch");
  }
  GruStepResult r;
  r.g_u = (p.w_ux * x + p.w_uh * h_prev + p.b_u).unaryExpr([](double v) { return sigmoid(v); });
  r.g_r = (p.w_rx * x + p.w_rh * h_prev + p.b_r).unaryExpr([](double v) { return sigmoid(v); });
  r.q = (p.w_hx * x + p.w_hh * (r.g_r.cwiseProduct(h_prev)) + p.b_h)
            .unaryExpr([](double v) { return std::tanh(v); });
  r.h = (Vector::Ones(h_prev.size()) - r.g_u).cwiseProduct(h_prev) + r.g_u.cwiseProduct(r.q);
  return r;
}

Matrix gru_layer_forward(const Matrix& x, const GruParams& p, GruLayerCache* cache) {
  if (x.cols() != p.input_dim()) throw UsageError("gru_layer_forward: shape mismatch");
  const Eigen::Index t_steps = x.rows();
  if (t_steps < 1) throw UsageError("gru_layer_forward: empty sequence");
  const Eigen::Index d = p.output_dim();

  Matrix h_all(t_steps, d);
  if (cache) {
    cache->x = x;
    cache->g_u.resize(t_steps, d);
    cache->g_r.resize(t_steps, d);
    cache->q.resize(t_steps, d);
  }

  Vector h = Vector::Zero(d);
  for (Eigen::Index t = 0; t < t_steps; ++t) {
    const GruStepResult step = gru_cell_step(x.row(t).transpose(), h, p);
    h = step.h;
    h_all.row(t) = h.transpose();
    if (cache) {
      cache->g_u.row(t) = step.g_u.transpose();
      cache->g_r.row(t) = step.g_r.transpose();
      cache->q.row(t) = step.q.transpose();
    }
  }
  if (cache) cache->h = h_all;
  return h_all;
}

AttentionResult attention_forward(const Matrix& h, const AttentionParams& p,
                                  AttentionCache* cache) {
  const Eigen::Index t_steps = h.rows();
  if (t_steps < 1) throw UsageError("attention_forward: empty sequence");
  if (h.cols() != p.score_w.cols()) throw UsageError("attention_forward: shape mismatch");

  Matrix u = ((h * p.score_w.transpose()).rowwise() + p.score_b.transpose())
                 .unaryExpr([](double v) { return std::tanh(v); });
  Vector e = u * p.out_w;

  const double e_max = e.maxCoeff();
  Vector alpha = (e.array() - e_max).exp();
  alpha /= alpha.sum();

  AttentionResult res;
  res.alpha = alpha;
  res.context = h.transpose() * alpha;
  if (cache) {
    cache->u = std::move(u);
    cache->e = std::move(e);
    cache->alpha = res.alpha;
  }
  return res;
}

double model_forward(const Matrix& x, const ModelParams& params, Mode mode,
                     std::uint64_t dropout_seed, ForwardCache* cache) {
  const ModelConfig& c = params.config;
  if (x.cols() != c.input_dim) throw UsageError("model_forward: input width mismatch");

  ForwardCache local;
  ForwardCache& fc = cache ? *cache : local;
  fc.mode = mode;
  fc.layers.resize(params.gru.size());

  Matrix h = gru_layer_forward(x, params.gru[0], &fc.layers[0]);
  for (std::size_t i = 1; i < params.gru.size(); ++i) {
    h = gru_layer_forward(h, params.gru[i], &fc.layers[i]);
  }

  if (mode == Mode::train && c.dropout_rate > 0.0) {
    const double keep = 1.0 - c.dropout_rate;
    std::mt19937_64 rng(dropout_seed);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    fc.dropout_mask.resize(h.rows(), h.cols());
    for (Eigen::Index i = 0; i < h.rows(); ++i) {
      for (Eigen::Index j = 0; j < h.cols(); ++j) {
        fc.dropout_mask(i, j) = unit(rng) < keep ? 1.0 / keep : 0.0;
      }
    }
    fc.dropped = h.cwiseProduct(fc.dropout_mask);
  } else {
    fc.dropout_mask.resize(0, 0);
    fc.dropped = std::move(h);
  }

  if (c.attention) {
    const AttentionResult att = attention_forward(fc.dropped, params.attn, &fc.attn);
    fc.context = att.context;
  } else {
    fc.context = fc.dropped.row(fc.dropped.rows() - 1).transpose();
  }

  fc.a1 = params.dense1_w * fc.context + params.dense1_b;
  fc.z1 = fc.a1.cwiseMax(0.0);
  return (params.dense2_w * fc.z1)(0) + params.dense2_b(0);
}

double mae_loss(const Vector& pred, const Vector& target) {
  if (pred.size() != target.size() || pred.size() < 1) {
    throw UsageError("mae_loss: length mismatch");
  }
  return (pred - target).cwiseAbs().mean();
}

Vector mae_grad(const Vector& pred, const Vector& target) {
  if (pred.size() != target.size() || pred.size() < 1) {
    throw UsageError("mae_grad: length mismatch");
  }
  const double n = static_cast<double>(pred.size());
  return (pred - target).unaryExpr([n](double d) {
    if (d > 0.0) return 1.0 / n;
    if (d < 0.0) return -1.0 / n;
    return 0.0;  // subgradient at ties
  });
}

namespace {

// One GRU layer of backprop through time; accumulates parameter gradients
// and returns the gradient with respect to the layer input.
Matrix gru_layer_backward(const GruParams& p, const GruLayerCache& cache,
                          const Matrix& dh_out, GruParams& grads) {
  const Eigen::Index t_steps = cache.h.rows();
  const Eigen::Index d = p.output_dim();

  Matrix dx(t_steps, p.input_dim());
  Vector carry = Vector::Zero(d);

  for (Eigen::Index t = t_steps - 1; t >= 0; --t) {
    const Vector dh = dh_out.row(t).transpose() + carry;
    const Vector h_prev = t > 0 ? Vector(cache.h.row(t - 1).transpose()) : Vector(Vector::Zero(d));
    const Vector gu = cache.g_u.row(t).transpose();
    const Vector gr = cache.g_r.row(t).transpose();
    const Vector q = cache.q.row(t).transpose();
    const Vector x_t = cache.x.row(t).transpose();

    const Vector dq = dh.cwiseProduct(gu);
    const Vector dgu = dh.cwiseProduct(q - h_prev);
    Vector dh_prev = dh.cwiseProduct(Vector::Ones(d) - gu);

    const Vector daq = dq.cwiseProduct(Vector::Ones(d) - q.cwiseProduct(q));
    grads.w_hx.noalias() += daq * x_t.transpose();
    grads.w_hh.noalias() += daq * (gr.cwiseProduct(h_prev)).transpose();
    grads.b_h += daq;

    const Vector through_hh = p.w_hh.transpose() * daq;
    const Vector dgr = through_hh.cwiseProduct(h_prev);
    dh_prev += through_hh.cwiseProduct(gr);

    const Vector dau = dgu.cwiseProduct(gu).cwiseProduct(Vector::Ones(d) - gu);
    const Vector dar = dgr.cwiseProduct(gr).cwiseProduct(Vector::Ones(d) - gr);

    grads.w_ux.noalias() += dau * x_t.transpose();
    grads.w_uh.noalias() += dau * h_prev.transpose();
    grads.b_u += dau;
    grads.w_rx.noalias() += dar * x_t.transpose();
    grads.w_rh.noalias() += dar * h_prev.transpose();
    grads.b_r += dar;

    dx.row(t) = (p.w_ux.transpose() * dau + p.w_rx.transpose() * dar +
                 p.w_hx.transpose() * daq)
                    .transpose();
    carry = dh_prev + p.w_uh.transpose() * dau + p.w_rh.transpose() * dar;
  }
  return dx;
}

}  // namespace

ModelParams model_backward(const Matrix& x, const ModelParams& params,
                           const ForwardCache& cache, double dloss_dy) {
  (void)x;  // layer inputs come from the cache
  const ModelConfig& c = params.config;
  if (cache.layers.size() != params.gru.size()) {
    throw UsageError("model_backward: cache does not match the model");
  }

  ModelParams grads = zeros_like(params);

  grads.dense2_w = dloss_dy * cache.z1.transpose();
  grads.dense2_b(0) = dloss_dy;
  const Vector dz1 = params.dense2_w.transpose() * dloss_dy;
  const Vector da1 = dz1.cwiseProduct(
      cache.a1.unaryExpr([](double v) { return v > 0.0 ? 1.0 : 0.0; }));
  grads.dense1_w.noalias() = da1 * cache.context.transpose();
  grads.dense1_b = da1;
  const Vector dcontext = params.dense1_w.transpose() * da1;

  const Eigen::Index t_steps = cache.dropped.rows();
  Matrix dh(t_steps, c.hidden_dim);
  if (c.attention) {
    const Vector& alpha = cache.attn.alpha;
    // context = dropped^T alpha
    dh = alpha * dcontext.transpose();
    const Vector dalpha = cache.dropped * dcontext;
    const double mix = alpha.dot(dalpha);
    const Vector de = (alpha.array() * (dalpha.array() - mix)).matrix();
    grads.attn.out_w.noalias() = cache.attn.u.transpose() * de;
    const Matrix du = de * params.attn.out_w.transpose();
    const Matrix dpre =
        du.cwiseProduct(Matrix::Ones(t_steps, c.attn_width) - cache.attn.u.cwiseProduct(cache.attn.u));
    grads.attn.score_w.noalias() = dpre.transpose() * cache.dropped;
    grads.attn.score_b = dpre.colwise().sum().transpose();
    dh.noalias() += dpre * params.attn.score_w;
  } else {
    dh.setZero();
    dh.row(t_steps - 1) = dcontext.transpose();
  }

  if (cache.mode == Mode::train && cache.dropout_mask.size() > 0) {
    dh = dh.cwiseProduct(cache.dropout_mask);
  }

  Matrix dcur = std::move(dh);
  for (std::size_t i = params.gru.size(); i-- > 0;) {
    dcur = gru_layer_backward(params.gru[i], cache.layers[i], dcur, grads.gru[i]);
  }
  return grads;
}

OptimizerState make_optimizer(const ModelParams& params, double rho, double eps) {
  OptimizerState state;
  state.v = zeros_like(params);
  state.rho = rho;
  state.eps = eps;
  return state;
}

void rmsprop_step(ModelParams& params, ModelParams& grads, OptimizerState& state,
                  double lr) {
  auto p = param_arrays(params);
  auto g = param_arrays(grads);
  auto v = param_arrays(state.v);
  if (p.size() != g.size() || p.size() != v.size()) {
    throw UsageError("rmsprop_step: structure mismatch");
  }
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (p[i].size() != g[i].size()) throw UsageError("rmsprop_step: shape mismatch");
    v[i] = state.rho * v[i] + (1.0 - state.rho) * g[i].square();
    p[i] -= lr * g[i] / (v[i].sqrt() + state.eps);
  }
}

Target parse_target(const std::string& name) {
  if (name == "dx") return Target::dx;
  if (name == "dy") return Target::dy;
  throw UsageError("unknown target '" + name + "' (expected dx or dy)");
}

namespace {

double label_of(const segment::LabeledWindow& w, Target target) {
  return target == Target::dx ? w.dx : w.dy;
}

}  // namespace

TrainResult train_model(const segment::DatasetSplit& split, const TrainConfig& config,
                        Target target) {
  if (split.train.empty() || split.val.empty()) {
    throw DataError("training requires non-empty train and validation sets");
  }
  if (config.epochs < 1 || config.batch < 1) throw UsageError("epochs and batch must be >= 1");
  if (!(config.lr_factor > 0.0 && config.lr_factor < 1.0)) {
    throw UsageError("lr factor must lie in (0, 1)");
  }

  TrainResult result;
  result.params = init_params(config.model, config.seed);
  OptimizerState opt = make_optimizer(result.params);
  std::mt19937_64 rng(config.seed + 0x9e3779b97f4a7c15ull);

  double lr = config.lr0;
  double best_val = std::numeric_limits<double>::infinity();
  int since_improve = 0;

  std::vector<std::size_t> order(split.train.size());
  std::iota(order.begin(), order.end(), 0);

  ModelParams grads = zeros_like(result.params);
  auto grad_views = param_arrays(grads);

  for (int epoch = 0; epoch < config.epochs; ++epoch) {
    std::shuffle(order.begin(), order.end(), rng);

    double abs_err_sum = 0.0;
    for (std::size_t begin = 0; begin < order.size();
         begin += static_cast<std::size_t>(config.batch)) {
      const std::size_t end =
          std::min(order.size(), begin + static_cast<std::size_t>(config.batch));
      const double batch_n = static_cast<double>(end - begin);

      for (auto& view : grad_views) view.setZero();
      for (std::size_t i = begin; i < end; ++i) {
        const segment::LabeledWindow& w = split.train[order[i]];
        const std::uint64_t dropout_seed = rng();
        ForwardCache cache;
        const double yhat =
            model_forward(w.x, result.params, Mode::train, dropout_seed, &cache);
        const double err = yhat - label_of(w, target);
        if (!std::isfinite(err)) {
          throw DataError("training diverged: non-finite prediction at epoch " +
                          std::to_string(epoch));
        }
        abs_err_sum += std::abs(err);
        const double dldy = (err > 0.0 ? 1.0 : (err < 0.0 ? -1.0 : 0.0)) / batch_n;
        ModelParams g = model_backward(w.x, result.params, cache, dldy);
        auto g_views = param_arrays(g);
        for (std::size_t k = 0; k < grad_views.size(); ++k) grad_views[k] += g_views[k];
      }
      rmsprop_step(result.params, grads, opt, lr);
    }
    const double train_mae = abs_err_sum / static_cast<double>(split.train.size());

    double val_abs = 0.0;
    for (const segment::LabeledWindow& w : split.val) {
      val_abs += std::abs(predict(result.params, w.x) - label_of(w, target));
    }
    const double val_mae = val_abs / static_cast<double>(split.val.size());
    if (!std::isfinite(train_mae) || !std::isfinite(val_mae)) {
      throw DataError("training diverged: non-finite loss at epoch " + std::to_string(epoch));
    }

    result.history.push_back({epoch, train_mae, val_mae, lr});

    if (val_mae < best_val - config.improve_tol) {
      best_val = val_mae;
      since_improve = 0;
    } else {
      ++since_improve;
      if (since_improve > config.lr_patience) {
        lr *= config.lr_factor;
        since_improve = 0;
      }
    }
  }
  return result;
}

double predict(const ModelParams& params, const Matrix& window) {
  return model_forward(window, params, Mode::infer);
}

void save_model(const ModelParams& params, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw DataError("cannot open for writing: " + path.string());

  const ModelConfig& c = params.config;
  out << "pedtrack-model v1\n";
  out << "input_dim=" << c.input_dim << " hidden_dim=" << c.hidden_dim
      << " depth=" << c.depth << " attention=" << (c.attention ? 1 : 0)
      << " attn_width=" << c.attn_width << " dense_width=" << c.dense_width
      << " dropout_rate=" << format_double(c.dropout_rate) << '\n';

  visit_params(const_cast<ModelParams&>(params), [&out](const std::string& name, auto& m) {
    const Eigen::Index rows = m.rows();
    const Eigen::Index cols = m.cols();
    out << "matrix " << name << ' ' << rows << ' ' << cols << '\n';
    for (Eigen::Index i = 0; i < rows; ++i) {
      for (Eigen::Index j = 0; j < cols; ++j) {
        if (j) out << ',';
        out << format_double(m(i, j));
      }
      out << '\n';
    }
  });
  out << "end\n";
  if (!out) throw DataError("write failed: " + path.string());
}

ModelParams load_model(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open for reading: " + path.string());

  std::string line;
  std::size_t lineno = 1;
  if (!std::getline(in, line) || line.rfind("pedtrack-model v1", 0) != 0) {
    throw ParseError("not a pedtrack model file", lineno);
  }
  ++lineno;
  if (!std::getline(in, line)) throw ParseError("missing model config", lineno);

  ModelConfig cfg;
  {
    std::istringstream cfg_in(line);
    std::string kv;
    while (cfg_in >> kv) {
      const auto eq = kv.find('=');
      if (eq == std::string::npos) throw ParseError("malformed config entry", lineno);
      const std::string key = kv.substr(0, eq);
      const std::string value = kv.substr(eq + 1);
      if (key == "input_dim") cfg.input_dim = std::stoi(value);
      else if (key == "hidden_dim") cfg.hidden_dim = std::stoi(value);
      else if (key == "depth") cfg.depth = std::stoi(value);
      else if (key == "attention") cfg.attention = value != "0";
      else if (key == "attn_width") cfg.attn_width = std::stoi(value);
      else if (key == "dense_width") cfg.dense_width = std::stoi(value);
      else if (key == "dropout_rate") cfg.dropout_rate = parse_double(value, lineno);
      else throw ParseError("unknown config key '" + key + "'", lineno);
    }
  }

  ModelParams params = make_structure(cfg);
  bool failed = false;
  std::string failure;
  visit_params(params, [&](const std::string& name, auto& m) {
    if (failed) return;
    ++lineno;
    if (!std::getline(in, line)) {
      failed = true;
      failure = "truncated model file before " + name;
      return;
    }
    std::istringstream hdr(line);
    std::string tag, got_name;
    Eigen::Index rows = 0, cols = 0;
    hdr >> tag >> got_name >> rows >> cols;
    if (tag != "matrix" || got_name != name || rows != m.rows() || cols != m.cols()) {
      failed = true;
      failure = "shape or name mismatch at " + name;
      return;
    }
    for (Eigen::Index i = 0; i < rows; ++i) {
      ++lineno;
      if (!std::getline(in, line)) {
        failed = true;
        failure = "truncated weights for " + name;
        return;
      }
      if (!line.empty() && line.back() == '\r') line.pop_back();
      std::size_t pos = 0;
      for (Eigen::Index j = 0; j < cols; ++j) {
        const std::size_t comma = line.find(',', pos);
        const bool last = (j + 1 == cols);
        if (last != (comma == std::string::npos)) {
          failed = true;
          failure = "wrong column count in " + name;
          return;
        }
        m(i, j) = parse_double(
            std::string_view(line).substr(pos, last ? std::string::npos : comma - pos),
            lineno);
        pos = comma + 1;
      }
    }
  });
  if (failed) throw ParseError(failure, lineno);
  if (!std::getline(in, line) || line != "end") {
    throw ParseError("truncated model file (missing end marker)", lineno + 1);
  }
  return params;
}

void write_history(const std::vector<EpochStats>& history,
                   const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw DataError("cannot open for writing: " + path.string());
  out << "epoch,train_mae,val_mae,lr\n";
  for (const EpochStats& e : history) {
    out << e.epoch << ',' << format_double(e.train_mae) << ','
        << format_double(e.val_mae) << ',' << format_double(e.lr) << '\n';
  }
}

std::vector<EpochStats> read_history(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open for reading: " + path.string());
  std::vector<EpochStats> history;
  std::string line;
  std::size_t lineno = 1;
  if (!std::getline(in, line)) return history;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::istringstream row(line);
    std::string field;
    EpochStats e;
    if (!std::getline(row, field, ',')) throw ParseError("bad history row", lineno);
    e.epoch = std::stoi(field);
    if (!std::getline(row, field, ',')) throw ParseError("bad history row", lineno);
    e.train_mae = parse_double(field, lineno);
    if (!std::getline(row, field, ',')) throw ParseError("bad history row", lineno);
    e.val_mae = parse_double(field, lineno);
    if (!std::getline(row, field, ',')) throw ParseError("bad history row", lineno);
    e.lr = parse_double(field, lineno);
    history.push_back(e);
  }
  return history;
}

}  // namespace pedtrack::nn
