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

#include "pedtrack/segment.hpp"
#include "pedtrack/types.hpp"

namespace pedtrack::nn {

/// One gated recurrent cell: update gate u, reset gate r, candidate h.
/// Input matrices are d_out x d_in, recurrent matrices d_out x d_out,
/// biases d_out.
struct GruParams {
  Matrix w_ux, w_uh;
  Matrix w_rx, w_rh;
  Matrix w_hx, w_hh;
  Vector b_u, b_r, b_h;

  Eigen::Index input_dim() const { return w_ux.cols(); }
  Eigen::Index output_dim() const { return w_ux.rows(); }
};

/// Scoring function a(.) of the feed-forward attention: one hidden tanh
/// layer of width k, then a scalar projection per time step.
struct AttentionParams {
  Matrix score_w;  // k x d
  Vector score_b;  // k
  Vector out_w;    // k
};

struct ModelConfig {
  int input_dim = 12;
  int hidden_dim = 256;
  int depth = 2;          // stacked GRU layers
  bool attention = true;  // false: take the last hidden state instead
  int attn_width = 64;
  int dense_width = 64;
  double dropout_rate = 0.25;
};

/// Full regressor stack: `depth` GRUs, dropout, attention (optional),
/// dense ReLU layer, linear output.
struct ModelParams {
  ModelConfig config;
  std::vector<GruParams> gru;
  AttentionParams attn;
  Matrix dense1_w;  // dense_width x hidden
  Vector dense1_b;
  Matrix dense2_w;  // 1 x dense_width
  Vector dense2_b;  // 1
};

/// Scaled uniform init, biases zero. Deterministic in the seed.
ModelParams init_params(const ModelConfig& config, std::uint64_t seed);

/// Same structure as `like`, all entries zero (gradient/optimizer shape).
ModelParams zeros_like(const ModelParams& like);

/// Flat elementwise views over every parameter, in a fixed order shared
/// by structurally identical ModelParams.
std::vector<Eigen::Map<Eigen::ArrayXd>> param_arrays(ModelParams& params);

struct GruStepResult {
  Vector h;
  Vector g_u, g_r, q;
};

/// One recurrence step of Eqs:
///   g_u = sigma(W_ux x + W_uh h_prev + b_u)
///   g_r = sigma(W_rx x + W_rh h_prev + b_r)
///   q   = tanh(W_hx x + W_hh (g_r o h_prev) + b_h)
///   h   = (1 - g_u) o h_prev + g_u o q
GruStepResult gru_cell_step(const Vector& x, const Vector& h_prev, const GruParams& p);

struct GruLayerCache {
  Matrix x;  // T x d_in
  Matrix h;  // T x d_out
  Matrix g_u, g_r, q;  // T x d_out
};

/// Runs the cell over all T rows with h_0 = 0; returns T x d_out outputs.
Matrix gru_layer_forward(const Matrix& x, const GruParams& p, GruLayerCache* cache = nullptr);

struct AttentionResult {
  Vector context;  // d
  Vector alpha;    // T, sums to 1
};

struct AttentionCache {
  Matrix u;      // T x k, tanh activations
  Vector e;      // T, scores
  Vector alpha;  // T
};

/// e_t = out_w . tanh(score_w h_t + score_b); alpha = softmax(e) with
/// max subtraction; context = sum_t alpha_t h_t.
AttentionResult attention_forward(const Matrix& h, const AttentionParams& p,
                                  AttentionCache* cache = nullptr);

enum class Mode { train, infer };

struct ForwardCache {
  std::vector<GruLayerCache> layers;
  Matrix dropout_mask;    // empty in infer mode
  Matrix dropped;         // attention input
  AttentionCache attn;
  Vector context;
  Vector a1;              // dense1 pre-activation
  Vector z1;              // dense1 output (ReLU)
  Mode mode = Mode::infer;
};

/// One scalar prediction per window. Train mode applies inverted dropout
/// (Bernoulli keep 1-rate, scaled by 1/keep) between the last GRU and the
/// attention layer; infer mode is deterministic.
double model_forward(const Matrix& x, const ModelParams& params, Mode mode,
                     std::uint64_t dropout_seed = 0, ForwardCache* cache = nullptr);

/// Mean of |pred - target|; the subgradient at ties is taken as 0.
double mae_loss(const Vector& pred, const Vector& target);
Vector mae_grad(const Vector& pred, const Vector& target);

/// Exact reverse-mode gradients through the whole stack, including
/// backprop through time over every step and through the softmax.
ModelParams model_backward(const Matrix& x, const ModelParams& params,
                           const ForwardCache& cache, double dloss_dy);

struct OptimizerState {
  ModelParams v;  // running mean of squared gradients
  double rho = 0.9;
  double eps = 1e-8;
};

OptimizerState make_optimizer(const ModelParams& params, double rho = 0.9,
                              double eps = 1e-8);

/// v <- rho v + (1-rho) g^2;  theta <- theta - lr g / (sqrt(v) + eps).
void rmsprop_step(ModelParams& params, ModelParams& grads, OptimizerState& state,
                  double lr);

enum class Target { dx, dy };
Target parse_target(const std::string& name);

struct TrainConfig {
  int epochs = 60;
  int batch = 5;
  double lr0 = 1e-3;
  double lr_factor = 0.2;
  int lr_patience = 10;       // epochs without improvement before decay
  double improve_tol = 1e-4;  // val MAE must drop by this to count
  std::uint64_t seed = 0;
  ModelConfig model;
};

struct EpochStats {
  int epoch = 0;
  double train_mae = 0.0;
  double val_mae = 0.0;
  double lr = 0.0;
};

struct TrainResult {
  ModelParams params;
  std::vector<EpochStats> history;
};

/// Shuffled mini-batch training with the plateau LR schedule; NaN loss
/// aborts with a diagnostic. Bitwise deterministic for a fixed seed.
TrainResult train_model(const segment::DatasetSplit& split, const TrainConfig& config,
                        Target target);

double predict(const ModelParams& params, const Matrix& window);

// Versioned text format: header, config, shape table, row-major weights.
void save_model(const ModelParams& params, const std::filesystem::path& path);
ModelParams load_model(const std::filesystem::path& path);

void write_history(const std::vector<EpochStats>& history, const std::filesystem::path& path);
std::vector<EpochStats> read_history(const std::filesystem::path& path);

}  // namespace pedtrack::nn
