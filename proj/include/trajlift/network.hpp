// Copyright 2026 The trajlift Authors
// SPDX-License-Identifier: Apache-2.0

// Trajectory-coefficient regression network.
//
//   input F x 2J
//     -> feature block: feat_layers x (Linear-BatchNorm-ReLU-Dropout), shared
//        across frames, batch norm over (sample, frame) rows
//     -> temporal average pooling (odd window, replicate edges)
//     -> fixed projection: each of the C feature trajectories is mapped to K
//        coefficients (2/F) * Theta^T * x, concatenated to C*K values
//     -> regression block: reg_layers x (Linear-BatchNorm-ReLU-Dropout),
//        batch norm over samples
//     -> linear head to K*3J coefficients A (row-major, A(k, c) at k*3J + c)
//     -> poses = Theta * A
//
// With dense connections each linear layer (including the head) reads the
// concatenation of the block input and every earlier layer output in the
// block. Gradients are derived by hand; see backward().

#pragma once

#include "trajlift/bases.hpp"
#include "trajlift/data_io.hpp"
#include "trajlift/motion.hpp"

#include <cstdint>
#include <functional>
#include <map>
#include <random>
#include <span>
#include <string>
#include <vector>

namespace trajlift {

struct NetworkConfig {
  Eigen::Index frames = 50;
  Eigen::Index bases = 8;
  Eigen::Index joints = 17;
  int feat_layers = 4;
  Eigen::Index feat_width = 256;
  double feat_dropout = 0.25;
  int reg_layers = 5;
  Eigen::Index reg_width = 1024;
  double reg_dropout = 0.5;
  Eigen::Index pool_window = 5;
  bool dense_connections = true;
  double bn_momentum = 0.1;
  double bn_epsilon = 1e-5;
  std::uint64_t seed = 0;

  // Throws ParameterError describing the first violated constraint.
  void validate() const;
};

enum class Mode { kTrain, kEval };

// Linear layer followed by batch-norm scale/shift.
struct LinearBn {
  Matrix weight;  // out x in
  Vector bias;
  Vector gamma;
  Vector beta;
};

struct BnStats {
  Vector running_mean;
  Vector running_var;
};

struct Linear {
  Matrix weight;
  Vector bias;
};

struct NetworkParams {
  NetworkConfig config;
  std::vector<LinearBn> feature;
  std::vector<LinearBn> regression;
  std::vector<BnStats> feature_stats;
  std::vector<BnStats> regression_stats;
  Linear head;
  // The head's raw output is mapped to coefficients as mean + std * raw.
  // Identity (0, 1) until training fits them to the target coefficients.
  Vector coef_mean;
  Vector coef_std;
  Mode mode = Mode::kEval;
  // Bumped on every parameter update; caches remember the version they saw.
  std::uint64_t version = 0;
};

// Same tree as the learnable part of NetworkParams.
struct GradientSet {
  std::vector<LinearBn> feature;
  std::vector<LinearBn> regression;
  Linear head;
};

// Flat view of one tensor for optimizers, serialization and checks.
struct TensorView {
  std::string name;
  double* data;
  Eigen::Index size;
};

// Learnable tensors in declared order: feature layers, regression layers,
// head; within a layer weight, bias, gamma, beta.
std::vector<TensorView> learnable_tensors(NetworkParams& params);
std::vector<TensorView> gradient_tensors(GradientSet& grads);
// Learnables followed by running statistics and coefficient scaling.
std::vector<TensorView> all_tensors(NetworkParams& params);

NetworkParams init_network(const NetworkConfig& config);

Matrix avg_pool_temporal(const Matrix& features, Eigen::Index window);
// Adjoint of avg_pool_temporal.
Matrix avg_pool_temporal_backward(const Matrix& grad_out, Eigen::Index window);

// The fixed projection layer: F x C feature trajectories to K x C
// coefficients, (2/F) * Theta^T * features.
Matrix trajectory_transform(const Matrix& features, const TrajectoryBasis& basis);
// Gradient w.r.t. the features given the gradient w.r.t. the coefficients:
// (2/F) * Theta * grad.
Matrix trajectory_transform_backward(const Matrix& grad,
                                     const TrajectoryBasis& basis);

struct LayerCache {
  Matrix input;     // concatenated layer input
  Matrix x_hat;     // normalized pre-activation
  Vector inv_std;
  Vector batch_mean;
  Vector batch_var;  // biased
  Matrix pre_relu;   // gamma * x_hat + beta
  Matrix mask;       // dropout mask incl. 1/(1-p) scale; empty when off
};

struct ForwardCache {
  std::uint64_t params_version = 0;
  Mode mode = Mode::kEval;
  Eigen::Index batch = 0;
  std::vector<LayerCache> feature;
  std::vector<Matrix> feature_out;  // per-layer outputs, (B*F) x width
  Matrix pooled;                    // (B*F) x C
  Matrix trajectory_coeffs;         // B x (C*K), channel-major
  std::vector<LayerCache> regression;
  std::vector<Matrix> regression_out;
  Matrix head_input;
  Matrix coeffs;  // B x (K*3J)
  std::vector<Matrix> poses;
};

struct ForwardResult {
  std::vector<Matrix> coeffs;  // each K x 3J
  std::vector<Matrix> poses;   // each F x 3J
  ForwardCache cache;
};

// Runs in params.mode. In train mode batch statistics are used and dropout
// masks are drawn from dropout_rng (no dropout when it is null).
ForwardResult forward(const NetworkParams& params, const TrajectoryBasis& basis,
                      std::span<const Matrix> inputs2d,
                      std::mt19937_64* dropout_rng = nullptr);
ForwardResult forward(const NetworkParams& params, const TrajectoryBasis& basis,
                      const Matrix& input2d,
                      std::mt19937_64* dropout_rng = nullptr);

// (1 / (N F)) * sum_i |pred_i - gt_i|_1, entries summed over all 3J columns.
double l1_loss(std::span<const Matrix> pred, std::span<const Matrix> gt);

GradientSet backward(const NetworkParams& params, const TrajectoryBasis& basis,
                     const ForwardCache& cache, std::span<const Matrix> gt);

// Moves running statistics toward the batch statistics stored in a
// train-mode cache.
void update_running_stats(NetworkParams& params, const ForwardCache& cache);

struct TrainConfig {
  double lr0 = 1e-4;
  int epochs = 100;
  std::vector<int> decay_epochs{60, 85};
  double shrink = 0.1;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double adam_epsilon = 1e-8;
  int batch_size = 64;
  bool flip_augment = true;
  double flip_probability = 0.5;
  // Fit coef_mean/coef_std to the training targets before the first step.
  bool standardize_targets = true;
  std::uint64_t seed = 0;

  void validate() const;
};

struct AdamState {
  std::uint64_t step = 0;
  std::vector<Vector> m;
  std::vector<Vector> v;
};

void adam_step(NetworkParams& params, GradientSet& grads, AdamState& state,
               double lr, const TrainConfig& config);

double lr_at_epoch(const TrainConfig& config, int epoch);

struct EpochLog {
  int epoch;
  double lr;
  double loss;
};

struct TrainResult {
  NetworkParams params;  // eval mode
  std::vector<EpochLog> log;
};

using EpochCallback = std::function<void(const EpochLog&)>;

TrainResult train(NetworkParams params, const TrajectoryBasis& basis,
                  std::span<const LiftingSample> dataset,
                  const SkeletonConfig& skeleton, const TrainConfig& config,
                  const EpochCallback& on_epoch = {});

// Applies recognised keys from a key=value map; unknown keys throw
// ParameterError.
void apply_config(const std::map<std::string, std::string>& values,
                  NetworkConfig& network, TrainConfig& training);

}  // namespace trajlift
