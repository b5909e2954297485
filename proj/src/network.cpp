// Copyright 2026 The trajlift Authors
// SPDX-License-Identifier: Apache-2.0

#include "trajlift/network.hpp"

#include "trajlift/error.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

namespace trajlift {

void NetworkConfig::validate() const {
  auto fail = [](const std::string& msg) { throw ParameterError(msg); };
  if (frames < 1) fail("frames must be >= 1");
  if (bases < 1 || bases > frames) fail("bases must be in [1, frames]");
  if (joints < 1) fail("joints must be >= 1");
  if (feat_layers < 1 || reg_layers < 1) fail("layer counts must be >= 1");
  if (feat_width < 1 || reg_width < 1) fail("layer widths must be >= 1");
  if (!(feat_dropout >= 0.0 && feat_dropout < 1.0) ||
      !(reg_dropout >= 0.0 && reg_dropout < 1.0))
    fail("dropout rates must be in [0, 1)");
  if (pool_window < 1 || pool_window % 2 == 0) fail("pool_window must be odd");
  if (pool_window > frames) fail("pool_window must not exceed frames");
  if (!(bn_momentum > 0.0 && bn_momentum <= 1.0))
    fail("bn_momentum must be in (0, 1]");
  if (!(bn_epsilon > 0.0)) fail("bn_epsilon must be positive");
}

void TrainConfig::validate() const {
  auto fail = [](const std::string& msg) { throw ParameterError(msg); };
  if (!(lr0 > 0.0)) fail("lr0 must be positive");
  if (epochs < 1) fail("epochs must be >= 1");
  for (int e : decay_epochs)
    if (e < 0) fail("decay epochs must be non-negative");
  if (!(shrink > 0.0)) fail("shrink must be positive");
  if (!(beta1 >= 0.0 && beta1 < 1.0) || !(beta2 >= 0.0 && beta2 < 1.0))
    fail("Adam betas must be in [0, 1)");
  if (!(adam_epsilon > 0.0)) fail("adam_epsilon must be positive");
  if (batch_size < 1) fail("batch_size must be >= 1");
  if (!(flip_probability >= 0.0 && flip_probability <= 1.0))
    fail("flip_probability must be in [0, 1]");
}

namespace {

Eigen::Index layer_input_width(Eigen::Index block_in, Eigen::Index width,
                               int index, bool dense) {
  if (!dense) return index == 0 ? block_in : width;
  return block_in + width * index;
}

void init_linear(Matrix& w, Vector& b, Eigen::Index out, Eigen::Index in,
                 std::mt19937_64& rng) {
  const double bound = 1.0 / std::sqrt(static_cast<double>(in));
  std::uniform_real_distribution<double> dist(-bound, bound);
  w.resize(out, in);
  for (Eigen::Index c = 0; c < in; ++c)
    for (Eigen::Index r = 0; r < out; ++r) w(r, c) = dist(rng);
  b = Vector::Zero(out);
}

void init_block(std::vector<LinearBn>& layers, std::vector<BnStats>& stats,
                int count, Eigen::Index block_in, Eigen::Index width,
                bool dense, std::mt19937_64& rng) {
  layers.resize(count);
  stats.resize(count);
  for (int i = 0; i < count; ++i) {
    auto& l = layers[i];
    init_linear(l.weight, l.bias, width,
                layer_input_width(block_in, width, i, dense), rng);
    l.gamma = Vector::Ones(width);
    l.beta = Vector::Zero(width);
    stats[i].running_mean = Vector::Zero(width);
    stats[i].running_var = Vector::Ones(width);
  }
}

Eigen::Index feature_input_width(const NetworkConfig& c) { return 2 * c.joints; }
Eigen::Index regression_input_width(const NetworkConfig& c) {
  return c.feat_width * c.bases;
}
Eigen::Index output_width(const NetworkConfig& c) { return 3 * c.joints * c.bases; }

void push_linear_bn(std::vector<TensorView>& out, const std::string& prefix,
                    LinearBn& l) {
  out.push_back({prefix + ".weight", l.weight.data(), l.weight.size()});
  out.push_back({prefix + ".bias", l.bias.data(), l.bias.size()});
  out.push_back({prefix + ".gamma", l.gamma.data(), l.gamma.size()});
  out.push_back({prefix + ".beta", l.beta.data(), l.beta.size()});
}

std::vector<TensorView> tensor_tree(std::vector<LinearBn>& feature,
                                    std::vector<LinearBn>& regression,
                                    Linear& head) {
  std::vector<TensorView> out;
  for (std::size_t i = 0; i < feature.size(); ++i)
    push_linear_bn(out, "feature." + std::to_string(i), feature[i]);
  for (std::size_t i = 0; i < regression.size(); ++i)
    push_linear_bn(out, "regression." + std::to_string(i), regression[i]);
  out.push_back({"head.weight", head.weight.data(), head.weight.size()});
  out.push_back({"head.bias", head.bias.data(), head.bias.size()});
  return out;
}

}  // namespace

std::vector<TensorView> learnable_tensors(NetworkParams& params) {
  return tensor_tree(params.feature, params.regression, params.head);
}

std::vector<TensorView> gradient_tensors(GradientSet& grads) {
  return tensor_tree(grads.feature, grads.regression, grads.head);
}

std::vector<TensorView> all_tensors(NetworkParams& params) {
  auto out = learnable_tensors(params);
  auto stats = [&](const std::string& prefix, std::vector<BnStats>& s) {
    for (std::size_t i = 0; i < s.size(); ++i) {
      const auto p = prefix + "." + std::to_string(i);
      out.push_back({p + ".running_mean", s[i].running_mean.data(),
                     s[i].running_mean.size()});
      out.push_back({p + ".running_var", s[i].running_var.data(),
                     s[i].running_var.size()});
    }
  };
  stats("feature", params.feature_stats);
  stats("regression", params.regression_stats);
  out.push_back({"coef_mean", params.coef_mean.data(), params.coef_mean.size()});
  out.push_back({"coef_std", params.coef_std.data(), params.coef_std.size()});
  return out;
}

NetworkParams init_network(const NetworkConfig& config) {
  config.validate();
  NetworkParams p;
  p.config = config;
  std::mt19937_64 rng(config.seed);
  init_block(p.feature, p.feature_stats, config.feat_layers,
             feature_input_width(config), config.feat_width,
             config.dense_connections, rng);
  init_block(p.regression, p.regression_stats, config.reg_layers,
             regression_input_width(config), config.reg_width,
             config.dense_connections, rng);
  const Eigen::Index head_in =
      config.dense_connections
          ? regression_input_width(config) + config.reg_width * config.reg_layers
          : config.reg_width;
  init_linear(p.head.weight, p.head.bias, output_width(config), head_in, rng);
  p.coef_mean = Vector::Zero(output_width(config));
  p.coef_std = Vector::Ones(output_width(config));
  p.mode = Mode::kEval;
  return p;
}

Matrix avg_pool_temporal(const Matrix& features, Eigen::Index window) {
  const Eigen::Index frames = features.rows();
  if (window < 1 || window % 2 == 0)
    throw ParameterError("pooling window must be odd and positive");
  if (window > frames)
    throw ParameterError("pooling window " + std::to_string(window) +
                         " exceeds " + std::to_string(frames) + " frames");
  const Eigen::Index half = window / 2;
  Matrix out = Matrix::Zero(frames, features.cols());
  for (Eigen::Index f = 0; f < frames; ++f)
    for (Eigen::Index d = -half; d <= half; ++d)
      out.row(f) += features.row(std::clamp<Eigen::Index>(f + d, 0, frames - 1));
  return out / static_cast<double>(window);
}

Matrix avg_pool_temporal_backward(const Matrix& grad_out, Eigen::Index window) {
  const Eigen::Index frames = grad_out.rows();
  if (window < 1 || window % 2 == 0 || window > frames)
    throw ParameterError("invalid pooling window");
  const Eigen::Index half = window / 2;
  Matrix out = Matrix::Zero(frames, grad_out.cols());
  for (Eigen::Index f = 0; f < frames; ++f)
    for (Eigen::Index d = -half; d <= half; ++d)
      out.row(std::clamp<Eigen::Index>(f + d, 0, frames - 1)) += grad_out.row(f);
  return out / static_cast<double>(window);
}

Matrix trajectory_transform(const Matrix& features,
                            const TrajectoryBasis& basis) {
  if (features.rows() != basis.frames())
    throw DimensionError("feature trajectories have " +
                         std::to_string(features.rows()) + " frames, basis " +
                         std::to_string(basis.frames()));
  return (2.0 / static_cast<double>(basis.frames())) *
         (basis.theta().transpose() * features);
}

Matrix trajectory_transform_backward(const Matrix& grad,
                                     const TrajectoryBasis& basis) {
  if (grad.rows() != basis.count())
    throw DimensionError("coefficient gradient rows do not match basis count");
  return (2.0 / static_cast<double>(basis.frames())) * (basis.theta() * grad);
}

namespace {

Matrix concat(const Matrix& block_in, const std::vector<Matrix>& outs,
              std::size_t count) {
  Eigen::Index cols = block_in.cols();
  for (std::size_t i = 0; i < count; ++i) cols += outs[i].cols();
  Matrix m(block_in.rows(), cols);
  m.leftCols(block_in.cols()) = block_in;
  Eigen::Index at = block_in.cols();
  for (std::size_t i = 0; i < count; ++i) {
    m.middleCols(at, outs[i].cols()) = outs[i];
    at += outs[i].cols();
  }
  return m;
}

Matrix layer_input(const Matrix& block_in, const std::vector<Matrix>& outs,
                   std::size_t index, bool dense) {
  if (!dense) return index == 0 ? block_in : outs[index - 1];
  return concat(block_in, outs, index);
}

Matrix layer_forward(const LinearBn& p, const BnStats& stats, Matrix input,
                     Mode mode, double eps, double dropout,
                     std::mt19937_64* rng, LayerCache& cache) {
  Matrix z = input * p.weight.transpose();
  z.rowwise() += p.bias.transpose();
  const double n = static_cast<double>(z.rows());
  if (mode == Mode::kTrain) {
    cache.batch_mean = z.colwise().mean().transpose();
    z.rowwise() -= cache.batch_mean.transpose();
    cache.batch_var = z.array().square().colwise().sum().transpose() / n;
    cache.inv_std = (cache.batch_var.array() + eps).rsqrt();
  } else {
    z.rowwise() -= stats.running_mean.transpose();
    cache.inv_std = (stats.running_var.array() + eps).rsqrt();
  }
  cache.x_hat = z.array().rowwise() * cache.inv_std.transpose().array();
  cache.pre_relu =
      (cache.x_hat.array().rowwise() * p.gamma.transpose().array()).rowwise() +
      p.beta.transpose().array();
  Matrix out = cache.pre_relu.cwiseMax(0.0);
  if (mode == Mode::kTrain && rng != nullptr && dropout > 0.0) {
    std::bernoulli_distribution keep(1.0 - dropout);
    const double scale = 1.0 / (1.0 - dropout);
    cache.mask.resize(out.rows(), out.cols());
    for (Eigen::Index c = 0; c < out.cols(); ++c)
      for (Eigen::Index r = 0; r < out.rows(); ++r)
        cache.mask(r, c) = keep(*rng) ? scale : 0.0;
    out.array() *= cache.mask.array();
  } else {
    cache.mask.resize(0, 0);
  }
  cache.input = std::move(input);
  return out;
}

// Accumulates parameter gradients into g and returns the gradient w.r.t. the
// input columns [skip, in).
Matrix layer_backward(const LinearBn& p, const LayerCache& c, Mode mode,
                      Matrix d_out, Eigen::Index skip, LinearBn& g) {
  if (c.mask.size() > 0) d_out.array() *= c.mask.array();
  d_out.array() *= (c.pre_relu.array() > 0.0).cast<double>();
  g.gamma = (d_out.array() * c.x_hat.array()).colwise().sum().transpose();
  g.beta = d_out.colwise().sum().transpose();
  Matrix dx_hat = d_out.array().rowwise() * p.gamma.transpose().array();
  Matrix dz;
  if (mode == Mode::kTrain) {
    const double n = static_cast<double>(dx_hat.rows());
    const Vector sum = dx_hat.colwise().sum().transpose();
    const Vector dot =
        (dx_hat.array() * c.x_hat.array()).colwise().sum().transpose();
    dz = (n * dx_hat.array() - (c.x_hat.array().rowwise() * dot.transpose().array()))
             .rowwise() -
         sum.transpose().array();
    dz.array().rowwise() *= (c.inv_std.array() / n).transpose();
  } else {
    dz = dx_hat.array().rowwise() * c.inv_std.transpose().array();
  }
  g.weight = dz.transpose() * c.input;
  g.bias = dz.colwise().sum().transpose();
  const Eigen::Index in = p.weight.cols();
  if (skip >= in) return Matrix(dz.rows(), 0);
  return dz * p.weight.rightCols(in - skip);
}

// Adds the columns of d_in (covering the layer input from column `skip`) to
// the per-output gradient accumulators. Index 0 is the block input.
void scatter_input_grad(const Matrix& d_in, Eigen::Index skip,
                        std::size_t layer, bool dense,
                        std::vector<Matrix>& d_outs) {
  if (!dense) {
    if (d_in.cols() > 0) d_outs[layer] += d_in;
    return;
  }
  Eigen::Index at = 0;
  for (std::size_t i = 0; i <= layer; ++i) {
    const Eigen::Index w = d_outs[i].cols();
    if (at >= skip) d_outs[i] += d_in.middleCols(at - skip, w);
    at += w;
  }
}

}  // namespace

ForwardResult forward(const NetworkParams& params, const TrajectoryBasis& basis,
                      std::span<const Matrix> inputs2d,
                      std::mt19937_64* dropout_rng) {
  const NetworkConfig& cfg = params.config;
  const Eigen::Index frames = cfg.frames;
  const Eigen::Index k = cfg.bases;
  const Eigen::Index batch = static_cast<Eigen::Index>(inputs2d.size());
  if (batch == 0) throw DimensionError("forward needs at least one sequence");
  if (basis.frames() != frames || basis.count() != k)
    throw DimensionError("basis is " + std::to_string(basis.frames()) + "x" +
                         std::to_string(basis.count()) + ", network expects " +
                         std::to_string(frames) + "x" + std::to_string(k));

  ForwardResult res;
  ForwardCache& cache = res.cache;
  cache.params_version = params.version;
  cache.mode = params.mode;
  cache.batch = batch;

  Matrix x0(batch * frames, feature_input_width(cfg));
  for (Eigen::Index b = 0; b < batch; ++b) {
    const Matrix& in = inputs2d[b];
    if (in.rows() != frames || in.cols() != feature_input_width(cfg))
      throw DimensionError("input is " + std::to_string(in.rows()) + "x" +
                           std::to_string(in.cols()) + ", expected " +
                           std::to_string(frames) + "x" +
                           std::to_string(feature_input_width(cfg)));
    x0.middleRows(b * frames, frames) = in;
  }

  const bool dense = cfg.dense_connections;
  cache.feature.resize(params.feature.size());
  cache.feature_out.resize(params.feature.size());
  for (std::size_t i = 0; i < params.feature.size(); ++i)
    cache.feature_out[i] = layer_forward(
        params.feature[i], params.feature_stats[i],
        layer_input(x0, cache.feature_out, i, dense), params.mode,
        cfg.bn_epsilon, cfg.feat_dropout, dropout_rng, cache.feature[i]);

  const Matrix& feat = cache.feature_out.back();
  const Eigen::Index channels = feat.cols();
  cache.pooled.resize(feat.rows(), channels);
  cache.trajectory_coeffs.resize(batch, channels * k);
  for (Eigen::Index b = 0; b < batch; ++b) {
    cache.pooled.middleRows(b * frames, frames) =
        avg_pool_temporal(feat.middleRows(b * frames, frames), cfg.pool_window);
    // K x C; column-major flattening gives the channel-major layout.
    const Matrix t =
        trajectory_transform(cache.pooled.middleRows(b * frames, frames), basis);
    cache.trajectory_coeffs.row(b) =
        Eigen::Map<const Eigen::RowVectorXd>(t.data(), t.size());
  }

  const Matrix& u0 = cache.trajectory_coeffs;
  cache.regression.resize(params.regression.size());
  cache.regression_out.resize(params.regression.size());
  for (std::size_t i = 0; i < params.regression.size(); ++i)
    cache.regression_out[i] = layer_forward(
        params.regression[i], params.regression_stats[i],
        layer_input(u0, cache.regression_out, i, dense), params.mode,
        cfg.bn_epsilon, cfg.reg_dropout, dropout_rng, cache.regression[i]);

  cache.head_input = dense ? concat(u0, cache.regression_out,
                                    cache.regression_out.size())
                           : cache.regression_out.back();
  Matrix raw = cache.head_input * params.head.weight.transpose();
  raw.rowwise() += params.head.bias.transpose();
  cache.coeffs = (raw.array().rowwise() * params.coef_std.transpose().array())
                     .rowwise() +
                 params.coef_mean.transpose().array();

  const Eigen::Index width = 3 * cfg.joints;
  res.coeffs.reserve(batch);
  res.poses.reserve(batch);
  for (Eigen::Index b = 0; b < batch; ++b) {
    const Eigen::RowVectorXd row = cache.coeffs.row(b);
    Matrix a = Eigen::Map<const Matrix>(row.data(), width, k).transpose();
    res.poses.push_back(basis.theta() * a);
    res.coeffs.push_back(std::move(a));
  }
  for (const auto& p : res.poses)
    if (!p.allFinite()) throw NumericError("network produced non-finite poses");
  cache.poses = res.poses;
  return res;
}

ForwardResult forward(const NetworkParams& params, const TrajectoryBasis& basis,
                      const Matrix& input2d, std::mt19937_64* dropout_rng) {
  return forward(params, basis, std::span<const Matrix>(&input2d, 1),
                 dropout_rng);
}

double l1_loss(std::span<const Matrix> pred, std::span<const Matrix> gt) {
  if (pred.size() != gt.size() || pred.empty())
    throw DimensionError("loss needs equally many nonzero predictions and targets");
  double sum = 0.0;
  for (std::size_t i = 0; i < pred.size(); ++i) {
    if (pred[i].rows() != gt[i].rows() || pred[i].cols() != gt[i].cols() ||
        pred[i].rows() != pred[0].rows())
      throw DimensionError("prediction/target shape mismatch at sequence " +
                           std::to_string(i));
    sum += (pred[i] - gt[i]).cwiseAbs().sum();
  }
  return sum / (static_cast<double>(pred.size()) *
                static_cast<double>(pred[0].rows()));
}

GradientSet backward(const NetworkParams& params, const TrajectoryBasis& basis,
                     const ForwardCache& cache, std::span<const Matrix> gt) {
  const NetworkConfig& cfg = params.config;
  if (cache.params_version != params.version)
    throw ParameterError("forward cache is stale: parameters changed since");
  if (cache.batch != static_cast<Eigen::Index>(gt.size()) ||
      cache.poses.size() != gt.size() ||
      cache.feature.size() != params.feature.size() ||
      cache.regression.size() != params.regression.size())
    throw DimensionError("forward cache does not match targets or network");
  if (basis.frames() != cfg.frames || basis.count() != cfg.bases)
    throw DimensionError("basis does not match network");

  const Eigen::Index frames = cfg.frames;
  const Eigen::Index k = cfg.bases;
  const Eigen::Index width = 3 * cfg.joints;
  const Eigen::Index batch = cache.batch;
  const double loss_scale = 1.0 / (static_cast<double>(batch * frames));
  const bool dense = cfg.dense_connections;

  Matrix d_coeffs(batch, k * width);
  for (Eigen::Index b = 0; b < batch; ++b) {
    if (gt[b].rows() != frames || gt[b].cols() != width)
      throw DimensionError("target shape mismatch");
    const Matrix d_pose =
        loss_scale * (cache.poses[b] - gt[b]).array().sign().matrix();
    const Matrix d_a = basis.theta().transpose() * d_pose;  // K x 3J
    const Matrix d_at = d_a.transpose();
    d_coeffs.row(b) = Eigen::Map<const Eigen::RowVectorXd>(d_at.data(), d_at.size());
  }
  const Matrix d_raw =
      d_coeffs.array().rowwise() * params.coef_std.transpose().array();

  GradientSet g;
  g.head.weight = d_raw.transpose() * cache.head_input;
  g.head.bias = d_raw.colwise().sum().transpose();
  const Matrix d_head_in = d_raw * params.head.weight;

  // Regression block.
  const std::size_t n_reg = params.regression.size();
  std::vector<Matrix> d_reg(n_reg + 1);
  d_reg[0] = Matrix::Zero(batch, cache.trajectory_coeffs.cols());
  for (std::size_t i = 0; i < n_reg; ++i)
    d_reg[i + 1] = Matrix::Zero(batch, cache.regression_out[i].cols());
  scatter_input_grad(d_head_in, 0, n_reg, dense, d_reg);
  g.regression.resize(n_reg);
  for (std::size_t i = n_reg; i-- > 0;) {
    const Matrix d_in = layer_backward(params.regression[i], cache.regression[i],
                                       cache.mode, d_reg[i + 1], 0,
                                       g.regression[i]);
    scatter_input_grad(d_in, 0, i, dense, d_reg);
  }

  // Fixed projection and pooling, per sequence.
  const Matrix& feat = cache.feature_out.back();
  const Eigen::Index channels = feat.cols();
  const std::size_t n_feat = params.feature.size();
  std::vector<Matrix> d_feat(n_feat + 1);
  d_feat[0] = Matrix::Zero(0, feature_input_width(cfg));
  for (std::size_t i = 0; i < n_feat; ++i)
    d_feat[i + 1] = Matrix::Zero(feat.rows(), cache.feature_out[i].cols());
  for (Eigen::Index b = 0; b < batch; ++b) {
    const Eigen::RowVectorXd row = d_reg[0].row(b);
    const Matrix d_t = Eigen::Map<const Matrix>(row.data(), k, channels);
    const Matrix d_pooled = trajectory_transform_backward(d_t, basis);
    d_feat[n_feat].middleRows(b * frames, frames) +=
        avg_pool_temporal_backward(d_pooled, cfg.pool_window);
  }

  // Feature block; the raw input needs no gradient.
  const Eigen::Index x0_width = feature_input_width(cfg);
  g.feature.resize(n_feat);
  for (std::size_t i = n_feat; i-- > 0;) {
    const Eigen::Index skip = (dense || i == 0) ? x0_width : 0;
    const Matrix d_in = layer_backward(params.feature[i], cache.feature[i],
                                       cache.mode, d_feat[i + 1], skip,
                                       g.feature[i]);
    if (i == 0) continue;
    if (dense) {
      Eigen::Index at = 0;
      for (std::size_t j = 1; j <= i; ++j) {
        const Eigen::Index w = d_feat[j].cols();
        d_feat[j] += d_in.middleCols(at, w);
        at += w;
      }
    } else {
      d_feat[i] += d_in;
    }
  }
  return g;
}

void update_running_stats(NetworkParams& params, const ForwardCache& cache) {
  if (cache.mode != Mode::kTrain)
    throw ParameterError("running statistics need a train-mode cache");
  const double m = params.config.bn_momentum;
  auto update = [m](std::vector<BnStats>& stats,
                    const std::vector<LayerCache>& layers) {
    for (std::size_t i = 0; i < stats.size(); ++i) {
      const double n = static_cast<double>(layers[i].input.rows());
      const double unbias = n > 1.0 ? n / (n - 1.0) : 1.0;
      stats[i].running_mean =
          (1.0 - m) * stats[i].running_mean + m * layers[i].batch_mean;
      stats[i].running_var =
          (1.0 - m) * stats[i].running_var + m * unbias * layers[i].batch_var;
    }
  };
  update(params.feature_stats, cache.feature);
  update(params.regression_stats, cache.regression);
}

void adam_step(NetworkParams& params, GradientSet& grads, AdamState& state,
               double lr, const TrainConfig& config) {
  auto p = learnable_tensors(params);
  auto g = gradient_tensors(grads);
  if (p.size() != g.size())
    throw DimensionError("gradient tree does not match parameters");
  if (state.m.empty()) {
    for (const auto& t : p) {
      state.m.push_back(Vector::Zero(t.size));
      state.v.push_back(Vector::Zero(t.size));
    }
  }
  ++state.step;
  const double t = static_cast<double>(state.step);
  const double c1 = 1.0 - std::pow(config.beta1, t);
  const double c2 = 1.0 - std::pow(config.beta2, t);
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (p[i].size != g[i].size || state.m[i].size() != p[i].size)
      throw DimensionError("tensor " + p[i].name + " shape mismatch");
    Eigen::Map<Vector> w(p[i].data, p[i].size);
    Eigen::Map<const Vector> d(g[i].data, g[i].size);
    state.m[i] = config.beta1 * state.m[i] + (1.0 - config.beta1) * d;
    state.v[i] = config.beta2 * state.v[i] +
                 (1.0 - config.beta2) * d.cwiseProduct(d);
    w.array() -= lr * (state.m[i].array() / c1) /
                 ((state.v[i].array() / c2).sqrt() + config.adam_epsilon);
  }
  ++params.version;
}

double lr_at_epoch(const TrainConfig& config, int epoch) {
  if (epoch < 0 || epoch >= config.epochs)
    throw ParameterError("epoch " + std::to_string(epoch) + " outside [0, " +
                         std::to_string(config.epochs) + ")");
  double lr = config.lr0;
  for (int e : config.decay_epochs)
    if (epoch >= e) lr *= config.shrink;
  return lr;
}

namespace {

void fit_coefficient_scaling(NetworkParams& params, const TrajectoryBasis& basis,
                             std::span<const LiftingSample> dataset,
                             const SkeletonConfig& skeleton, bool with_flips) {
  const Eigen::Index out = output_width(params.config);
  Vector sum = Vector::Zero(out);
  Vector sum2 = Vector::Zero(out);
  double n = 0.0;
  auto add = [&](const Matrix& target) {
    const Matrix at = project(target, basis).transpose();
    const Eigen::Map<const Vector> v(at.data(), at.size());
    sum += v;
    sum2 += v.cwiseProduct(v);
    n += 1.0;
  };
  for (const auto& s : dataset) {
    add(s.target3d);
    if (with_flips) add(flip_rows(s.target3d, 3, skeleton));
  }
  params.coef_mean = sum / n;
  Vector var = (sum2 / n - params.coef_mean.cwiseProduct(params.coef_mean))
                   .cwiseMax(0.0);
  params.coef_std = var.cwiseSqrt();
  const double floor = 1e-6 * std::max(1.0, params.coef_std.maxCoeff());
  for (Eigen::Index i = 0; i < out; ++i)
    if (params.coef_std(i) < floor) params.coef_std(i) = 1.0;
}

}  // namespace

TrainResult train(NetworkParams params, const TrajectoryBasis& basis,
                  std::span<const LiftingSample> dataset,
                  const SkeletonConfig& skeleton, const TrainConfig& config,
                  const EpochCallback& on_epoch) {
  config.validate();
  params.config.validate();
  const NetworkConfig& nc = params.config;
  if (dataset.empty()) throw ParameterError("training set is empty");
  if (skeleton.joint_count() != nc.joints)
    throw DimensionError("skeleton has " + std::to_string(skeleton.joint_count()) +
                         " joints, network expects " + std::to_string(nc.joints));
  for (const auto& s : dataset)
    if (s.input2d.rows() != nc.frames || s.input2d.cols() != 2 * nc.joints ||
        s.target3d.rows() != nc.frames || s.target3d.cols() != 3 * nc.joints)
      throw DimensionError("training sample does not match network F/J");

  if (config.standardize_targets)
    fit_coefficient_scaling(params, basis, dataset, skeleton,
                            config.flip_augment);
  ++params.version;

  std::mt19937_64 rng(config.seed);
  std::mt19937_64 dropout_rng(config.seed ^ 0x9e3779b97f4a7c15ULL);
  std::uniform_real_distribution<double> coin(0.0, 1.0);
  AdamState adam;
  TrainResult result;

  std::vector<std::size_t> order(dataset.size());
  const std::size_t batch_size = static_cast<std::size_t>(config.batch_size);
  std::vector<Matrix> inputs, targets;
  for (int epoch = 0; epoch < config.epochs; ++epoch) {
    const double lr = lr_at_epoch(config, epoch);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::shuffle(order.begin(), order.end(), rng);
    double loss_sum = 0.0;
    double seen = 0.0;
    for (std::size_t start = 0; start < order.size(); start += batch_size) {
      const std::size_t end = std::min(order.size(), start + batch_size);
      // A lone trailing sample would give degenerate batch statistics.
      if (end - start == 1 && order.size() > 1) break;
      inputs.clear();
      targets.clear();
      for (std::size_t i = start; i < end; ++i) {
        const auto& s = dataset[order[i]];
        if (config.flip_augment && coin(rng) < config.flip_probability) {
          inputs.push_back(flip_rows(s.input2d, 2, skeleton));
          targets.push_back(flip_rows(s.target3d, 3, skeleton));
        } else {
          inputs.push_back(s.input2d);
          targets.push_back(s.target3d);
        }
      }
      params.mode = Mode::kTrain;
      ForwardResult fr = forward(params, basis, inputs, &dropout_rng);
      const double loss = l1_loss(fr.poses, targets);
      GradientSet grads = backward(params, basis, fr.cache, targets);
      update_running_stats(params, fr.cache);
      adam_step(params, grads, adam, lr, config);
      loss_sum += loss * static_cast<double>(end - start);
      seen += static_cast<double>(end - start);
    }
    EpochLog entry{epoch, lr, loss_sum / seen};
    result.log.push_back(entry);
    if (on_epoch) on_epoch(entry);
  }
  params.mode = Mode::kEval;
  result.params = std::move(params);
  return result;
}

namespace {

template <class T>
T parse_number(const std::string& key, const std::string& value) {
  std::istringstream is(value);
  T v{};
  is >> v;
  if (!is || !is.eof())
    throw ParameterError("invalid value '" + value + "' for " + key);
  return v;
}

bool parse_bool(const std::string& key, const std::string& value) {
  if (value == "1" || value == "true" || value == "on" || value == "yes")
    return true;
  if (value == "0" || value == "false" || value == "off" || value == "no")
    return false;
  throw ParameterError("invalid boolean '" + value + "' for " + key);
}

}  // namespace

void apply_config(const std::map<std::string, std::string>& values,
                  NetworkConfig& net, TrainConfig& tr) {
  for (const auto& [key, value] : values) {
    if (key == "frames") net.frames = parse_number<Eigen::Index>(key, value);
    else if (key == "bases") net.bases = parse_number<Eigen::Index>(key, value);
    else if (key == "joints") net.joints = parse_number<Eigen::Index>(key, value);
    else if (key == "feat_layers") net.feat_layers = parse_number<int>(key, value);
    else if (key == "feat_width") net.feat_width = parse_number<Eigen::Index>(key, value);
    else if (key == "feat_dropout") net.feat_dropout = parse_number<double>(key, value);
    else if (key == "reg_layers") net.reg_layers = parse_number<int>(key, value);
    else if (key == "reg_width") net.reg_width = parse_number<Eigen::Index>(key, value);
    else if (key == "reg_dropout") net.reg_dropout = parse_number<double>(key, value);
    else if (key == "pool_window") net.pool_window = parse_number<Eigen::Index>(key, value);
    else if (key == "dense_connections") net.dense_connections = parse_bool(key, value);
    else if (key == "bn_momentum") net.bn_momentum = parse_number<double>(key, value);
    else if (key == "bn_epsilon") net.bn_epsilon = parse_number<double>(key, value);
    else if (key == "seed") {
      net.seed = parse_number<std::uint64_t>(key, value);
      tr.seed = net.seed;
    }
    else if (key == "lr0") tr.lr0 = parse_number<double>(key, value);
    else if (key == "epochs") tr.epochs = parse_number<int>(key, value);
    else if (key == "decay_epochs") {
      tr.decay_epochs.clear();
      std::istringstream is(value);
      std::string item;
      while (std::getline(is, item, ','))
        if (!item.empty()) tr.decay_epochs.push_back(parse_number<int>(key, item));
    }
    else if (key == "shrink") tr.shrink = parse_number<double>(key, value);
    else if (key == "beta1") tr.beta1 = parse_number<double>(key, value);
    else if (key == "beta2") tr.beta2 = parse_number<double>(key, value);
    else if (key == "adam_epsilon") tr.adam_epsilon = parse_number<double>(key, value);
    else if (key == "batch_size") tr.batch_size = parse_number<int>(key, value);
    else if (key == "flip_augment") tr.flip_augment = parse_bool(key, value);
    else if (key == "flip_probability") tr.flip_probability = parse_number<double>(key, value);
    else if (key == "standardize_targets") tr.standardize_targets = parse_bool(key, value);
    else throw ParameterError("unknown config key '" + key + "'");
  }
}

}  // namespace trajlift
