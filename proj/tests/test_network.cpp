// Copyright 2026 The trajlift Authors
// SPDX-License-Identifier: Apache-2.0

#include "doctest.h"
#include "test_util.hpp"
#include "trajlift/checkpoint.hpp"
#include "trajlift/error.hpp"
#include "trajlift/network.hpp"

#include <cmath>
#include <sstream>

using namespace trajlift;
using trajlift::testing::max_abs;
using trajlift::testing::random_matrix;

namespace {

NetworkConfig tiny_config(Eigen::Index frames, Eigen::Index bases,
                          Eigen::Index joints) {
  NetworkConfig c;
  c.frames = frames;
  c.bases = bases;
  c.joints = joints;
  c.feat_layers = 2;
  c.feat_width = 8;
  c.feat_dropout = 0.0;
  c.reg_layers = 2;
  c.reg_width = 8;
  c.reg_dropout = 0.0;
  c.pool_window = frames >= 5 ? 5 : 1;
  c.seed = 3;
  return c;
}

std::vector<Matrix> random_batch(int n, Eigen::Index rows, Eigen::Index cols,
                                 std::mt19937_64& rng, double scale = 1.0) {
  std::vector<Matrix> out;
  for (int i = 0; i < n; ++i) out.push_back(random_matrix(rows, cols, rng, scale));
  return out;
}

double loss_of(const NetworkParams& p, const TrajectoryBasis& basis,
               const std::vector<Matrix>& x, const std::vector<Matrix>& gt) {
  return l1_loss(forward(p, basis, x).poses, gt);
}

// Largest relative disagreement between backward() and central differences.
double gradient_check(NetworkParams params, const TrajectoryBasis& basis,
                      const std::vector<Matrix>& x,
                      const std::vector<Matrix>& gt) {
  const ForwardResult fr = forward(params, basis, x);
  GradientSet g = backward(params, basis, fr.cache, gt);
  auto grads = gradient_tensors(g);
  auto tensors = learnable_tensors(params);
  REQUIRE(grads.size() == tensors.size());
  const double h = 1e-6;
  double worst = 0.0;
  for (std::size_t t = 0; t < tensors.size(); ++t) {
    REQUIRE(grads[t].size == tensors[t].size);
    for (Eigen::Index i = 0; i < tensors[t].size; ++i) {
      double& w = tensors[t].data[i];
      const double saved = w;
      w = saved + h;
      const double up = loss_of(params, basis, x, gt);
      w = saved - h;
      const double down = loss_of(params, basis, x, gt);
      w = saved;
      const double numeric = (up - down) / (2 * h);
      const double analytic = grads[t].data[i];
      const double denom =
          std::max({std::abs(numeric), std::abs(analytic), 1e-4});
      worst = std::max(worst, std::abs(numeric - analytic) / denom);
    }
  }
  return worst;
}

}  // namespace

TEST_CASE("init is deterministic and shaped by the config") {
  NetworkConfig c = tiny_config(10, 3, 4);
  const NetworkParams a = init_network(c);
  const NetworkParams b = init_network(c);
  NetworkParams a2 = a, b2 = b;
  auto ta = all_tensors(a2);
  auto tb = all_tensors(b2);
  REQUIRE(ta.size() == tb.size());
  for (std::size_t t = 0; t < ta.size(); ++t) {
    CHECK(ta[t].name == tb[t].name);
    for (Eigen::Index i = 0; i < ta[t].size; ++i)
      CHECK(ta[t].data[i] == tb[t].data[i]);
  }
  CHECK(a.feature.size() == 2);
  CHECK(a.regression.size() == 2);
  CHECK(a.feature[0].weight.rows() == c.feat_width);
  CHECK(a.feature[0].weight.cols() == 2 * c.joints);
  CHECK(a.feature[1].weight.cols() == 2 * c.joints + c.feat_width);
  CHECK(a.regression[0].weight.cols() == c.feat_width * c.bases);
  CHECK(a.head.weight.rows() == c.bases * 3 * c.joints);
  for (const auto& s : a.feature_stats) {
    CHECK(s.running_mean.isZero());
    CHECK(s.running_var.isOnes());
  }
  CHECK(a.coef_mean.isZero());
  CHECK(a.coef_std.isOnes());
  const double bound = 1.0 / std::sqrt(static_cast<double>(2 * c.joints));
  CHECK(a.feature[0].weight.cwiseAbs().maxCoeff() <= bound);
  CHECK(a.feature[0].bias.isZero());

  c.seed = 4;
  const NetworkParams d = init_network(c);
  CHECK(d.feature[0].weight != a.feature[0].weight);
}

TEST_CASE("config validation rejects bad values") {
  NetworkConfig c = tiny_config(10, 3, 4);
  CHECK_NOTHROW(c.validate());
  NetworkConfig bad = c;
  bad.bases = 11;
  CHECK_THROWS_AS(bad.validate(), ParameterError);
  bad = c;
  bad.pool_window = 4;
  CHECK_THROWS_AS(bad.validate(), ParameterError);
  bad = c;
  bad.feat_dropout = 1.0;
  CHECK_THROWS_AS(bad.validate(), ParameterError);
  bad = c;
  bad.joints = 0;
  CHECK_THROWS_AS(bad.validate(), ParameterError);
  TrainConfig t;
  CHECK_NOTHROW(t.validate());
  t.lr0 = -1;
  CHECK_THROWS_AS(t.validate(), ParameterError);
}

TEST_CASE("forward output shapes follow F, K and J") {
  std::mt19937_64 rng(1);
  const Eigen::Index cases[][3] = {{10, 3, 2}, {8, 8, 3}, {25, 5, 17}, {3, 1, 1}};
  for (const auto& fkj : cases) {
    const auto [F, K, J] = std::tuple{fkj[0], fkj[1], fkj[2]};
    const NetworkParams p = init_network(tiny_config(F, K, J));
    const TrajectoryBasis basis = dct_basis(F, K);
    const auto x = random_batch(3, F, 2 * J, rng);
    const ForwardResult r = forward(p, basis, x);
    REQUIRE(r.poses.size() == 3);
    for (int i = 0; i < 3; ++i) {
      CHECK(r.poses[i].rows() == F);
      CHECK(r.poses[i].cols() == 3 * J);
      CHECK(r.coeffs[i].rows() == K);
      CHECK(r.coeffs[i].cols() == 3 * J);
      CHECK(max_abs(r.poses[i] - basis.theta() * r.coeffs[i]) < 1e-12);
    }
  }
}

TEST_CASE("forward rejects inputs of the wrong shape") {
  const NetworkParams p = init_network(tiny_config(10, 3, 2));
  const TrajectoryBasis basis = dct_basis(10, 3);
  CHECK_THROWS_AS(forward(p, basis, Matrix::Zero(9, 4)), DimensionError);
  CHECK_THROWS_AS(forward(p, basis, Matrix::Zero(10, 5)), DimensionError);
  CHECK_THROWS_AS(forward(p, dct_basis(10, 4), Matrix::Zero(10, 4)),
                  DimensionError);
}

TEST_CASE("zero head gives zero poses") {
  NetworkParams p = init_network(tiny_config(10, 3, 2));
  p.head.weight.setZero();
  p.head.bias.setZero();
  std::mt19937_64 rng(2);
  const ForwardResult r = forward(p, dct_basis(10, 3), random_matrix(10, 4, rng));
  CHECK(max_abs(r.poses[0]) == 0.0);
}

TEST_CASE("constant input leaves only the DC trajectory channel") {
  const NetworkParams p = init_network(tiny_config(12, 4, 2));
  const TrajectoryBasis basis = dct_basis(12, 4);
  Matrix x(12, 4);
  x.rowwise() = Eigen::RowVectorXd::LinSpaced(4, -0.3, 0.5);
  const ForwardResult r = forward(p, basis, x);
  const Matrix& t = r.cache.trajectory_coeffs;
  const Eigen::Index C = p.config.feat_width;
  for (Eigen::Index c = 0; c < C; ++c)
    for (Eigen::Index k = 1; k < 4; ++k) CHECK(std::abs(t(0, c * 4 + k)) < 1e-12);
}

TEST_CASE("trajectory channels are the projection of the pooled features") {
  std::mt19937_64 rng(5);
  const NetworkParams p = init_network(tiny_config(10, 3, 2));
  const TrajectoryBasis basis = dct_basis(10, 3);
  const auto x = random_batch(2, 10, 4, rng);
  const ForwardResult r = forward(p, basis, x);
  const Eigen::Index C = p.config.feat_width;
  for (int b = 0; b < 2; ++b) {
    const Matrix pooled = r.cache.pooled.middleRows(b * 10, 10);
    for (Eigen::Index c = 0; c < C; ++c) {
      const Vector direct = (2.0 / 10.0) * basis.theta().transpose() * pooled.col(c);
      for (Eigen::Index k = 0; k < 3; ++k)
        CHECK(r.cache.trajectory_coeffs(b, c * 3 + k) ==
              doctest::Approx(direct(k)).epsilon(1e-12));
    }
  }
}

TEST_CASE("trajectory transform on a 2x2 basis by hand") {
  const TrajectoryBasis basis = dct_basis(2, 2);
  // Theta = [[0.5, cos(pi/4)], [0.5, cos(3pi/4)]].
  const double c = std::sqrt(0.5);
  Matrix x(2, 1);
  x << 1.0, 3.0;
  const Matrix t = trajectory_transform(x, basis);
  CHECK(t(0, 0) == doctest::Approx(0.5 * 1 + 0.5 * 3));
  CHECK(t(1, 0) == doctest::Approx(c * 1 - c * 3));
  Matrix g(2, 1);
  g << 2.0, -1.0;
  const Matrix back = trajectory_transform_backward(g, basis);
  CHECK(back(0, 0) == doctest::Approx(0.5 * 2 + c * -1));
  CHECK(back(1, 0) == doctest::Approx(0.5 * 2 - c * -1));
  // Adjoint: <g, T x> == <T^T g, x>.
  CHECK((g.transpose() * t)(0, 0) ==
        doctest::Approx((back.transpose() * x)(0, 0)));
}

TEST_CASE("temporal average pooling") {
  Matrix spike(5, 1);
  spike << 0, 0, 5, 0, 0;
  const Matrix out = avg_pool_temporal(spike, 5);
  CHECK(out(2, 0) == doctest::Approx(1.0));
  // Replicate padding: frame 0 sees 0,0,0,0,5.
  CHECK(out(0, 0) == doctest::Approx(1.0));
  CHECK(out(1, 0) == doctest::Approx(1.0));

  Matrix ramp(9, 2);
  for (int f = 0; f < 9; ++f) ramp.row(f) << f, -2.0 * f;
  const Matrix r = avg_pool_temporal(ramp, 5);
  for (int f = 2; f < 7; ++f) CHECK(max_abs(r.row(f) - ramp.row(f)) < 1e-12);

  CHECK(max_abs(avg_pool_temporal(ramp, 1) - ramp) == 0.0);
  CHECK_THROWS_AS(avg_pool_temporal(ramp, 4), ParameterError);
  CHECK_THROWS_AS(avg_pool_temporal(ramp, 11), ParameterError);
}

TEST_CASE("pooling backward is the adjoint of pooling") {
  std::mt19937_64 rng(6);
  for (Eigen::Index w : {1, 3, 5, 7}) {
    const Matrix x = random_matrix(11, 3, rng);
    const Matrix g = random_matrix(11, 3, rng);
    const double lhs = (g.array() * avg_pool_temporal(x, w).array()).sum();
    const double rhs =
        (avg_pool_temporal_backward(g, w).array() * x.array()).sum();
    CHECK(lhs == doctest::Approx(rhs).epsilon(1e-12));
  }
}

TEST_CASE("l1 loss") {
  const Matrix gt = Matrix::Zero(4, 51);
  const Matrix pred = Matrix::Ones(4, 51);
  CHECK(l1_loss(std::vector<Matrix>{pred}, std::vector<Matrix>{gt}) ==
        doctest::Approx(51.0));
  std::mt19937_64 rng(7);
  const Matrix a = random_matrix(6, 9, rng), b = random_matrix(6, 9, rng);
  const double one = l1_loss(std::vector<Matrix>{a}, std::vector<Matrix>{b});
  const double two =
      l1_loss(std::vector<Matrix>{a, a}, std::vector<Matrix>{b, b});
  CHECK(one == doctest::Approx(two).epsilon(1e-15));
  CHECK(l1_loss(std::vector<Matrix>{a}, std::vector<Matrix>{a}) == 0.0);
  CHECK_THROWS_AS(
      l1_loss(std::vector<Matrix>{a}, std::vector<Matrix>{Matrix::Zero(6, 6)}),
      DimensionError);
}

TEST_CASE("backward matches central differences") {
  std::mt19937_64 rng(8);
  const Eigen::Index F = 10, K = 3, J = 2;
  const TrajectoryBasis basis = dct_basis(F, K);
  const auto x = random_batch(3, F, 2 * J, rng);
  const auto gt = random_batch(3, F, 3 * J, rng, 0.5);

  SUBCASE("dense connections") {
    NetworkParams p = init_network(tiny_config(F, K, J));
    p.mode = Mode::kTrain;
    CHECK(gradient_check(p, basis, x, gt) < 1e-4);
  }
  SUBCASE("plain stack with target scaling") {
    NetworkConfig c = tiny_config(F, K, J);
    c.dense_connections = false;
    c.feat_layers = 3;
    NetworkParams p = init_network(c);
    p.mode = Mode::kTrain;
    p.coef_mean = random_matrix(K * 3 * J, 1, rng);
    p.coef_std = random_matrix(K * 3 * J, 1, rng).cwiseAbs().array() + 0.5;
    CHECK(gradient_check(p, basis, x, gt) < 1e-4);
  }
  SUBCASE("eval mode") {
    NetworkParams p = init_network(tiny_config(F, K, J));
    for (auto& s : p.feature_stats) s.running_var.setConstant(2.0);
    CHECK(gradient_check(p, basis, x, gt) < 1e-4);
  }
}

TEST_CASE("zero residual gives zero gradients") {
  std::mt19937_64 rng(9);
  NetworkParams p = init_network(tiny_config(10, 3, 2));
  p.mode = Mode::kTrain;
  const TrajectoryBasis basis = dct_basis(10, 3);
  const auto x = random_batch(2, 10, 4, rng);
  const ForwardResult r = forward(p, basis, x);
  GradientSet g = backward(p, basis, r.cache, r.poses);
  for (const auto& t : gradient_tensors(g))
    for (Eigen::Index i = 0; i < t.size; ++i) CHECK(t.data[i] == 0.0);
}

TEST_CASE("backward refuses a cache from older parameters") {
  std::mt19937_64 rng(10);
  NetworkParams p = init_network(tiny_config(10, 3, 2));
  p.mode = Mode::kTrain;
  const TrajectoryBasis basis = dct_basis(10, 3);
  const auto x = random_batch(2, 10, 4, rng);
  const auto gt = random_batch(2, 10, 6, rng);
  const ForwardResult r = forward(p, basis, x);
  GradientSet g = backward(p, basis, r.cache, gt);
  AdamState state;
  adam_step(p, g, state, 1e-3, TrainConfig{});
  CHECK_THROWS_AS(backward(p, basis, r.cache, gt), ParameterError);
}

TEST_CASE("adam") {
  NetworkParams p = init_network(tiny_config(10, 3, 2));
  const NetworkParams before = p;
  TrainConfig cfg;

  SUBCASE("first step moves each weight by about lr against the gradient") {
    GradientSet g = backward(
        [&] {
          NetworkParams q = p;
          q.mode = Mode::kTrain;
          return q;
        }(),
        dct_basis(10, 3),
        [&] {
          NetworkParams q = p;
          q.mode = Mode::kTrain;
          std::mt19937_64 rng(11);
          return forward(q, dct_basis(10, 3), random_matrix(10, 4, rng)).cache;
        }(),
        std::vector<Matrix>{Matrix::Zero(10, 6)});
    for (auto& t : gradient_tensors(g))
      for (Eigen::Index i = 0; i < t.size; ++i) t.data[i] = (i % 2) ? 1.0 : -2.0;
    AdamState state;
    adam_step(p, g, state, 1e-3, cfg);
    NetworkParams b = before;
    auto now = learnable_tensors(p);
    auto old = learnable_tensors(b);
    for (std::size_t t = 0; t < now.size(); ++t)
      for (Eigen::Index i = 0; i < now[t].size; ++i) {
        const double expected = (i % 2) ? -1e-3 : 1e-3;
        CHECK(now[t].data[i] - old[t].data[i] ==
              doctest::Approx(expected).epsilon(1e-6));
      }
    CHECK(state.step == 1);
    CHECK(p.version > before.version);

    // Moments decay geometrically once the gradient vanishes.
    const Vector m1 = state.m[0];
    for (auto& t : gradient_tensors(g))
      for (Eigen::Index i = 0; i < t.size; ++i) t.data[i] = 0.0;
    adam_step(p, g, state, 1e-3, cfg);
    CHECK(max_abs(state.m[0] - cfg.beta1 * m1) < 1e-15);
  }

  SUBCASE("zero gradients from a fresh state change nothing") {
    GradientSet g;
    g.feature = p.feature;
    g.regression = p.regression;
    g.head = p.head;
    for (auto& t : gradient_tensors(g))
      for (Eigen::Index i = 0; i < t.size; ++i) t.data[i] = 0.0;
    AdamState state;
    adam_step(p, g, state, 1e-3, cfg);
    NetworkParams b = before;
    auto now = learnable_tensors(p);
    auto old = learnable_tensors(b);
    for (std::size_t t = 0; t < now.size(); ++t)
      for (Eigen::Index i = 0; i < now[t].size; ++i)
        CHECK(now[t].data[i] == old[t].data[i]);
  }
}

TEST_CASE("learning rate schedule") {
  TrainConfig cfg;
  CHECK(lr_at_epoch(cfg, 0) == doctest::Approx(1e-4));
  CHECK(lr_at_epoch(cfg, 59) == doctest::Approx(1e-4));
  CHECK(lr_at_epoch(cfg, 60) == doctest::Approx(1e-5));
  CHECK(lr_at_epoch(cfg, 84) == doctest::Approx(1e-5));
  CHECK(lr_at_epoch(cfg, 85) == doctest::Approx(1e-6));
  CHECK(lr_at_epoch(cfg, 99) == doctest::Approx(1e-6));
}

TEST_CASE("running statistics follow the batch statistics") {
  std::mt19937_64 rng(12);
  NetworkParams p = init_network(tiny_config(10, 3, 2));
  p.mode = Mode::kTrain;
  const TrajectoryBasis basis = dct_basis(10, 3);
  const auto x = random_batch(4, 10, 4, rng);
  const ForwardResult r = forward(p, basis, x);
  update_running_stats(p, r.cache);
  const LayerCache& lc = r.cache.feature[0];
  const double n = 40.0;
  CHECK(max_abs(p.feature_stats[0].running_mean - 0.1 * lc.batch_mean) < 1e-12);
  const Vector unbiased = lc.batch_var * (n / (n - 1.0));
  CHECK(max_abs(p.feature_stats[0].running_var -
                (0.9 * Vector::Ones(unbiased.size()) + 0.1 * unbiased)) < 1e-12);
}

TEST_CASE("training overfits a single sample") {
  std::mt19937_64 rng(13);
  NetworkConfig c = tiny_config(10, 3, 2);
  c.feat_width = 16;
  c.reg_width = 32;
  LiftingSample s{random_matrix(10, 4, rng), Matrix()};
  const TrajectoryBasis basis = dct_basis(10, 3);
  s.target3d = basis.theta() * random_matrix(3, 6, rng, 2.0);
  TrainConfig t;
  t.lr0 = 1e-3;
  t.epochs = 200;
  t.decay_epochs = {};
  t.batch_size = 1;
  t.flip_augment = false;
  t.standardize_targets = false;
  const std::vector<LiftingSample> data{s};
  const TrainResult r =
      train(init_network(c), basis, data, SkeletonConfig::generic(2), t);
  REQUIRE(r.log.size() == 200);
  CHECK(r.log.back().loss < 0.1 * r.log.front().loss);
  CHECK(r.params.mode == Mode::kEval);
}

TEST_CASE("training is deterministic for a fixed seed") {
  std::mt19937_64 rng(14);
  NetworkConfig c = tiny_config(10, 3, 2);
  c.feat_dropout = 0.2;
  c.reg_dropout = 0.3;
  const TrajectoryBasis basis = dct_basis(10, 3);
  std::vector<LiftingSample> data;
  for (int i = 0; i < 9; ++i)
    data.push_back({random_matrix(10, 4, rng), random_matrix(10, 6, rng)});
  TrainConfig t;
  t.epochs = 3;
  t.batch_size = 4;
  t.seed = 21;
  const auto run = [&] {
    return train(init_network(c), basis, data, SkeletonConfig::generic(2), t);
  };
  TrainResult a = run(), b = run();
  REQUIRE(a.log.size() == 3);
  for (std::size_t e = 0; e < a.log.size(); ++e)
    CHECK(a.log[e].loss == b.log[e].loss);
  auto ta = all_tensors(a.params), tb = all_tensors(b.params);
  for (std::size_t i = 0; i < ta.size(); ++i)
    for (Eigen::Index j = 0; j < ta[i].size; ++j)
      CHECK(ta[i].data[j] == tb[i].data[j]);
}

TEST_CASE("flip augmentation is a no-op on mirror-symmetric data") {
  // Two joints mirrored about x = 0: flipping a sample reproduces it.
  SkeletonConfig skel({"root", "left", "right"}, 0, {{1, 2}});
  std::mt19937_64 rng(15);
  const Eigen::Index F = 10;
  std::vector<LiftingSample> data;
  for (int i = 0; i < 6; ++i) {
    Matrix in(F, 6), tg(F, 9);
    const Matrix a = random_matrix(F, 3, rng);
    const Matrix b = random_matrix(F, 3, rng);
    in << Matrix::Zero(F, 1), a.col(1), a.col(0), a.col(1), -a.col(0), a.col(1);
    tg << Matrix::Zero(F, 3), b.col(0), b.col(1), b.col(2), -b.col(0),
        b.col(1), b.col(2);
    REQUIRE(max_abs(flip_rows(in, 2, skel) - in) == 0.0);
    REQUIRE(max_abs(flip_rows(tg, 3, skel) - tg) == 0.0);
    data.push_back({in, tg});
  }
  NetworkConfig c = tiny_config(F, 3, 3);
  TrainConfig t;
  t.epochs = 4;
  t.batch_size = 3;
  t.lr0 = 1e-3;
  t.flip_augment = false;
  const TrainResult off = train(init_network(c), dct_basis(F, 3), data, skel, t);
  t.flip_augment = true;
  const TrainResult on = train(init_network(c), dct_basis(F, 3), data, skel, t);
  for (std::size_t e = 0; e < off.log.size(); ++e)
    CHECK(on.log[e].loss == doctest::Approx(off.log[e].loss).epsilon(0.1));
}

TEST_CASE("apply_config") {
  NetworkConfig n;
  TrainConfig t;
  apply_config({{"bases", "5"},
                {"frames", "25"},
                {"dense_connections", "false"},
                {"decay_epochs", "10,20"},
                {"lr0", "0.001"},
                {"seed", "9"}},
               n, t);
  CHECK(n.bases == 5);
  CHECK(n.frames == 25);
  CHECK_FALSE(n.dense_connections);
  CHECK(t.decay_epochs == std::vector<int>{10, 20});
  CHECK(t.lr0 == 0.001);
  CHECK(n.seed == 9);
  CHECK(t.seed == 9);
  CHECK_THROWS_AS(apply_config({{"bogus", "1"}}, n, t), ParameterError);
  CHECK_THROWS_AS(apply_config({{"bases", "x"}}, n, t), ParameterError);
}

TEST_CASE("checkpoint round trip reproduces predictions") {
  std::mt19937_64 rng(16);
  Model m{init_network(tiny_config(10, 3, 17)), dct_basis(10, 3),
          SkeletonConfig::h36m17()};
  m.params.coef_mean = random_matrix(3 * 51, 1, rng);
  m.params.feature_stats[0].running_var.setConstant(1.7);
  std::stringstream ss;
  write_model(m, ss);
  Model back = read_model(ss, "mem");
  CHECK(back.basis == m.basis);
  CHECK(back.skeleton.joint_names() == m.skeleton.joint_names());
  CHECK(format_network_config(back.params.config) ==
        format_network_config(m.params.config));
  const Matrix x = random_matrix(10, 34, rng);
  CHECK(forward(back.params, back.basis, x).poses[0] ==
        forward(m.params, m.basis, x).poses[0]);

  std::stringstream again;
  write_model(back, again);
  std::stringstream first;
  write_model(m, first);
  CHECK(again.str() == first.str());
}

TEST_CASE("malformed checkpoints are rejected") {
  std::stringstream empty;
  CHECK_THROWS_AS(read_model(empty, "mem"), ParseError);
  std::stringstream wrong("TRAJNET v2\n");
  CHECK_THROWS_AS(read_model(wrong, "mem"), ParseError);

  Model m{init_network(tiny_config(10, 3, 2)), dct_basis(10, 3),
          SkeletonConfig::generic(2)};
  std::stringstream ss;
  write_model(m, ss);
  std::string text = ss.str();
  text = text.substr(0, text.size() / 2);
  std::stringstream cut(text);
  CHECK_THROWS_AS(read_model(cut, "mem"), ParseError);
}
