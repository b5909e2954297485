// Copyright 2026 The trajlift Authors
// SPDX-License-Identifier: Apache-2.0

#include "doctest.h"
#include "test_util.hpp"
#include "trajlift/error.hpp"
#include "trajlift/inference.hpp"

using namespace trajlift;
using trajlift::testing::max_abs;
using trajlift::testing::random_matrix;

namespace {

// Per-frame lift (u, v) -> (u, v, |u v|): commutes with mirroring.
Matrix lift(const Matrix& w) {
  Matrix out(w.rows(), w.cols() / 2 * 3);
  for (Eigen::Index j = 0; j < w.cols() / 2; ++j) {
    out.col(3 * j) = w.col(2 * j);
    out.col(3 * j + 1) = w.col(2 * j + 1);
    out.col(3 * j + 2) = w.col(2 * j).cwiseProduct(w.col(2 * j + 1)).cwiseAbs();
  }
  return out;
}

WindowPredictor per_frame_lifter() {
  return [](const std::vector<Matrix>& windows) {
    std::vector<Matrix> out;
    for (const auto& w : windows) out.push_back(lift(w));
    return out;
  };
}

}  // namespace

TEST_CASE("window starts") {
  SlidingConfig c{50, 5, false};
  CHECK(window_starts(60, c) == std::vector<Eigen::Index>{0, 5, 10});
  CHECK(window_starts(57, c) == std::vector<Eigen::Index>{0, 5, 7});
  CHECK(window_starts(50, c) == std::vector<Eigen::Index>{0});
  CHECK(window_starts(51, SlidingConfig{50, 50, false}) ==
        std::vector<Eigen::Index>{0, 1});
  CHECK_THROWS_AS(window_starts(49, c), DimensionError);
  CHECK_THROWS_AS(window_starts(60, SlidingConfig{50, 0, false}), ParameterError);
}

TEST_CASE("coverage counts") {
  SlidingConfig c{50, 5, false};
  const auto cov = coverage_counts(60, c);
  REQUIRE(cov.size() == 60);
  CHECK(cov[0] == 1);
  CHECK(cov[30] == 3);
  CHECK(cov[59] == 1);
  CHECK(cov[10] == 3);
  CHECK(cov[7] == 2);
  for (int n : cov) CHECK(n >= 1);
}

TEST_CASE("sliding inference averages windows per frame") {
  const Eigen::Index F = 10, L = 27, J = 3;
  SlidingConfig c{F, 4, false};
  std::mt19937_64 rng(1);
  const Matrix video = random_matrix(L, 2 * J, rng);
  const SkeletonConfig skel = SkeletonConfig::generic(J);

  SUBCASE("a constant predictor yields that constant") {
    const WindowPredictor constant = [&](const std::vector<Matrix>& ws) {
      return std::vector<Matrix>(ws.size(), Matrix::Constant(F, 3 * J, 2.5));
    };
    const Matrix out = sliding_infer(constant, video, skel, c);
    CHECK(out.rows() == L);
    CHECK(max_abs(out.array() - 2.5) < 1e-12);
  }

  SUBCASE("window-dependent outputs are averaged per frame") {
    // Each window predicts its own mean u of joint 0 everywhere.
    const WindowPredictor mean_u = [&](const std::vector<Matrix>& ws) {
      std::vector<Matrix> out;
      for (const auto& w : ws)
        out.push_back(Matrix::Constant(F, 3 * J, w.col(0).mean()));
      return out;
    };
    const Matrix out = sliding_infer(mean_u, video, skel, c);
    const auto starts = window_starts(L, c);
    for (Eigen::Index f = 0; f < L; ++f) {
      double sum = 0;
      int n = 0;
      for (Eigen::Index s : starts)
        if (f >= s && f < s + F) {
          sum += video.col(0).segment(s, F).mean();
          ++n;
        }
      CHECK(out(f, 4) == doctest::Approx(sum / n).epsilon(1e-12));
    }
  }

  SUBCASE("a per-frame predictor is reproduced exactly") {
    const Matrix out = sliding_infer(per_frame_lifter(), video, skel, c);
    CHECK(max_abs(out - lift(video)) < 1e-12);
  }

  SUBCASE("flip averaging is invisible for a mirror-equivariant predictor") {
    SkeletonConfig paired({"root", "l", "r"}, 0, {{1, 2}});
    SlidingConfig with_flip = c;
    with_flip.flip_average = true;
    const Matrix a = sliding_infer(per_frame_lifter(), video, paired, c);
    const Matrix b = sliding_infer(per_frame_lifter(), video, paired, with_flip);
    CHECK(max_abs(a - b) < 1e-12);
  }

  SUBCASE("flip averaging averages the mirrored estimate") {
    SkeletonConfig paired({"root", "l", "r"}, 0, {{1, 2}});
    SlidingConfig with_flip = c;
    with_flip.flip_average = true;
    // Not equivariant: reports joint 1's u as joint 1's X and nothing else.
    const WindowPredictor skew = [&](const std::vector<Matrix>& ws) {
      std::vector<Matrix> out;
      for (const auto& w : ws) {
        Matrix o = Matrix::Zero(F, 3 * J);
        o.col(3) = w.col(2);
        out.push_back(o);
      }
      return out;
    };
    const Matrix out = sliding_infer(skew, video, paired, with_flip);
    // The mirrored pass sees -u2 in joint 1's slot; un-mirroring moves it to
    // joint 2 as +u2.
    for (Eigen::Index f = 0; f < L; ++f) {
      CHECK(out(f, 3) == doctest::Approx(0.5 * video(f, 2)));
      CHECK(out(f, 6) == doctest::Approx(0.5 * video(f, 4)));
      CHECK(out(f, 0) == 0.0);
    }
  }

  SUBCASE("errors") {
    CHECK_THROWS_AS(sliding_infer(per_frame_lifter(), video.topRows(F - 1), skel, c),
                    DimensionError);
    CHECK_THROWS_AS(sliding_infer(per_frame_lifter(), video.leftCols(5), skel, c),
                    DimensionError);
    const WindowPredictor wrong = [&](const std::vector<Matrix>& ws) {
      return std::vector<Matrix>(ws.size(), Matrix::Zero(F, 3));
    };
    CHECK_THROWS_AS(sliding_infer(wrong, video, skel, c), DimensionError);
  }
}

TEST_CASE("model-backed sliding inference") {
  NetworkConfig nc;
  nc.frames = 10;
  nc.bases = 4;
  nc.joints = 3;
  nc.feat_layers = 1;
  nc.feat_width = 8;
  nc.reg_layers = 1;
  nc.reg_width = 8;
  nc.pool_window = 3;
  const Model m{init_network(nc), dct_basis(10, 4), SkeletonConfig::generic(3)};
  std::mt19937_64 rng(2);
  const Matrix video = random_matrix(23, 6, rng);
  const Matrix out = sliding_infer(m, video, SlidingConfig{10, 3, true});
  CHECK(out.rows() == 23);
  CHECK(out.cols() == 9);
  CHECK(out.allFinite());
  // Exactly one window when the video is one window long.
  const Matrix one = sliding_infer(m, video.topRows(10), SlidingConfig{10, 3, false});
  CHECK(max_abs(one - forward(m.params, m.basis, Matrix(video.topRows(10))).poses[0]) <
        1e-12);
  CHECK_THROWS_AS(sliding_infer(m, video, SlidingConfig{12, 3, true}),
                  DimensionError);
}
