// Copyright 2026 The trajlift Authors
// SPDX-License-Identifier: Apache-2.0

// Whole-video lifting with a fixed-length network: windows of F frames start
// every q frames (plus a final window flush with the end of the video) and
// each frame's estimate is the mean over all windows covering it.

#pragma once

#include "trajlift/checkpoint.hpp"
#include "trajlift/motion.hpp"

#include <functional>
#include <vector>

namespace trajlift {

struct SlidingConfig {
  Eigen::Index frames = 50;
  Eigen::Index step = 5;
  bool flip_average = true;

  void validate() const;
};

// 0, q, 2q, ... plus L - F when (L - F) is not a multiple of q.
std::vector<Eigen::Index> window_starts(Eigen::Index length,
                                        const SlidingConfig& config);
// Number of windows covering each frame.
std::vector<int> coverage_counts(Eigen::Index length,
                                 const SlidingConfig& config);

// Maps a batch of F x 2J windows to F x 3J estimates.
using WindowPredictor =
    std::function<std::vector<Matrix>(const std::vector<Matrix>& windows)>;

// L x 2J video to L x 3J poses. With flip_average the predictor also sees the
// mirrored windows and its un-mirrored output is averaged in per window.
Matrix sliding_infer(const WindowPredictor& predictor, const Matrix& video2d,
                     const SkeletonConfig& skeleton, const SlidingConfig& config);
Matrix sliding_infer(const Model& model, const Matrix& video2d,
                     const SlidingConfig& config);

// Eval-mode predictor backed by a model.
WindowPredictor model_predictor(const Model& model);

}  // namespace trajlift
