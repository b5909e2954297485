// Copyright 2026 The trajlift Authors
// SPDX-License-Identifier: Apache-2.0

#include "trajlift/inference.hpp"

#include "trajlift/error.hpp"

namespace trajlift {

void SlidingConfig::validate() const {
  if (frames < 1) throw ParameterError("window length must be >= 1");
  if (step < 1 || step > frames)
    throw ParameterError("step must be in [1, F], got " + std::to_string(step));
}

std::vector<Eigen::Index> window_starts(Eigen::Index length,
                                        const SlidingConfig& config) {
  config.validate();
  if (length < config.frames)
    throw DimensionError("video has " + std::to_string(length) +
                         " frames, shorter than the window of " +
                         std::to_string(config.frames));
  std::vector<Eigen::Index> starts;
  const Eigen::Index last = length - config.frames;
  for (Eigen::Index s = 0; s <= last; s += config.step) starts.push_back(s);
  if (starts.back() != last) starts.push_back(last);
  return starts;
}

std::vector<int> coverage_counts(Eigen::Index length,
                                 const SlidingConfig& config) {
  std::vector<int> counts(static_cast<std::size_t>(length), 0);
  for (Eigen::Index s : window_starts(length, config))
    for (Eigen::Index f = s; f < s + config.frames; ++f) ++counts[f];
  return counts;
}

Matrix sliding_infer(const WindowPredictor& predictor, const Matrix& video2d,
                     const SkeletonConfig& skeleton,
                     const SlidingConfig& config) {
  const Eigen::Index joints = skeleton.joint_count();
  if (video2d.cols() != 2 * joints)
    throw DimensionError("video has " + std::to_string(video2d.cols()) +
                         " columns, skeleton needs " + std::to_string(2 * joints));
  const auto starts = window_starts(video2d.rows(), config);
  const Eigen::Index f = config.frames;

  std::vector<Matrix> windows;
  windows.reserve(starts.size());
  for (Eigen::Index s : starts) windows.push_back(video2d.middleRows(s, f));
  std::vector<Matrix> estimates = predictor(windows);
  if (estimates.size() != windows.size())
    throw DimensionError("predictor returned the wrong number of windows");
  if (config.flip_average) {
    std::vector<Matrix> mirrored;
    mirrored.reserve(windows.size());
    for (const auto& w : windows) mirrored.push_back(flip_rows(w, 2, skeleton));
    const std::vector<Matrix> flipped = predictor(mirrored);
    if (flipped.size() != windows.size())
      throw DimensionError("predictor returned the wrong number of windows");
    for (std::size_t i = 0; i < estimates.size(); ++i)
      estimates[i] = 0.5 * (estimates[i] + flip_rows(flipped[i], 3, skeleton));
  }

  Matrix sum = Matrix::Zero(video2d.rows(), 3 * joints);
  Vector count = Vector::Zero(video2d.rows());
  for (std::size_t i = 0; i < starts.size(); ++i) {
    if (estimates[i].rows() != f || estimates[i].cols() != 3 * joints)
      throw DimensionError("predictor output has the wrong shape");
    sum.middleRows(starts[i], f) += estimates[i];
    count.segment(starts[i], f).array() += 1.0;
  }
  return sum.array().colwise() / count.array();
}

WindowPredictor model_predictor(const Model& model) {
  return [&model](const std::vector<Matrix>& windows) {
    NetworkParams const& params = model.params;
    if (params.mode != Mode::kEval)
      throw ParameterError("inference needs an eval-mode model");
    return forward(params, model.basis, windows).poses;
  };
}

Matrix sliding_infer(const Model& model, const Matrix& video2d,
                     const SlidingConfig& config) {
  if (config.frames != model.params.config.frames)
    throw DimensionError("window length does not match the model's F");
  return sliding_infer(model_predictor(model), video2d, model.skeleton, config);
}

}  // namespace trajlift
