// Copyright 2026 The trajlift Authors
// SPDX-License-Identifier: Apache-2.0

// Evaluation protocols over F x 3J pose sequences (millimeters).
//   protocol 1: MPJPE after moving the root joint to the origin per frame
//   protocol 2: MPJPE after per-frame similarity (Procrustes) alignment
// PCK counts a joint as correct when its error is at most the threshold, so
// a perfect prediction scores 100 at every threshold including 0; AUC is the
// mean PCK over a threshold grid.

#pragma once

#include "trajlift/motion.hpp"

#include <iosfwd>
#include <span>
#include <vector>

namespace trajlift {

struct EvalReport {
  double mpjpe_p1 = 0.0;
  double mpjpe_p2 = 0.0;
  double pck150 = 0.0;
  double auc = 0.0;
  // Protocol-1 error per frame.
  std::vector<double> per_frame_errors;
};

double mpjpe_p1(const Matrix& pred, const Matrix& gt, int root_index);
double mpjpe_p1(const Matrix& pred, const Matrix& gt,
                const SkeletonConfig& skeleton);

// Rows are joints. Returns s * R * pred + t closest to gt in Frobenius norm
// with det(R) = +1 and s > 0.
Eigen::MatrixX3d procrustes_align(const Eigen::MatrixX3d& pred,
                                  const Eigen::MatrixX3d& gt);

double mpjpe_p2(const Matrix& pred, const Matrix& gt);

double pck(const Matrix& pred, const Matrix& gt, double threshold_mm = 150.0);

// 0, 5, ..., 150 mm.
std::vector<double> default_auc_thresholds();
double auc(const Matrix& pred, const Matrix& gt,
           std::span<const double> thresholds);
double auc(const Matrix& pred, const Matrix& gt);

// Mean Euclidean joint error of each frame, no alignment.
std::vector<double> per_frame_errors(const Matrix& pred, const Matrix& gt);

// PCK and AUC are taken on root-aligned poses, like protocol 1.
EvalReport evaluate(const Matrix& pred, const Matrix& gt,
                    const SkeletonConfig& skeleton);

// key=value block, one metric per line.
void write_report(const EvalReport& report, std::ostream& os);
// "frame,error_mm" header plus one row per frame.
void write_per_frame_csv(const EvalReport& report, std::ostream& os);

}  // namespace trajlift
