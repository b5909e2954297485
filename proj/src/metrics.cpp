// Copyright 2026 The trajlift Authors
// SPDX-License-Identifier: Apache-2.0

#include "trajlift/metrics.hpp"

#include "text_format.hpp"
#include "trajlift/error.hpp"

#include <Eigen/LU>
#include <Eigen/SVD>

#include <ostream>

namespace trajlift {

namespace {

void check_shapes(const Matrix& pred, const Matrix& gt) {
  if (pred.rows() != gt.rows() || pred.cols() != gt.cols())
    throw DimensionError("prediction is " + std::to_string(pred.rows()) + "x" +
                         std::to_string(pred.cols()) + ", ground truth is " +
                         std::to_string(gt.rows()) + "x" +
                         std::to_string(gt.cols()));
  if (pred.cols() % 3 != 0 || pred.cols() == 0 || pred.rows() == 0)
    throw DimensionError("pose rows must hold 3J > 0 coordinates");
}

// Frame f as a J x 3 matrix.
Eigen::MatrixX3d frame_points(const Matrix& m, Eigen::Index f) {
  const Eigen::Index joints = m.cols() / 3;
  Eigen::MatrixX3d p(joints, 3);
  for (Eigen::Index j = 0; j < joints; ++j)
    p.row(j) = m.block<1, 3>(f, 3 * j);
  return p;
}

// Joint errors, frame-major.
Vector joint_errors(const Matrix& pred, const Matrix& gt) {
  const Eigen::Index joints = pred.cols() / 3;
  Vector e(pred.rows() * joints);
  for (Eigen::Index f = 0; f < pred.rows(); ++f)
    for (Eigen::Index j = 0; j < joints; ++j)
      e(f * joints + j) =
          (pred.block<1, 3>(f, 3 * j) - gt.block<1, 3>(f, 3 * j)).norm();
  return e;
}

}  // namespace

double mpjpe_p1(const Matrix& pred, const Matrix& gt, int root_index) {
  check_shapes(pred, gt);
  return joint_errors(root_align_rows(pred, root_index),
                      root_align_rows(gt, root_index))
      .mean();
}

double mpjpe_p1(const Matrix& pred, const Matrix& gt,
                const SkeletonConfig& skeleton) {
  if (skeleton.joint_count() * 3 != pred.cols())
    throw DimensionError("skeleton joint count does not match poses");
  return mpjpe_p1(pred, gt, skeleton.root_index());
}

Eigen::MatrixX3d procrustes_align(const Eigen::MatrixX3d& pred,
                                  const Eigen::MatrixX3d& gt) {
  if (pred.rows() != gt.rows())
    throw DimensionError("point sets differ in size");
  if (pred.rows() < 3)
    throw ParameterError("Procrustes alignment needs at least 3 points");
  const Eigen::RowVector3d mu_pred = pred.colwise().mean();
  const Eigen::RowVector3d mu_gt = gt.colwise().mean();
  const Eigen::MatrixX3d p = pred.rowwise() - mu_pred;
  const Eigen::MatrixX3d g = gt.rowwise() - mu_gt;
  const double p_norm2 = p.squaredNorm();
  if (p_norm2 <= 0.0 || g.squaredNorm() <= 0.0)
    throw NumericError("degenerate point set: all points coincide");

  // Maximize tr(R^T g^T p); H = g^T p = U S V^T gives R = U D V^T.
  const Eigen::Matrix3d h = g.transpose() * p;
  Eigen::JacobiSVD<Eigen::Matrix3d> svd(h, Eigen::ComputeFullU |
                                               Eigen::ComputeFullV);
  Eigen::Vector3d d = Eigen::Vector3d::Ones();
  if (Eigen::Matrix3d(svd.matrixU() * svd.matrixV().transpose()).determinant() < 0.0)
    d(2) = -1.0;
  const Eigen::Matrix3d r =
      svd.matrixU() * d.asDiagonal() * svd.matrixV().transpose();
  const double scale = svd.singularValues().dot(d) / p_norm2;
  return ((scale * p * r.transpose()).rowwise() + mu_gt).eval();
}

double mpjpe_p2(const Matrix& pred, const Matrix& gt) {
  check_shapes(pred, gt);
  double sum = 0.0;
  for (Eigen::Index f = 0; f < pred.rows(); ++f) {
    const Eigen::MatrixX3d g = frame_points(gt, f);
    const Eigen::MatrixX3d aligned = procrustes_align(frame_points(pred, f), g);
    sum += (aligned - g).rowwise().norm().sum();
  }
  return sum / static_cast<double>(pred.rows() * (pred.cols() / 3));
}

double pck(const Matrix& pred, const Matrix& gt, double threshold_mm) {
  check_shapes(pred, gt);
  const Vector e = joint_errors(pred, gt);
  const auto correct = (e.array() <= threshold_mm).count();
  return 100.0 * static_cast<double>(correct) / static_cast<double>(e.size());
}

std::vector<double> default_auc_thresholds() {
  std::vector<double> grid;
  for (int t = 0; t <= 150; t += 5) grid.push_back(t);
  return grid;
}

double auc(const Matrix& pred, const Matrix& gt,
           std::span<const double> thresholds) {
  check_shapes(pred, gt);
  if (thresholds.empty()) throw ParameterError("empty AUC threshold grid");
  const Vector e = joint_errors(pred, gt);
  double sum = 0.0;
  for (double t : thresholds)
    sum += 100.0 * static_cast<double>((e.array() <= t).count()) /
           static_cast<double>(e.size());
  return sum / static_cast<double>(thresholds.size());
}

double auc(const Matrix& pred, const Matrix& gt) {
  const auto grid = default_auc_thresholds();
  return auc(pred, gt, grid);
}

std::vector<double> per_frame_errors(const Matrix& pred, const Matrix& gt) {
  check_shapes(pred, gt);
  const Eigen::Index joints = pred.cols() / 3;
  const Vector e = joint_errors(pred, gt);
  std::vector<double> out(static_cast<std::size_t>(pred.rows()));
  for (Eigen::Index f = 0; f < pred.rows(); ++f)
    out[f] = e.segment(f * joints, joints).mean();
  return out;
}

EvalReport evaluate(const Matrix& pred, const Matrix& gt,
                    const SkeletonConfig& skeleton) {
  check_shapes(pred, gt);
  if (skeleton.joint_count() * 3 != pred.cols())
    throw DimensionError("skeleton joint count does not match poses");
  const Matrix p = root_align_rows(pred, skeleton.root_index());
  const Matrix g = root_align_rows(gt, skeleton.root_index());
  EvalReport r;
  r.per_frame_errors = per_frame_errors(p, g);
  r.mpjpe_p1 = joint_errors(p, g).mean();
  r.mpjpe_p2 = mpjpe_p2(pred, gt);
  r.pck150 = pck(p, g, 150.0);
  r.auc = auc(p, g);
  return r;
}

void write_report(const EvalReport& report, std::ostream& os) {
  os << "mpjpe_p1=" << text::format_double(report.mpjpe_p1) << '\n'
     << "mpjpe_p2=" << text::format_double(report.mpjpe_p2) << '\n'
     << "pck150=" << text::format_double(report.pck150) << '\n'
     << "auc=" << text::format_double(report.auc) << '\n'
     << "frames=" << report.per_frame_errors.size() << '\n';
}

void write_per_frame_csv(const EvalReport& report, std::ostream& os) {
  os << "frame,error_mm\n";
  for (std::size_t f = 0; f < report.per_frame_errors.size(); ++f)
    os << f << ',' << text::format_double(report.per_frame_errors[f]) << '\n';
}

}  // namespace trajlift
