// Copyright 2026 The trajlift Authors
// SPDX-License-Identifier: Apache-2.0

#include "trajlift/motion.hpp"

#include "trajlift/error.hpp"

#include <set>

namespace trajlift {

MotionMatrix::MotionMatrix(Matrix data) : data_(std::move(data)) {
  if (data_.cols() % 3 != 0)
    throw DimensionError("motion matrix needs a multiple of 3 columns, got " +
                         std::to_string(data_.cols()));
  if (!data_.allFinite())
    throw NumericError("motion matrix has non-finite entries");
}

MotionMatrix MotionMatrix::zeros(Eigen::Index frames, Eigen::Index joints) {
  return MotionMatrix(Matrix::Zero(frames, 3 * joints));
}

SkeletonConfig::SkeletonConfig(std::vector<std::string> joint_names,
                               int root_index,
                               std::vector<std::pair<int, int>> lr_pairs)
    : names_(std::move(joint_names)),
      root_(root_index),
      pairs_(std::move(lr_pairs)) {
  const int j = joint_count();
  if (j < 1) throw ParameterError("skeleton needs at least one joint");
  if (root_ < 0 || root_ >= j)
    throw ParameterError("root index " + std::to_string(root_) +
                         " out of range");
  std::set<int> used;
  for (auto [l, r] : pairs_) {
    if (l < 0 || l >= j || r < 0 || r >= j)
      throw ParameterError("pair (" + std::to_string(l) + ", " +
                           std::to_string(r) + ") out of range");
    if (l == r) throw ParameterError("joint paired with itself");
    if (l == root_ || r == root_)
      throw ParameterError("root joint cannot be in a left/right pair");
    if (!used.insert(l).second || !used.insert(r).second)
      throw ParameterError("left/right pairs overlap");
  }
}

SkeletonConfig SkeletonConfig::h36m17() {
  return SkeletonConfig(
      {"hip", "r_hip", "r_knee", "r_foot", "l_hip", "l_knee", "l_foot",
       "spine", "thorax", "neck", "head", "l_shoulder", "l_elbow", "l_wrist",
       "r_shoulder", "r_elbow", "r_wrist"},
      0, {{4, 1}, {5, 2}, {6, 3}, {11, 14}, {12, 15}, {13, 16}});
}

SkeletonConfig SkeletonConfig::generic(int joints) {
  std::vector<std::string> names;
  for (int i = 0; i < joints; ++i) names.push_back("joint" + std::to_string(i));
  return SkeletonConfig(std::move(names), 0, {});
}

std::vector<int> SkeletonConfig::mirror_permutation() const {
  std::vector<int> perm(names_.size());
  for (int i = 0; i < joint_count(); ++i) perm[i] = i;
  for (auto [l, r] : pairs_) {
    perm[l] = r;
    perm[r] = l;
  }
  return perm;
}

MotionMatrix motion_matrix_from_poses(std::span<const Pose3d> poses) {
  if (poses.empty()) throw DimensionError("no poses given");
  const auto joints = static_cast<Eigen::Index>(poses.front().joints.size());
  if (joints < 1) throw DimensionError("pose has no joints");
  Matrix m(static_cast<Eigen::Index>(poses.size()), 3 * joints);
  for (Eigen::Index f = 0; f < m.rows(); ++f) {
    const auto& p = poses[f];
    if (static_cast<Eigen::Index>(p.joints.size()) != joints)
      throw DimensionError("frame " + std::to_string(f) + " has " +
                           std::to_string(p.joints.size()) + " joints, expected " +
                           std::to_string(joints));
    for (Eigen::Index j = 0; j < joints; ++j)
      m.block<1, 3>(f, 3 * j) = p.joints[j].transpose();
  }
  return MotionMatrix(std::move(m));
}

std::vector<Pose3d> poses_from_motion_matrix(const MotionMatrix& m) {
  std::vector<Pose3d> out(m.frames());
  for (Eigen::Index f = 0; f < m.frames(); ++f) {
    out[f].joints.resize(m.joints());
    for (Eigen::Index j = 0; j < m.joints(); ++j) out[f].joints[j] = m.joint(f, j);
  }
  return out;
}

Pose3d root_align(const Pose3d& pose, const SkeletonConfig& skeleton) {
  const int root = skeleton.root_index();
  if (root < 0 || root >= static_cast<int>(pose.joints.size()))
    throw ParameterError("root index out of range for pose");
  Pose3d out = pose;
  const Eigen::Vector3d origin = pose.joints[root];
  for (auto& p : out.joints) p -= origin;
  return out;
}

Matrix root_align_rows(const Matrix& rows, int root_index) {
  if (rows.cols() % 3 != 0) throw DimensionError("row width not a multiple of 3");
  const Eigen::Index joints = rows.cols() / 3;
  if (root_index < 0 || root_index >= joints)
    throw ParameterError("root index out of range");
  Matrix out = rows;
  for (Eigen::Index j = 0; j < joints; ++j)
    out.middleCols<3>(3 * j) -= rows.middleCols<3>(3 * root_index);
  return out;
}

namespace {

template <class Pose>
std::vector<Pose> flip_sequence(std::span<const Pose> seq,
                                const SkeletonConfig& skeleton) {
  const auto perm = skeleton.mirror_permutation();
  std::vector<Pose> out;
  out.reserve(seq.size());
  for (const auto& pose : seq) {
    if (pose.joints.size() != perm.size())
      throw DimensionError("pose joint count does not match skeleton");
    Pose flipped = pose;
    for (std::size_t j = 0; j < perm.size(); ++j) {
      flipped.joints[j] = pose.joints[perm[j]];
      flipped.joints[j][0] = -flipped.joints[j][0];
    }
    out.push_back(std::move(flipped));
  }
  return out;
}

}  // namespace

std::vector<Pose2d> flip_pose_sequence(std::span<const Pose2d> seq,
                                       const SkeletonConfig& skeleton) {
  return flip_sequence(seq, skeleton);
}

std::vector<Pose3d> flip_pose_sequence(std::span<const Pose3d> seq,
                                       const SkeletonConfig& skeleton) {
  return flip_sequence(seq, skeleton);
}

Matrix flip_rows(const Matrix& rows, int dims, const SkeletonConfig& skeleton) {
  const auto perm = skeleton.mirror_permutation();
  const auto joints = static_cast<Eigen::Index>(perm.size());
  if (rows.cols() != dims * joints)
    throw DimensionError("row width " + std::to_string(rows.cols()) +
                         " does not match " + std::to_string(joints) +
                         " joints of dimension " + std::to_string(dims));
  Matrix out(rows.rows(), rows.cols());
  for (Eigen::Index j = 0; j < joints; ++j) {
    out.middleCols(dims * j, dims) = rows.middleCols(dims * perm[j], dims);
    out.col(dims * j) *= -1.0;
  }
  return out;
}

}  // namespace trajlift
