// Copyright 2026 The trajlift Authors
// SPDX-License-Identifier: Apache-2.0

// Pose and motion representations. A motion matrix stores one frame per row
// with columns X1 Y1 Z1 ... XJ YJ ZJ; its column space is the trajectory
// space the bases module works in.

#pragma once

#include <Eigen/Core>

#include <span>
#include <string>
#include <utility>
#include <vector>

namespace trajlift {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

struct Pose2d {
  std::vector<Eigen::Vector2d> joints;
};

struct Pose3d {
  std::vector<Eigen::Vector3d> joints;
};

// F x 3J matrix of 3D joint coordinates in millimeters.
class MotionMatrix {
 public:
  MotionMatrix() = default;
  // Throws DimensionError unless cols is a multiple of 3, NumericError on
  // non-finite entries.
  explicit MotionMatrix(Matrix data);

  static MotionMatrix zeros(Eigen::Index frames, Eigen::Index joints);

  Eigen::Index frames() const { return data_.rows(); }
  Eigen::Index joints() const { return data_.cols() / 3; }
  const Matrix& data() const { return data_; }

  Eigen::Vector3d joint(Eigen::Index frame, Eigen::Index j) const {
    return data_.block<1, 3>(frame, 3 * j).transpose();
  }

  bool operator==(const MotionMatrix& other) const {
    return data_.rows() == other.data_.rows() &&
           data_.cols() == other.data_.cols() && data_ == other.data_;
  }

 private:
  Matrix data_;
};

class SkeletonConfig {
 public:
  SkeletonConfig() = default;
  // Validates: indices in range, pairs disjoint, root unpaired.
  SkeletonConfig(std::vector<std::string> joint_names, int root_index,
                 std::vector<std::pair<int, int>> lr_pairs);

  // 17-joint Human3.6M subset, hip as root.
  static SkeletonConfig h36m17();
  // J joints named joint<i>, root 0, no pairs.
  static SkeletonConfig generic(int joints);

  int joint_count() const { return static_cast<int>(names_.size()); }
  int root_index() const { return root_; }
  const std::vector<std::string>& joint_names() const { return names_; }
  const std::vector<std::pair<int, int>>& lr_pairs() const { return pairs_; }

  // Index each joint maps to under a left/right swap.
  std::vector<int> mirror_permutation() const;

  bool operator==(const SkeletonConfig&) const = default;

 private:
  std::vector<std::string> names_;
  int root_ = 0;
  std::vector<std::pair<int, int>> pairs_;
};

MotionMatrix motion_matrix_from_poses(std::span<const Pose3d> poses);
std::vector<Pose3d> poses_from_motion_matrix(const MotionMatrix& m);

Pose3d root_align(const Pose3d& pose, const SkeletonConfig& skeleton);
// Per-row root alignment of an F x 3J matrix.
Matrix root_align_rows(const Matrix& rows, int root_index);

std::vector<Pose2d> flip_pose_sequence(std::span<const Pose2d> seq,
                                       const SkeletonConfig& skeleton);
std::vector<Pose3d> flip_pose_sequence(std::span<const Pose3d> seq,
                                       const SkeletonConfig& skeleton);
// Flip on the flattened layout: each row holds J groups of `dims` coordinates.
// Negates the first coordinate of every joint and swaps paired joints.
Matrix flip_rows(const Matrix& rows, int dims, const SkeletonConfig& skeleton);

}  // namespace trajlift
