// Copyright 2026 The trajlift Authors
// SPDX-License-Identifier: Apache-2.0

#include "test_util.hpp"
#include "trajlift/error.hpp"
#include "trajlift/motion.hpp"

#include <doctest.h>

using namespace trajlift;
using trajlift::testing::random_matrix;

TEST_CASE("motion matrix lays out X Y Z per joint") {
  const Pose3d single{{{1, 2, 3}}};
  const auto m = motion_matrix_from_poses(std::vector<Pose3d>{single});
  CHECK(m.data().rows() == 1);
  CHECK(m.data().cols() == 3);
  CHECK(m.data()(0, 0) == 1);
  CHECK(m.data()(0, 1) == 2);
  CHECK(m.data()(0, 2) == 3);

  const std::vector<Pose3d> two{Pose3d{{{1, 2, 3}, {4, 5, 6}}},
                                Pose3d{{{7, 8, 9}, {10, 11, 12}}}};
  const auto s = motion_matrix_from_poses(two);
  Matrix expected(2, 6);
  expected << 1, 2, 3, 4, 5, 6, 7, 8, 9, 10, 11, 12;
  CHECK(s.data() == expected);
}

TEST_CASE("motion matrix rejects inconsistent joint counts") {
  const std::vector<Pose3d> bad{Pose3d{{{1, 2, 3}}}, Pose3d{{{1, 2, 3}, {4, 5, 6}}}};
  CHECK_THROWS_AS(motion_matrix_from_poses(bad), DimensionError);
  CHECK_THROWS_AS(motion_matrix_from_poses(std::vector<Pose3d>{}), DimensionError);
  CHECK_THROWS_AS(MotionMatrix(Matrix::Zero(2, 4)), DimensionError);
}

TEST_CASE("poses round trip through the motion matrix") {
  std::mt19937_64 rng(7);
  const MotionMatrix m(random_matrix(10, 51, rng, 100.0));
  const auto poses = poses_from_motion_matrix(m);
  CHECK(poses.size() == 10);
  CHECK(poses[3].joints.size() == 17);
  CHECK(motion_matrix_from_poses(poses) == m);

  const auto zeros = poses_from_motion_matrix(MotionMatrix::zeros(2, 2));
  REQUIRE(zeros.size() == 2);
  for (const auto& p : zeros)
    for (const auto& j : p.joints) CHECK(j.isZero());

  const auto one = poses_from_motion_matrix(MotionMatrix(Matrix{{1.0, 2.0, 3.0}}));
  CHECK(one[0].joints[0] == Eigen::Vector3d(1, 2, 3));
}

TEST_CASE("root alignment translates the root to the origin") {
  const auto sk = SkeletonConfig::generic(2);
  const Pose3d p{{{5, 5, 5}, {6, 5, 5}}};
  const Pose3d a = root_align(p, sk);
  CHECK(a.joints[0].isZero());
  CHECK(a.joints[1] == Eigen::Vector3d(1, 0, 0));
  CHECK(root_align(a, sk).joints == a.joints);

  std::mt19937_64 rng(3);
  const MotionMatrix m(random_matrix(1, 51, rng, 100.0));
  const Pose3d q = poses_from_motion_matrix(m)[0];
  const auto h36m = SkeletonConfig::h36m17();
  const Pose3d once = root_align(q, h36m);
  const Pose3d twice = root_align(once, h36m);
  for (int i = 0; i < 17; ++i) {
    CHECK((once.joints[i] - twice.joints[i]).norm() == doctest::Approx(0.0));
    for (int j = 0; j < 17; ++j)
      CHECK((once.joints[i] - once.joints[j]).norm() ==
            doctest::Approx((q.joints[i] - q.joints[j]).norm()));
  }
}

TEST_CASE("flip negates the first coordinate and swaps pairs") {
  const SkeletonConfig sk({"root", "left", "right"}, 0, {{1, 2}});
  const std::vector<Pose2d> seq{Pose2d{{{0, 0}, {1, 1}, {-2, 1}}}};
  const auto flipped = flip_pose_sequence(seq, sk);
  CHECK(flipped[0].joints[0] == Eigen::Vector2d(0, 0));
  CHECK(flipped[0].joints[1] == Eigen::Vector2d(2, 1));
  CHECK(flipped[0].joints[2] == Eigen::Vector2d(-1, 1));

  const std::vector<Pose3d> root_only{Pose3d{{{3, 4, 5}, {0, 0, 0}, {0, 0, 0}}}};
  CHECK(flip_pose_sequence(root_only, sk)[0].joints[0] == Eigen::Vector3d(-3, 4, 5));
}

TEST_CASE("flip is an involution for every skeleton") {
  std::mt19937_64 rng(11);
  const std::vector<SkeletonConfig> skeletons{
      SkeletonConfig::h36m17(), SkeletonConfig::generic(4),
      SkeletonConfig({"a", "b", "c", "d", "e"}, 2, {{0, 4}, {1, 3}})};
  for (const auto& sk : skeletons) {
    for (int dims : {2, 3}) {
      const Matrix rows = random_matrix(6, dims * sk.joint_count(), rng);
      CHECK(flip_rows(flip_rows(rows, dims, sk), dims, sk) == rows);
    }
    const auto poses = poses_from_motion_matrix(
        MotionMatrix(random_matrix(4, 3 * sk.joint_count(), rng)));
    const auto back = flip_pose_sequence(flip_pose_sequence(poses, sk), sk);
    for (std::size_t f = 0; f < poses.size(); ++f) CHECK(back[f].joints == poses[f].joints);
  }
}

TEST_CASE("flip on flat rows agrees with flip on poses") {
  std::mt19937_64 rng(5);
  const auto sk = SkeletonConfig::h36m17();
  const MotionMatrix m(random_matrix(5, 51, rng));
  const auto poses = poses_from_motion_matrix(m);
  CHECK(motion_matrix_from_poses(flip_pose_sequence(poses, sk)).data() ==
        flip_rows(m.data(), 3, sk));
}

TEST_CASE("skeleton validation") {
  CHECK_THROWS_AS(SkeletonConfig({"a", "b"}, 2, {}), ParameterError);
  CHECK_THROWS_AS(SkeletonConfig({"a", "b", "c"}, 0, {{0, 1}}), ParameterError);
  CHECK_THROWS_AS(SkeletonConfig({"a", "b", "c", "d"}, 0, {{1, 2}, {2, 3}}),
                  ParameterError);
  CHECK_THROWS_AS(SkeletonConfig({"a", "b", "c"}, 0, {{1, 1}}), ParameterError);
  CHECK_THROWS_AS(SkeletonConfig({"a", "b"}, 0, {{1, 5}}), ParameterError);
  CHECK(SkeletonConfig::h36m17().joint_count() == 17);
}
