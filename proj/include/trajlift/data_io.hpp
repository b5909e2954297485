// Copyright 2026 The trajlift Authors
// SPDX-License-Identifier: Apache-2.0

// File formats, 2D normalization, camera projection and the synthetic
// band-limited motion generator.
//
//   POSESEQ v1 F=<F> J=<J> D=<2|3>     then F rows of J*D numbers
//   SKEL v1                            then `joint <i> <name>`, `root <i>`,
//                                      `pair <left> <right>` lines
//
// Numbers are written in shortest round-trip form so save/load is lossless.
// Synthetic data has no time unit; frames are just indices.

#pragma once

#include "trajlift/motion.hpp"

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <string>
#include <vector>

namespace trajlift {

struct PoseSequence {
  int dims = 3;  // 2 or 3
  Matrix rows;   // F x (J * dims)

  Eigen::Index frames() const { return rows.rows(); }
  Eigen::Index joints() const { return dims > 0 ? rows.cols() / dims : 0; }
};

PoseSequence read_pose_sequence(std::istream& is, const std::string& source);
void write_pose_sequence(const PoseSequence& seq, std::ostream& os);
PoseSequence load_pose_sequence(const std::filesystem::path& path);
void save_pose_sequence(const PoseSequence& seq,
                        const std::filesystem::path& path);

std::vector<Pose2d> to_poses2d(const PoseSequence& seq);
std::vector<Pose3d> to_poses3d(const PoseSequence& seq);
PoseSequence from_poses(std::span<const Pose2d> poses);
PoseSequence from_poses(std::span<const Pose3d> poses);

SkeletonConfig read_skeleton(std::istream& is, const std::string& source);
void write_skeleton(const SkeletonConfig& skeleton, std::ostream& os);
SkeletonConfig load_skeleton(const std::filesystem::path& path);
void save_skeleton(const SkeletonConfig& skeleton,
                   const std::filesystem::path& path);

// Line-oriented key=value files; '#' starts a comment.
std::map<std::string, std::string> read_key_values(std::istream& is,
                                                   const std::string& source);
std::map<std::string, std::string> load_key_values(
    const std::filesystem::path& path);

// Pixel coordinates to [-1, 1] along the long image side, aspect preserved:
// u' = (2u - w) / max(w, h), v' = (2v - h) / max(w, h).
Matrix normalize_2d(const Matrix& rows2d, double width, double height);
Matrix denormalize_2d(const Matrix& rows2d, double width, double height);

struct CameraModel {
  enum class Kind { kOrthographic, kPinhole };
  Kind kind = Kind::kOrthographic;
  double focal = 1.0;
  double cx = 0.0;
  double cy = 0.0;
};

// (X, Y, Z) -> (X, Y) or (f X / Z + cx, f Y / Z + cy).
Matrix project_camera(const Matrix& rows3d, const CameraModel& camera);

struct SynthConfig {
  Eigen::Index frames = 50;
  Eigen::Index joints = 17;
  Eigen::Index band_limit = 8;  // number of DCT bases the motion uses
  double amplitude_mm = 100.0;
  double noise_sigma_mm = 0.0;
  std::uint64_t seed = 0;
  // 0: every trajectory has independent coefficients. r > 0: coefficients
  // are A = G * B with a corpus-wide r x 3J shape basis B drawn from
  // shape_seed, so joints move in a correlated, low-rank way.
  Eigen::Index shape_rank = 0;
  std::uint64_t shape_seed = 0;
};

// DCT(F, band_limit) * Gaussian coefficients * amplitude + Gaussian noise.
MotionMatrix synth_motion(const SynthConfig& config);

// Paired 2D input / 3D target sequences for lifting experiments.
struct LiftingSample {
  Matrix input2d;   // F x 2J, normalized image units
  Matrix target3d;  // F x 3J, root-aligned millimeters
};

struct LiftingScenario {
  SynthConfig motion;   // seed is the seed of the first sequence
  int count = 100;
  int root_index = 0;
  CameraModel camera{CameraModel::Kind::kPinhole, 1000.0, 500.0, 500.0};
  double subject_depth_mm = 4000.0;
  double image_width = 1000.0;
  double image_height = 1000.0;
};

// Sequence i uses seed motion.seed + i. Targets are root-aligned; inputs are
// the projection of the target placed subject_depth_mm in front of the
// camera, normalized by the image size.
std::vector<LiftingSample> make_lifting_corpus(const LiftingScenario& scenario);

// Sorted regular files in dir whose name ends with suffix.
std::vector<std::filesystem::path> list_files(const std::filesystem::path& dir,
                                              const std::string& suffix);

}  // namespace trajlift
