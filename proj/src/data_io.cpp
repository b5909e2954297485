// Copyright 2026 The trajlift Authors
// SPDX-License-Identifier: Apache-2.0

#include "trajlift/data_io.hpp"

#include "text_format.hpp"
#include "trajlift/bases.hpp"
#include "trajlift/error.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <random>

namespace trajlift {

PoseSequence read_pose_sequence(std::istream& is, const std::string& source) {
  std::string line;
  if (!std::getline(is, line)) throw ParseError(source, 1, "empty pose file");
  const auto head = text::split(line);
  if (head.size() < 2 || head[0] != "POSESEQ" || head[1] != "v1")
    throw ParseError(source, 1, "expected 'POSESEQ v1' header");
  const auto fields = text::parse_fields(head, 2);
  if (!fields || !fields->contains("F") || !fields->contains("J") ||
      !fields->contains("D"))
    throw ParseError(source, 1, "header needs F=, J= and D=");
  const auto frames = text::parse_int(fields->at("F"));
  const auto joints = text::parse_int(fields->at("J"));
  const auto dims = text::parse_int(fields->at("D"));
  if (!frames || *frames < 1) throw ParseError(source, 1, "invalid F");
  if (!joints || *joints < 1) throw ParseError(source, 1, "invalid J");
  if (!dims || (*dims != 2 && *dims != 3))
    throw ParseError(source, 1, "D must be 2 or 3");

  PoseSequence seq;
  seq.dims = static_cast<int>(*dims);
  const Eigen::Index width = *joints * *dims;
  seq.rows.resize(*frames, width);
  Eigen::Index row = 0;
  std::size_t line_no = 1;
  while (std::getline(is, line)) {
    ++line_no;
    const auto tokens = text::split(line);
    if (tokens.empty()) continue;
    if (row >= *frames)
      throw ParseError(source, line_no,
                       "data row beyond F=" + std::to_string(*frames));
    if (static_cast<Eigen::Index>(tokens.size()) != width)
      throw ParseError(source, line_no,
                       "expected " + std::to_string(width) + " values, got " +
                           std::to_string(tokens.size()));
    for (Eigen::Index c = 0; c < width; ++c) {
      const auto v = text::parse_double(tokens[c]);
      if (!v)
        throw ParseError(source, line_no,
                         "non-numeric token '" + std::string(tokens[c]) + "'");
      if (!std::isfinite(*v))
        throw ParseError(source, line_no, "non-finite value");
      seq.rows(row, c) = *v;
    }
    ++row;
  }
  if (row != *frames)
    throw ParseError(source, line_no + 1,
                     "expected " + std::to_string(*frames) + " rows, got " +
                         std::to_string(row));
  return seq;
}

void write_pose_sequence(const PoseSequence& seq, std::ostream& os) {
  if (seq.dims != 2 && seq.dims != 3)
    throw ParameterError("pose dimension must be 2 or 3");
  if (seq.rows.cols() % seq.dims != 0 || seq.rows.rows() < 1)
    throw DimensionError("pose rows do not hold whole joints");
  os << "POSESEQ v1 F=" << seq.frames() << " J=" << seq.joints()
     << " D=" << seq.dims << '\n';
  std::vector<double> row(static_cast<std::size_t>(seq.rows.cols()));
  for (Eigen::Index f = 0; f < seq.rows.rows(); ++f) {
    for (Eigen::Index c = 0; c < seq.rows.cols(); ++c) row[c] = seq.rows(f, c);
    text::write_row(os, row.data(), row.size());
  }
}

PoseSequence load_pose_sequence(const std::filesystem::path& path) {
  std::ifstream is(path);
  if (!is) throw IoError("cannot open " + path.string());
  return read_pose_sequence(is, path.string());
}

void save_pose_sequence(const PoseSequence& seq,
                        const std::filesystem::path& path) {
  std::ofstream os(path);
  if (!os) throw IoError("cannot open " + path.string() + " for writing");
  write_pose_sequence(seq, os);
  if (!os) throw IoError("failed writing " + path.string());
}

std::vector<Pose2d> to_poses2d(const PoseSequence& seq) {
  if (seq.dims != 2) throw DimensionError("expected a 2D pose sequence");
  std::vector<Pose2d> out(seq.frames());
  for (Eigen::Index f = 0; f < seq.frames(); ++f)
    for (Eigen::Index j = 0; j < seq.joints(); ++j)
      out[f].joints.emplace_back(seq.rows(f, 2 * j), seq.rows(f, 2 * j + 1));
  return out;
}

std::vector<Pose3d> to_poses3d(const PoseSequence& seq) {
  if (seq.dims != 3) throw DimensionError("expected a 3D pose sequence");
  return poses_from_motion_matrix(MotionMatrix(seq.rows));
}

PoseSequence from_poses(std::span<const Pose2d> poses) {
  if (poses.empty()) throw DimensionError("no poses given");
  const auto joints = static_cast<Eigen::Index>(poses.front().joints.size());
  PoseSequence seq{2, Matrix(static_cast<Eigen::Index>(poses.size()), 2 * joints)};
  for (Eigen::Index f = 0; f < seq.rows.rows(); ++f) {
    if (static_cast<Eigen::Index>(poses[f].joints.size()) != joints)
      throw DimensionError("inconsistent joint count across frames");
    for (Eigen::Index j = 0; j < joints; ++j)
      seq.rows.block<1, 2>(f, 2 * j) = poses[f].joints[j].transpose();
  }
  return seq;
}

PoseSequence from_poses(std::span<const Pose3d> poses) {
  return PoseSequence{3, motion_matrix_from_poses(poses).data()};
}

SkeletonConfig read_skeleton(std::istream& is, const std::string& source) {
  std::string line;
  if (!std::getline(is, line)) throw ParseError(source, 1, "empty skeleton file");
  const auto head = text::split(line);
  if (head.size() != 2 || head[0] != "SKEL" || head[1] != "v1")
    throw ParseError(source, 1, "expected 'SKEL v1' header");

  std::map<long long, std::string> names;
  std::optional<long long> root;
  std::vector<std::pair<int, int>> pairs;
  std::size_t line_no = 1;
  while (std::getline(is, line)) {
    ++line_no;
    if (auto hash = line.find('#'); hash != std::string::npos) line.resize(hash);
    const auto t = text::split(line);
    if (t.empty()) continue;
    auto index = [&](std::string_view tok) {
      const auto v = text::parse_int(tok);
      if (!v || *v < 0)
        throw ParseError(source, line_no,
                         "invalid joint index '" + std::string(tok) + "'");
      return *v;
    };
    if (t[0] == "joint" && t.size() == 3) {
      const auto i = index(t[1]);
      if (!names.emplace(i, std::string(t[2])).second)
        throw ParseError(source, line_no, "duplicate joint index");
    } else if (t[0] == "root" && t.size() == 2) {
      if (root) throw ParseError(source, line_no, "duplicate root line");
      root = index(t[1]);
    } else if (t[0] == "pair" && t.size() == 3) {
      pairs.emplace_back(static_cast<int>(index(t[1])),
                         static_cast<int>(index(t[2])));
    } else {
      throw ParseError(source, line_no, "unrecognized line '" + line + "'");
    }
  }
  if (names.empty()) throw ParseError(source, line_no, "no joints declared");
  if (!root) throw ParseError(source, line_no, "missing root line");
  std::vector<std::string> ordered;
  for (const auto& [i, name] : names) {
    if (i != static_cast<long long>(ordered.size()))
      throw ParseError(source, 0, "joint indices must be 0..J-1 without gaps");
    ordered.push_back(name);
  }
  try {
    return SkeletonConfig(std::move(ordered), static_cast<int>(*root),
                          std::move(pairs));
  } catch (const ParameterError& e) {
    throw ParseError(source, 0, e.what());
  }
}

void write_skeleton(const SkeletonConfig& skeleton, std::ostream& os) {
  os << "SKEL v1\n";
  for (int i = 0; i < skeleton.joint_count(); ++i)
    os << "joint " << i << ' ' << skeleton.joint_names()[i] << '\n';
  os << "root " << skeleton.root_index() << '\n';
  for (auto [l, r] : skeleton.lr_pairs()) os << "pair " << l << ' ' << r << '\n';
}

SkeletonConfig load_skeleton(const std::filesystem::path& path) {
  std::ifstream is(path);
  if (!is) throw IoError("cannot open " + path.string());
  return read_skeleton(is, path.string());
}

void save_skeleton(const SkeletonConfig& skeleton,
                   const std::filesystem::path& path) {
  std::ofstream os(path);
  if (!os) throw IoError("cannot open " + path.string() + " for writing");
  write_skeleton(skeleton, os);
}

std::map<std::string, std::string> read_key_values(std::istream& is,
                                                   const std::string& source) {
  std::map<std::string, std::string> out;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(is, line)) {
    ++line_no;
    if (auto hash = line.find('#'); hash != std::string::npos) line.resize(hash);
    const auto t = text::split(line);
    if (t.empty()) continue;
    std::string joined;
    for (const auto& tok : t) joined += tok;
    const auto eq = joined.find('=');
    if (eq == std::string::npos || eq == 0)
      throw ParseError(source, line_no, "expected key=value");
    if (!out.emplace(joined.substr(0, eq), joined.substr(eq + 1)).second)
      throw ParseError(source, line_no,
                       "duplicate key '" + joined.substr(0, eq) + "'");
  }
  return out;
}

std::map<std::string, std::string> load_key_values(
    const std::filesystem::path& path) {
  std::ifstream is(path);
  if (!is) throw IoError("cannot open " + path.string());
  return read_key_values(is, path.string());
}

Matrix normalize_2d(const Matrix& rows2d, double width, double height) {
  if (!(width > 0.0) || !(height > 0.0))
    throw ParameterError("image dimensions must be positive");
  if (rows2d.cols() % 2 != 0) throw DimensionError("2D rows need (u, v) pairs");
  const double side = std::max(width, height);
  Matrix out(rows2d.rows(), rows2d.cols());
  for (Eigen::Index c = 0; c < rows2d.cols(); c += 2) {
    out.col(c) = (2.0 * rows2d.col(c).array() - width) / side;
    out.col(c + 1) = (2.0 * rows2d.col(c + 1).array() - height) / side;
  }
  return out;
}

Matrix denormalize_2d(const Matrix& rows2d, double width, double height) {
  if (!(width > 0.0) || !(height > 0.0))
    throw ParameterError("image dimensions must be positive");
  if (rows2d.cols() % 2 != 0) throw DimensionError("2D rows need (u, v) pairs");
  const double side = std::max(width, height);
  Matrix out(rows2d.rows(), rows2d.cols());
  for (Eigen::Index c = 0; c < rows2d.cols(); c += 2) {
    out.col(c) = (rows2d.col(c).array() * side + width) / 2.0;
    out.col(c + 1) = (rows2d.col(c + 1).array() * side + height) / 2.0;
  }
  return out;
}

Matrix project_camera(const Matrix& rows3d, const CameraModel& camera) {
  if (rows3d.cols() % 3 != 0) throw DimensionError("3D rows need (X, Y, Z)");
  const Eigen::Index joints = rows3d.cols() / 3;
  Matrix out(rows3d.rows(), 2 * joints);
  if (camera.kind == CameraModel::Kind::kOrthographic) {
    for (Eigen::Index j = 0; j < joints; ++j)
      out.middleCols<2>(2 * j) = rows3d.middleCols<2>(3 * j);
    return out;
  }
  if (!(camera.focal > 0.0))
    throw ParameterError("pinhole focal length must be positive");
  for (Eigen::Index f = 0; f < rows3d.rows(); ++f)
    for (Eigen::Index j = 0; j < joints; ++j) {
      const double z = rows3d(f, 3 * j + 2);
      if (!(z > 0.0))
        throw NumericError("non-positive depth at frame " + std::to_string(f) +
                           ", joint " + std::to_string(j));
      out(f, 2 * j) = camera.focal * rows3d(f, 3 * j) / z + camera.cx;
      out(f, 2 * j + 1) = camera.focal * rows3d(f, 3 * j + 1) / z + camera.cy;
    }
  return out;
}

namespace {

Matrix gaussian(Eigen::Index rows, Eigen::Index cols, double sigma,
                std::mt19937_64& rng) {
  std::normal_distribution<double> dist(0.0, sigma);
  Matrix m(rows, cols);
  for (Eigen::Index c = 0; c < cols; ++c)
    for (Eigen::Index r = 0; r < rows; ++r) m(r, c) = dist(rng);
  return m;
}

}  // namespace

MotionMatrix synth_motion(const SynthConfig& config) {
  if (config.frames < 1 || config.joints < 1)
    throw ParameterError("synthetic motion needs F >= 1 and J >= 1");
  if (config.band_limit < 1 || config.band_limit > config.frames)
    throw ParameterError("band limit must be in [1, F]");
  if (!(config.noise_sigma_mm >= 0.0) || !std::isfinite(config.amplitude_mm))
    throw ParameterError("noise sigma must be >= 0 and amplitude finite");
  if (config.shape_rank < 0) throw ParameterError("shape rank must be >= 0");

  const Eigen::Index width = 3 * config.joints;
  std::mt19937_64 rng(config.seed);
  Matrix coeffs;
  if (config.shape_rank == 0) {
    coeffs = gaussian(config.band_limit, width, config.amplitude_mm, rng);
  } else {
    std::mt19937_64 shape_rng(config.shape_seed);
    const Matrix shapes =
        gaussian(config.shape_rank, width,
                 1.0 / std::sqrt(static_cast<double>(config.shape_rank)),
                 shape_rng);
    coeffs = gaussian(config.band_limit, config.shape_rank,
                      config.amplitude_mm, rng) *
             shapes;
  }
  Matrix s = dct_basis(config.frames, config.band_limit).theta() * coeffs;
  if (config.noise_sigma_mm > 0.0)
    s += gaussian(config.frames, width, config.noise_sigma_mm, rng);
  return MotionMatrix(std::move(s));
}

std::vector<LiftingSample> make_lifting_corpus(const LiftingScenario& scenario) {
  if (scenario.count < 1) throw ParameterError("corpus size must be positive");
  std::vector<LiftingSample> out;
  out.reserve(static_cast<std::size_t>(scenario.count));
  for (int i = 0; i < scenario.count; ++i) {
    SynthConfig cfg = scenario.motion;
    cfg.seed = scenario.motion.seed + static_cast<std::uint64_t>(i);
    Matrix target = root_align_rows(synth_motion(cfg).data(), scenario.root_index);
    Matrix placed = target;
    for (Eigen::Index j = 0; j < cfg.joints; ++j)
      placed.col(3 * j + 2).array() += scenario.subject_depth_mm;
    Matrix input = normalize_2d(project_camera(placed, scenario.camera),
                                scenario.image_width, scenario.image_height);
    out.push_back({std::move(input), std::move(target)});
  }
  return out;
}

std::vector<std::filesystem::path> list_files(const std::filesystem::path& dir,
                                              const std::string& suffix) {
  std::error_code ec;
  if (!std::filesystem::is_directory(dir, ec))
    throw IoError("not a directory: " + dir.string());
  std::vector<std::filesystem::path> out;
  for (const auto& entry : std::filesystem::directory_iterator(dir, ec)) {
    if (!entry.is_regular_file()) continue;
    const auto name = entry.path().filename().string();
    if (name.size() >= suffix.size() &&
        name.compare(name.size() - suffix.size(), suffix.size(), suffix) == 0)
      out.push_back(entry.path());
  }
  if (ec) throw IoError("cannot list " + dir.string() + ": " + ec.message());
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace trajlift
