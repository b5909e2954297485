// Copyright 2026 The trajlift Authors
// SPDX-License-Identifier: Apache-2.0

#include "cli_support.hpp"

#include <algorithm>
#include <fstream>
#include <system_error>

namespace fs = std::filesystem;

namespace trajlift_cli {

int exit_code_for(trajlift_status status) {
  switch (status) {
    case TRAJLIFT_OK:
      return kExitOk;
    case TRAJLIFT_ERR_INVALID_ARGUMENT:
    case TRAJLIFT_ERR_DIMENSION:
      return kExitUsage;
    case TRAJLIFT_ERR_IO:
    case TRAJLIFT_ERR_PARSE:
      return kExitIo;
    case TRAJLIFT_ERR_NUMERIC:
      return kExitNumeric;
    case TRAJLIFT_ERR_INTERNAL:
      break;
  }
  return kExitInternal;
}

void check(trajlift_status status) {
  if (status != TRAJLIFT_OK)
    throw Failure(exit_code_for(status), trajlift_last_error());
}

PoseSeq load_poseseq(const fs::path& path) {
  trajlift_poseseq* raw = nullptr;
  check(trajlift_poseseq_load(path.c_str(), &raw));
  return PoseSeq(raw);
}

void save_poseseq(const trajlift_poseseq* seq, const fs::path& path) {
  check(trajlift_poseseq_save(seq, path.c_str()));
}

PoseSeq slice_frames(const trajlift_poseseq* seq, int start, int count) {
  const int width = trajlift_poseseq_joints(seq) * trajlift_poseseq_dims(seq);
  const double* data = trajlift_poseseq_data(seq) +
                       static_cast<std::ptrdiff_t>(start) * width;
  trajlift_poseseq* raw = nullptr;
  check(trajlift_poseseq_create(count, trajlift_poseseq_joints(seq),
                                trajlift_poseseq_dims(seq), data, &raw));
  return PoseSeq(raw);
}

std::vector<const trajlift_poseseq*> views(const std::vector<PoseSeq>& seqs) {
  std::vector<const trajlift_poseseq*> out;
  out.reserve(seqs.size());
  for (const auto& s : seqs) out.push_back(s.get());
  return out;
}

Skeleton resolve_skeleton(const std::string& flag, const fs::path& data_dir,
                          int joints) {
  trajlift_skeleton* raw = nullptr;
  if (!flag.empty()) {
    require_file(flag, "skeleton");
    check(trajlift_skeleton_load(flag.c_str(), &raw));
  } else if (!data_dir.empty() && fs::is_regular_file(data_dir / "skeleton.skel")) {
    check(trajlift_skeleton_load((data_dir / "skeleton.skel").c_str(), &raw));
  } else if (joints == 17) {
    check(trajlift_skeleton_h36m17(&raw));
  } else {
    check(trajlift_skeleton_generic(joints, &raw));
  }
  Skeleton skel(raw);
  if (trajlift_skeleton_joints(skel.get()) != joints)
    usage_error("skeleton has " + std::to_string(trajlift_skeleton_joints(skel.get())) +
                " joints, data has " + std::to_string(joints));
  return skel;
}

void require_file(const fs::path& path, const std::string& what) {
  std::error_code ec;
  if (!fs::is_regular_file(path, ec))
    throw Failure(kExitIo, what + " file not found: " + path.string());
}

void require_dir(const fs::path& path, const std::string& what) {
  std::error_code ec;
  if (!fs::is_directory(path, ec))
    throw Failure(kExitIo, what + " directory not found: " + path.string());
}

void ensure_dir(const fs::path& path) {
  std::error_code ec;
  fs::create_directories(path, ec);
  if (ec || !fs::is_directory(path))
    throw Failure(kExitIo, "cannot create directory " + path.string());
}

std::vector<fs::path> files_with_extension(const fs::path& dir,
                                           const std::string& ext) {
  std::vector<fs::path> out;
  std::error_code ec;
  for (const auto& entry : fs::directory_iterator(dir, ec))
    if (entry.is_regular_file() && entry.path().extension() == ext)
      out.push_back(entry.path());
  if (ec) throw Failure(kExitIo, "cannot list " + dir.string() + ": " + ec.message());
  std::sort(out.begin(), out.end());
  return out;
}

std::string fmt(double v) {
  char buf[64];
  const std::size_t n = trajlift_format_double(v, buf, sizeof buf);
  return std::string(buf, n);
}

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream os(path, std::ios::binary);
  os << text;
  os.flush();
  if (!os) throw Failure(kExitIo, "cannot write " + path.string());
}

}  // namespace trajlift_cli
