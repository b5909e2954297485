// Copyright 2026 The trajlift Authors
// SPDX-License-Identifier: Apache-2.0
// Small helpers shared by the trajlift command-line tool: RAII handles over
// the C API, exit-code mapping and text output.

#pragma once

#include "trajlift/trajlift.h"

#include <filesystem>
#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

namespace trajlift_cli {

enum ExitCode : int {
  kExitOk = 0,
  kExitInternal = 1,
  kExitUsage = 2,
  kExitIo = 3,
  kExitNumeric = 4,
};

// Thrown by command bodies; main prints the message and exits with code.
class Failure : public std::runtime_error {
 public:
  Failure(int code, const std::string& what)
      : std::runtime_error(what), code_(code) {}
  int code() const { return code_; }

 private:
  int code_;
};

int exit_code_for(trajlift_status status);

// Throws Failure carrying trajlift_last_error() unless status is OK.
void check(trajlift_status status);

[[noreturn]] inline void usage_error(const std::string& what) {
  throw Failure(kExitUsage, what);
}

template <typename T, void (*Free)(T*)>
struct Deleter {
  void operator()(T* p) const { Free(p); }
};
template <typename T, void (*Free)(T*)>
using Handle = std::unique_ptr<T, Deleter<T, Free>>;

using PoseSeq = Handle<trajlift_poseseq, trajlift_poseseq_free>;
using Skeleton = Handle<trajlift_skeleton, trajlift_skeleton_free>;
using Basis = Handle<trajlift_basis, trajlift_basis_free>;
using Config = Handle<trajlift_config, trajlift_config_free>;
using Model = Handle<trajlift_model, trajlift_model_free>;

PoseSeq load_poseseq(const std::filesystem::path& path);
void save_poseseq(const trajlift_poseseq* seq, const std::filesystem::path& path);
// Rows [start, start + count) as a new sequence.
PoseSeq slice_frames(const trajlift_poseseq* seq, int start, int count);

// Raw handle views for the C API's array parameters.
std::vector<const trajlift_poseseq*> views(const std::vector<PoseSeq>& seqs);

// --skeleton if given, else <dir>/skeleton.skel if present, else the
// 17-joint layout for J = 17, else a generic skeleton without pairs.
Skeleton resolve_skeleton(const std::string& flag,
                          const std::filesystem::path& data_dir, int joints);

// Input validation that runs before any computation; missing inputs are I/O
// failures.
void require_file(const std::filesystem::path& path, const std::string& what);
void require_dir(const std::filesystem::path& path, const std::string& what);
void ensure_dir(const std::filesystem::path& path);

// Sorted files in dir with the given extension (".p3d").
std::vector<std::filesystem::path> files_with_extension(
    const std::filesystem::path& dir, const std::string& ext);

std::string fmt(double v);

// Writes text to path or fails with the I/O exit code.
void write_text(const std::filesystem::path& path, const std::string& text);

}  // namespace trajlift_cli
