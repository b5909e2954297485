// Copyright 2026 The trajlift Authors
// SPDX-License-Identifier: Apache-2.0

// TRAJNET v1 checkpoints bundle everything inference needs: network config,
// the trajectory basis, the skeleton (for flip averaging) and every tensor.
//
//   TRAJNET v1
//   config <key=value ...>
//   basis family=<DCT|SVD> F=<F> K=<K>
//   <F rows of K values>
//   skeleton root=<i> names=<a,b,...> pairs=<l:r,...>
//   tensor <name> <size>
//   <size values on one line>
//   ...
//   end

#pragma once

#include "trajlift/bases.hpp"
#include "trajlift/motion.hpp"
#include "trajlift/network.hpp"

#include <filesystem>
#include <iosfwd>
#include <string>

namespace trajlift {

struct Model {
  NetworkParams params;
  TrajectoryBasis basis;
  SkeletonConfig skeleton;
};

void write_model(const Model& model, std::ostream& os);
Model read_model(std::istream& is, const std::string& source);
void save_model(const Model& model, const std::filesystem::path& path);
Model load_model(const std::filesystem::path& path);

// key=value form of every NetworkConfig field, in a fixed order.
std::string format_network_config(const NetworkConfig& config);

}  // namespace trajlift
