// Copyright 2026 The trajlift Authors
// SPDX-License-Identifier: Apache-2.0

// Fixed trajectory bases. A motion S (F x 3J) is modelled as S = Theta * A
// with Theta an F x K matrix of orthogonal temporal basis vectors and A the
// K x 3J coefficient matrix.
//
// DCT bases hold raw cosines: column 0 is the constant 0.5 and column k >= 1
// is cos(pi/F * (f + 1/2) * k). Analysis uses the 2/F scale, so the pair
// (dct_forward, reconstruct_motion) is an exact inverse when K == F.

#pragma once

#include "trajlift/motion.hpp"

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

namespace trajlift {

enum class BasisFamily { kDct, kSvd };

std::string to_string(BasisFamily family);
// Accepts "DCT"/"SVD" in any case. Throws ParameterError otherwise.
BasisFamily parse_basis_family(const std::string& name);

class TrajectoryBasis {
 public:
  TrajectoryBasis() = default;
  // Checks K <= F and finite entries; orthogonality is the builder's job.
  TrajectoryBasis(BasisFamily family, Matrix theta);

  BasisFamily family() const { return family_; }
  Eigen::Index frames() const { return theta_.rows(); }
  Eigen::Index count() const { return theta_.cols(); }
  const Matrix& theta() const { return theta_; }

  // First k columns; the result is again a valid basis of the same family.
  TrajectoryBasis truncated(Eigen::Index k) const;

  // Least-squares analysis weights: coefficient k = weight(k) * <theta_k, s>.
  // 2/F for DCT cosines (4/F on the 0.5-valued DC column), 1 for SVD.
  Vector analysis_weights() const;

  bool operator==(const TrajectoryBasis& other) const {
    return family_ == other.family_ && theta_.rows() == other.theta_.rows() &&
           theta_.cols() == other.theta_.cols() && theta_ == other.theta_;
  }

 private:
  BasisFamily family_ = BasisFamily::kDct;
  Matrix theta_;
};

// K x 3J trajectory coefficients.
class CoefficientMatrix {
 public:
  CoefficientMatrix() = default;
  explicit CoefficientMatrix(Matrix a);

  Eigen::Index count() const { return a_.rows(); }
  Eigen::Index columns() const { return a_.cols(); }
  const Matrix& data() const { return a_; }

 private:
  Matrix a_;
};

TrajectoryBasis dct_basis(Eigen::Index frames, Eigen::Index count);

// D_k = (2/F) * sum_f signal_f * cos(pi/F * (f + 1/2) * k), k < basis.count().
Vector dct_forward(std::span<const double> signal, const TrajectoryBasis& basis);

MotionMatrix reconstruct_motion(const TrajectoryBasis& basis,
                                const CoefficientMatrix& coeffs);
// Matrix form used by the network head: Theta * A for any A with K rows.
Matrix reconstruct(const TrajectoryBasis& basis, const Matrix& coeffs);

CoefficientMatrix project_motion(const MotionMatrix& m,
                                 const TrajectoryBasis& basis);
Matrix project(const Matrix& trajectories, const TrajectoryBasis& basis);

struct SvdOptions {
  // Upper bound on trajectory columns fed to the decomposition; larger
  // corpora are subsampled without replacement.
  Eigen::Index max_columns = 10000;
  std::uint64_t seed = 0;
};

// Left singular vectors of the horizontally stacked motions for the K largest
// singular values. No mean-centering. Each column is signed so that its
// largest-magnitude entry is positive.
TrajectoryBasis svd_basis(std::span<const MotionMatrix> motions,
                          Eigen::Index count, const SvdOptions& options = {});

struct TruncationPoint {
  Eigen::Index k;
  double mean_error_mm;
};

// Mean per-joint, per-frame Euclidean error after projecting onto the first k
// columns of `basis` and reconstructing, for each k in `ks`.
std::vector<TruncationPoint> truncation_error_profile(
    std::span<const MotionMatrix> motions, const TrajectoryBasis& basis,
    std::span<const Eigen::Index> ks);
// Builds the basis of the given family from the corpus (DCT: F x max k; SVD:
// from the motions themselves) and profiles it.
std::vector<TruncationPoint> truncation_error_profile(
    std::span<const MotionMatrix> motions, BasisFamily family,
    std::span<const Eigen::Index> ks, const SvdOptions& options = {});

struct CoefficientStat {
  Eigen::Index k;
  double mean_abs;
  bool dc;  // k == 0; usually dropped from magnitude plots
};

std::vector<CoefficientStat> coefficient_magnitude_profile(
    std::span<const MotionMatrix> motions, const TrajectoryBasis& basis);

// Max |Theta^T Theta - diag(Theta^T Theta)| relative to the largest diagonal
// entry. Zero for an exactly orthogonal basis.
double orthogonality_residual(const TrajectoryBasis& basis);

// TRAJBASIS v1 text files.
void save_basis(const TrajectoryBasis& basis, const std::filesystem::path& path);
TrajectoryBasis load_basis(const std::filesystem::path& path);
void write_basis(const TrajectoryBasis& basis, std::ostream& os);
TrajectoryBasis read_basis(std::istream& is, const std::string& source);

}  // namespace trajlift
