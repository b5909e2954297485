// Copyright 2026 The trajlift Authors
// SPDX-License-Identifier: Apache-2.0

#include "trajlift/bases.hpp"

#include "text_format.hpp"
#include "trajlift/error.hpp"

#include <Eigen/SVD>

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <numbers>
#include <numeric>
#include <random>
#include <sstream>

namespace trajlift {

std::string to_string(BasisFamily family) {
  return family == BasisFamily::kDct ? "DCT" : "SVD";
}

BasisFamily parse_basis_family(const std::string& name) {
  std::string upper = name;
  std::transform(upper.begin(), upper.end(), upper.begin(),
                 [](unsigned char c) { return std::toupper(c); });
  if (upper == "DCT") return BasisFamily::kDct;
  if (upper == "SVD") return BasisFamily::kSvd;
  throw ParameterError("unknown basis family '" + name + "'");
}

TrajectoryBasis::TrajectoryBasis(BasisFamily family, Matrix theta)
    : family_(family), theta_(std::move(theta)) {
  if (theta_.cols() < 1 || theta_.cols() > theta_.rows())
    throw ParameterError("basis count " + std::to_string(theta_.cols()) +
                         " must be in [1, " + std::to_string(theta_.rows()) +
                         "]");
  if (!theta_.allFinite()) throw NumericError("basis has non-finite entries");
}

TrajectoryBasis TrajectoryBasis::truncated(Eigen::Index k) const {
  if (k < 1 || k > count())
    throw ParameterError("cannot truncate a " + std::to_string(count()) +
                         "-vector basis to " + std::to_string(k));
  return TrajectoryBasis(family_, theta_.leftCols(k));
}

Vector TrajectoryBasis::analysis_weights() const {
  const double f = static_cast<double>(frames());
  Vector w(count());
  if (family_ == BasisFamily::kDct) {
    w.setConstant(2.0 / f);
    // The DC column stores 0.5, the analysis cosine is 1.
    w(0) = 4.0 / f;
  } else {
    w.setOnes();
  }
  return w;
}

CoefficientMatrix::CoefficientMatrix(Matrix a) : a_(std::move(a)) {
  if (!a_.allFinite())
    throw NumericError("coefficient matrix has non-finite entries");
}

TrajectoryBasis dct_basis(Eigen::Index frames, Eigen::Index count) {
  if (count < 1 || count > frames)
    throw ParameterError("DCT basis needs 1 <= K <= F, got F=" +
                         std::to_string(frames) + " K=" + std::to_string(count));
  Matrix theta(frames, count);
  const double step = std::numbers::pi / static_cast<double>(frames);
  for (Eigen::Index f = 0; f < frames; ++f) {
    theta(f, 0) = 0.5;
    for (Eigen::Index k = 1; k < count; ++k)
      theta(f, k) = std::cos(step * (static_cast<double>(f) + 0.5) *
                             static_cast<double>(k));
  }
  return TrajectoryBasis(BasisFamily::kDct, std::move(theta));
}

Vector dct_forward(std::span<const double> signal,
                   const TrajectoryBasis& basis) {
  if (basis.family() != BasisFamily::kDct)
    throw ParameterError("dct_forward needs a DCT basis");
  if (static_cast<Eigen::Index>(signal.size()) != basis.frames())
    throw DimensionError("signal length " + std::to_string(signal.size()) +
                         " does not match basis frames " +
                         std::to_string(basis.frames()));
  Eigen::Map<const Vector> s(signal.data(),
                             static_cast<Eigen::Index>(signal.size()));
  return basis.analysis_weights().cwiseProduct(basis.theta().transpose() * s);
}

Matrix reconstruct(const TrajectoryBasis& basis, const Matrix& coeffs) {
  if (coeffs.rows() != basis.count())
    throw DimensionError("coefficient rows " + std::to_string(coeffs.rows()) +
                         " do not match basis count " +
                         std::to_string(basis.count()));
  return basis.theta() * coeffs;
}

MotionMatrix reconstruct_motion(const TrajectoryBasis& basis,
                                const CoefficientMatrix& coeffs) {
  return MotionMatrix(reconstruct(basis, coeffs.data()));
}

Matrix project(const Matrix& trajectories, const TrajectoryBasis& basis) {
  if (trajectories.rows() != basis.frames())
    throw DimensionError("trajectory length " +
                         std::to_string(trajectories.rows()) +
                         " does not match basis frames " +
                         std::to_string(basis.frames()));
  return basis.analysis_weights().asDiagonal() *
         (basis.theta().transpose() * trajectories);
}

CoefficientMatrix project_motion(const MotionMatrix& m,
                                 const TrajectoryBasis& basis) {
  return CoefficientMatrix(project(m.data(), basis));
}

TrajectoryBasis svd_basis(std::span<const MotionMatrix> motions,
                          Eigen::Index count, const SvdOptions& options) {
  if (motions.empty()) throw ParameterError("SVD basis needs a nonempty corpus");
  const Eigen::Index frames = motions.front().frames();
  Eigen::Index total = 0;
  for (const auto& m : motions) {
    if (m.frames() != frames)
      throw DimensionError("corpus mixes sequence lengths " +
                           std::to_string(frames) + " and " +
                           std::to_string(m.frames()));
    total += m.data().cols();
  }
  if (count < 1 || count > frames)
    throw ParameterError("SVD basis needs 1 <= K <= F");
  if (total < count)
    throw ParameterError("corpus has " + std::to_string(total) +
                         " trajectories, fewer than K=" + std::to_string(count));

  std::vector<Eigen::Index> picked(static_cast<std::size_t>(total));
  std::iota(picked.begin(), picked.end(), Eigen::Index{0});
  if (options.max_columns > 0 && total > options.max_columns) {
    std::mt19937_64 rng(options.seed);
    // Partial Fisher-Yates, then restore corpus order among the picks.
    for (Eigen::Index i = 0; i < options.max_columns; ++i) {
      const auto span = static_cast<std::uint64_t>(total - i);
      const auto j = i + static_cast<Eigen::Index>(rng() % span);
      std::swap(picked[i], picked[j]);
    }
    picked.resize(static_cast<std::size_t>(options.max_columns));
    std::sort(picked.begin(), picked.end());
  }

  Matrix stacked(frames, static_cast<Eigen::Index>(picked.size()));
  {
    std::size_t next = 0;
    Eigen::Index offset = 0;
    for (const auto& m : motions) {
      const auto cols = m.data().cols();
      while (next < picked.size() && picked[next] < offset + cols) {
        stacked.col(static_cast<Eigen::Index>(next)) =
            m.data().col(picked[next] - offset);
        ++next;
      }
      offset += cols;
    }
  }

  Eigen::BDCSVD<Matrix> svd(stacked, Eigen::ComputeThinU);
  if (svd.info() != Eigen::Success)
    throw NumericError("SVD did not converge");
  Matrix theta = svd.matrixU().leftCols(count);
  for (Eigen::Index k = 0; k < count; ++k) {
    Eigen::Index arg = 0;
    theta.col(k).cwiseAbs().maxCoeff(&arg);
    if (theta(arg, k) < 0.0) theta.col(k) *= -1.0;
  }
  return TrajectoryBasis(BasisFamily::kSvd, std::move(theta));
}

namespace {

void check_corpus(std::span<const MotionMatrix> motions, Eigen::Index frames) {
  if (motions.empty()) throw ParameterError("empty motion corpus");
  for (const auto& m : motions)
    if (m.frames() != frames)
      throw DimensionError("motion with " + std::to_string(m.frames()) +
                           " frames does not match basis frames " +
                           std::to_string(frames));
}

double mean_joint_error(const Matrix& a, const Matrix& b) {
  double sum = 0.0;
  const Eigen::Index joints = a.cols() / 3;
  for (Eigen::Index f = 0; f < a.rows(); ++f)
    for (Eigen::Index j = 0; j < joints; ++j)
      sum += (a.block<1, 3>(f, 3 * j) - b.block<1, 3>(f, 3 * j)).norm();
  return sum;
}

}  // namespace

std::vector<TruncationPoint> truncation_error_profile(
    std::span<const MotionMatrix> motions, const TrajectoryBasis& basis,
    std::span<const Eigen::Index> ks) {
  check_corpus(motions, basis.frames());
  std::vector<TruncationPoint> out;
  out.reserve(ks.size());
  for (Eigen::Index k : ks) {
    const TrajectoryBasis sub = basis.truncated(k);
    double sum = 0.0;
    double points = 0.0;
    for (const auto& m : motions) {
      sum += mean_joint_error(reconstruct(sub, project(m.data(), sub)), m.data());
      points += static_cast<double>(m.frames() * m.joints());
    }
    out.push_back({k, sum / points});
  }
  return out;
}

std::vector<TruncationPoint> truncation_error_profile(
    std::span<const MotionMatrix> motions, BasisFamily family,
    std::span<const Eigen::Index> ks, const SvdOptions& options) {
  if (motions.empty()) throw ParameterError("empty motion corpus");
  if (ks.empty()) return {};
  const Eigen::Index max_k = *std::max_element(ks.begin(), ks.end());
  const Eigen::Index frames = motions.front().frames();
  const TrajectoryBasis basis = family == BasisFamily::kDct
                                    ? dct_basis(frames, max_k)
                                    : svd_basis(motions, max_k, options);
  return truncation_error_profile(motions, basis, ks);
}

std::vector<CoefficientStat> coefficient_magnitude_profile(
    std::span<const MotionMatrix> motions, const TrajectoryBasis& basis) {
  check_corpus(motions, basis.frames());
  Vector sum = Vector::Zero(basis.count());
  double columns = 0.0;
  for (const auto& m : motions) {
    sum += project(m.data(), basis).cwiseAbs().rowwise().sum();
    columns += static_cast<double>(m.data().cols());
  }
  std::vector<CoefficientStat> out;
  for (Eigen::Index k = 0; k < basis.count(); ++k)
    out.push_back({k, sum(k) / columns, k == 0});
  return out;
}

double orthogonality_residual(const TrajectoryBasis& basis) {
  const Matrix gram = basis.theta().transpose() * basis.theta();
  const double scale = gram.diagonal().maxCoeff();
  Matrix off = gram;
  off.diagonal().setZero();
  return off.cwiseAbs().maxCoeff() / scale;
}

void write_basis(const TrajectoryBasis& basis, std::ostream& os) {
  os << "TRAJBASIS v1 family=" << to_string(basis.family())
     << " F=" << basis.frames() << " K=" << basis.count() << '\n';
  std::vector<double> row(static_cast<std::size_t>(basis.count()));
  for (Eigen::Index f = 0; f < basis.frames(); ++f) {
    for (Eigen::Index k = 0; k < basis.count(); ++k) row[k] = basis.theta()(f, k);
    text::write_row(os, row.data(), row.size());
  }
}

TrajectoryBasis read_basis(std::istream& is, const std::string& source) {
  std::string line;
  std::size_t line_no = 1;
  if (!std::getline(is, line)) throw ParseError(source, 1, "empty basis file");
  const auto head = text::split(line);
  if (head.size() < 2 || head[0] != "TRAJBASIS" || head[1] != "v1")
    throw ParseError(source, 1, "expected 'TRAJBASIS v1' header");
  const auto fields = text::parse_fields(head, 2);
  if (!fields || !fields->contains("family") || !fields->contains("F") ||
      !fields->contains("K"))
    throw ParseError(source, 1, "header needs family=, F= and K=");
  BasisFamily family;
  try {
    family = parse_basis_family(fields->at("family"));
  } catch (const ParameterError& e) {
    throw ParseError(source, 1, e.what());
  }
  const auto frames = text::parse_int(fields->at("F"));
  const auto count = text::parse_int(fields->at("K"));
  if (!frames || !count || *frames < 1 || *count < 1 || *count > *frames)
    throw ParseError(source, 1, "invalid F/K in header");

  Matrix theta(*frames, *count);
  Eigen::Index row = 0;
  while (std::getline(is, line)) {
    ++line_no;
    const auto tokens = text::split(line);
    if (tokens.empty()) continue;
    if (row >= *frames)
      throw ParseError(source, line_no,
                       "more than F=" + std::to_string(*frames) + " rows");
    if (static_cast<long long>(tokens.size()) != *count)
      throw ParseError(source, line_no,
                       "expected " + std::to_string(*count) + " values, got " +
                           std::to_string(tokens.size()));
    for (Eigen::Index k = 0; k < *count; ++k) {
      const auto v = text::parse_double(tokens[k]);
      if (!v) throw ParseError(source, line_no, "non-numeric token '" +
                                                    std::string(tokens[k]) + "'");
      theta(row, k) = *v;
    }
    ++row;
  }
  if (row != *frames)
    throw ParseError(source, line_no,
                     "expected " + std::to_string(*frames) + " rows, got " +
                         std::to_string(row));
  try {
    return TrajectoryBasis(family, std::move(theta));
  } catch (const Error& e) {
    throw ParseError(source, 0, e.what());
  }
}

void save_basis(const TrajectoryBasis& basis,
                const std::filesystem::path& path) {
  std::ofstream os(path);
  if (!os) throw IoError("cannot open " + path.string() + " for writing");
  write_basis(basis, os);
  if (!os) throw IoError("failed writing " + path.string());
}

TrajectoryBasis load_basis(const std::filesystem::path& path) {
  std::ifstream is(path);
  if (!is) throw IoError("cannot open " + path.string());
  return read_basis(is, path.string());
}

}  // namespace trajlift
