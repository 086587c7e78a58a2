#pragma once

#include <array>
#include <limits>
#include <optional>
#include <span>

namespace optdesign {

/// Largest parameter dimension handled by the closed-form linear algebra.
inline constexpr int kMaxDim = 3;

/// Sentinel returned by log-determinants of singular matrices.
inline constexpr double kMinusInfinity = -std::numeric_limits<double>::infinity();
inline constexpr double kPlusInfinity = std::numeric_limits<double>::infinity();

/// Symmetric m x m information matrix, m <= 3, stored densely.
///
/// Determinant and inverse use closed forms (cofactor expansion). A matrix is
/// treated as singular when its determinant is not positive or falls below
/// 1e-12 times the product of its diagonal (Hadamard bound for PSD matrices),
/// which absorbs the rounding residue of rank-deficient sums of outer products.
class InfoMatrix {
 public:
  explicit InfoMatrix(int dim);

  int dim() const { return dim_; }
  double operator()(int row, int col) const { return a_[row * kMaxDim + col]; }
  double& operator()(int row, int col) { return a_[row * kMaxDim + col]; }

  /// this += weight * f f^T
  void add_outer(double weight, std::span<const double> f);
  /// this += weight * other
  void add_scaled(double weight, const InfoMatrix& other);

  double trace() const;
  double determinant() const;
  bool is_singular() const;

  /// Inverse, or nullopt when singular.
  std::optional<InfoMatrix> inverse() const;

  /// f^T A g for vectors of length dim().
  double bilinear(std::span<const double> f, std::span<const double> g) const;
  double quadratic(std::span<const double> f) const { return bilinear(f, f); }

  /// Max relative asymmetry |a_ij - a_ji| / max|a|.
  double asymmetry() const;

 private:
  int dim_;
  std::array<double, kMaxDim * kMaxDim> a_{};
};

/// log det, or kMinusInfinity for singular matrices.
double log_det(const InfoMatrix& matrix);

/// Determinant of the square matrix whose columns are the given vectors (m <= 3).
double column_determinant(std::span<const std::array<double, kMaxDim>> columns, int dim);

}  // namespace optdesign
