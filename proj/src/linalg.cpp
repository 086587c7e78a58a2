#include "optdesign/linalg.hpp"

#include <algorithm>
#include <cmath>

#include "optdesign/errors.hpp"

namespace optdesign {

namespace {

constexpr double kSingularRatio = 1e-12;

double det2(double a, double b, double c, double d) { return a * d - b * c; }

}  // namespace

InfoMatrix::InfoMatrix(int dim) : dim_(dim) {
  if (dim < 1 || dim > kMaxDim) {
    throw UsageError("information matrix dimension must be in [1, 3]");
  }
}

void InfoMatrix::add_outer(double weight, std::span<const double> f) {
  for (int r = 0; r < dim_; ++r) {
    const double wr = weight * f[r];
    for (int c = 0; c < dim_; ++c) {
      a_[r * kMaxDim + c] += wr * f[c];
    }
  }
}

void InfoMatrix::add_scaled(double weight, const InfoMatrix& other) {
  for (int r = 0; r < dim_; ++r) {
    for (int c = 0; c < dim_; ++c) {
      a_[r * kMaxDim + c] += weight * other(r, c);
    }
  }
}

double InfoMatrix::trace() const {
  double t = 0.0;
  for (int r = 0; r < dim_; ++r) t += (*this)(r, r);
  return t;
}

double InfoMatrix::determinant() const {
  const auto& m = *this;
  switch (dim_) {
    case 1:
      return m(0, 0);
    case 2:
      return det2(m(0, 0), m(0, 1), m(1, 0), m(1, 1));
    default:
      return m(0, 0) * det2(m(1, 1), m(1, 2), m(2, 1), m(2, 2)) -
             m(0, 1) * det2(m(1, 0), m(1, 2), m(2, 0), m(2, 2)) +
             m(0, 2) * det2(m(1, 0), m(1, 1), m(2, 0), m(2, 1));
  }
}

bool InfoMatrix::is_singular() const {
  const double det = determinant();
  if (!(det > 0.0) || !std::isfinite(det)) return true;
  if (dim_ == 1) return false;
  double diag = 1.0;
  for (int r = 0; r < dim_; ++r) diag *= (*this)(r, r);
  return det <= kSingularRatio * diag;
}

std::optional<InfoMatrix> InfoMatrix::inverse() const {
  if (is_singular()) return std::nullopt;
  const auto& m = *this;
  const double det = determinant();
  InfoMatrix inv(dim_);
  switch (dim_) {
    case 1:
      inv(0, 0) = 1.0 / m(0, 0);
      break;
    case 2:
      inv(0, 0) = m(1, 1) / det;
      inv(1, 1) = m(0, 0) / det;
      inv(0, 1) = -m(0, 1) / det;
      inv(1, 0) = -m(1, 0) / det;
      break;
    default:
      inv(0, 0) = det2(m(1, 1), m(1, 2), m(2, 1), m(2, 2)) / det;
      inv(0, 1) = -det2(m(0, 1), m(0, 2), m(2, 1), m(2, 2)) / det;
      inv(0, 2) = det2(m(0, 1), m(0, 2), m(1, 1), m(1, 2)) / det;
      inv(1, 0) = -det2(m(1, 0), m(1, 2), m(2, 0), m(2, 2)) / det;
      inv(1, 1) = det2(m(0, 0), m(0, 2), m(2, 0), m(2, 2)) / det;
      inv(1, 2) = -det2(m(0, 0), m(0, 2), m(1, 0), m(1, 2)) / det;
      inv(2, 0) = det2(m(1, 0), m(1, 1), m(2, 0), m(2, 1)) / det;
      inv(2, 1) = -det2(m(0, 0), m(0, 1), m(2, 0), m(2, 1)) / det;
      inv(2, 2) = det2(m(0, 0), m(0, 1), m(1, 0), m(1, 1)) / det;
      break;
  }
  return inv;
}

double InfoMatrix::bilinear(std::span<const double> f, std::span<const double> g) const {
  double s = 0.0;
  for (int r = 0; r < dim_; ++r) {
    double row = 0.0;
    for (int c = 0; c < dim_; ++c) row += a_[r * kMaxDim + c] * g[c];
    s += f[r] * row;
  }
  return s;
}

double InfoMatrix::asymmetry() const {
  double scale = 0.0;
  double worst = 0.0;
  for (int r = 0; r < dim_; ++r) {
    for (int c = 0; c < dim_; ++c) {
      scale = std::max(scale, std::abs((*this)(r, c)));
      worst = std::max(worst, std::abs((*this)(r, c) - (*this)(c, r)));
    }
  }
  return scale > 0.0 ? worst / scale : 0.0;
}

double log_det(const InfoMatrix& matrix) {
  if (matrix.is_singular()) return kMinusInfinity;
  return std::log(matrix.determinant());
}

double column_determinant(std::span<const std::array<double, kMaxDim>> columns, int dim) {
  if (static_cast<int>(columns.size()) != dim) {
    throw UsageError("column_determinant needs exactly dim columns");
  }
  const auto a = [&](int r, int c) { return columns[c][r]; };
  switch (dim) {
    case 1:
      return a(0, 0);
    case 2:
      return det2(a(0, 0), a(0, 1), a(1, 0), a(1, 1));
    case 3:
      return a(0, 0) * det2(a(1, 1), a(1, 2), a(2, 1), a(2, 2)) -
             a(0, 1) * det2(a(1, 0), a(1, 2), a(2, 0), a(2, 2)) +
             a(0, 2) * det2(a(1, 0), a(1, 1), a(2, 0), a(2, 1));
    default:
      throw UsageError("column_determinant supports dimensions 1 to 3");
  }
}

}  // namespace optdesign
