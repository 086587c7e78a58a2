#pragma once

#include <functional>
#include <string>

namespace optdesign {

/// Nondecreasing reparameterization l(beta) under which efficiency loss is
/// measured; the distance between two parameters is |l(b) - l(b')|.
class ScaleFunction {
 public:
  enum class Kind { kIdentity, kLogarithm, kDensityIntegral };

  static ScaleFunction identity();
  static ScaleFunction logarithm();
  /// l_a(beta) = c sqrt(a) (1 - exp(-a beta)) / a on [0, 1/a), c = 1/(1 - e^-1);
  /// the total length l_a(1/a) - l_a(0) equals a^{-1/2}.
  static ScaleFunction truncated_exponential(double a);
  /// Right-continuous counting function of {1, ..., L}: unit jump at each integer.
  static ScaleFunction discrete_step(int count);
  /// Custom cumulative with an optional inverse (bisection is used otherwise).
  static ScaleFunction density_integral(std::function<double(double)> cumulative,
                                        double support_lo, double support_hi,
                                        std::function<double(double)> inverse = {});

  Kind kind() const { return kind_; }
  const std::string& name() const { return name_; }

  double operator()(double beta) const;
  /// Smallest beta in the support with l(beta) >= value.
  double inverse(double value) const;
  double distance(double beta, double other) const;

 private:
  ScaleFunction(Kind kind, std::string name, std::function<double(double)> forward,
                std::function<double(double)> inverse, double lo, double hi);

  Kind kind_;
  std::string name_;
  std::function<double(double)> forward_;
  std::function<double(double)> inverse_;
  double lo_;
  double hi_;
};

}  // namespace optdesign
