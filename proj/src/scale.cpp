#include "optdesign/scale.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "optdesign/errors.hpp"

namespace optdesign {

ScaleFunction::ScaleFunction(Kind kind, std::string name, std::function<double(double)> forward,
                             std::function<double(double)> inverse, double lo, double hi)
    : kind_(kind),
      name_(std::move(name)),
      forward_(std::move(forward)),
      inverse_(std::move(inverse)),
      lo_(lo),
      hi_(hi) {}

ScaleFunction ScaleFunction::identity() {
  constexpr double inf = std::numeric_limits<double>::infinity();
  return ScaleFunction(
      Kind::kIdentity, "identity", [](double b) { return b; }, [](double v) { return v; }, -inf,
      inf);
}

ScaleFunction ScaleFunction::logarithm() {
  return ScaleFunction(
      Kind::kLogarithm, "log",
      [](double b) {
        if (!(b > 0.0)) throw DomainError("log scale needs positive beta");
        return std::log(b);
      },
      [](double v) { return std::exp(v); }, 0.0, std::numeric_limits<double>::infinity());
}

ScaleFunction ScaleFunction::truncated_exponential(double a) {
  if (!(a > 0.0 && a < 1.0)) throw DomainError("truncated exponential scale needs a in (0, 1)");
  const double c = 1.0 / (1.0 - std::exp(-1.0));
  const double coef = c / std::sqrt(a);
  auto forward = [a, coef](double b) {
    const double t = std::min(std::max(b, 0.0), 1.0 / a);
    return coef * -std::expm1(-a * t);
  };
  auto inverse = [a, coef](double v) {
    const double t = std::min(std::max(v / coef, 0.0), -std::expm1(-1.0));
    return -std::log1p(-t) / a;
  };
  return ScaleFunction(Kind::kDensityIntegral, "truncexp", forward, inverse, 0.0, 1.0 / a);
}

ScaleFunction ScaleFunction::discrete_step(int count) {
  if (count < 1) throw DomainError("discrete step scale needs L >= 1");
  const double L = count;
  auto forward = [L](double b) { return std::min(std::max(std::floor(b), 0.0), L); };
  auto inverse = [L](double v) { return std::min(std::max(std::ceil(v), 1.0), L); };
  return ScaleFunction(Kind::kDensityIntegral, "step", forward, inverse, 1.0, L);
}

ScaleFunction ScaleFunction::density_integral(std::function<double(double)> cumulative,
                                              double support_lo, double support_hi,
                                              std::function<double(double)> inverse) {
  if (!inverse) {
    inverse = [cumulative, support_lo, support_hi](double v) {
      double lo = support_lo;
      double hi = support_hi;
      for (int i = 0; i < 200 && hi - lo > 1e-15 * (1.0 + std::abs(hi)); ++i) {
        const double mid = 0.5 * (lo + hi);
        if (cumulative(mid) >= v) {
          hi = mid;
        } else {
          lo = mid;
        }
      }
      return hi;
    };
  }
  return ScaleFunction(Kind::kDensityIntegral, "density", std::move(cumulative),
                       std::move(inverse), support_lo, support_hi);
}

double ScaleFunction::operator()(double beta) const { return forward_(beta); }

double ScaleFunction::inverse(double value) const { return inverse_(value); }

double ScaleFunction::distance(double beta, double other) const {
  return std::abs(forward_(beta) - forward_(other));
}

}  // namespace optdesign
