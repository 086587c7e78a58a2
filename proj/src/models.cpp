#include "optdesign/models.hpp"

#include <cmath>

#include "optdesign/design.hpp"
#include "optdesign/errors.hpp"

namespace optdesign {

void ModelSpec::validate() const {
  if (m < 1 || m > kMaxDim) throw UsageError(name + ": parameter dimension must be in [1, 3]");
  if (m_eta < 0 || m_eta >= m) throw UsageError(name + ": need 0 <= m_eta < m");
  if (static_cast<int>(fixed_support.size()) != m_eta) {
    throw UsageError(name + ": fixed_support must list exactly m_eta points");
  }
  for (double x : fixed_support) {
    if (!design_interval.contains(x)) {
      throw UsageError(name + ": fixed support point outside the design interval");
    }
  }
  if (!(design_interval.hi > design_interval.lo)) {
    throw UsageError(name + ": empty design interval");
  }
  if (!score) throw UsageError(name + ": missing score function");
}

void ModelSpec::require_admissible(double beta) const {
  if (!beta_range.contains(beta)) {
    throw DomainError(name + ": beta = " + std::to_string(beta) + " outside the admissible range");
  }
}

std::array<double, kMaxDim> ModelSpec::score_at(double x, double beta) const {
  std::array<double, kMaxDim> f{};
  score(x, beta, std::span<double>(f.data(), m));
  return f;
}

namespace models {

namespace {

ParameterRange positive_betas() { return ParameterRange{0.0, INFINITY, true}; }

}  // namespace

ModelSpec exp1() {
  ModelSpec model;
  model.name = "exp1";
  model.m = 1;
  model.m_eta = 0;
  model.design_interval = {0.0, 1.0};
  model.beta_range = positive_betas();
  model.score = [](double x, double beta, std::span<double> out) {
    out[0] = x * std::exp(-beta * x);
  };
  const Interval xs = model.design_interval;
  model.analytic_local = [xs](double beta) {
    return DesignMeasure::point_mass(xs.clamp(1.0 / beta));
  };
  model.support_inverse = [](double x) { return 1.0 / x; };
  return model;
}

ModelSpec exp2() {
  ModelSpec model;
  model.name = "exp2";
  model.m = 2;
  model.m_eta = 1;
  model.design_interval = {0.0, 1.0};
  model.beta_range = positive_betas();
  model.score = [](double x, double beta, std::span<double> out) {
    out[0] = 1.0;
    out[1] = -x * std::exp(-beta * x);
  };
  model.fixed_support = {0.0};
  const Interval xs = model.design_interval;
  model.analytic_local = [xs](double beta) {
    return DesignMeasure({0.0, xs.clamp(1.0 / beta)}, {0.5, 0.5});
  };
  model.support_inverse = [](double x) { return 1.0 / x; };
  return model;
}

ModelSpec exp3() {
  ModelSpec model;
  model.name = "exp3";
  model.m = 3;
  model.m_eta = 2;
  model.design_interval = {0.0, 1.0};
  model.beta_range = positive_betas();
  model.score = [](double x, double beta, std::span<double> out) {
    const double e = std::exp(-beta * x);
    out[0] = 1.0;
    out[1] = e;
    out[2] = -x * e;
  };
  model.fixed_support = {0.0, 1.0};
  return model;
}

ModelSpec logistic(double x_max) {
  if (!(x_max > 0.0)) throw UsageError("logistic design interval needs x_max > 0");
  ModelSpec model;
  model.name = "logistic";
  model.m = 1;
  model.m_eta = 0;
  model.design_interval = {0.0, x_max};
  model.beta_range = ParameterRange{0.0, INFINITY, false};
  // sqrt(e^z) / (1 + e^z) = 1 / (2 cosh(z / 2)), z = x - beta.
  model.score = [](double x, double beta, std::span<double> out) {
    out[0] = 0.5 / std::cosh(0.5 * (x - beta));
  };
  const Interval xs = model.design_interval;
  model.analytic_local = [xs](double beta) { return DesignMeasure::point_mass(xs.clamp(beta)); };
  model.support_inverse = [](double x) { return x; };
  return model;
}

ModelSpec by_name(const std::string& name, double logistic_x_max) {
  if (name == "exp1") return exp1();
  if (name == "exp2") return exp2();
  if (name == "exp3") return exp3();
  if (name == "logistic") return logistic(logistic_x_max);
  throw UsageError("unknown model '" + name + "' (expected exp1 | exp2 | exp3 | logistic)");
}

double h_function(double x1, double x2, double x3, double beta) {
  const double e1 = std::exp(-beta * x1);
  const double e2 = std::exp(-beta * x2);
  const double e3 = std::exp(-beta * x3);
  return x1 * e1 * (e3 - e2) + x2 * e2 * (e1 - e3) + x3 * e3 * (e2 - e1);
}

}  // namespace models

QEfficiency q_efficiency(const ModelSpec& model, double beta, double beta_tilde,
                         const LocalOracle& local) {
  model.require_admissible(beta);
  model.require_admissible(beta_tilde);
  const double denominator = log_det_information(local(beta), model, beta);
  if (denominator == kMinusInfinity) {
    throw InternalError(model.name + ": local design at beta = " + std::to_string(beta) +
                        " is singular");
  }
  const double numerator = log_det_information(local(beta_tilde), model, beta);
  if (numerator == kMinusInfinity) return {0.0, true};
  return {std::exp(numerator - denominator), false};
}

}  // namespace optdesign
