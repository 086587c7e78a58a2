#include "optdesign/prior.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "optdesign/errors.hpp"

namespace optdesign {

namespace {

constexpr int kPanelNodes = 20;

double trunc_exp_constant() { return 1.0 / (1.0 - std::exp(-1.0)); }

double parse_number(const std::string& text) {
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(text, &used);
  } catch (const std::exception&) {
    throw UsageError("not a number: '" + text + "'");
  }
  if (used != text.size() || !std::isfinite(v)) throw UsageError("not a number: '" + text + "'");
  return v;
}

std::vector<std::string> split(const std::string& text, char sep) {
  std::vector<std::string> parts;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, sep)) parts.push_back(item);
  return parts;
}

}  // namespace

void gauss_legendre(int n, std::vector<double>& nodes, std::vector<double>& weights) {
  if (n < 1) throw UsageError("quadrature needs at least one node");
  nodes.assign(n, 0.0);
  weights.assign(n, 0.0);
  for (int i = 0; i < (n + 1) / 2; ++i) {
    double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0;
      double p1 = x;
      for (int k = 2; k <= n; ++k) {
        const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      dp = n * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    double p0 = 1.0;
    double p1 = x;
    for (int k = 2; k <= n; ++k) {
      const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
      p0 = p1;
      p1 = p2;
    }
    dp = n * (x * p1 - p0) / (x * x - 1.0);
    nodes[i] = -x;
    nodes[n - 1 - i] = x;
    weights[i] = weights[n - 1 - i] = 2.0 / ((1.0 - x * x) * dp * dp);
  }
  if (n % 2 == 1) nodes[n / 2] = 0.0;
}

ParameterPrior::ParameterPrior(Kind kind, double lo, double hi, double rate, int count, int nodes)
    : kind_(kind), lo_(lo), hi_(hi), rate_(rate), count_(count), nodes_(nodes) {}

ParameterPrior ParameterPrior::uniform(double lo, double hi, int nodes) {
  if (!(std::isfinite(lo) && std::isfinite(hi) && lo < hi)) {
    throw UsageError("uniform prior needs lo < hi");
  }
  if (nodes < 1) throw UsageError("uniform prior needs at least one quadrature node");
  return {Kind::kUniform, lo, hi, 0.0, 0, nodes};
}

ParameterPrior ParameterPrior::trunc_exp(double a, int nodes) {
  if (!(a > 0.0 && a < 1.0)) throw UsageError("truncated exponential prior needs 0 < a < 1");
  if (nodes < kPanelNodes) throw UsageError("truncated exponential prior needs >= 20 nodes");
  return {Kind::kTruncExp, 0.0, 1.0 / a, a, 0, nodes};
}

ParameterPrior ParameterPrior::discrete_uniform(int count) {
  if (count < 1) throw UsageError("discrete prior needs L >= 1");
  return {Kind::kDiscreteUniform, 1.0, static_cast<double>(count), 0.0, count, count};
}

ParameterPrior ParameterPrior::point_mass(double beta) {
  if (!std::isfinite(beta)) throw UsageError("point mass needs a finite beta");
  return {Kind::kPointMass, beta, beta, 0.0, 1, 1};
}

std::vector<QuadratureNode> ParameterPrior::quadrature() const {
  std::vector<QuadratureNode> out;
  switch (kind_) {
    case Kind::kPointMass:
      out.push_back({lo_, 1.0});
      return out;
    case Kind::kDiscreteUniform:
      for (int k = 1; k <= count_; ++k) out.push_back({static_cast<double>(k), 1.0 / count_});
      return out;
    case Kind::kUniform: {
      std::vector<double> t;
      std::vector<double> w;
      gauss_legendre(nodes_, t, w);
      for (int i = 0; i < nodes_; ++i) {
        out.push_back({0.5 * (lo_ + hi_) + 0.5 * (hi_ - lo_) * t[i], 0.5 * w[i]});
      }
      break;
    }
    case Kind::kTruncExp: {
      const int panels = nodes_ / kPanelNodes;
      std::vector<double> t;
      std::vector<double> w;
      gauss_legendre(kPanelNodes, t, w);
      const double width = hi_ / panels;
      const double c = trunc_exp_constant();
      for (int p = 0; p < panels; ++p) {
        const double a = p * width;
        for (int i = 0; i < kPanelNodes; ++i) {
          const double beta = a + 0.5 * width * (t[i] + 1.0);
          out.push_back({beta, 0.5 * width * w[i] * c * rate_ * std::exp(-rate_ * beta)});
        }
      }
      break;
    }
  }
  double total = 0.0;
  for (const auto& q : out) total += q.weight;
  for (auto& q : out) q.weight /= total;
  return out;
}

double ParameterPrior::mass(double lo, double hi) const {
  if (hi < lo) return 0.0;
  switch (kind_) {
    case Kind::kPointMass:
      return lo <= lo_ && lo_ <= hi ? 1.0 : 0.0;
    case Kind::kDiscreteUniform: {
      const double first = std::max(1.0, std::ceil(lo));
      const double last = std::min(static_cast<double>(count_), std::floor(hi));
      return last < first ? 0.0 : (last - first + 1.0) / count_;
    }
    case Kind::kUniform: {
      const double a = std::max(lo, lo_);
      const double b = std::min(hi, hi_);
      return b <= a ? 0.0 : (b - a) / (hi_ - lo_);
    }
    case Kind::kTruncExp: {
      const double a = std::max(lo, 0.0);
      const double b = std::min(hi, hi_);
      if (b <= a) return 0.0;
      return trunc_exp_constant() * (std::exp(-rate_ * a) - std::exp(-rate_ * b));
    }
  }
  return 0.0;
}

ScaleFunction ParameterPrior::natural_scale() const {
  switch (kind_) {
    case Kind::kTruncExp:
      return ScaleFunction::truncated_exponential(rate_);
    case Kind::kDiscreteUniform:
      return ScaleFunction::discrete_step(count_);
    default:
      return ScaleFunction::identity();
  }
}

std::string ParameterPrior::describe() const {
  std::ostringstream os;
  os.precision(17);
  switch (kind_) {
    case Kind::kUniform:
      os << "uniform:" << lo_ << ':' << hi_;
      break;
    case Kind::kTruncExp:
      os << "truncexp:" << rate_;
      break;
    case Kind::kDiscreteUniform:
      os << "discrete:" << count_;
      break;
    case Kind::kPointMass:
      os << "point:" << lo_;
      break;
  }
  return os.str();
}

ParameterPrior ParameterPrior::parse(const std::string& text, int nodes) {
  const auto parts = split(text, ':');
  if (parts.empty()) throw UsageError("empty prior");
  const std::string& kind = parts[0];
  if (kind == "uniform" && parts.size() == 3) {
    return uniform(parse_number(parts[1]), parse_number(parts[2]), nodes > 0 ? nodes : 200);
  }
  if (kind == "truncexp" && parts.size() == 2) {
    return trunc_exp(parse_number(parts[1]), nodes > 0 ? nodes : 400);
  }
  if (kind == "discrete" && parts.size() == 2) {
    const double l = parse_number(parts[1]);
    if (l != std::floor(l) || l < 1 || l > 1e7) throw UsageError("discrete prior needs integer L");
    return discrete_uniform(static_cast<int>(l));
  }
  if (kind == "point" && parts.size() == 2) return point_mass(parse_number(parts[1]));
  throw UsageError("unrecognized prior '" + text +
                   "' (expected uniform:LO:HI, truncexp:A, discrete:L or point:B)");
}

}  // namespace optdesign
