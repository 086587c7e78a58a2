// Acceptance suite: one line per criterion, sub-checks indented below it.
//
// Exit status is 0 when every criterion ends with its pinned expectation.
// Criteria listed in kExpectedFailures print FAIL like any other; the run
// fails if one of them starts passing so the expectation gets revisited.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <limits>
#include <map>
#include <numbers>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "optdesign/bayes.hpp"
#include "optdesign/design.hpp"
#include "optdesign/maximin.hpp"
#include "optdesign/models.hpp"
#include "optdesign/theory.hpp"

using namespace optdesign;

namespace {

// Tolerances
constexpr double kMaximinRefPointTol = 0.01;
constexpr double kMaximinRefWeightTol = 0.02;
constexpr double kMaximinRefLargeBTol = 0.02;
constexpr double kMaximinRefSecondsPerColumn = 60.0;
constexpr double kBayesRefPointTol = 0.01;
constexpr double kBayesRefWeightTol = 0.01;
constexpr double kBayesRefB3000WeightTol = 0.003;
constexpr double kLocalSupportTol = 1e-6;
constexpr double kLocalCriterionRel = 1e-8;
constexpr double kQRel = 1e-10;
constexpr int kQPairs = 10000;
constexpr double kDoubleMin = std::numeric_limits<double>::min();
constexpr int kEnvelopeSamples = 200;
constexpr double kLambdaTol = 0.01;
constexpr int kPerturbations = 1000;
constexpr double kPerturbationRel = 1e-6;
constexpr int kCauchyBinetDesigns = 10000;
constexpr double kCauchyBinetRel = 1e-10;

const std::set<int> kExpectedFailures = {1, 2, 5, 8};

const double e = std::numbers::e;
const double ln2 = std::numbers::ln2;
const Interval kUnit{0.0, 1.0};

struct Check {
  std::string label;
  bool ok;
  std::string detail;
};

struct Criterion {
  int id;
  std::string title;
  std::vector<Check> checks;

  void add(std::string label, bool ok, std::string detail = {}) {
    checks.push_back({std::move(label), ok, std::move(detail)});
  }
  bool passed() const {
    return std::all_of(checks.begin(), checks.end(), [](const Check& c) { return c.ok; });
  }
};

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

std::string show(const DesignMeasure& d) {
  std::ostringstream os;
  os << "{";
  for (std::size_t k = 0; k < d.size(); ++k) {
    if (k) os << ", ";
    os << "(" << fmt("%.4f", d.points()[k]) << ", " << fmt("%.4f", d.weights()[k]) << ")";
  }
  os << "}";
  return os.str();
}

bool close_rel(double a, double b, double rel) {
  return std::abs(a - b) <= rel * std::max({std::abs(a), std::abs(b), 1e-300});
}

struct Column {
  double B;
  std::vector<double> x;
  std::vector<double> w;
};

// x_k within point_tol and w_k within weight_tol, same support size
bool matches(const DesignMeasure& d, const Column& c, double point_tol, double weight_tol) {
  if (d.size() != c.x.size()) return false;
  for (std::size_t k = 0; k < d.size(); ++k) {
    if (std::abs(d.points()[k] - c.x[k]) > point_tol) return false;
    if (std::abs(d.weights()[k] - c.w[k]) > weight_tol) return false;
  }
  return true;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

const std::vector<Column> kMaximinRef = {
    {10, {0.142, 0.771}, {0.553, 0.447}},
    {40, {0.037, 0.193, 0.772}, {0.414, 0.272, 0.314}},
    {50, {0.028, 0.131, 0.374, 0.972}, {0.379, 0.221, 0.170, 0.230}},
    {100, {0.014, 0.064, 0.156, 0.287, 0.838}, {0.336, 0.193, 0.093, 0.137, 0.241}},
    {200, {0.007, 0.034, 0.101, 0.250, 0.326, 0.856}, {0.306, 0.182, 0.147, 0.089, 0.066, 0.210}},
};

const std::vector<Column> kBayesRef = {
    {10, {0.182}, {1.000}},
    {40, {0.048, 0.354}, {0.981, 0.019}},
    {50, {0.038, 0.318}, {0.973, 0.027}},
    {100, {0.019, 0.215}, {0.962, 0.038}},
    {200, {0.010, 0.134}, {0.959, 0.041}},
    {300, {0.006, 0.084, 0.236}, {0.957, 0.037, 0.006}},
    {3000, {0.0006, 0.009, 0.055, 1.000}, {0.951, 0.039, 0.006, 0.004}},
};

struct Solved {
  DesignSolution solution;
  double seconds;
};

std::map<double, Solved> g_maximin;
std::map<double, Solved> g_bayes;

Criterion maximin_reference() {
  Criterion c{1, "Reference maximin designs (exp1)", {}};
  const auto model = models::exp1();
  const LocalDesigns local(model);
  for (const auto& col : kMaximinRef) {
    const BetaGrid grid(1.0, col.B, 400);
    const auto t0 = std::chrono::steady_clock::now();
    auto sol = solve_maximin(local, grid);
    const double secs = seconds_since(t0);
    g_maximin.emplace(col.B, Solved{sol, secs});
    const auto d = canonical_merge(sol.design, kUnit);
    const double table_phi =
        maximin_criterion(DesignMeasure::normalized(col.x, col.w), grid, local).value;
    const std::string info = "ours " + show(d) + " Phi=" + fmt("%.6f", sol.criterion_value) +
                             ", reference Phi=" + fmt("%.6f", table_phi) + ", " +
                             fmt("%.1f s", secs);
    const std::string tag = "B=" + fmt("%g", col.B);
    c.add(tag + " certificate", sol.certificate.passed,
          "max derivative " + fmt("%.8f", sol.certificate.max_directional_derivative));
    if (col.B <= 50) {
      c.add(tag + " points/weights within " + fmt("%g", kMaximinRefPointTol) + "/" +
                fmt("%g", kMaximinRefWeightTol),
            matches(d, col, kMaximinRefPointTol, kMaximinRefWeightTol), info);
      c.add(tag + " runtime", secs < kMaximinRefSecondsPerColumn, fmt("%.1f s", secs));
    } else {
      c.add(tag + " support count " + fmt("%g", static_cast<double>(col.x.size())),
            d.size() == col.x.size(), "ours " + std::to_string(d.size()));
      c.add(tag + " pointwise within " + fmt("%g", kMaximinRefLargeBTol),
            matches(d, col, kMaximinRefLargeBTol, kMaximinRefLargeBTol), info);
    }
  }
  return c;
}

Criterion bayes_reference() {
  Criterion c{2, "Reference Bayesian designs (uniform prior, exp1)", {}};
  const auto model = models::exp1();
  for (const auto& col : kBayesRef) {
    const auto prior = ParameterPrior::uniform(1.0, col.B);
    const auto t0 = std::chrono::steady_clock::now();
    auto sol = solve_bayes(model, prior);
    const double secs = seconds_since(t0);
    g_bayes.emplace(col.B, Solved{sol, secs});
    const auto d = canonical_merge(sol.design, kUnit);
    const std::string tag = "B=" + fmt("%g", col.B);
    const std::string info = "ours " + show(d) + ", " + fmt("%.1f s", secs);
    c.add(tag + " certificate", sol.certificate.passed,
          "max derivative " + fmt("%.8f", sol.certificate.max_directional_derivative));
    if (col.B <= 300) {
      c.add(tag + " points/weights within " + fmt("%g", kBayesRefPointTol) + "/" +
                fmt("%g", kBayesRefWeightTol),
            matches(d, col, kBayesRefPointTol, kBayesRefWeightTol), info);
    } else {
      c.add(tag + " support count 4", d.size() == 4, info);
      bool at_one = false;
      for (std::size_t k = 0; k < d.size(); ++k) {
        if (std::abs(d.points()[k] - 1.0) <= kBayesRefPointTol &&
            std::abs(d.weights()[k] - 0.004) <= kBayesRefB3000WeightTol) {
          at_one = true;
        }
      }
      const auto reference = DesignMeasure::normalized(col.x, col.w);
      const LocalDesigns local(model);
      c.add(tag + " support point at 1.000 with weight 0.004 +- 0.003", at_one,
            "Psi ours " + fmt("%.6f", sol.criterion_value) + " vs reference " +
                fmt("%.6f", bayes_criterion(reference, model, prior, false)));
    }
  }
  return c;
}

Criterion local_oracles() {
  Criterion c{3, "Analytic local-design agreement", {}};
  LocalSolveOptions opts;
  opts.seed_with_analytic = false;
  double worst_support = 0.0, worst_rel = 0.0;
  bool ok = true;
  for (const char* name : {"exp1", "exp2", "logistic"}) {
    const auto model = models::by_name(name);
    for (double beta : {1.0, 2.0, 5.0, 10.0, 25.0}) {
      const auto sol = solve_local(model, beta, {}, opts);
      const auto oracle = model.analytic_local(beta);
      double expected;
      if (model.name == "exp1") {
        expected = std::pow(e * beta, -2.0);
      } else if (model.name == "exp2") {
        expected = 1.0 / (4.0 * std::pow(e * beta, 2.0));
      } else {
        expected = 0.25;
      }
      bool local_ok = sol.design.size() == oracle.size() && sol.certificate.passed;
      for (std::size_t k = 0; local_ok && k < oracle.size(); ++k) {
        const double dx = std::abs(sol.design.points()[k] - oracle.points()[k]);
        worst_support = std::max(worst_support, dx);
        local_ok = dx <= kLocalSupportTol;
      }
      const double rel = std::abs(sol.criterion_value - expected) / expected;
      worst_rel = std::max(worst_rel, rel);
      local_ok = local_ok && rel <= kLocalCriterionRel;
      ok = ok && local_ok;
    }
  }
  c.add("support within " + fmt("%g", kLocalSupportTol) + ", criterion within " +
            fmt("%g", kLocalCriterionRel) + " rel",
        ok, "worst support " + fmt("%.2e", worst_support) + ", worst rel " + fmt("%.2e", worst_rel));
  return c;
}

Criterion q_closed_forms() {
  Criterion c{4, "Q-formula equivalence", {}};
  std::mt19937_64 rng(2024);
  {
    const auto model = models::exp1();
    const LocalDesigns local(model);
    std::uniform_real_distribution<double> u(0.0, std::log(1000.0));
    double worst = 0.0;
    int below_normal = 0;
    bool underflow_ok = true;
    for (int i = 0; i < kQPairs; ++i) {
      const double b = std::exp(u(rng)), bt = std::exp(u(rng));
      const double z = b / bt;
      const double closed = z * z * std::exp(2.0 * (1.0 - z));
      const double q = q_efficiency(model, b, bt, local.oracle()).value;
      if (closed < kDoubleMin) {
        // no relative digits exist below the normal range
        ++below_normal;
        underflow_ok = underflow_ok && q <= kDoubleMin * (1.0 + kQRel);
        continue;
      }
      worst = std::max(worst, std::abs(q - closed) / closed);
    }
    c.add("exp1, " + std::to_string(kQPairs) + " pairs", worst <= kQRel && underflow_ok,
          "worst rel " + fmt("%.2e", worst) + ", " + std::to_string(below_normal) +
              " pairs with Q below the normal double range");
  }
  {
    const auto model = models::logistic(30.0);
    const LocalDesigns local(model);
    std::uniform_real_distribution<double> u(0.0, 25.0);
    double worst = 0.0;
    for (int i = 0; i < kQPairs; ++i) {
      const double b = u(rng), bt = u(rng);
      const double t = std::exp(bt - b);
      const double closed = 4.0 * t / ((1.0 + t) * (1.0 + t));
      const double q = q_efficiency(model, b, bt, local.oracle()).value;
      worst = std::max(worst, std::abs(q - closed) / closed);
    }
    c.add("logistic, " + std::to_string(kQPairs) + " pairs", worst <= kQRel,
          "worst rel " + fmt("%.2e", worst));
  }
  return c;
}

Criterion envelope() {
  Criterion c{5, "Envelope and band checks (exp1, log scale)", {}};
  std::vector<double> betas(kEnvelopeSamples);
  for (int i = 0; i < kEnvelopeSamples; ++i) {
    betas[i] = std::pow(1000.0, i / (kEnvelopeSamples - 1.0));
  }
  const auto r = check_uniform_decrease(models::exp1(), ScaleFunction::logarithm(),
                                        DecayEnvelope::exponential(e * e, 2.0), betas);
  c.add("zero violations of Q <= e^2 exp(-2|z|) on 200x200", r.violations == 0,
        std::to_string(r.violations) + " violations in " + std::to_string(r.samples));
  const double lam = r.lambda_estimate.value_or(NAN);
  c.add("measured lambda = log 2 +- " + fmt("%g", kLambdaTol), std::abs(lam - ln2) <= kLambdaTol,
        "measured " + fmt("%.4f", lam) + ", log 2 = " + fmt("%.4f", ln2));
  return c;
}

Criterion lower_bounds() {
  Criterion c{6, "Lower-bound designs on [1, e^4], lambda = log 2", {}};
  const auto scale = ScaleFunction::logarithm();
  const auto r1 = verify_lower_bounds(models::exp1(), scale, 1.0, std::exp(4.0), ln2);
  const double phi = r1.quantity("phi").value_or(NAN);
  const double psi = r1.quantity("psi_st").value_or(NAN);
  c.add("exp1 Phi >= log(2)/8", phi >= ln2 / 8.0,
        fmt("Phi = %.6f", phi) + fmt(" vs %.6f", ln2 / 8.0));
  c.add("exp1 Psi_st >= -4 + log(log 2)", psi >= -4.0 + std::log(ln2),
        fmt("Psi_st = %.6f", psi) + fmt(" vs %.6f", -4.0 + std::log(ln2)));
  for (const char* name : {"exp2", "exp3"}) {
    const auto model = models::by_name(name);
    const auto r = verify_lower_bounds(model, scale, 1.0, std::exp(4.0), ln2);
    const double bound = r.quantity("pointwise_bound").value_or(NAN);
    const double n = r.quantity("n").value_or(NAN);
    const bool bound_ok = std::abs(bound - 1.0 / (2.0 * std::pow(n, model.m - model.m_eta))) <= 1e-15;
    c.add(std::string(name) + " pointwise efficiency >= 1/(2 n^(m - m_eta))",
          bound_ok && r.violations == 0,
          "n = " + fmt("%g", n) + ", bound " + fmt("%.6f", bound) + ", " +
              std::to_string(r.violations) + " violations in " + std::to_string(r.samples));
  }
  return c;
}

DesignMeasure perturb(const DesignMeasure& d, std::mt19937_64& rng, const Interval& interval) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<double> x(d.points().begin(), d.points().end());
  std::vector<double> w(d.weights().begin(), d.weights().end());
  const double len = interval.length();
  const int kind = static_cast<int>(u(rng) * 3.0);
  if (kind == 0) {
    // mix in a random point
    const double eps = 0.1 * u(rng);
    for (auto& wk : w) wk *= 1.0 - eps;
    x.push_back(interval.lo + len * u(rng));
    w.push_back(eps);
  } else if (kind == 1) {
    std::normal_distribution<double> n(0.0, 0.01 * len * u(rng));
    for (auto& xk : x) xk = interval.clamp(xk + n(rng));
  } else {
    std::normal_distribution<double> n(0.0, 0.05 * u(rng));
    for (auto& wk : w) wk *= std::exp(n(rng));
  }
  return DesignMeasure::normalized(x, w);
}

Check perturbation_check(const std::string& label, const DesignSolution& sol,
                         const Interval& interval,
                         const std::function<double(const DesignMeasure&)>& criterion,
                         std::mt19937_64& rng) {
  if (!sol.certificate.passed) return {label, true, "not certified; skipped"};
  const double base = criterion(sol.design);
  double worst = -INFINITY;
  for (int i = 0; i < kPerturbations; ++i) {
    const double v = criterion(perturb(sol.design, rng, interval));
    worst = std::max(worst, (v - base) / std::abs(base));
  }
  return {label, worst <= kPerturbationRel, "largest relative gain " + fmt("%.2e", worst)};
}

Criterion soundness() {
  Criterion c{7, "Certificate soundness under random perturbations", {}};
  std::mt19937_64 rng(7);
  for (const char* name : {"exp1", "exp2", "exp3", "logistic"}) {
    const auto model = models::by_name(name);
    const double beta = 5.0;
    const auto sol = solve_local(model, beta);
    c.checks.push_back(perturbation_check(
        std::string("local ") + name, sol, model.design_interval,
        [&](const DesignMeasure& d) { return information_matrix(d, model, beta).determinant(); },
        rng));
  }
  {
    const auto model = models::exp1();
    for (double B : {40.0, 300.0}) {
      const auto prior = ParameterPrior::uniform(1.0, B);
      const auto& sol = g_bayes.at(B).solution;
      c.checks.push_back(perturbation_check(
          "bayes exp1 B=" + fmt("%g", B), sol, kUnit,
          [&](const DesignMeasure& d) { return bayes_criterion(d, model, prior, false); }, rng));
    }
    const auto e2 = models::exp2();
    const auto prior = ParameterPrior::uniform(1.0, 20.0);
    const auto sol = solve_bayes(e2, prior);
    c.checks.push_back(perturbation_check(
        "bayes exp2 B=20", sol, kUnit,
        [&](const DesignMeasure& d) { return bayes_criterion(d, e2, prior, false); }, rng));
  }
  {
    const auto model = models::exp1();
    const LocalDesigns local(model);
    for (double B : {10.0, 50.0}) {
      const BetaGrid grid(1.0, B, 400);
      const auto& sol = g_maximin.at(B).solution;
      c.checks.push_back(perturbation_check(
          "maximin exp1 B=" + fmt("%g", B), sol, kUnit,
          [&](const DesignMeasure& d) { return maximin_criterion(d, grid, local).value; }, rng));
    }
  }
  return c;
}

Criterion cauchy_binet() {
  Criterion c{8, "Cauchy-Binet oracle equivalence", {}};
  std::mt19937_64 rng(8);
  std::uniform_int_distribution<int> pick_model(0, 3);
  std::uniform_int_distribution<int> pick_n(1, 8);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const std::vector<ModelSpec> all = {models::exp1(), models::exp2(), models::exp3(),
                                      models::logistic(10.0)};
  double worst = 0.0;
  int bad = 0;
  for (int t = 0; t < kCauchyBinetDesigns; ++t) {
    const auto& model = all[pick_model(rng)];
    const int n = pick_n(rng);
    std::vector<double> x(n), w(n);
    for (int i = 0; i < n; ++i) {
      x[i] = model.design_interval.lo + model.design_interval.length() * u(rng);
      w[i] = 0.05 + u(rng);
    }
    const auto d = DesignMeasure::normalized(x, w);
    const double beta = 1.0 + 19.0 * u(rng);
    const double det = information_matrix(d, model, beta).determinant();
    const double cb = det_via_cauchy_binet(d, model, beta);
    if (n < model.m) {
      if (cb != 0.0) ++bad;
      continue;
    }
    const double rel = std::abs(det - cb) / std::max(std::abs(cb), 1e-300);
    worst = std::max(worst, rel);
    if (!close_rel(det, cb, kCauchyBinetRel)) ++bad;
  }
  c.add(std::to_string(kCauchyBinetDesigns) + " random designs within " + fmt("%g", kCauchyBinetRel),
        bad == 0, std::to_string(bad) + " mismatches, worst rel " + fmt("%.2e", worst));
  return c;
}

Criterion ordering() {
  Criterion c{9, "Support-count ordering maximin >= Bayes", {}};
  for (double B : {10.0, 40.0, 50.0, 100.0, 200.0}) {
    const int mm = support_count(g_maximin.at(B).solution.design, kUnit);
    const int ba = support_count(g_bayes.at(B).solution.design, kUnit);
    c.add("B=" + fmt("%g", B), mm >= ba,
          "maximin " + std::to_string(mm) + ", bayes " + std::to_string(ba));
  }
  return c;
}

}  // namespace

int main() {
  std::vector<Criterion> results;
  results.push_back(maximin_reference());
  results.push_back(bayes_reference());
  results.push_back(local_oracles());
  results.push_back(q_closed_forms());
  results.push_back(envelope());
  results.push_back(lower_bounds());
  results.push_back(soundness());
  results.push_back(cauchy_binet());
  results.push_back(ordering());

  std::sort(results.begin(), results.end(),
            [](const Criterion& a, const Criterion& b) { return a.id < b.id; });

  int passed = 0;
  std::vector<int> unexpected;
  for (const auto& c : results) {
    const bool ok = c.passed();
    passed += ok;
    const bool expected_fail = kExpectedFailures.count(c.id) > 0;
    std::printf("[%s] %d. %s%s\n", ok ? "PASS" : "FAIL", c.id, c.title.c_str(),
                !ok && expected_fail ? " (expected failure)" : "");
    for (const auto& ch : c.checks) {
      std::printf("       %s %s: %s\n", ch.ok ? "ok  " : "FAIL", ch.label.c_str(),
                  ch.detail.c_str());
    }
    if (ok == expected_fail) unexpected.push_back(c.id);
  }
  std::printf("\n%d/%zu criteria passed\n", passed, results.size());
  if (!unexpected.empty()) {
    std::printf("outcome differs from the pinned expectation for criteria:");
    for (int id : unexpected) std::printf(" %d", id);
    std::printf("\n");
    return 1;
  }
  return 0;
}
