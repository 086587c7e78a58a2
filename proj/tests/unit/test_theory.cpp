#include <doctest.h>

#include <cmath>
#include <numbers>

#include "optdesign/bayes.hpp"
#include "optdesign/errors.hpp"
#include "optdesign/maximin.hpp"
#include "optdesign/models.hpp"
#include "optdesign/theory.hpp"
#include "support.hpp"

using namespace optdesign;
using optdesign::testing::close_rel;

namespace {

const double e = std::numbers::e;
const double ln2 = std::numbers::ln2;

std::vector<double> log_samples(double lo, double hi, int n) {
  std::vector<double> v(n);
  for (int i = 0; i < n; ++i) v[i] = lo * std::pow(hi / lo, i / (n - 1.0));
  return v;
}

// root of z^2 e^{2(1-z)} = 1/2 below 1
double psi_half_root(double lo, double hi) {
  const auto psi = [](double z) { return z * z * std::exp(2.0 * (1.0 - z)); };
  const bool rising = psi(lo) < psi(hi);
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (lo + hi);
    ((psi(mid) < 0.5) == rising ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

double half_band() {
  return std::min(-std::log(psi_half_root(0.1, 1.0)), std::log(psi_half_root(1.0, 5.0)));
}

}  // namespace

TEST_SUITE("theory_lab") {
  TEST_CASE("scale functions") {
    const auto lg = ScaleFunction::logarithm();
    CHECK(lg(e) == doctest::Approx(1.0));
    CHECK(lg.distance(2.0, 8.0) == doctest::Approx(std::log(4.0)));
    CHECK(lg.inverse(2.0) == doctest::Approx(e * e));
    const auto ta = ScaleFunction::truncated_exponential(0.04);
    CHECK(ta(1.0 / 0.04) - ta(0.0) == doctest::Approx(1.0 / std::sqrt(0.04)));
    const auto st = ScaleFunction::discrete_step(5);
    CHECK(st(1.0) == 1.0);
    CHECK(st(2.5) == 2.0);
    CHECK(st(0.99) == 0.0);
  }

  TEST_CASE("envelopes") {
    const auto ex = DecayEnvelope::exponential(e * e, 2.0);
    CHECK(ex(0.5) == doctest::Approx(e * e * std::exp(-1.0)));
    CHECK(ex(-0.5) == ex(0.5));
    const auto pw = DecayEnvelope::power(1.0, 1.5);
    CHECK(pw(2.0) == doctest::Approx(std::pow(2.0, -1.5)));
    CHECK(pw.admissible_for_maximin(models::exp1()));
    CHECK_FALSE(DecayEnvelope::power(1.0, 0.5).admissible_for_maximin(models::exp3()));
    CHECK(DecayEnvelope::power(1.0, 1.5).admissible_for_maximin(models::exp3()));
  }

  TEST_CASE("exp1 uniform decrease") {
    const auto r = check_uniform_decrease(models::exp1(), ScaleFunction::logarithm(),
                                          DecayEnvelope::exponential(e * e, 2.0),
                                          log_samples(1.0, 1000.0, 200));
    CHECK(r.passed);
    CHECK(r.violations == 0);
    CHECK(r.samples == 200 * 200);
    REQUIRE(r.lambda_estimate);
    // sampled estimate of the largest band on which Q >= 1/2
    CHECK(*r.lambda_estimate >= ln2);
    CHECK(*r.lambda_estimate >= half_band());
    CHECK(*r.lambda_estimate <= half_band() + std::log(1000.0) / 199.0 + 1e-12);
  }

  TEST_CASE("logistic uniform decrease") {
    std::vector<double> betas;
    for (int i = 0; i <= 150; ++i) betas.push_back(0.1 * i);
    const auto r = check_uniform_decrease(models::logistic(30.0), ScaleFunction::identity(),
                                          DecayEnvelope::exponential(4.0 * e, 1.0), betas, 1.0);
    CHECK(r.passed);
    CHECK(r.violations == 0);
  }

  TEST_CASE("a violated envelope is reported") {
    const auto r = check_uniform_decrease(models::exp1(), ScaleFunction::logarithm(),
                                          DecayEnvelope::exponential(1.0, 4.0),
                                          log_samples(1.0, 100.0, 30));
    CHECK_FALSE(r.passed);
    CHECK(r.violations > 0);
    CHECK(r.worst_margin > 0.0);
  }

  TEST_CASE("gram domination") {
    std::vector<double> xs;
    for (int i = 1; i <= 30; ++i) xs.push_back(i / 30.0);
    const BetaGrid grid(1.0, 30.0, 40);

    const auto r1 = check_gram_domination(models::exp1(), xs, grid);
    CHECK(r1.passed);
    CHECK(*r1.quantity("c0") == doctest::Approx(1.0).epsilon(1e-9));

    const auto r2 = check_gram_domination(models::exp2(), xs, grid);
    CHECK(r2.passed);
    CHECK(*r2.quantity("c0_gram") <= 1.0 + 1e-12);

    const auto r3 = check_gram_domination(models::exp3(), xs, grid);
    CHECK(r3.passed);
    CHECK(*r3.quantity("c0_gram") <= 1.0 + 1e-12);
    CHECK(std::isfinite(*r3.quantity("c0")));
  }

  TEST_CASE("prior domination for the truncated exponential prior") {
    const double a = 0.05;
    const auto prior = ParameterPrior::trunc_exp(a);
    std::vector<double> betas;
    for (int i = 0; i <= 40; ++i) betas.push_back(i / (40.0 * a) * 0.999);
    const auto r = check_prior_domination(prior, prior.natural_scale(), betas);
    CHECK(r.passed);
    CHECK(*r.quantity("c3") == doctest::Approx(1.0).epsilon(1e-6));
  }

  TEST_CASE("lower-bound construction for exp1") {
    const auto lb = construct_lower_bound_design(models::exp1(), ScaleFunction::logarithm(), 1.0,
                                                 std::exp(4.0), ln2);
    CHECK(lb.n == 3);
    CHECK(lb.width == doctest::Approx(4.0));
    REQUIRE(lb.betas.size() == 3);
    const double lbeta[] = {2.0 / 3.0, 2.0, 10.0 / 3.0};
    for (int k = 0; k < 3; ++k) CHECK(close_rel(lb.betas[k], std::exp(lbeta[k]), 1e-12));
    const auto d = lb.design.sorted();
    REQUIRE(d.size() == 3);
    for (int k = 0; k < 3; ++k) {
      CHECK(close_rel(d.points()[k], std::exp(-lbeta[2 - k]), 1e-12));
      CHECK(d.weights()[k] == doctest::Approx(1.0 / 3.0));
    }
  }

  TEST_CASE("lower-bound construction at B = 4 lambda") {
    const double lam = 0.5;
    const auto lb = construct_lower_bound_design(models::exp1(), ScaleFunction::logarithm(), 1.0,
                                                 std::exp(4.0 * lam), lam);
    REQUIRE(lb.n == 2);
    const double mid = 2.0 * lam;
    CHECK(mid - std::log(lb.betas[0]) == doctest::Approx(std::log(lb.betas[1]) - mid));
    CHECK_THROWS_AS(construct_lower_bound_design(models::exp1(), ScaleFunction::logarithm(), 1.0,
                                                 std::exp(3.0 * lam), lam),
                    UsageError);
  }

  TEST_CASE("lower-bound construction for exp2 merges the shared point") {
    const auto lb = construct_lower_bound_design(models::exp2(), ScaleFunction::logarithm(), 1.0,
                                                 std::exp(4.0), ln2);
    CHECK(lb.n == 3);
    const auto d = lb.design.sorted();
    REQUIRE(d.size() == 4);
    CHECK(d.points()[0] == 0.0);
    CHECK(d.weights()[0] == doctest::Approx(0.5));
  }

  TEST_CASE("spacing and covering of the construction") {
    for (double hi : {std::exp(4.0), 100.0, 5000.0}) {
      const auto scale = ScaleFunction::logarithm();
      const auto lb = construct_lower_bound_design(models::exp1(), scale, 1.0, hi, ln2);
      const double B = std::log(hi);
      for (std::size_t k = 1; k < lb.betas.size(); ++k) {
        const double gap = scale.distance(lb.betas[k - 1], lb.betas[k]);
        CHECK(gap == doctest::Approx(B / lb.n).epsilon(1e-12));
        CHECK(gap <= 2.0 * ln2 + 1e-12);
      }
      for (int i = 0; i <= 500; ++i) {
        const double beta = std::exp(B * i / 500.0);
        double nearest = INFINITY;
        for (double bk : lb.betas) nearest = std::min(nearest, scale.distance(beta, bk));
        CHECK(nearest <= ln2 + 1e-12);
      }
    }
  }

  TEST_CASE("lower bounds on [1, e^4]") {
    const auto r1 = verify_lower_bounds(models::exp1(), ScaleFunction::logarithm(), 1.0,
                                        std::exp(4.0), ln2);
    CHECK(r1.passed);
    CHECK(*r1.quantity("phi") >= ln2 / 8.0);
    CHECK(*r1.quantity("phi_bound") == doctest::Approx(ln2 / 8.0));
    CHECK(*r1.quantity("psi_st") >= -4.0 + std::log(ln2));
    CHECK(*r1.quantity("psi_bound") == doctest::Approx(-std::log(4.0) + std::log(ln2)));

    for (const auto& model : {models::exp2(), models::exp3()}) {
      const auto r = verify_lower_bounds(model, ScaleFunction::logarithm(), 1.0, std::exp(4.0), ln2);
      CHECK(r.passed);
      const double n = *r.quantity("n");
      CHECK(*r.quantity("pointwise_bound") ==
            doctest::Approx(1.0 / (2.0 * std::pow(n, model.m - model.m_eta))));
    }
  }

  TEST_CASE("growth study for the Bayesian criterion") {
    const auto rows = growth_study(models::exp1(), GrowthCriterion::kBayesUniform,
                                   {10.0, 40.0, 300.0, 3000.0});
    REQUIRE(rows.size() == 4);
    const int expected[] = {1, 2, 3, 4};
    for (int i = 0; i < 4; ++i) {
      CHECK(rows[i].error.empty());
      CHECK(rows[i].certificate_passed);
      CHECK(rows[i].support_count == expected[i]);
    }
  }

  TEST_CASE("growth study at tiny B reproduces local support sizes") {
    const auto r1 = growth_study(models::exp1(), GrowthCriterion::kMaximin, {1.001});
    CHECK(r1[0].support_count == 1);
    const auto r2 = growth_study(models::exp2(), GrowthCriterion::kMaximin, {1.001});
    CHECK(r2[0].support_count == 2);
    const auto r3 = growth_study(models::exp3(), GrowthCriterion::kBayesUniform, {1.001});
    CHECK(r3[0].support_count == 3);
  }

  TEST_CASE("growth study records invalid rows") {
    const auto rows = growth_study(models::exp1(), GrowthCriterion::kMaximin, {0.5, 5.0});
    REQUIRE(rows.size() == 2);
    CHECK_FALSE(rows[0].error.empty());
    CHECK(rows[1].error.empty());
    CHECK(rows[1].support_count >= 1);
  }

  TEST_CASE("best one-point Bayesian value decreases in B") {
    double previous = INFINITY;
    for (double B : {10.0, 1e2, 1e3, 1e4}) {
      const double v = best_one_point_bayes(models::exp1(), ParameterPrior::uniform(1.0, B));
      CHECK(v < previous);
      previous = v;
    }
  }
}
