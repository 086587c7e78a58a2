#include "cli.hpp"

#include <algorithm>
#include <cmath>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "optdesign/bayes.hpp"
#include "optdesign/certificate.hpp"
#include "optdesign/design.hpp"
#include "optdesign/errors.hpp"
#include "optdesign/io.hpp"
#include "optdesign/maximin.hpp"
#include "optdesign/models.hpp"
#include "optdesign/theory.hpp"

namespace optdesign::cli {

namespace {

std::pair<double, double> parse_range(const std::string& text) {
  const auto colon = text.find(':');
  if (colon == std::string::npos) throw UsageError("expected LO:HI, got '" + text + "'");
  try {
    std::size_t a = 0;
    std::size_t b = 0;
    const double lo = std::stod(text.substr(0, colon), &a);
    const double hi = std::stod(text.substr(colon + 1), &b);
    if (a != colon || b != text.size() - colon - 1) throw std::invalid_argument(text);
    if (!(lo < hi)) throw UsageError("range needs LO < HI: '" + text + "'");
    return {lo, hi};
  } catch (const std::invalid_argument&) {
    throw UsageError("expected LO:HI, got '" + text + "'");
  } catch (const std::out_of_range&) {
    throw UsageError("expected LO:HI, got '" + text + "'");
  }
}

std::vector<double> parse_list(const std::string& text) {
  std::vector<double> values;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t used = 0;
      values.push_back(std::stod(item, &used));
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw UsageError("not a number in list: '" + item + "'");
    }
  }
  if (values.empty()) throw UsageError("empty list");
  return values;
}

DecayEnvelope parse_envelope(const std::string& text) {
  std::stringstream ss(text);
  std::string form;
  std::string c1;
  std::string gamma;
  std::getline(ss, form, ':');
  std::getline(ss, c1, ':');
  std::getline(ss, gamma, ':');
  try {
    if (form == "exp") return DecayEnvelope::exponential(std::stod(c1), std::stod(gamma));
    if (form == "power") return DecayEnvelope::power(std::stod(c1), std::stod(gamma));
  } catch (const std::invalid_argument&) {
  }
  throw UsageError("expected envelope exp:C1:GAMMA or power:C1:GAMMA, got '" + text + "'");
}

// Logistic designs need every local optimum x = beta inside the interval.
double logistic_x_max(const RunConfig& c) {
  if (c.x_max) return *c.x_max;
  if (!c.prior.empty()) {
    const ParameterPrior p = ParameterPrior::parse(c.prior);
    if (p.kind() == ParameterPrior::Kind::kTruncExp) return 2.0 / p.rate();
    if (p.kind() == ParameterPrior::Kind::kDiscreteUniform) return p.count() + 5.0;
  }
  return 30.0;
}

GridSpec xgrid(const RunConfig& c, Spacing spacing) {
  GridSpec g;
  g.count = c.grid;
  g.spacing = spacing;
  return g;
}

void emit(const RunConfig& c, const std::string& text, std::ostream& out) {
  if (c.out.empty()) {
    out << text;
  } else {
    io::write_text(c.out, text);
  }
}

void write_derivative_plot(const std::string& prefix, const AveragedDerivative& d,
                           const Interval& interval) {
  std::vector<double> xs;
  std::vector<double> ys;
  for (int i = 0; i <= 2000; ++i) {
    const double x = interval.lo + interval.length() * i / 2000.0;
    xs.push_back(x);
    ys.push_back(d(x));
  }
  io::write_text(prefix + "_derivative.dat", io::plot_data(xs, ys));
}

std::vector<double> node_betas(const std::vector<QuadratureNode>& q) {
  std::vector<double> out;
  for (const auto& n : q) out.push_back(n.beta);
  return out;
}

std::vector<double> node_weights(const std::vector<QuadratureNode>& q) {
  std::vector<double> out;
  for (const auto& n : q) out.push_back(n.weight);
  return out;
}

int finish(const RunConfig& c, io::SolutionFile file, std::ostream& out, std::ostream& err) {
  emit(c, io::to_json(file).dump(2) + "\n", out);
  if (file.certificate && !file.certificate->passed) {
    err << "certificate failed: max directional derivative "
        << file.certificate->max_directional_derivative << " exceeds " << file.certificate->bound
        << " at x = " << file.certificate->worst_point << "\n";
    return kFailure;
  }
  return kOk;
}

int run_local(const RunConfig& c, std::ostream& out, std::ostream& err) {
  const ModelSpec model = models::by_name(c.model, logistic_x_max(c));
  const DesignSolution s = solve_local(model, c.beta, xgrid(c, Spacing::kUniform));
  io::Problem p{"local", c.model, model.design_interval.hi, c.beta, "", 0, 0, 0, 0};
  if (!c.plot.empty()) {
    write_derivative_plot(c.plot, AveragedDerivative(s.design, model, {c.beta}, {1.0}),
                          model.design_interval);
  }
  return finish(c, {p, s.design, s.certificate, s.criterion_value}, out, err);
}

int run_bayes(const RunConfig& c, std::ostream& out, std::ostream& err) {
  if (c.prior.empty()) throw UsageError("bayes needs --prior");
  const ParameterPrior prior = ParameterPrior::parse(c.prior, c.quadrature);
  const ModelSpec model = models::by_name(c.model, logistic_x_max(c));
  const DesignSolution s = solve_bayes(model, prior, xgrid(c, Spacing::kLogTilted));
  io::Problem p{"bayes", c.model, model.design_interval.hi, 0, prior.describe(),
                prior.quadrature_nodes(), 0, 0, 0};
  if (!c.plot.empty()) {
    const auto q = prior.quadrature();
    write_derivative_plot(c.plot, AveragedDerivative(s.design, model, node_betas(q), node_weights(q)),
                          model.design_interval);
  }
  return finish(c, {p, s.design, s.certificate, s.criterion_value}, out, err);
}

int run_maximin(const RunConfig& c, std::ostream& out, std::ostream& err) {
  if (!c.beta_range) throw UsageError("maximin needs --beta-range LO:HI");
  const ModelSpec model = models::by_name(c.model, logistic_x_max(c));
  const auto [lo, hi] = *c.beta_range;
  const BetaGrid grid(lo, hi, c.beta_grid, lo > 0.0 ? BetaGrid::Kind::kLog : BetaGrid::Kind::kUniform);
  const LocalDesigns local(model, xgrid(c, Spacing::kUniform));
  const DesignSolution s = solve_maximin(local, grid, xgrid(c, Spacing::kUniform));
  io::Problem p{"maximin", c.model, model.design_interval.hi, 0, "", 0, lo, hi, c.beta_grid};
  if (!c.plot.empty()) {
    std::vector<double> betas;
    std::vector<double> weights;
    for (const auto& [b, w] : s.certificate.least_favorable_weights) {
      betas.push_back(b);
      weights.push_back(w);
    }
    if (!betas.empty()) {
      write_derivative_plot(c.plot, AveragedDerivative(s.design, model, betas, weights),
                            model.design_interval);
    }
    io::write_text(c.plot + "_efficiency.dat",
                   io::plot_data(grid.values(), efficiency_curve(s.design, grid, local)));
  }
  return finish(c, {p, s.design, s.certificate, s.criterion_value}, out, err);
}

int run_verify(const RunConfig& c, std::ostream& out, std::ostream& err) {
  if (c.input.empty()) throw UsageError("verify needs a solution file");
  io::SolutionFile file = io::solution_from_json(io::read_json(c.input));
  const io::Problem& p = file.problem;
  const ModelSpec model = models::by_name(p.model, p.logistic_x_max);
  for (double x : file.design.points()) {
    if (!model.design_interval.contains(x)) throw UsageError("design point outside the interval");
  }
  try {
    if (p.kind == "local") {
      file.certificate = audit_certificate(AveragedDerivative(file.design, model, {p.beta}, {1.0}),
                                           file.design, LocalSolveOptions{}.certificate_tolerance);
      file.criterion_value = information_matrix(file.design, model, p.beta).determinant();
    } else if (p.kind == "bayes") {
      const ParameterPrior prior = ParameterPrior::parse(p.prior, p.quadrature);
      file.certificate = bayes_certificate(file.design, model, prior);
      file.criterion_value = bayes_criterion(file.design, model, prior, false);
    } else {
      const BetaGrid grid(p.beta_min, p.beta_max, p.beta_grid,
                          p.beta_min > 0.0 ? BetaGrid::Kind::kLog : BetaGrid::Kind::kUniform);
      const LocalDesigns local(model);
      std::vector<double> start(grid.values().size(), 0.0);
      if (file.certificate) {
        for (const auto& [beta, weight] : file.certificate->least_favorable_weights) {
          const auto& vals = grid.values();
          const auto it = std::min_element(vals.begin(), vals.end(), [&](double a, double b) {
            return std::abs(a - beta) < std::abs(b - beta);
          });
          if (it != vals.end() && std::abs(*it - beta) <= 1e-9 * std::max(1.0, beta)) {
            start[static_cast<std::size_t>(it - vals.begin())] += weight;
          }
        }
      }
      EquivalenceCertificate cert = maximin_certificate(file.design, grid, local);
      const EquivalenceCertificate witnessed =
          maximin_certificate(file.design, grid, local, {}, start);
      if (witnessed.max_directional_derivative < cert.max_directional_derivative) cert = witnessed;
      file.certificate = cert;
      file.criterion_value = maximin_criterion(file.design, grid, local).value;
    }
  } catch (const SingularityError& e) {
    err << "certificate failed: " << e.what() << "\n";
    EquivalenceCertificate failed;
    failed.bound = model.m;
    failed.max_directional_derivative = kPlusInfinity;
    file.certificate = failed;
  }
  return finish(c, file, out, err);
}

int run_theory(const RunConfig& c, std::ostream& out, std::ostream& /*err*/) {
  const ModelSpec model = models::by_name(c.model, logistic_x_max(c));
  const bool logistic = c.model == "logistic";
  const ScaleFunction scale = logistic ? ScaleFunction::identity() : ScaleFunction::logarithm();
  TheoryReport report;
  if (c.check == "q-decay") {
    const auto [lo, hi] = c.beta_range.value_or(logistic ? std::pair{0.0, 25.0}
                                                         : std::pair{1.0, 1000.0});
    const int n = c.samples > 0 ? c.samples : 200;
    std::vector<double> betas;
    for (int i = 0; i < n; ++i) {
      const double t = n == 1 ? 0.0 : static_cast<double>(i) / (n - 1);
      betas.push_back(logistic ? lo + (hi - lo) * t : std::exp(std::log(lo) + std::log(hi / lo) * t));
    }
    const DecayEnvelope envelope =
        !c.envelope.empty() ? parse_envelope(c.envelope)
        : logistic          ? DecayEnvelope::exponential(4.0 * std::exp(1.0), 1.0)
                            : DecayEnvelope::exponential(std::exp(2.0), 2.0);
    report = check_uniform_decrease(model, scale, envelope, betas, logistic ? 1.0 : 0.0);
  } else if (c.check == "gram-domination") {
    const auto [lo, hi] = c.beta_range.value_or(std::pair{1.0, 50.0});
    const int n = c.samples > 0 ? c.samples : 21;
    std::vector<double> xs;
    for (int i = 0; i < n; ++i) {
      xs.push_back(model.design_interval.lo + model.design_interval.length() * i / std::max(1, n - 1));
    }
    report = check_gram_domination(model, xs, BetaGrid(lo, hi, 40));
  } else if (c.check == "lower-bound") {
    const auto [lo, hi] = c.beta_range.value_or(logistic ? std::pair{0.0, 8.0}
                                                         : std::pair{1.0, std::exp(4.0)});
    const double lambda = c.lambda.value_or(logistic ? 1.0 : std::log(2.0));
    report = verify_lower_bounds(model, scale, lo, hi, lambda);
  } else if (c.check == "prior-domination") {
    if (c.prior.empty()) throw UsageError("prior-domination needs --prior");
    const ParameterPrior prior = ParameterPrior::parse(c.prior);
    const int n = c.samples > 0 ? c.samples : 101;
    std::vector<double> betas;
    for (int i = 0; i < n; ++i) betas.push_back(prior.lo() + (prior.hi() - prior.lo()) * i / (n - 1));
    report = check_prior_domination(prior, prior.natural_scale(), betas);
  } else {
    throw UsageError("unknown check '" + c.check +
                     "' (expected q-decay, gram-domination, lower-bound or prior-domination)");
  }
  emit(c, io::to_json(report).dump(2) + "\n", out);
  return report.passed ? kOk : kFailure;
}

int run_growth(const RunConfig& c, std::ostream& out, std::ostream& err) {
  if (c.B_list.empty()) throw UsageError("growth needs --B");
  GrowthCriterion criterion;
  if (c.criterion == "maximin") {
    criterion = GrowthCriterion::kMaximin;
  } else if (c.criterion == "bayes") {
    criterion = GrowthCriterion::kBayesUniform;
  } else {
    throw UsageError("unknown criterion '" + c.criterion + "' (expected maximin or bayes)");
  }
  GrowthOptions options;
  options.beta_grid_count = c.beta_grid;
  if (c.quadrature > 0) options.quadrature_nodes = c.quadrature;
  const ModelSpec model = models::by_name(c.model, logistic_x_max(c));
  const auto rows = growth_study(model, criterion, c.B_list, options);
  emit(c, io::growth_csv(rows), out);
  int status = kOk;
  for (const auto& r : rows) {
    if (!r.error.empty()) err << "B = " << r.B << ": " << r.error << "\n";
    if (!r.error.empty() || !r.certificate_passed) status = kFailure;
  }
  return status;
}

}  // namespace

std::optional<RunConfig> parse(int argc, const char* const* argv) {
  RunConfig c;
  CLI::App app{"Optimal experimental designs for nonlinear regression", "optdesign"};
  app.require_subcommand(1, 1);
  std::string beta_range;
  std::string b_list;

  const auto add_model = [&](CLI::App* sub) {
    sub->add_option("--model", c.model, "exp1 | exp2 | exp3 | logistic")->required();
    sub->add_option("--x-max", c.x_max, "upper end of the logistic design interval");
    sub->add_option("--grid", c.grid, "candidate points on the design interval")->check(CLI::PositiveNumber);
    sub->add_option("--out", c.out, "output file (stdout when omitted)");
  };

  CLI::App* local = app.add_subcommand("local", "local D-optimal design");
  add_model(local);
  local->add_option("--beta", c.beta, "parameter value")->required();
  local->add_option("--plot", c.plot, "prefix for plot-data files");

  CLI::App* bayes = app.add_subcommand("bayes", "Bayesian D-optimal design");
  add_model(bayes);
  bayes->add_option("--prior", c.prior, "uniform:LO:HI | truncexp:A | discrete:L | point:B")->required();
  bayes->add_option("--quad", c.quadrature, "quadrature nodes");
  bayes->add_option("--plot", c.plot, "prefix for plot-data files");

  CLI::App* maximin = app.add_subcommand("maximin", "standardized maximin D-optimal design");
  add_model(maximin);
  maximin->add_option("--beta-range", beta_range, "LO:HI")->required();
  maximin->add_option("--beta-grid", c.beta_grid, "parameter grid size")->check(CLI::Range(2, 100000));
  maximin->add_option("--plot", c.plot, "prefix for plot-data files");

  CLI::App* verify = app.add_subcommand("verify", "re-run the certificate of a solution file");
  verify->add_option("file", c.input, "solution JSON")->required();
  verify->add_option("--out", c.out, "output file (stdout when omitted)");

  CLI::App* theory = app.add_subcommand("theory", "structural checks and lower-bound designs");
  theory->add_option("--check", c.check, "q-decay | gram-domination | lower-bound | prior-domination")->required();
  theory->add_option("--model", c.model, "exp1 | exp2 | exp3 | logistic");
  theory->add_option("--beta-range", beta_range, "LO:HI");
  theory->add_option("--lambda", c.lambda, "band half-width on the scale");
  theory->add_option("--samples", c.samples, "samples per axis");
  theory->add_option("--envelope", c.envelope, "exp:C1:GAMMA | power:C1:GAMMA");
  theory->add_option("--prior", c.prior, "prior for prior-domination");
  theory->add_option("--out", c.out, "output file (stdout when omitted)");

  CLI::App* growth = app.add_subcommand("growth", "support size against uncertainty width");
  growth->add_option("--model", c.model, "exp1 | exp2 | exp3 | logistic")->required();
  growth->add_option("--criterion", c.criterion, "maximin | bayes");
  growth->add_option("--B", b_list, "comma-separated upper ends of [1, B]")->required();
  growth->add_option("--beta-grid", c.beta_grid, "parameter grid size (maximin)");
  growth->add_option("--quad", c.quadrature, "quadrature nodes (bayes)");
  growth->add_option("--out", c.out, "CSV file (stdout when omitted)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    std::cout << app.help();
    return std::nullopt;
  } catch (const CLI::CallForAllHelp&) {
    std::cout << app.help("", CLI::AppFormatMode::All);
    return std::nullopt;
  } catch (const CLI::ParseError& e) {
    throw UsageError(e.what());
  }
  c.command = app.get_subcommands().front()->get_name();
  if (!beta_range.empty()) c.beta_range = parse_range(beta_range);
  if (!b_list.empty()) c.B_list = parse_list(b_list);
  return c;
}

int run(const RunConfig& config, std::ostream& out, std::ostream& err) {
  if (config.command == "local") return run_local(config, out, err);
  if (config.command == "bayes") return run_bayes(config, out, err);
  if (config.command == "maximin") return run_maximin(config, out, err);
  if (config.command == "verify") return run_verify(config, out, err);
  if (config.command == "theory") return run_theory(config, out, err);
  if (config.command == "growth") return run_growth(config, out, err);
  throw UsageError("unknown command '" + config.command + "'");
}

int main_entry(int argc, const char* const* argv) {
  try {
    const auto config = parse(argc, argv);
    if (!config) return kOk;
    return run(*config, std::cout, std::cerr);
  } catch (const UsageError& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return kUsage;
  } catch (const DomainError& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return kUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kFailure;
  }
}

}  // namespace optdesign::cli
