#include "optdesign/io.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "optdesign/errors.hpp"

namespace optdesign::io {

namespace {

std::string format_number(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

double number_or_infinity(const Json& j) {
  if (j.is_null()) return kPlusInfinity;
  return j.get<double>();
}

Json finite_or_null(double v) { return std::isfinite(v) ? Json(v) : Json(nullptr); }

}  // namespace

Json to_json(const DesignMeasure& design) {
  return Json{{"points", design.points()}, {"weights", design.weights()}};
}

DesignMeasure design_from_json(const Json& j) {
  try {
    return DesignMeasure(j.at("points").get<std::vector<double>>(),
                         j.at("weights").get<std::vector<double>>());
  } catch (const Json::exception& e) {
    throw UsageError(std::string("malformed design: ") + e.what());
  }
}

Json to_json(const EquivalenceCertificate& cert) {
  Json j{{"max_directional_derivative", finite_or_null(cert.max_directional_derivative)},
         {"bound", cert.bound},
         {"tolerance", cert.tolerance},
         {"worst_point", cert.worst_point},
         {"passed", cert.passed}};
  if (!cert.least_favorable_weights.empty()) {
    Json lf = Json::array();
    for (const auto& [beta, weight] : cert.least_favorable_weights) {
      lf.push_back({{"beta", beta}, {"weight", weight}});
    }
    j["least_favorable_weights"] = lf;
  }
  return j;
}

EquivalenceCertificate certificate_from_json(const Json& j) {
  EquivalenceCertificate cert;
  try {
    cert.max_directional_derivative = number_or_infinity(j.at("max_directional_derivative"));
    cert.bound = j.at("bound").get<double>();
    cert.tolerance = j.at("tolerance").get<double>();
    cert.worst_point = j.at("worst_point").get<double>();
    cert.passed = j.at("passed").get<bool>();
    if (j.contains("least_favorable_weights")) {
      for (const auto& e : j["least_favorable_weights"]) {
        cert.least_favorable_weights.emplace_back(e.at("beta").get<double>(),
                                                  e.at("weight").get<double>());
      }
    }
  } catch (const Json::exception& e) {
    throw UsageError(std::string("malformed certificate: ") + e.what());
  }
  return cert;
}

Json to_json(const TheoryReport& report) {
  Json q = Json::object();
  for (const auto& [name, value] : report.quantities) q[name] = finite_or_null(value);
  Json j{{"check", report.check},
         {"domain", report.domain},
         {"samples", report.samples},
         {"violations", report.violations},
         {"worst_margin", finite_or_null(report.worst_margin)},
         {"quantities", q},
         {"passed", report.passed}};
  if (report.lambda_estimate) j["lambda_estimate"] = *report.lambda_estimate;
  return j;
}

Json to_json(const SolutionFile& file) {
  const Problem& p = file.problem;
  Json problem{{"kind", p.kind}, {"model", p.model}};
  if (p.model == "logistic") problem["logistic_x_max"] = p.logistic_x_max;
  if (p.kind == "local") problem["beta"] = p.beta;
  if (p.kind == "bayes") {
    problem["prior"] = p.prior;
    problem["quadrature"] = p.quadrature;
  }
  if (p.kind == "maximin") {
    problem["beta_range"] = {p.beta_min, p.beta_max};
    problem["beta_grid"] = p.beta_grid;
  }
  Json j{{"problem", problem},
         {"design", to_json(file.design)},
         {"criterion_value", finite_or_null(file.criterion_value)}};
  if (file.certificate) j["certificate"] = to_json(*file.certificate);
  return j;
}

SolutionFile solution_from_json(const Json& j) {
  try {
    const Json& pj = j.at("problem");
    Problem p;
    p.kind = pj.at("kind").get<std::string>();
    p.model = pj.at("model").get<std::string>();
    p.logistic_x_max = pj.value("logistic_x_max", 30.0);
    if (p.kind == "local") {
      p.beta = pj.at("beta").get<double>();
    } else if (p.kind == "bayes") {
      p.prior = pj.at("prior").get<std::string>();
      p.quadrature = pj.value("quadrature", 0);
    } else if (p.kind == "maximin") {
      const auto range = pj.at("beta_range").get<std::vector<double>>();
      if (range.size() != 2) throw UsageError("beta_range needs two values");
      p.beta_min = range[0];
      p.beta_max = range[1];
      p.beta_grid = pj.at("beta_grid").get<int>();
    } else {
      throw UsageError("unknown problem kind '" + p.kind + "'");
    }
    SolutionFile file{p, design_from_json(j.at("design")), std::nullopt,
                      number_or_infinity(j.value("criterion_value", Json(nullptr)))};
    if (j.contains("certificate")) file.certificate = certificate_from_json(j["certificate"]);
    return file;
  } catch (const Json::exception& e) {
    throw UsageError(std::string("malformed solution file: ") + e.what());
  }
}

Json read_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  try {
    return Json::parse(in);
  } catch (const Json::exception& e) {
    throw UsageError(path + ": " + e.what());
  }
}

void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << text;
  if (!out) throw std::runtime_error("write failed: " + path);
}

void write_json(const std::string& path, const Json& j) { write_text(path, j.dump(2) + "\n"); }

std::string growth_csv(const std::vector<GrowthRow>& rows) {
  std::size_t depth = 0;
  for (const auto& r : rows) {
    if (r.design) depth = std::max(depth, r.design->size());
  }
  std::ostringstream os;
  const auto line = [&](const std::string& label, auto cell) {
    os << label;
    for (const auto& r : rows) os << ',' << cell(r);
    os << '\n';
  };
  line("B", [](const GrowthRow& r) { return format_number(r.B); });
  line("support_count", [](const GrowthRow& r) {
    return r.error.empty() ? std::to_string(r.support_count) : std::string("error");
  });
  line("criterion", [](const GrowthRow& r) {
    return r.error.empty() ? format_number(r.criterion_value) : std::string();
  });
  line("certificate", [](const GrowthRow& r) {
    return r.error.empty() ? std::string(r.certificate_passed ? "pass" : "fail") : std::string();
  });
  for (std::size_t k = 0; k < depth; ++k) {
    const std::string idx = std::to_string(k + 1);
    line("x" + idx, [k](const GrowthRow& r) {
      return r.design && k < r.design->size() ? format_number(r.design->points()[k])
                                              : std::string();
    });
    line("w" + idx, [k](const GrowthRow& r) {
      return r.design && k < r.design->size() ? format_number(r.design->weights()[k])
                                              : std::string();
    });
  }
  return os.str();
}

std::string plot_data(const std::vector<double>& xs, const std::vector<double>& ys) {
  if (xs.size() != ys.size()) throw UsageError("plot columns differ in length");
  std::ostringstream os;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    os << format_number(xs[i]) << ' ' << format_number(ys[i]) << '\n';
  }
  return os.str();
}

}  // namespace optdesign::io
