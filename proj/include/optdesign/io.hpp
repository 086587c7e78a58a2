#pragma once

#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "optdesign/local.hpp"
#include "optdesign/theory.hpp"

namespace optdesign::io {

using Json = nlohmann::json;

/// {"points": [...], "weights": [...]}; doubles round-trip exactly.
Json to_json(const DesignMeasure& design);
DesignMeasure design_from_json(const Json& j);

Json to_json(const EquivalenceCertificate& cert);
EquivalenceCertificate certificate_from_json(const Json& j);

Json to_json(const TheoryReport& report);

/// What was solved; enough to re-run the certificate.
struct Problem {
  std::string kind;  // local | bayes | maximin
  std::string model;
  double logistic_x_max = 30.0;
  double beta = 0.0;
  std::string prior;
  int quadrature = 0;
  double beta_min = 0.0;
  double beta_max = 0.0;
  int beta_grid = 0;
};

struct SolutionFile {
  Problem problem;
  DesignMeasure design;
  std::optional<EquivalenceCertificate> certificate;
  double criterion_value = 0.0;
};

Json to_json(const SolutionFile& file);
SolutionFile solution_from_json(const Json& j);

/// Throws std::runtime_error on I/O or parse failure.
Json read_json(const std::string& path);
void write_json(const std::string& path, const Json& j);

/// One column per B; rows B, support_count, criterion, certificate, then x_k / w_k pairs.
std::string growth_csv(const std::vector<GrowthRow>& rows);

/// Two whitespace-separated columns, one pair per line.
std::string plot_data(const std::vector<double>& xs, const std::vector<double>& ys);

void write_text(const std::string& path, const std::string& text);

}  // namespace optdesign::io
