#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "optdesign/bayes.hpp"
#include "optdesign/design.hpp"
#include "optdesign/errors.hpp"
#include "optdesign/maximin.hpp"
#include "optdesign/models.hpp"
#include "optdesign/theory.hpp"

namespace py = pybind11;
using namespace optdesign;

namespace {

py::dict report_dict(const TheoryReport& r) {
  py::dict d;
  d["check"] = r.check;
  d["domain"] = r.domain;
  d["samples"] = r.samples;
  d["violations"] = r.violations;
  d["worst_margin"] = r.worst_margin;
  d["lambda_estimate"] = r.lambda_estimate;
  py::dict q;
  for (const auto& [k, v] : r.quantities) q[py::str(k)] = v;
  d["quantities"] = q;
  d["passed"] = r.passed;
  return d;
}

ScaleFunction scale_by_name(const std::string& name) {
  if (name == "log") return ScaleFunction::logarithm();
  if (name == "identity") return ScaleFunction::identity();
  throw UsageError("scale must be 'log' or 'identity'");
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Local, Bayesian and standardized maximin D-optimal designs";

  py::register_exception<UsageError>(m, "UsageError", PyExc_ValueError);
  py::register_exception<DomainError>(m, "DomainError", PyExc_ValueError);
  py::register_exception<InfeasibleError>(m, "InfeasibleError", PyExc_RuntimeError);
  py::register_exception<SingularityError>(m, "SingularityError", PyExc_ArithmeticError);
  py::register_exception<DegenerateDesignError>(m, "DegenerateDesignError", PyExc_ValueError);

  py::class_<DesignMeasure>(m, "DesignMeasure")
      .def(py::init<std::vector<double>, std::vector<double>>(), py::arg("points"),
           py::arg("weights"))
      .def_property_readonly("points",
                             [](const DesignMeasure& d) {
                               return std::vector<double>(d.points().begin(), d.points().end());
                             })
      .def_property_readonly("weights",
                             [](const DesignMeasure& d) {
                               return std::vector<double>(d.weights().begin(), d.weights().end());
                             })
      .def("__len__", &DesignMeasure::size)
      .def("__eq__", [](const DesignMeasure& a, const DesignMeasure& b) { return a == b; })
      .def("__repr__", [](const DesignMeasure& d) {
        std::string s = "DesignMeasure(";
        for (std::size_t i = 0; i < d.size(); ++i) {
          if (i) s += ", ";
          s += "(" + std::to_string(d.points()[i]) + ", " + std::to_string(d.weights()[i]) + ")";
        }
        return s + ")";
      });

  py::class_<ModelSpec>(m, "Model")
      .def_readonly("name", &ModelSpec::name)
      .def_readonly("m", &ModelSpec::m)
      .def_readonly("m_eta", &ModelSpec::m_eta)
      .def_readonly("fixed_support", &ModelSpec::fixed_support)
      .def_property_readonly("interval",
                             [](const ModelSpec& s) {
                               return py::make_tuple(s.design_interval.lo, s.design_interval.hi);
                             })
      .def("score", [](const ModelSpec& s, double x, double beta) {
        const auto f = s.score_at(x, beta);
        return std::vector<double>(f.begin(), f.begin() + s.m);
      });

  m.def("model", &models::by_name, py::arg("name"), py::arg("logistic_x_max") = 30.0);

  py::class_<EquivalenceCertificate>(m, "Certificate")
      .def_readonly("max_directional_derivative", &EquivalenceCertificate::max_directional_derivative)
      .def_readonly("bound", &EquivalenceCertificate::bound)
      .def_readonly("tolerance", &EquivalenceCertificate::tolerance)
      .def_readonly("worst_point", &EquivalenceCertificate::worst_point)
      .def_readonly("passed", &EquivalenceCertificate::passed)
      .def_readonly("least_favorable_weights", &EquivalenceCertificate::least_favorable_weights);

  py::class_<DesignSolution>(m, "Solution")
      .def_readonly("design", &DesignSolution::design)
      .def_readonly("certificate", &DesignSolution::certificate)
      .def_readonly("criterion_value", &DesignSolution::criterion_value)
      .def_readonly("iterations", &DesignSolution::iterations)
      .def_readonly("converged", &DesignSolution::converged);

  m.def(
      "information_matrix",
      [](const DesignMeasure& d, const ModelSpec& model, double beta) {
        const InfoMatrix info = information_matrix(d, model, beta);
        std::vector<std::vector<double>> rows(model.m, std::vector<double>(model.m));
        for (int i = 0; i < model.m; ++i) {
          for (int j = 0; j < model.m; ++j) rows[i][j] = info(i, j);
        }
        return rows;
      },
      py::arg("design"), py::arg("model"), py::arg("beta"));
  m.def(
      "log_det",
      [](const DesignMeasure& d, const ModelSpec& model, double beta) {
        return log_det(information_matrix(d, model, beta));
      },
      py::arg("design"), py::arg("model"), py::arg("beta"));
  m.def("gram_determinant", &gram_determinant, py::arg("points"), py::arg("model"),
        py::arg("beta"));
  m.def("canonical_merge",
        py::overload_cast<const DesignMeasure&, double, double>(&canonical_merge),
        py::arg("design"), py::arg("merge_radius"), py::arg("weight_floor"));

  m.def(
      "solve_local",
      [](const ModelSpec& model, double beta, int grid) {
        GridSpec g;
        g.count = grid;
        py::gil_scoped_release release;
        return solve_local(model, beta, g);
      },
      py::arg("model"), py::arg("beta"), py::arg("grid") = 2001);
  m.def(
      "solve_bayes",
      [](const ModelSpec& model, const std::string& prior, int quadrature, int grid) {
        const ParameterPrior p = ParameterPrior::parse(prior, quadrature);
        GridSpec g = default_bayes_grid();
        g.count = grid;
        py::gil_scoped_release release;
        return solve_bayes(model, p, g);
      },
      py::arg("model"), py::arg("prior"), py::arg("quadrature") = 0, py::arg("grid") = 2001);
  m.def(
      "solve_maximin",
      [](const ModelSpec& model, double beta_min, double beta_max, int beta_grid, int grid) {
        GridSpec g;
        g.count = grid;
        py::gil_scoped_release release;
        return solve_maximin(model, BetaGrid(beta_min, beta_max, beta_grid), g);
      },
      py::arg("model"), py::arg("beta_min"), py::arg("beta_max"), py::arg("beta_grid") = 400,
      py::arg("grid") = 2001);

  m.def(
      "bayes_criterion",
      [](const DesignMeasure& d, const ModelSpec& model, const std::string& prior,
         bool standardized) {
        return bayes_criterion(d, model, ParameterPrior::parse(prior), standardized);
      },
      py::arg("design"), py::arg("model"), py::arg("prior"), py::arg("standardized") = false);
  m.def(
      "maximin_criterion",
      [](const DesignMeasure& d, const ModelSpec& model, double beta_min, double beta_max,
         int beta_grid) {
        const MaximinValue v = maximin_criterion(d, model, BetaGrid(beta_min, beta_max, beta_grid));
        return py::make_tuple(v.value, v.argmin_beta);
      },
      py::arg("design"), py::arg("model"), py::arg("beta_min"), py::arg("beta_max"),
      py::arg("beta_grid") = 400);
  m.def(
      "q_efficiency",
      [](const ModelSpec& model, double beta, double beta_tilde) {
        const LocalDesigns local(model);
        return q_efficiency(model, beta, beta_tilde, local.oracle()).value;
      },
      py::arg("model"), py::arg("beta"), py::arg("beta_tilde"));
  m.def(
      "support_count",
      [](const DesignMeasure& d, const ModelSpec& model) {
        return support_count(d, model.design_interval);
      },
      py::arg("design"), py::arg("model"));

  m.def(
      "growth_study",
      [](const ModelSpec& model, const std::string& criterion, const std::vector<double>& B) {
        GrowthCriterion c;
        if (criterion == "maximin") {
          c = GrowthCriterion::kMaximin;
        } else if (criterion == "bayes") {
          c = GrowthCriterion::kBayesUniform;
        } else {
          throw UsageError("criterion must be 'maximin' or 'bayes'");
        }
        std::vector<GrowthRow> rows;
        {
          py::gil_scoped_release release;
          rows = growth_study(model, c, B);
        }
        py::list out;
        for (const auto& r : rows) {
          py::dict d;
          d["B"] = r.B;
          d["support_count"] = r.support_count;
          d["criterion_value"] = r.criterion_value;
          d["certificate_passed"] = r.certificate_passed;
          d["design"] = r.design;
          d["error"] = r.error;
          out.append(d);
        }
        return out;
      },
      py::arg("model"), py::arg("criterion"), py::arg("B"));
  m.def(
      "construct_lower_bound_design",
      [](const ModelSpec& model, const std::string& scale, double beta_min, double beta_max,
         double lambda) {
        const LowerBoundDesign lb =
            construct_lower_bound_design(model, scale_by_name(scale), beta_min, beta_max, lambda);
        return py::make_tuple(lb.design, lb.n, lb.betas);
      },
      py::arg("model"), py::arg("scale"), py::arg("beta_min"), py::arg("beta_max"),
      py::arg("lam"));
  m.def(
      "verify_lower_bounds",
      [](const ModelSpec& model, const std::string& scale, double beta_min, double beta_max,
         double lambda) {
        return report_dict(
            verify_lower_bounds(model, scale_by_name(scale), beta_min, beta_max, lambda));
      },
      py::arg("model"), py::arg("scale"), py::arg("beta_min"), py::arg("beta_max"),
      py::arg("lam"));

  m.attr("__version__") = OPTDESIGN_VERSION;
}
