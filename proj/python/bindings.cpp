#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "pdtk/bounds.hpp"
#include "pdtk/divergence.hpp"
#include "pdtk/estimators.hpp"
#include "pdtk/gaussian.hpp"
#include "pdtk/model_io.hpp"
#include "pdtk/plane.hpp"
#include "pdtk/tradeoff.hpp"

namespace py = pybind11;
using namespace pdtk;

namespace {

Table table_from_rows(const std::vector<std::vector<double>>& rows) {
  const std::size_t r = rows.size();
  const std::size_t c = r ? rows[0].size() : 0;
  Table t(r, c);
  for (std::size_t i = 0; i < r; ++i) {
    if (rows[i].size() != c) fail(ErrorCode::InvalidArgument, "ragged rows");
    for (std::size_t j = 0; j < c; ++j) t.at(i, j) = rows[i][j];
  }
  return t;
}

std::vector<std::vector<double>> rows_of(const Table& t) {
  std::vector<std::vector<double>> out(t.rows(), std::vector<double>(t.cols()));
  for (std::size_t i = 0; i < t.rows(); ++i)
    for (std::size_t j = 0; j < t.cols(); ++j) out[i][j] = t.at(i, j);
  return out;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Exact finite-alphabet toolkit for the perception-distortion tradeoff";

  py::register_exception<Error>(m, "ToolkitError");

  py::class_<Alphabet>(m, "Alphabet")
      .def_static("with_labels", &Alphabet::with_labels, py::arg("labels"))
      .def_static("with_scalar_values", &Alphabet::with_scalar_values, py::arg("values"))
      .def_static("with_labels_and_scalar_values", &Alphabet::with_labels_and_scalar_values,
                  py::arg("labels"), py::arg("values"))
      .def_readonly("labels", &Alphabet::labels)
      .def_property_readonly("values",
                             [](const Alphabet& a) { return a.values; })
      .def("__len__", &Alphabet::size);

  py::class_<DiscreteDistribution>(m, "DiscreteDistribution")
      .def_static("checked", &DiscreteDistribution::checked, py::arg("alphabet"),
                  py::arg("weights"))
      .def_readonly("alphabet", &DiscreteDistribution::alphabet)
      .def_readonly("weights", &DiscreteDistribution::weights);

  py::class_<ConditionalKernel>(m, "ConditionalKernel")
      .def_static(
          "checked",
          [](Alphabet input, Alphabet output, const std::vector<std::vector<double>>& rows) {
            return ConditionalKernel::checked(std::move(input), std::move(output),
                                              table_from_rows(rows));
          },
          py::arg("input"), py::arg("output"), py::arg("rows"))
      .def_readonly("input", &ConditionalKernel::input)
      .def_readonly("output", &ConditionalKernel::output)
      .def_property_readonly("rows",
                             [](const ConditionalKernel& k) { return rows_of(k.rows); });

  py::class_<DegradationModel>(m, "DegradationModel")
      .def_static("checked", &DegradationModel::checked, py::arg("prior"), py::arg("channel"))
      .def_readonly("prior", &DegradationModel::prior)
      .def_readonly("channel", &DegradationModel::channel)
      .def_property_readonly("y_marginal",
                             [](const DegradationModel& m_) { return m_.y_marginal(); })
      .def_property_readonly("retained_y",
                             [](const DegradationModel& m_) { return m_.retained_y(); });

  py::class_<Posterior>(m, "Posterior")
      .def_readonly("kernel", &Posterior::kernel)
      .def_readonly("dropped_y", &Posterior::dropped_y);
  m.def("posterior", &posterior, py::arg("model"));

  py::class_<DistortionMeasure>(m, "DistortionMeasure")
      .def_readonly("x", &DistortionMeasure::x)
      .def_readonly("xhat", &DistortionMeasure::xhat)
      .def_readonly("id", &DistortionMeasure::id)
      .def_property_readonly("cost",
                             [](const DistortionMeasure& d) { return rows_of(d.cost); });
  m.def("square_error_measure", &square_error_measure, py::arg("x"), py::arg("xhat"));
  m.def("zero_one_measure", &zero_one_measure, py::arg("x"), py::arg("xhat"));
  m.def("feature_map_distortion", &feature_map_distortion, py::arg("x"), py::arg("xhat"),
        py::arg("features_x"), py::arg("features_xhat"));

  py::class_<GridSpec>(m, "GridSpec")
      .def(py::init([](double lo, double hi, std::size_t n_bins) {
             return GridSpec{lo, hi, n_bins};
           }),
           py::arg("lo"), py::arg("hi"), py::arg("n_bins"))
      .def_readonly("lo", &GridSpec::lo)
      .def_readonly("hi", &GridSpec::hi)
      .def_readonly("n_bins", &GridSpec::n_bins);
  m.def("gaussian_noise_channel", &gaussian_noise_channel, py::arg("x_values"), py::arg("sigma"),
        py::arg("grid"));
  m.def("make_gaussian_model", &make_gaussian_model, py::arg("prior_weights"),
        py::arg("x_values"), py::arg("sigma"), py::arg("grid"));
  m.def("load_model", &load_model, py::arg("path"));

  m.def("output_distribution", &output_distribution, py::arg("model"), py::arg("estimator"));
  m.def("mean_distortion", &mean_distortion, py::arg("model"), py::arg("estimator"),
        py::arg("distortion"));

  py::enum_<DivergenceKind>(m, "DivergenceKind")
      .value("total_variation", DivergenceKind::TotalVariation)
      .value("kullback_leibler", DivergenceKind::KullbackLeibler)
      .value("jensen_shannon", DivergenceKind::JensenShannon)
      .value("hellinger", DivergenceKind::Hellinger)
      .value("chi_square", DivergenceKind::ChiSquare)
      .value("wasserstein1", DivergenceKind::Wasserstein1);
  m.def("divergence", &divergence, py::arg("kind"), py::arg("p"), py::arg("q"));
  m.def("wasserstein1",
        py::overload_cast<const DiscreteDistribution&, const DiscreteDistribution&>(
            &wasserstein1),
        py::arg("p"), py::arg("q"));
  m.def("success_probability", &success_probability, py::arg("p"), py::arg("q"));
  m.def("entropy", &entropy, py::arg("p"));

  py::class_<MeanQualityIdentity>(m, "MeanQualityIdentity")
      .def_readonly("lhs", &MeanQualityIdentity::lhs)
      .def_readonly("d_kl", &MeanQualityIdentity::d_kl)
      .def_readonly("entropy", &MeanQualityIdentity::entropy)
      .def_readonly("derived_rhs", &MeanQualityIdentity::derived_rhs)
      .def_readonly("printed_rhs", &MeanQualityIdentity::printed_rhs)
      .def_readonly("residual", &MeanQualityIdentity::residual);
  m.def("mean_quality_identity", &mean_quality_identity, py::arg("p_hat"), py::arg("p"));

  m.def("mmse_estimator", &mmse_estimator, py::arg("model"));
  py::class_<MapResult>(m, "MapResult")
      .def_readonly("estimator", &MapResult::estimator)
      .def_readonly("tie_rows", &MapResult::tie_rows);
  m.def("map_estimator", &map_estimator, py::arg("model"));
  m.def("posterior_sampling_estimator", &posterior_sampling_estimator, py::arg("model"));
  m.def("random_draw_estimator", &random_draw_estimator, py::arg("model"));
  m.def("trinary_mmse_density", &trinary_mmse_density, py::arg("p1"), py::arg("p0"),
        py::arg("xhat_points"));
  m.def("marginal_divergence", &marginal_divergence, py::arg("model"), py::arg("estimator"),
        py::arg("kind"), py::arg("n_bins") = 512);

  py::class_<DMinResult>(m, "DMinResult")
      .def_readonly("value", &DMinResult::value)
      .def_readonly("estimator", &DMinResult::estimator)
      .def_readonly("tie_rows", &DMinResult::tie_rows);
  m.def("d_min", &d_min, py::arg("model"), py::arg("distortion"));
  py::class_<DMaxResult>(m, "DMaxResult")
      .def_readonly("value", &DMaxResult::value)
      .def_readonly("estimator", &DMaxResult::estimator);
  m.def("d_max", &d_max, py::arg("model"), py::arg("distortion"));

  py::class_<FactorTwoReport>(m, "FactorTwoReport")
      .def_readonly("mmse_value", &FactorTwoReport::mmse_value)
      .def_readonly("sampling_mse", &FactorTwoReport::sampling_mse)
      .def_readonly("d_max_value", &FactorTwoReport::d_max_value)
      .def_readonly("ratio", &FactorTwoReport::ratio)
      .def_readonly("ratio_is_two", &FactorTwoReport::ratio_is_two)
      .def_readonly("d_max_within_bound", &FactorTwoReport::d_max_within_bound);
  m.def("factor_two_report", &factor_two_report, py::arg("model"));

  py::class_<StabilityProbeReport>(m, "StabilityProbeReport")
      .def_readonly("baseline_preserving", &StabilityProbeReport::baseline_preserving)
      .def_readonly("baseline_tv", &StabilityProbeReport::baseline_tv)
      .def_property_readonly("breaking", [](const StabilityProbeReport& r) {
        return r.breaking ? py::cast(*r.breaking) : py::object(py::none());
      });
  py::class_<Perturbation>(m, "Perturbation")
      .def_readonly("alpha", &Perturbation::alpha)
      .def_readonly("y_index", &Perturbation::y_index)
      .def_readonly("y_label", &Perturbation::y_label)
      .def_readonly("tv", &Perturbation::tv);
  m.def("stability_probe", &stability_probe, py::arg("model"), py::arg("distortion"),
        py::arg("alphas") = std::vector<double>{0.9, 0.5, 0.1});

  py::class_<SolveOptions>(m, "SolveOptions")
      .def(py::init<>())
      .def_readwrite("max_iters", &SolveOptions::max_iters)
      .def_readwrite("tol", &SolveOptions::tol);

  py::class_<TradeoffPoint>(m, "TradeoffPoint")
      .def_readonly("lam", &TradeoffPoint::lambda)
      .def_readonly("distortion", &TradeoffPoint::distortion)
      .def_readonly("perception", &TradeoffPoint::perception)
      .def_readonly("gap", &TradeoffPoint::gap)
      .def_readonly("converged", &TradeoffPoint::converged)
      .def_readonly("estimator", &TradeoffPoint::estimator);
  py::class_<TradeoffCurve>(m, "TradeoffCurve")
      .def_readonly("points", &TradeoffCurve::points)
      .def_readonly("envelope", &TradeoffCurve::envelope)
      .def_readonly("distortion_id", &TradeoffCurve::distortion_id)
      .def("csv", [](const TradeoffCurve& c) {
        std::ostringstream out;
        write_curve_csv(c, out);
        return out.str();
      });

  m.def(
      "lagrangian_solve",
      [](const DegradationModel& model, const DistortionMeasure& dist, DivergenceKind kind,
         double lam, const SolveOptions& options) {
        return lagrangian_solve(model, dist, kind, lam, options);
      },
      py::arg("model"), py::arg("distortion"), py::arg("kind"), py::arg("lam"),
      py::arg("options") = SolveOptions{});
  m.def(
      "trace_curve",
      [](const DegradationModel& model, const DistortionMeasure& dist, DivergenceKind kind,
         const std::vector<double>& lambdas, const SolveOptions& options) {
        return trace_curve(model, dist, kind, lambdas, options);
      },
      py::arg("model"), py::arg("distortion"), py::arg("kind"), py::arg("lambdas"),
      py::arg("options") = SolveOptions{});
  m.def(
      "constrained_solve",
      [](const DegradationModel& model, const DistortionMeasure& dist, DivergenceKind kind,
         double budget, const SolveOptions& options) {
        return constrained_solve(model, dist, kind, budget, options);
      },
      py::arg("model"), py::arg("distortion"), py::arg("kind"), py::arg("budget"),
      py::arg("options") = SolveOptions{});
  m.def("brute_force_oracle", &brute_force_oracle, py::arg("model"), py::arg("distortion"),
        py::arg("kind"), py::arg("budget"), py::arg("resolution"));
  m.def("mixture_estimator", &mixture_estimator, py::arg("a"), py::arg("b"), py::arg("lam"));
  py::class_<MixtureReport>(m, "MixtureReport")
      .def_readonly("distortion_mix", &MixtureReport::distortion_mix)
      .def_readonly("distortion_combo", &MixtureReport::distortion_combo)
      .def_readonly("divergence_mix", &MixtureReport::divergence_mix)
      .def_readonly("divergence_combo", &MixtureReport::divergence_combo)
      .def_readonly("distortion_linear", &MixtureReport::distortion_linear)
      .def_readonly("divergence_convex", &MixtureReport::divergence_convex);
  m.def("mixture_checks", &mixture_checks, py::arg("model"), py::arg("distortion"),
        py::arg("kind"), py::arg("a"), py::arg("b"), py::arg("lam"));
  m.def("lower_convex_envelope", &lower_convex_envelope, py::arg("points"));

  auto g = m.def_submodule("gaussian", "Scalar Gaussian closed forms");
  g.def("mse_linear", &gaussian::mse_linear, py::arg("a"), py::arg("sigma"));
  g.def("dkl_linear", &gaussian::dkl_linear, py::arg("a"), py::arg("sigma"));
  g.def("d_min_value", &gaussian::d_min_value, py::arg("sigma"));
  g.def("zero_distortion_threshold", &gaussian::zero_distortion_threshold, py::arg("sigma"));
  g.def("feasible_interval", &gaussian::feasible_interval, py::arg("budget"), py::arg("sigma"));
  g.def("closed_form_perception", &gaussian::closed_form_perception, py::arg("budget"),
        py::arg("sigma"));

  py::class_<AlgorithmRecord>(m, "AlgorithmRecord")
      .def(py::init([](std::string name, double distortion, double perception) {
             return AlgorithmRecord{std::move(name), distortion, perception, {}};
           }),
           py::arg("name"), py::arg("distortion"), py::arg("perception"))
      .def_readonly("name", &AlgorithmRecord::name)
      .def_readonly("distortion", &AlgorithmRecord::distortion)
      .def_readonly("perception", &AlgorithmRecord::perception);
  m.def("dominates", &dominates, py::arg("a"), py::arg("b"), py::arg("weak") = false);
  m.def("admissible_set", &admissible_set, py::arg("records"));
  m.def("pareto_front", &pareto_front, py::arg("records"));
  m.def("scatter_svg", [](const std::vector<AlgorithmRecord>& records) {
    std::ostringstream out;
    emit_scatter(records, out);
    return out.str();
  });
  m.def("table_csv", [](const std::vector<AlgorithmRecord>& records) {
    std::ostringstream out;
    emit_table(records, out);
    return out.str();
  });
}
