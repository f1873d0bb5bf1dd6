#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "pdtk/bounds.hpp"
#include "pdtk/divergence.hpp"
#include "pdtk/estimators.hpp"
#include "pdtk/gaussian.hpp"
#include "pdtk/model_io.hpp"
#include "pdtk/plane.hpp"
#include "pdtk/tradeoff.hpp"

namespace {

using nlohmann::json;
using namespace pdtk;

constexpr const char* kVersion = "0.1.0";

int exit_code_for(ErrorCode code) {
  switch (code) {
    case ErrorCode::IoFailure:
      return 4;
    case ErrorCode::InfeasibleDistortion:
    case ErrorCode::NotApplicable:
    case ErrorCode::InvertibleDegradation:
    case ErrorCode::NonMonotoneRegion:
      return 3;
    default:
      return 2;
  }
}

std::vector<double> parse_number_list(const std::string& text, const std::string& what) {
  std::vector<double> out;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const std::size_t comma = std::min(text.find(',', pos), text.size());
    const std::string piece = text.substr(pos, comma - pos);
    if (piece.empty()) fail(ErrorCode::InvalidArgument, what + ": empty entry");
    const char* begin = piece.c_str();
    char* end = nullptr;
    const double v = std::strtod(begin, &end);
    if (end == begin || end != begin + piece.size())
      fail(ErrorCode::InvalidArgument, what + ": not a number: " + piece);
    out.push_back(v);
    if (comma == text.size()) break;
    pos = comma + 1;
  }
  if (out.empty()) fail(ErrorCode::InvalidArgument, what + " is empty");
  return out;
}

std::vector<double> default_lambda_schedule() {
  std::vector<double> out;
  const double lo = std::log(1e-3);
  const double hi = std::log(1e3);
  for (int i = 0; i < 24; ++i) {
    const double t = static_cast<double>(i) / 23.0;
    out.push_back(std::exp(lo * (1.0 - t) + hi * t));
  }
  return out;
}

DivergenceKind parse_kind(const std::string& name) {
  const auto kind = kind_from_name(name);
  if (!kind) fail(ErrorCode::InvalidArgument, "unknown divergence: " + name);
  return *kind;
}

DistortionMeasure parse_distortion(const DegradationModel& model, const std::string& name) {
  if (name == "square_error") return square_error_measure(model.x_alphabet(), model.x_alphabet());
  if (name == "zero_one") return zero_one_measure(model.x_alphabet(), model.x_alphabet());
  fail(ErrorCode::InvalidArgument, "unknown distortion: " + name);
}

void require_nonempty_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary | std::ios::ate);
  if (!in) fail(ErrorCode::IoFailure, "cannot open input file: " + path);
  if (in.tellg() == 0) fail(ErrorCode::InvalidArgument, "input file is empty: " + path);
}

void log_run_config(const json& config) { std::cerr << config.dump() << "\n"; }

void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) fail(ErrorCode::IoFailure, "cannot open output file: " + path);
  out << text;
  out.flush();
  if (!out) fail(ErrorCode::IoFailure, "failed writing output file: " + path);
}

struct CurveArgs {
  std::string model_path;
  std::string divergence = "kl";
  std::string distortion = "square_error";
  std::string lambdas;
  std::size_t max_iters = 0;
  double tol = 1e-6;
  std::string out;
};

int run_curve(const CurveArgs& args) {
  const std::vector<double> lambdas =
      args.lambdas.empty() ? default_lambda_schedule()
                           : parse_number_list(args.lambdas, "--lambdas");
  json config{{"subcommand", "curve"},
              {"model", args.model_path},
              {"divergence", args.divergence},
              {"distortion", args.distortion},
              {"lambdas", lambdas},
              {"max_iters", args.max_iters},
              {"tol", args.tol},
              {"out", args.out}};
  log_run_config(config);

  const DegradationModel model = load_model(args.model_path);
  const DistortionMeasure dist = parse_distortion(model, args.distortion);
  const DivergenceKind kind = parse_kind(args.divergence);
  SolveOptions options;
  options.max_iters = args.max_iters;
  options.tol = args.tol;
  const TradeoffCurve curve = trace_curve(model, dist, kind, lambdas, options);

  std::ostringstream csv;
  write_curve_csv(curve, csv);
  write_text_file(args.out, csv.str());

  const DMinResult dmin = d_min(model, dist);
  const DMaxResult dmax = d_max(model, dist);
  std::cout << "d_min=" << fmt17(dmin.value) << " d_max=" << fmt17(dmax.value)
            << " points=" << curve.points.size() << "\n";

  std::size_t unconverged = 0;
  for (const auto& p : curve.points)
    if (!p.converged) ++unconverged;
  if (unconverged) {
    std::cerr << "warning: " << unconverged << " of " << curve.points.size()
              << " points did not meet the gap tolerance\n";
    return 3;
  }
  return 0;
}

struct GaussianArgs {
  double sigma = 1.0;
  std::string d_grid;
  std::size_t points = 200;
  std::string out;
};

int run_gaussian(const GaussianArgs& args) {
  std::vector<double> budgets;
  if (args.d_grid.empty()) {
    budgets = gaussian::default_budget_grid(args.sigma, args.points);
  } else {
    std::vector<std::string> parts;
    std::size_t pos = 0;
    while (true) {
      const std::size_t colon = args.d_grid.find(':', pos);
      parts.push_back(args.d_grid.substr(pos, colon - pos));
      if (colon == std::string::npos) break;
      pos = colon + 1;
    }
    if (parts.size() != 3)
      fail(ErrorCode::InvalidArgument, "--d-grid must look like lo:hi:count");
    const double lo = parse_number_list(parts[0], "--d-grid lo")[0];
    const double hi = parse_number_list(parts[1], "--d-grid hi")[0];
    const long n = std::strtol(parts[2].c_str(), nullptr, 10);
    if (n < 2 || hi < lo) fail(ErrorCode::InvalidArgument, "--d-grid must be lo<=hi with count>=2");
    for (long i = 0; i < n; ++i) {
      const double t = static_cast<double>(i) / static_cast<double>(n - 1);
      budgets.push_back(lo * (1.0 - t) + hi * t);
    }
  }
  json config{{"subcommand", "gaussian"},
              {"sigma", args.sigma},
              {"d_grid", budgets},
              {"out", args.out}};
  log_run_config(config);

  const auto curve = gaussian::sample_curve(args.sigma, budgets);
  std::ostringstream csv;
  csv << "lambda,distortion,perception,gap,converged\n";
  for (const auto& p : curve)
    csv << "0," << fmt17(p.distortion) << ',' << fmt17(p.perception) << ",0,1\n";
  write_text_file(args.out, csv.str());

  std::cout << "d_min=" << fmt17(gaussian::d_min_value(args.sigma))
            << " d_zero=" << fmt17(gaussian::zero_distortion_threshold(args.sigma))
            << " points=" << curve.size() << "\n";
  return 0;
}

struct BoundsArgs {
  std::string model_path;
  std::string distortion = "square_error";
};

int run_bounds(const BoundsArgs& args) {
  json config{{"subcommand", "bounds"},
              {"model", args.model_path},
              {"distortion", args.distortion}};
  log_run_config(config);

  const DegradationModel model = load_model(args.model_path);
  const DistortionMeasure dist = parse_distortion(model, args.distortion);
  const DMinResult dmin = d_min(model, dist);
  const DMaxResult dmax = d_max(model, dist);
  std::cout << "d_min=" << fmt17(dmin.value) << "\n";
  std::cout << "d_max=" << fmt17(dmax.value) << "\n";
  return 0;
}

struct EstimatorsArgs {
  std::string model_path;
  std::string which;
  bool report = false;
};

int run_estimators(const EstimatorsArgs& args) {
  json config{{"subcommand", "estimators"},
              {"model", args.model_path},
              {"which", args.which},
              {"report", args.report}};
  log_run_config(config);

  const DegradationModel model = load_model(args.model_path);
  Estimator est;
  if (args.which == "mmse") {
    est = mmse_estimator(model);
  } else if (args.which == "map") {
    est = map_estimator(model).estimator;
  } else if (args.which == "ps") {
    est = posterior_sampling_estimator(model);
  } else if (args.which == "rand") {
    est = random_draw_estimator(model);
  } else {
    fail(ErrorCode::InvalidArgument, "unknown estimator: " + args.which);
  }
  std::cout << "estimator=" << args.which << " inputs=" << est.input.size()
            << " outputs=" << est.output.size() << "\n";
  if (args.report) {
    if (model.x_alphabet().has_values() && est.output.has_values()) {
      const DistortionMeasure se = square_error_measure(model.x_alphabet(), est.output);
      std::cout << "mean_square_error=" << fmt17(mean_distortion(model, est, se)) << "\n";
    }
    std::cout << "tv_to_prior="
              << fmt17(marginal_divergence(model, est, DivergenceKind::TotalVariation)) << "\n";
  }
  return 0;
}

struct PlaneArgs {
  std::string records_path;
  std::string out_svg;
  std::string out_csv;
};

int run_plane(const PlaneArgs& args) {
  json config{{"subcommand", "plane"},
              {"records", args.records_path},
              {"out_svg", args.out_svg},
              {"out_csv", args.out_csv}};
  log_run_config(config);

  require_nonempty_file(args.records_path);
  std::ifstream in(args.records_path, std::ios::binary);
  if (!in) fail(ErrorCode::IoFailure, "cannot open input file: " + args.records_path);
  const std::vector<AlgorithmRecord> records = ingest_csv(in);
  const std::vector<AlgorithmRecord> admissible = admissible_set(records);
  const std::vector<AlgorithmRecord> front = pareto_front(records);

  if (!args.out_svg.empty()) {
    std::ostringstream svg;
    emit_scatter(records, svg);
    write_text_file(args.out_svg, svg.str());
  }
  if (!args.out_csv.empty()) {
    std::ostringstream csv;
    emit_table(records, csv);
    write_text_file(args.out_csv, csv.str());
  }
  std::cout << "records=" << records.size() << " admissible=" << admissible.size()
            << " front=" << front.size() << "\n";
  return 0;
}

struct ProbeArgs {
  std::string model_path;
  std::string distortion = "square_error";
  std::string alphas = "0.9,0.5,0.1";
};

int run_probe(const ProbeArgs& args) {
  const std::vector<double> alphas = parse_number_list(args.alphas, "--alphas");
  json config{{"subcommand", "probe"},
              {"model", args.model_path},
              {"distortion", args.distortion},
              {"alphas", alphas}};
  log_run_config(config);

  const DegradationModel model = load_model(args.model_path);
  const DistortionMeasure dist = parse_distortion(model, args.distortion);
  const StabilityProbeReport report = stability_probe(model, dist, alphas);
  std::cout << "baseline_preserving=" << (report.baseline_preserving ? 1 : 0) << "\n";
  std::cout << "baseline_tv=" << fmt17(report.baseline_tv) << "\n";
  if (report.breaking) {
    std::cout << "breaking_alpha=" << fmt17(report.breaking->alpha)
              << " breaking_y=" << report.breaking->y_label
              << " breaking_tv=" << fmt17(report.breaking->tv) << "\n";
  } else {
    std::cout << "breaking=none\n";
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Exact finite-alphabet toolkit for the perception-distortion tradeoff"};
  app.set_version_flag("--version", kVersion);
  app.require_subcommand(1);

  CurveArgs curve_args;
  CLI::App* curve = app.add_subcommand("curve", "Trace the tradeoff curve of a model");
  curve->add_option("model", curve_args.model_path, "Model JSON file")->required();
  curve->add_option("--divergence", curve_args.divergence, "tv|kl|js|hellinger|chi2|w1");
  curve->add_option("--distortion", curve_args.distortion, "square_error|zero_one");
  curve->add_option("--lambdas", curve_args.lambdas, "Comma-separated ascending multipliers");
  curve->add_option("--max-iters", curve_args.max_iters, "Solver iteration cap (0 = default)");
  curve->add_option("--tol", curve_args.tol, "Gap tolerance");
  curve->add_option("--out", curve_args.out, "Output CSV path")->required();

  GaussianArgs gaussian_args;
  CLI::App* gauss = app.add_subcommand("gaussian", "Closed-form scalar Gaussian curve");
  gauss->add_option("--sigma", gaussian_args.sigma, "Noise standard deviation");
  gauss->add_option("--d-grid", gaussian_args.d_grid, "Budget grid lo:hi:count");
  gauss->add_option("--points", gaussian_args.points, "Default grid size");
  gauss->add_option("--out", gaussian_args.out, "Output CSV path")->required();

  BoundsArgs bounds_args;
  CLI::App* bounds = app.add_subcommand("bounds", "Distortion extremes of a model");
  bounds->add_option("model", bounds_args.model_path, "Model JSON file")->required();
  bounds->add_option("--distortion", bounds_args.distortion, "square_error|zero_one");

  EstimatorsArgs est_args;
  CLI::App* est = app.add_subcommand("estimators", "Build a canonical estimator");
  est->add_option("model", est_args.model_path, "Model JSON file")->required();
  est->add_option("--which", est_args.which, "mmse|map|ps|rand")->required();
  est->add_flag("--report", est_args.report, "Print distortion and divergence summaries");

  PlaneArgs plane_args;
  CLI::App* plane = app.add_subcommand("plane", "Analyze records on the plane");
  plane->add_option("records", plane_args.records_path, "Records CSV file")->required();
  plane->add_option("--out-svg", plane_args.out_svg, "Scatter SVG path");
  plane->add_option("--out-csv", plane_args.out_csv, "Annotated CSV path");

  ProbeArgs probe_args;
  CLI::App* probe = app.add_subcommand("probe", "Stability probe of the distortion optimum");
  probe->add_option("model", probe_args.model_path, "Model JSON file")->required();
  probe->add_option("--distortion", probe_args.distortion, "square_error|zero_one");
  probe->add_option("--alphas", probe_args.alphas, "Comma-separated tilt weights in (0, 1]");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (curve->parsed()) return run_curve(curve_args);
    if (gauss->parsed()) return run_gaussian(gaussian_args);
    if (bounds->parsed()) return run_bounds(bounds_args);
    if (est->parsed()) return run_estimators(est_args);
    if (plane->parsed()) return run_plane(plane_args);
    if (probe->parsed()) return run_probe(probe_args);
  } catch (const pdtk::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return exit_code_for(e.code());
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 2;
}
