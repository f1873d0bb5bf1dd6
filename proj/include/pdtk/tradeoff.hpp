#pragma once

#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

#include "pdtk/divergence.hpp"
#include "pdtk/model.hpp"

namespace pdtk {

struct SolveOptions {
  // 0 means the per-method default: 5000 conditional-gradient iterations for
  // smooth kinds, 20000 projected-subgradient iterations otherwise.
  std::size_t max_iters = 0;
  double tol = 1e-6;
  const Table* warm_start = nullptr;  // retained-observation rows
};

struct TradeoffPoint {
  double lambda;
  double distortion;
  double perception;  // always the raw divergence, never the smoothed surrogate
  double gap;
  bool converged;
  Estimator estimator;
};

struct TradeoffCurve {
  DivergenceKind kind;
  std::string distortion_id;
  std::vector<TradeoffPoint> points;                 // sorted by distortion
  std::vector<std::pair<double, double>> envelope;   // lower convex envelope vertices
};

// Minimizes mean distortion + lambda * divergence(prior, output distribution)
// over estimators onto the source alphabet. Smooth kinds run conditional
// gradient with per-row point-mass steps and step size 2/(t+2); the rest run
// projected subgradient with c/sqrt(t) steps and iterate averaging. A point
// that fails to reach the gap tolerance is still returned, flagged.
TradeoffPoint lagrangian_solve(const DegradationModel& model, const DistortionMeasure& dist,
                               DivergenceKind kind, double lambda,
                               const SolveOptions& options = {});

// Solves along an ascending lambda schedule, warm-starting each point from the
// previous one, and attaches the lower convex envelope of the solved points.
TradeoffCurve trace_curve(const DegradationModel& model, const DistortionMeasure& dist,
                          DivergenceKind kind, const std::vector<double>& lambdas,
                          const SolveOptions& options = {});

// Least divergence subject to mean distortion <= D, by bisection on lambda.
TradeoffPoint constrained_solve(const DegradationModel& model, const DistortionMeasure& dist,
                                DivergenceKind kind, double distortion_budget,
                                const SolveOptions& options = {});

// Exhaustive reference: enumerates every kernel whose rows sit on the simplex
// grid with step 1/(resolution - 1) and returns the least divergence among the
// ones meeting the distortion budget (infinity when none does).
double brute_force_oracle(const DegradationModel& model, const DistortionMeasure& dist,
                          DivergenceKind kind, double distortion_budget, std::size_t resolution);

// Same enumeration, minimizing distortion + lambda * divergence.
double brute_force_lagrangian_oracle(const DegradationModel& model, const DistortionMeasure& dist,
                                     DivergenceKind kind, double lambda, std::size_t resolution);

// Row-wise blend lambda * a + (1 - lambda) * b; the endpoints are returned
// as-is.
Estimator mixture_estimator(const Estimator& a, const Estimator& b, double lambda);

// Distortion of a blend is exactly the blend of distortions; divergence of a
// blend is at most the blend of divergences for every listed kind.
struct MixtureReport {
  double distortion_mix;
  double distortion_combo;
  double divergence_mix;
  double divergence_combo;
  bool distortion_linear;   // within 1e-10
  bool divergence_convex;   // within 1e-10
};

MixtureReport mixture_checks(const DegradationModel& model, const DistortionMeasure& dist,
                             DivergenceKind kind, const Estimator& a, const Estimator& b,
                             double lambda);

// Vertices of the greatest convex minorant of the given points that is also
// non-increasing; points with non-finite ordinates are ignored.
std::vector<std::pair<double, double>> lower_convex_envelope(
    std::vector<std::pair<double, double>> points);

// Header "lambda,distortion,perception,gap,converged", one row per point,
// 17 significant digits.
void write_curve_csv(const TradeoffCurve& curve, std::ostream& out);

std::string fmt17(double v);

}  // namespace pdtk
