#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "pdtk/divergence.hpp"
#include "pdtk/model.hpp"

namespace pdtk {

// Deterministic estimator mapping each retained observation to its posterior
// mean. Output symbols are the distinct means, merged when within 1e-12 in
// every coordinate.
Estimator mmse_estimator(const DegradationModel& model);

// Deterministic posterior-mode estimator onto the source alphabet. Exact
// posterior ties are broken toward the lowest source index and reported.
struct MapResult {
  Estimator estimator;
  std::vector<std::size_t> tie_rows;  // retained-observation rows with ties
};

MapResult map_estimator(const DegradationModel& model);

// Draws the reconstruction from the posterior itself; its output distribution
// equals the prior identically.
Estimator posterior_sampling_estimator(const DegradationModel& model);

// Ignores the observation and draws from the prior.
Estimator random_draw_estimator(const DegradationModel& model);

// Density of the posterior-mean reconstruction for the three-point source at
// {-1, 0, +1} with weights {p1, p0, p1} under unit-variance additive Gaussian
// noise, evaluated at points strictly inside (-1, 1) by the change-of-variables
// formula. The monotone forward map is inverted by bisection (tolerance 1e-10)
// and the inverse's derivative comes from a central difference (h = 1e-5).
std::vector<double> trinary_mmse_density(double p1, double p0,
                                         const std::vector<double>& xhat_points);

// Per-observation sets of reconstructions whose conditional cost is within tau
// of the row minimum.
struct OptimalSupport {
  Alphabet y;     // retained observation symbols
  Alphabet xhat;  // reconstruction symbols
  std::vector<std::vector<std::size_t>> sets;
  double tau;
};

OptimalSupport optimal_support(const DegradationModel& model, const DistortionMeasure& dist,
                               double tau = 1e-9);

// Feasibility of a distortion-optimal estimator whose output distribution
// equals the prior: a transportation problem restricted to the per-observation
// optimal supports. infeasibility_mass is the least probability mass any
// coupling must push outside those supports; zero (<= 1e-8) means a witness
// exists.
struct PreservationReport {
  bool preserving_possible;
  std::optional<Estimator> witness;
  double infeasibility_mass;
  std::vector<std::pair<std::size_t, std::size_t>> violating_cells;  // (retained row, xhat)
  OptimalSupport support;
};

PreservationReport preservation_check(const DegradationModel& model,
                                      const DistortionMeasure& dist);

// Tilts the observation marginal toward a single observation,
// alpha * p_Y + (1 - alpha) * point mass, holding the posterior fixed, and
// looks for a perturbation under which the distortion-optimal estimator's
// output distribution no longer matches the implied prior.
struct Perturbation {
  double alpha;
  std::size_t y_index;  // index into the retained observations
  std::string y_label;
  double tv;
};

struct StabilityProbeReport {
  bool baseline_preserving;  // output matches the prior before perturbing
  double baseline_tv;
  std::optional<Perturbation> breaking;
};

StabilityProbeReport stability_probe(const DegradationModel& model, const DistortionMeasure& dist,
                                     const std::vector<double>& alphas = {0.9, 0.5, 0.1});

// When some optimal support holds several reconstructions, splits it into two
// disjoint non-empty parts and returns two estimators, both distortion-optimal,
// with different output distributions.
std::pair<Estimator, Estimator> divergent_optima(const DegradationModel& model,
                                                 const DistortionMeasure& dist,
                                                 double tau = 1e-12);

// Divergence between an estimator's output distribution and the prior. Used
// directly when the alphabets coincide; Wasserstein-1 runs on raw values;
// other kinds fall back to a shared uniform value grid.
double marginal_divergence(const DegradationModel& model, const Estimator& est,
                           DivergenceKind kind, std::size_t n_bins = 512);

}  // namespace pdtk
