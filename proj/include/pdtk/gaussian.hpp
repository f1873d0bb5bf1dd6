#pragma once

#include <cstddef>
#include <utility>
#include <vector>

namespace pdtk::gaussian {

// Closed forms for a unit-variance source observed through additive Gaussian
// noise of width sigma, with reconstructions restricted to non-negative linear
// gains a applied to the observation.

// Mean square error of the gain-a estimator: 1 - 2a + a^2 (1 + sigma^2).
double mse_linear(double a, double sigma);

// KL divergence from the source law to the gain-a output law:
// log(|a| sqrt(1 + sigma^2)) + 1 / (2 a^2 (1 + sigma^2)) - 1/2.
// Symmetric in a; a zero gain collapses the output to a point mass and is
// rejected.
double dkl_linear(double a, double sigma);

// Least achievable mean square error, sigma^2 / (1 + sigma^2).
double d_min_value(double sigma);

// Least budget whose optimal divergence is exactly zero: 2 - 2 / sqrt(1 + sigma^2).
double zero_distortion_threshold(double sigma);

// The two gains meeting mse == budget, smaller first:
// (1 -+ sqrt(budget (1 + sigma^2) - sigma^2)) / (1 + sigma^2).
std::pair<double, double> feasible_interval(double budget, double sigma);

// Least divergence subject to mse <= budget. Exactly zero at and above the
// threshold.
double closed_form_perception(double budget, double sigma);

struct CurvePoint {
  double distortion;
  double perception;
};

std::vector<CurvePoint> sample_curve(double sigma, const std::vector<double>& budgets);

// n evenly spaced budgets from d_min to the zero threshold plus a quarter of
// that span again.
std::vector<double> default_budget_grid(double sigma, std::size_t n = 200);

}  // namespace pdtk::gaussian
