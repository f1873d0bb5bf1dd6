#include "pdtk/gaussian.hpp"

#include <algorithm>
#include <cmath>

#include "pdtk/errors.hpp"

namespace pdtk::gaussian {

namespace {

void check_sigma(double sigma) {
  if (!(sigma > 0.0)) fail(ErrorCode::NonPositiveSigma, "sigma must be positive");
}

}  // namespace

double mse_linear(double a, double sigma) {
  check_sigma(sigma);
  return 1.0 - 2.0 * a + a * a * (1.0 + sigma * sigma);
}

double dkl_linear(double a, double sigma) {
  check_sigma(sigma);
  if (a == 0.0) fail(ErrorCode::ZeroA, "zero gain collapses the output law to a point mass");
  const double v = 1.0 + sigma * sigma;
  return std::log(std::abs(a) * std::sqrt(v)) + 1.0 / (2.0 * a * a * v) - 0.5;
}

double d_min_value(double sigma) {
  check_sigma(sigma);
  return sigma * sigma / (1.0 + sigma * sigma);
}

double zero_distortion_threshold(double sigma) {
  check_sigma(sigma);
  // Written as 2 - sqrt(4 / (1 + sigma^2)) so that at sigma == 1 the value is
  // bit-identical to 2 - sqrt(2).
  return 2.0 - std::sqrt(4.0 / (1.0 + sigma * sigma));
}

std::pair<double, double> feasible_interval(double budget, double sigma) {
  const double dmin = d_min_value(sigma);
  if (budget < dmin - 1e-12)
    fail(ErrorCode::InfeasibleDistortion, "budget below the least achievable mse");
  const double v = 1.0 + sigma * sigma;
  const double root = std::sqrt(std::max(0.0, budget * v - sigma * sigma));
  return {(1.0 - root) / v, (1.0 + root) / v};
}

double closed_form_perception(double budget, double sigma) {
  if (budget >= zero_distortion_threshold(sigma)) return 0.0;
  const auto [lo, hi] = feasible_interval(budget, sigma);
  (void)lo;
  return std::max(0.0, dkl_linear(hi, sigma));
}

std::vector<CurvePoint> sample_curve(double sigma, const std::vector<double>& budgets) {
  std::vector<CurvePoint> out;
  out.reserve(budgets.size());
  for (double d : budgets) out.push_back({d, closed_form_perception(d, sigma)});
  return out;
}

std::vector<double> default_budget_grid(double sigma, std::size_t n) {
  if (n < 2) fail(ErrorCode::InvalidArgument, "grid needs at least two budgets");
  const double lo = d_min_value(sigma);
  const double d0 = zero_distortion_threshold(sigma);
  const double hi = d0 + 0.25 * (d0 - lo);
  std::vector<double> grid(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double t = static_cast<double>(i) / static_cast<double>(n - 1);
    grid[i] = lo * (1.0 - t) + hi * t;
  }
  return grid;
}

}  // namespace pdtk::gaussian
