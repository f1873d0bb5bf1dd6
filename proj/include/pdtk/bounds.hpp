#pragma once

#include <cstdint>
#include <vector>

#include "pdtk/model.hpp"

namespace pdtk {

// Balanced transportation problem: ship `supply` (rows) to `demand` (columns)
// at per-unit `cost`, minimizing total cost. Both marginals are probability
// vectors.
struct TransportProblem {
  std::vector<double> supply;
  std::vector<double> demand;
  Table cost;
};

struct TransportResult {
  double value;
  Table plan;  // plan.at(i, j) >= 0, marginals match to a few 1e-9 units
};

// Exact solve via successive shortest augmenting paths with node potentials.
// Marginals are scaled to integer units of 1e-9 with the rounding residual
// assigned to the largest atom of each side.
TransportResult solve_transport(const TransportProblem& problem);

// Exact reference: enumerates every basic feasible solution (spanning trees of
// the bipartite graph); some tree is LP-optimal, so the minimum over feasible
// trees is the exact optimum. Only for small instances.
double transport_bruteforce_oracle(const TransportProblem& problem);

// Least achievable mean distortion over all estimators onto the reconstruction
// alphabet: each observation picks the cheapest reconstruction.
struct DMinResult {
  double value;
  Estimator estimator;
  std::vector<std::size_t> tie_rows;  // retained-observation rows with tied minima
};

DMinResult d_min(const DegradationModel& model, const DistortionMeasure& dist);

// Least mean distortion among estimators whose output distribution equals the
// prior exactly: a transportation problem between the observation marginal and
// the prior. Requires the reconstruction alphabet to equal the source alphabet.
struct DMaxResult {
  double value;
  Estimator estimator;
};

DMaxResult d_max(const DegradationModel& model, const DistortionMeasure& dist);

// Square-error relationship between the extremes: posterior sampling costs
// exactly twice the minimum mean square error and dominates d_max.
struct FactorTwoReport {
  double mmse_value;          // minimum MSE, posterior-mean outputs
  double sampling_mse;        // posterior-sampling estimator MSE
  double d_max_value;         // exact perfect-marginal optimum
  double ratio;               // sampling_mse / mmse_value (0/0 reported as 2)
  bool ratio_is_two;          // within 1e-9 relative
  bool d_max_within_bound;    // d_max <= sampling_mse + 1e-9
};

FactorTwoReport factor_two_report(const DegradationModel& model);

}  // namespace pdtk
