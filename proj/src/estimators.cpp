#include "pdtk/estimators.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "pdtk/bounds.hpp"

namespace pdtk {

namespace {

constexpr double kMergeTolerance = 1e-12;

std::string vector_label(const std::vector<double>& v) {
  std::string out;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) out += ",";
    out += format_value(v[i]);
  }
  return out;
}

}  // namespace

Estimator mmse_estimator(const DegradationModel& model) {
  if (!model.x_alphabet().has_values())
    fail(ErrorCode::MissingValues, "posterior means need numeric source values");
  const Posterior post = posterior(model);
  const std::size_t nr = post.kernel.rows.rows();
  const std::size_t nx = model.x_alphabet().size();
  const std::size_t dim = model.x_alphabet().value_dim();
  const auto& xv = *model.x_alphabet().values;

  std::vector<std::vector<double>> reps;
  std::vector<std::size_t> row_to_rep(nr);
  for (std::size_t r = 0; r < nr; ++r) {
    std::vector<double> mean(dim, 0.0);
    for (std::size_t i = 0; i < nx; ++i) {
      const double w = post.kernel.rows.at(r, i);
      for (std::size_t d = 0; d < dim; ++d) mean[d] += w * xv[i][d];
    }
    std::size_t rep = reps.size();
    for (std::size_t k = 0; k < reps.size(); ++k) {
      double gap = 0.0;
      for (std::size_t d = 0; d < dim; ++d) gap = std::max(gap, std::abs(reps[k][d] - mean[d]));
      if (gap <= kMergeTolerance) {
        rep = k;
        break;
      }
    }
    if (rep == reps.size()) reps.push_back(std::move(mean));
    row_to_rep[r] = rep;
  }

  Alphabet out;
  out.labels.reserve(reps.size());
  for (const auto& v : reps) out.labels.push_back(vector_label(v));
  out.values = reps;

  Table rows(nr, reps.size(), 0.0);
  for (std::size_t r = 0; r < nr; ++r) rows.at(r, row_to_rep[r]) = 1.0;
  return ConditionalKernel::checked(post.kernel.input, std::move(out), std::move(rows));
}

MapResult map_estimator(const DegradationModel& model) {
  const Posterior post = posterior(model);
  const std::size_t nr = post.kernel.rows.rows();
  const std::size_t nx = model.x_alphabet().size();

  MapResult result;
  Table rows(nr, nx, 0.0);
  for (std::size_t r = 0; r < nr; ++r) {
    std::size_t arg = 0;
    bool tie = false;
    for (std::size_t i = 1; i < nx; ++i) {
      if (post.kernel.rows.at(r, i) > post.kernel.rows.at(r, arg)) {
        arg = i;
        tie = false;
      } else if (post.kernel.rows.at(r, i) == post.kernel.rows.at(r, arg)) {
        tie = true;
      }
    }
    rows.at(r, arg) = 1.0;
    if (tie) result.tie_rows.push_back(r);
  }
  result.estimator =
      ConditionalKernel::checked(post.kernel.input, model.x_alphabet(), std::move(rows));
  return result;
}

Estimator posterior_sampling_estimator(const DegradationModel& model) {
  const Posterior post = posterior(model);
  return post.kernel;
}

Estimator random_draw_estimator(const DegradationModel& model) {
  const std::size_t nr = model.retained_y().size();
  const std::size_t nx = model.x_alphabet().size();
  Table rows(nr, nx);
  for (std::size_t r = 0; r < nr; ++r)
    for (std::size_t i = 0; i < nx; ++i) rows.at(r, i) = model.prior.weights[i];
  return ConditionalKernel::checked(model.y_support_alphabet(), model.x_alphabet(),
                                    std::move(rows));
}

namespace {

// Posterior mean of the three-point source as a function of the observation.
// Weights are scaled by exp(y^2 / 2), which cancels in the ratio.
double trinary_mean(double p1, double p0, double y) {
  const double c = p1 * std::exp(-0.5);
  const double wp = c * std::exp(y);
  const double wm = c * std::exp(-y);
  return (wp - wm) / (wp + wm + p0);
}

double trinary_inverse(double p1, double p0, double target) {
  double lo = -40.0;
  double hi = 40.0;
  // The forward map is strictly increasing; 1e-10 matches the promised
  // inversion tolerance.
  while (hi - lo > 1e-10) {
    const double mid = 0.5 * (lo + hi);
    if (trinary_mean(p1, p0, mid) < target)
      lo = mid;
    else
      hi = mid;
  }
  return 0.5 * (lo + hi);
}

double normal_pdf(double z) {
  return std::exp(-0.5 * z * z) / std::sqrt(2.0 * std::acos(-1.0));
}

}  // namespace

std::vector<double> trinary_mmse_density(double p1, double p0,
                                         const std::vector<double>& xhat_points) {
  if (!(p1 > 0.0) || !(p0 >= 0.0))
    fail(ErrorCode::InvalidArgument, "weights must satisfy p1 > 0 and p0 >= 0");
  if (std::abs(2.0 * p1 + p0 - 1.0) > kMassTolerance)
    fail(ErrorCode::SumNotOne, "three-point weights must satisfy 2 p1 + p0 = 1");

  // The map must be increasing over the bracket; a decreasing stretch would
  // make the change of variables invalid. The tails saturate to +-1 in double
  // precision, so flatness is tolerated pointwise as long as the bracket as a
  // whole still climbs.
  const double first = trinary_mean(p1, p0, -40.0);
  double prev = first;
  for (int k = 1; k <= 80; ++k) {
    const double cur = trinary_mean(p1, p0, -40.0 + k);
    if (cur < prev) fail(ErrorCode::NonMonotoneRegion, "posterior mean is not increasing");
    prev = cur;
  }
  if (!(prev > first)) fail(ErrorCode::NonMonotoneRegion, "posterior mean is not increasing");

  std::vector<double> density;
  density.reserve(xhat_points.size());
  for (double s : xhat_points) {
    if (!(std::abs(s) < 1.0))
      fail(ErrorCode::InvalidArgument, "density is supported strictly inside (-1, 1)");
    const double h = std::min(1e-5, 0.5 * (1.0 - std::abs(s)));
    const double y = trinary_inverse(p1, p0, s);
    const double y_hi = trinary_inverse(p1, p0, s + h);
    const double y_lo = trinary_inverse(p1, p0, s - h);
    const double dyds = (y_hi - y_lo) / (2.0 * h);
    const double py =
        p1 * normal_pdf(y - 1.0) + p0 * normal_pdf(y) + p1 * normal_pdf(y + 1.0);
    density.push_back(py * std::abs(dyds));
  }
  return density;
}

OptimalSupport optimal_support(const DegradationModel& model, const DistortionMeasure& dist,
                               double tau) {
  if (!(tau >= 0.0)) fail(ErrorCode::InvalidArgument, "tau must be non-negative");
  const ConditionalCost cc = conditional_cost(model, dist);
  OptimalSupport support;
  support.y = cc.y;
  support.xhat = cc.xhat;
  support.tau = tau;
  support.sets.resize(cc.f.rows());
  for (std::size_t r = 0; r < cc.f.rows(); ++r) {
    double lo = cc.f.at(r, 0);
    for (std::size_t k = 1; k < cc.f.cols(); ++k) lo = std::min(lo, cc.f.at(r, k));
    for (std::size_t k = 0; k < cc.f.cols(); ++k)
      if (cc.f.at(r, k) <= lo + tau) support.sets[r].push_back(k);
  }
  return support;
}

PreservationReport preservation_check(const DegradationModel& model,
                                      const DistortionMeasure& dist) {
  if (!same_labels(dist.xhat, model.x_alphabet()))
    fail(ErrorCode::AlphabetMismatch,
         "matching the prior needs the reconstruction alphabet to equal the source alphabet");
  PreservationReport report;
  report.support = optimal_support(model, dist);

  const auto& ry = model.retained_y();
  const auto& py = model.y_marginal();
  const std::size_t nk = dist.xhat.size();

  // Penalize any mass outside the optimal supports; the optimum is then the
  // least such mass over all couplings with the required marginals.
  TransportProblem tp;
  tp.supply.reserve(ry.size());
  for (std::size_t j : ry) tp.supply.push_back(py[j]);
  tp.demand = model.prior.weights;
  tp.cost = Table(ry.size(), nk, 1.0);
  for (std::size_t r = 0; r < ry.size(); ++r)
    for (std::size_t k : report.support.sets[r]) tp.cost.at(r, k) = 0.0;
  const TransportResult tr = solve_transport(tp);

  report.infeasibility_mass = tr.value;
  report.preserving_possible = tr.value <= 1e-8;
  for (std::size_t r = 0; r < ry.size(); ++r)
    for (std::size_t k = 0; k < nk; ++k)
      if (tp.cost.at(r, k) == 1.0 && tr.plan.at(r, k) > 0.0) report.violating_cells.push_back({r, k});

  if (report.preserving_possible) {
    Table rows(ry.size(), nk, 0.0);
    for (std::size_t r = 0; r < ry.size(); ++r) {
      double mass = 0.0;
      for (std::size_t k : report.support.sets[r]) mass += tr.plan.at(r, k);
      if (mass > 0.0) {
        for (std::size_t k : report.support.sets[r]) rows.at(r, k) = tr.plan.at(r, k) / mass;
      } else {
        rows.at(r, report.support.sets[r].front()) = 1.0;
      }
    }
    report.witness = ConditionalKernel::checked(report.support.y, report.support.xhat,
                                                std::move(rows));
  }
  return report;
}

StabilityProbeReport stability_probe(const DegradationModel& model, const DistortionMeasure& dist,
                                     const std::vector<double>& alphas) {
  for (double a : alphas)
    if (!(a > 0.0) || !(a <= 1.0))
      fail(ErrorCode::InvalidArgument, "each alpha must lie in (0, 1]");

  const Posterior post = posterior(model);
  bool non_invertible = false;
  for (std::size_t r = 0; r < post.kernel.rows.rows() && !non_invertible; ++r) {
    std::size_t positive = 0;
    for (std::size_t i = 0; i < post.kernel.rows.cols(); ++i)
      if (post.kernel.rows.at(r, i) > 1e-12) ++positive;
    non_invertible = positive >= 2;
  }
  if (!non_invertible)
    fail(ErrorCode::InvertibleDegradation,
         "every posterior is a point mass, so the probe is vacuous");
  if (!same_labels(dist.xhat, model.x_alphabet()))
    fail(ErrorCode::AlphabetMismatch,
         "matching the prior needs the reconstruction alphabet to equal the source alphabet");

  const DMinResult opt = d_min(model, dist);

  const auto& ry = model.retained_y();
  const auto& py = model.y_marginal();
  const std::size_t nr = ry.size();
  const std::size_t nx = model.x_alphabet().size();

  std::vector<double> base_py(nr);
  for (std::size_t r = 0; r < nr; ++r) base_py[r] = py[ry[r]];

  const double threshold = 1e-6;
  auto tv_under = [&](const std::vector<double>& tilted) {
    // Implied prior and optimal-estimator output under the tilted marginal.
    double tv = 0.0;
    for (std::size_t i = 0; i < nx; ++i) {
      double prior_i = 0.0;
      double out_i = 0.0;
      for (std::size_t r = 0; r < nr; ++r) {
        prior_i += post.kernel.rows.at(r, i) * tilted[r];
        out_i += opt.estimator.rows.at(r, i) * tilted[r];
      }
      tv += std::abs(prior_i - out_i);
    }
    return 0.5 * tv;
  };

  StabilityProbeReport report;
  report.baseline_tv = tv_under(base_py);
  report.baseline_preserving = report.baseline_tv <= threshold;
  if (!report.baseline_preserving) return report;

  std::vector<double> tilted(nr);
  for (double alpha : alphas) {
    for (std::size_t star = 0; star < nr; ++star) {
      for (std::size_t r = 0; r < nr; ++r)
        tilted[r] = alpha * base_py[r] + (r == star ? 1.0 - alpha : 0.0);
      const double tv = tv_under(tilted);
      if (tv > threshold) {
        report.breaking = Perturbation{alpha, star, model.y_support_alphabet().labels[star], tv};
        return report;
      }
    }
  }
  return report;
}

std::pair<Estimator, Estimator> divergent_optima(const DegradationModel& model,
                                                 const DistortionMeasure& dist, double tau) {
  const OptimalSupport support = optimal_support(model, dist, tau);
  const auto& ry = model.retained_y();
  const auto& py = model.y_marginal();

  bool applicable = false;
  for (std::size_t r = 0; r < support.sets.size(); ++r)
    if (support.sets[r].size() >= 2 && py[ry[r]] > 0.0) applicable = true;
  if (!applicable)
    fail(ErrorCode::NotApplicable, "every optimal support is a single reconstruction");

  const std::size_t nk = support.xhat.size();
  Table rows_a(support.sets.size(), nk, 0.0);
  Table rows_b(support.sets.size(), nk, 0.0);
  for (std::size_t r = 0; r < support.sets.size(); ++r) {
    const auto& s = support.sets[r];
    rows_a.at(r, s.front()) = 1.0;
    if (s.size() == 1) {
      rows_b.at(r, s.front()) = 1.0;
    } else {
      // Split into the lowest-index reconstruction versus the rest.
      const double share = 1.0 / static_cast<double>(s.size() - 1);
      for (std::size_t idx = 1; idx < s.size(); ++idx) rows_b.at(r, s[idx]) = share;
    }
  }
  return {ConditionalKernel::checked(support.y, support.xhat, std::move(rows_a)),
          ConditionalKernel::checked(support.y, support.xhat, std::move(rows_b))};
}

double marginal_divergence(const DegradationModel& model, const Estimator& est,
                           DivergenceKind kind, std::size_t n_bins) {
  const DiscreteDistribution out = output_distribution(model, est);
  const DiscreteDistribution prior = model.prior_distribution();
  if (kind == DivergenceKind::Wasserstein1) return wasserstein1(prior, out);
  if (same_labels(est.output, model.x_alphabet())) return divergence(kind, prior, out);
  const auto [bp, bq] = bin_onto_shared_grid(prior, out, n_bins);
  return divergence(kind, bp, bq);
}

}  // namespace pdtk
