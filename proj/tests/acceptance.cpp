// Acceptance gate: each criterion prints exactly one PASS/FAIL line and the
// process exits nonzero when any of them fails. Runtime limits are part of
// the criteria, so a slow pass is a fail.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numeric>
#include <set>
#include <string>
#include <vector>

#include "helpers.hpp"
#include "pdtk/bounds.hpp"
#include "pdtk/divergence.hpp"
#include "pdtk/estimators.hpp"
#include "pdtk/gaussian.hpp"
#include "pdtk/model.hpp"
#include "pdtk/plane.hpp"
#include "pdtk/tradeoff.hpp"

using namespace pdtk;

namespace {

constexpr DivergenceKind kAllKinds[] = {
    DivergenceKind::TotalVariation, DivergenceKind::KullbackLeibler,
    DivergenceKind::JensenShannon,  DivergenceKind::Hellinger,
    DivergenceKind::ChiSquare,      DivergenceKind::Wasserstein1,
};

DegradationModel trinary_model(std::size_t n_bins) {
  return make_gaussian_model({0.45, 0.1, 0.45}, {-1.0, 0.0, 1.0}, 1.0,
                             GridSpec{-7.0, 7.0, n_bins});
}

DistortionMeasure se_for(const DegradationModel& model) {
  return square_error_measure(model.x_alphabet(), model.x_alphabet());
}

bool closed_form_gaussian_curve() {
  if (gaussian::d_min_value(1.0) != 0.5) return false;
  const double d0 = gaussian::zero_distortion_threshold(1.0);
  const std::vector<double> grid = gaussian::default_budget_grid(1.0, 200);
  const std::vector<gaussian::CurvePoint> curve = gaussian::sample_curve(1.0, grid);
  if (curve.size() != 200) return false;
  std::vector<double> xs, ys;
  bool saw_zero_region = false;
  for (const auto& pt : curve) {
    if (pt.distortion >= d0) {
      saw_zero_region = true;
      if (pt.perception != 0.0) return false;
    }
    xs.push_back(pt.distortion);
    ys.push_back(pt.perception);
  }
  return saw_zero_region && testutil::non_increasing(ys, 1e-8) &&
         testutil::convex_by_chords(xs, ys, 1e-8);
}

bool sampling_factor_two() {
  testutil::Rng rng(20240229u);
  for (int trial = 0; trial < 50; ++trial) {
    const std::size_t nx = 2 + rng() % 5;
    const std::size_t ny = 2 + rng() % 39;
    const DegradationModel model = testutil::random_model(rng, nx, ny, true);
    const FactorTwoReport rep = factor_two_report(model);
    if (!rep.ratio_is_two || !rep.d_max_within_bound) return false;
    if (rep.d_max_value > 2.0 * rep.mmse_value + 1e-9) return false;
  }
  return true;
}

// Weights that are exact multiples of 1/units, so the reference grid used by
// the exhaustive search can represent the same kernels the solver converges to.
std::vector<double> lattice_simplex(testutil::Rng& rng, std::size_t n, long units,
                                    long floor_units) {
  std::vector<long> u(n, floor_units);
  long rest = units - floor_units * static_cast<long>(n);
  for (long i = 0; i < rest; ++i) u[rng() % n] += 1;
  std::vector<double> w(n);
  for (std::size_t k = 0; k < n; ++k)
    w[k] = static_cast<double>(u[k]) / static_cast<double>(units);
  return w;
}

DegradationModel lattice_model(testutil::Rng& rng, std::size_t nx, std::size_t ny) {
  for (;;) {
    std::vector<std::vector<double>> channel(nx);
    for (auto& row : channel) row = lattice_simplex(rng, ny, 20, 2);
    const std::vector<double> prior = lattice_simplex(rng, nx, 20, 2);
    const std::vector<double> values = testutil::random_values(rng, nx);
    DegradationModel model = testutil::model_from(prior, channel, &values);
    const DistortionMeasure se = se_for(model);
    // A near-degenerate distortion range leaves no room to place budgets.
    if (d_max(model, se).value - d_min(model, se).value > 0.02) return model;
  }
}

// Largest-remainder rounding of each kernel row onto the grid the exhaustive
// search enumerates, after shedding the tiny junk components the averaged
// solver iterates carry.
Estimator snap_to_grid(const Estimator& est, std::size_t res) {
  const std::size_t units = res - 1;
  const double junk = 0.6 / static_cast<double>(units);
  Table rows(est.rows.rows(), est.rows.cols());
  for (std::size_t r = 0; r < est.rows.rows(); ++r) {
    const std::size_t cols = est.rows.cols();
    std::vector<double> w(cols);
    double sum = 0.0;
    for (std::size_t k = 0; k < cols; ++k) {
      w[k] = est.rows.at(r, k) < junk ? 0.0 : est.rows.at(r, k);
      sum += w[k];
    }
    for (auto& v : w) v /= sum;
    std::vector<long> u(cols);
    std::vector<double> frac(cols);
    long total = 0;
    for (std::size_t k = 0; k < cols; ++k) {
      const double scaled = w[k] * static_cast<double>(units);
      u[k] = static_cast<long>(std::floor(scaled));
      frac[k] = scaled - std::floor(scaled);
      total += u[k];
    }
    long missing = static_cast<long>(units) - total;
    std::vector<std::size_t> order(cols);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(),
              [&](std::size_t a, std::size_t b) { return frac[a] > frac[b]; });
    for (long m = 0; m < missing; ++m) u[order[m % cols]] += 1;
    for (std::size_t k = 0; k < cols; ++k)
      rows.at(r, k) = static_cast<double>(u[k]) / static_cast<double>(units);
  }
  return ConditionalKernel::checked(est.input, est.output, std::move(rows));
}

bool solver_matches_exhaustive_search() {
  // Reference resolution 21 and lattice instances keep the exhaustive search
  // sharp: budgets are taken at grid-achievable distortion levels (snapped
  // solver kernel plus a whisker), so the reference can actually realize the
  // optimum it is asked to certify. Two checks per comparison:
  //   parity: |solver - reference| <= 5e-3 where the grid can represent the
  //     continuum optimum (smooth divergences everywhere; total variation
  //     with a binary reconstruction alphabet, where any output marginal of
  //     the form j/units is reachable by a constant-row kernel);
  //   domination: solver <= reference + 5e-4 always, since the grid optimum
  //     can never beat the continuum one by more than solver convergence
  //     error. This half is immune to grid quantization.
  // Ternary-reconstruction total variation is covered by domination only: the
  // best resolution-21 kernel measurably sits a few 1e-3 above the continuum
  // optimum there, so two-sided parity would certify the reference's
  // quantization, not the solver.
  testutil::Rng rng(1u);
  std::vector<DegradationModel> models;
  for (int i = 0; i < 10; ++i) models.push_back(lattice_model(rng, 2, 2));
  for (int i = 0; i < 5; ++i) models.push_back(lattice_model(rng, 2, 3));
  for (int i = 0; i < 5; ++i) models.push_back(lattice_model(rng, 3, 3));
  for (const DegradationModel& model : models) {
    const std::size_t nx = model.x_alphabet().size();
    const DistortionMeasure se = se_for(model);
    const double lo = d_min(model, se).value;
    const double hi = d_max(model, se).value;
    for (double t : {0.25, 0.45, 0.65}) {
      const double target = lo + t * (hi - lo);
      for (DivergenceKind kind :
           {DivergenceKind::TotalVariation, DivergenceKind::KullbackLeibler}) {
        const TradeoffPoint probe = constrained_solve(model, se, kind, target);
        const Estimator snapped = snap_to_grid(probe.estimator, 21);
        const double level = mean_distortion(model, snapped, se) + 1e-9;
        if (level >= hi || level < lo) return false;
        const TradeoffPoint mine = constrained_solve(model, se, kind, level);
        const double oracle = brute_force_oracle(model, se, kind, level, 21);
        if (!std::isfinite(mine.perception) || !std::isfinite(oracle)) return false;
        if (mine.perception > oracle + 5e-4) return false;
        const bool sharp = kind == DivergenceKind::KullbackLeibler || nx == 2;
        if (sharp && std::abs(mine.perception - oracle) > 5e-3) return false;
      }
    }
  }
  return true;
}

bool traced_curves_are_convex() {
  testutil::Rng rng(414u);
  std::vector<double> lambdas;
  for (int k = 0; k < 16; ++k) lambdas.push_back(1e-3 * std::pow(1e6, k / 15.0));
  for (int trial = 0; trial < 10; ++trial) {
    const std::size_t nx = 2 + rng() % 3;
    const std::size_t ny = 2 + rng() % 4;
    const DegradationModel model = testutil::random_model(rng, nx, ny, true, 0.05);
    const DistortionMeasure se = se_for(model);
    for (DivergenceKind kind :
         {DivergenceKind::TotalVariation, DivergenceKind::KullbackLeibler}) {
      const TradeoffCurve curve = trace_curve(model, se, kind, lambdas);
      std::vector<double> xs, ys;
      for (const auto& [x, y] : curve.envelope) {
        xs.push_back(x);
        ys.push_back(y);
      }
      if (!testutil::non_increasing(ys, 1e-8)) return false;
      if (!testutil::convex_by_chords(xs, ys, 1e-8)) return false;
    }
  }
  return true;
}

bool trinary_map_and_density() {
  const DegradationModel model = trinary_model(1401);
  const Estimator map = map_estimator(model).estimator;
  const DiscreteDistribution out = output_distribution(model, map);
  if (out.weights[1] != 0.0) return false;

  const Alphabet& bins = model.y_support_alphabet();
  std::size_t tie = bins.size();
  for (std::size_t r = 0; r < bins.size(); ++r)
    if (bins.scalar_value(r) == 0.0) {
      if (tie != bins.size()) return false;
      tie = r;
    }
  if (tie == bins.size()) return false;
  const double w_tie = model.y_marginal()[tie];
  const double minus_side = (out.weights[0] - w_tie) / (1.0 - w_tie);
  const double plus_side = out.weights[2] / (1.0 - w_tie);
  if (std::abs(minus_side - 0.5) > 1e-12) return false;
  if (std::abs(plus_side - 0.5) > 1e-12) return false;

  const std::size_t n = 2001;
  std::vector<double> pts(n);
  const double a = -0.999, b = 0.999;
  for (std::size_t k = 0; k < n; ++k)
    pts[k] = a + (b - a) * static_cast<double>(k) / static_cast<double>(n - 1);
  const std::vector<double> dens = trinary_mmse_density(0.45, 0.1, pts);
  double integral = 0.0;
  const double h = (b - a) / static_cast<double>(n - 1);
  for (std::size_t k = 0; k < n; ++k)
    integral += dens[k] * ((k == 0 || k == n - 1) ? 0.5 : 1.0) * h;
  if (std::abs(integral - 1.0) > 1e-3) return false;

  const std::vector<double> edges =
      trinary_mmse_density(0.45, 0.1, {-(1.0 - 1e-6), 1.0 - 1e-6});
  return edges[0] < 1e-12 && edges[1] < 1e-12;
}

bool success_probability_tracks_tv() {
  testutil::Rng rng(606u);
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t n = 2 + rng() % 6;
    const Alphabet alpha = testutil::labeled("s", n);
    const auto p = DiscreteDistribution::checked(alpha, testutil::random_simplex(rng, n));
    const auto q = DiscreteDistribution::checked(alpha, testutil::random_simplex(rng, n));
    const double tv = divergence(DivergenceKind::TotalVariation, p, q);
    const double sp = success_probability(p, q);
    if (std::abs((sp - 0.5) - 0.5 * tv) > 1e-15) return false;
  }
  return true;
}

bool transport_matches_bruteforce() {
  testutil::Rng rng(77u);
  for (int seed = 0; seed < 20; ++seed) {
    for (std::size_t n : {std::size_t{3}, std::size_t{4}}) {
      const DegradationModel model = testutil::random_model(rng, n, n, true, 0.05);
      const DistortionMeasure se = se_for(model);
      const double mine = d_max(model, se).value;
      TransportProblem tp;
      tp.supply = model.y_marginal();
      tp.demand = model.prior.weights;
      tp.cost = conditional_cost(model, se).f;
      const double oracle = transport_bruteforce_oracle(tp);
      if (std::abs(mine - oracle) > 1e-6) return false;
    }
  }
  return true;
}

bool probes_break_preservation() {
  std::vector<DegradationModel> models;
  models.push_back(trinary_model(1401));
  testutil::Rng rng(99u);
  for (int i = 0; i < 5; ++i) models.push_back(testutil::random_model(rng, 3, 3, true, 0.05));
  for (const DegradationModel& model : models) {
    const StabilityProbeReport rep = stability_probe(model, se_for(model));
    const bool certified =
        !rep.baseline_preserving || (rep.breaking.has_value() && rep.breaking->tv > 1e-6);
    if (!certified) return false;
  }
  return true;
}

std::set<std::string> names_of(const std::vector<AlgorithmRecord>& records) {
  std::set<std::string> names;
  for (const auto& r : records) names.insert(r.name);
  return names;
}

std::set<std::string> oracle_admissible(const std::vector<AlgorithmRecord>& records) {
  std::set<std::string> names;
  for (const auto& r : records) {
    bool dominated = false;
    for (const auto& other : records)
      if (other.distortion < r.distortion && other.perception < r.perception) dominated = true;
    if (!dominated) names.insert(r.name);
  }
  return names;
}

bool plane_admissibility() {
  const std::vector<AlgorithmRecord> fixture = {
      {"A", 3.0, 3.0, ""}, {"B", 2.0, 2.0, ""}, {"C", 3.0, 1.0, ""}, {"D", 1.0, 3.0, ""}};
  if (names_of(admissible_set(fixture)) != std::set<std::string>{"B", "C", "D"}) return false;

  testutil::Rng rng(11u);
  for (int trial = 0; trial < 100; ++trial) {
    std::vector<AlgorithmRecord> records;
    for (int i = 0; i < 8; ++i)
      records.push_back({"r" + std::to_string(i), static_cast<double>(rng() % 13) / 4.0,
                         static_cast<double>(rng() % 13) / 4.0, ""});
    const std::set<std::string> mine = names_of(admissible_set(records));
    if (mine != oracle_admissible(records)) return false;

    std::vector<AlgorithmRecord> scaled = records;
    for (auto& r : scaled) {
      r.distortion *= 3.75;
      r.perception *= 0.2;
    }
    if (names_of(admissible_set(scaled)) != mine) return false;
  }
  return true;
}

bool mixtures_stay_convex() {
  testutil::Rng rng(321u);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (int trial = 0; trial < 50; ++trial) {
    const std::size_t nx = 2 + rng() % 3;
    const std::size_t ny = 2 + rng() % 3;
    const DegradationModel model = testutil::random_model(rng, nx, ny, true, 0.02);
    const DistortionMeasure se = se_for(model);
    const Estimator a = testutil::random_estimator(rng, model);
    const Estimator b = testutil::random_estimator(rng, model);
    const double lambda = unit(rng);
    for (DivergenceKind kind : kAllKinds) {
      const MixtureReport rep = mixture_checks(model, se, kind, a, b, lambda);
      if (!rep.distortion_linear || !rep.divergence_convex) return false;
    }
  }
  return true;
}

struct Criterion {
  int number;
  const char* text;
  double limit_seconds;
  std::function<bool()> body;
};

}  // namespace

int main() {
  const std::vector<Criterion> criteria = {
      {1, "unit-noise scalar closed form: exact floor, zero beyond threshold, convex curve", 1.0,
       closed_form_gaussian_curve},
      {2, "posterior sampling doubles minimum MSE and bounds the perfect-marginal optimum", 10.0,
       sampling_factor_two},
      {3, "constrained solver tracks the exhaustive-search reference within 5e-3", 300.0,
       solver_matches_exhaustive_search},
      {4, "traced tradeoff curves have monotone convex envelopes", 120.0,
       traced_curves_are_convex},
      {5, "three-point source: symmetric mode output, posterior-mean density integrates to one",
       1.0, trinary_map_and_density},
      {6, "success probability sits at one half plus half the total variation", 10.0,
       success_probability_tracks_tv},
      {7, "perfect-marginal optimum matches the transport brute force", 60.0,
       transport_matches_bruteforce},
      {8, "stability probe certifies non-preservation or exhibits a breaking tilt", 30.0,
       probes_break_preservation},
      {9, "admissible set matches the pairwise oracle and survives rescaling", 10.0,
       plane_admissibility},
      {10, "estimator mixtures keep distortion linear and divergence convex", 10.0,
       mixtures_stay_convex},
  };

  int failures = 0;
  for (const Criterion& c : criteria) {
    const auto start = std::chrono::steady_clock::now();
    bool ok = false;
    try {
      ok = c.body();
    } catch (const std::exception& e) {
      std::fprintf(stderr, "criterion %d threw: %s\n", c.number, e.what());
      ok = false;
    }
    const double elapsed =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (elapsed > c.limit_seconds) ok = false;
    std::printf("%s criterion %d: %s [%.3fs, limit %.0fs]\n", ok ? "PASS" : "FAIL", c.number,
                c.text, elapsed, c.limit_seconds);
    if (!ok) ++failures;
  }
  return failures == 0 ? 0 : 1;
}
