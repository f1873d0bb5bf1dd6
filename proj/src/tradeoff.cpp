#include "pdtk/tradeoff.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numeric>
#include <ostream>

#include "pdtk/bounds.hpp"

namespace pdtk {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kFloor = 1e-12;  // smoothing floor inside the solver only
constexpr std::size_t kSmoothIters = 5000;
constexpr std::size_t kSubgradIters = 20000;
constexpr double kLambdaMax = 1e8;
constexpr std::size_t kBisectDepth = 60;

struct Workspace {
  const DegradationModel* model;
  const DistortionMeasure* dist;
  DivergenceKind kind;
  std::vector<double> w;       // retained observation masses
  Table f;                     // conditional cost, retained rows
  std::vector<double> prior;   // target marginal
  Alphabet y;                  // retained observation alphabet
  Alphabet xhat;
  // Wasserstein-1 support data (ascending order over reconstruction values).
  std::vector<std::size_t> order;
  std::vector<double> gaps;

  std::size_t rows() const { return w.size(); }
  std::size_t cols() const { return prior.size(); }
};

Workspace make_workspace(const DegradationModel& model, const DistortionMeasure& dist,
                         DivergenceKind kind) {
  if (!same_labels(dist.xhat, model.x_alphabet()))
    fail(ErrorCode::AlphabetMismatch,
         "the tradeoff searches estimators onto the source alphabet");
  Workspace ws;
  ws.model = &model;
  ws.dist = &dist;
  ws.kind = kind;
  const ConditionalCost cc = conditional_cost(model, dist);
  ws.f = cc.f;
  ws.y = cc.y;
  ws.xhat = cc.xhat;
  const auto& ry = model.retained_y();
  const auto& py = model.y_marginal();
  ws.w.reserve(ry.size());
  for (std::size_t j : ry) ws.w.push_back(py[j]);
  ws.prior = model.prior.weights;
  if (kind == DivergenceKind::Wasserstein1) {
    if (!model.x_alphabet().has_scalar_values())
      fail(ErrorCode::MissingValues, "Wasserstein-1 needs scalar source values");
    ws.order.resize(ws.prior.size());
    std::iota(ws.order.begin(), ws.order.end(), 0);
    std::stable_sort(ws.order.begin(), ws.order.end(), [&](std::size_t a, std::size_t b) {
      return model.x_alphabet().scalar_value(a) < model.x_alphabet().scalar_value(b);
    });
    ws.gaps.resize(ws.prior.size());
    for (std::size_t k = 0; k + 1 < ws.order.size(); ++k)
      ws.gaps[k] = model.x_alphabet().scalar_value(ws.order[k + 1]) -
                   model.x_alphabet().scalar_value(ws.order[k]);
  }
  return ws;
}

std::vector<double> marginal_of(const Workspace& ws, const Table& q) {
  std::vector<double> p_hat(ws.cols(), 0.0);
  for (std::size_t r = 0; r < ws.rows(); ++r)
    for (std::size_t k = 0; k < ws.cols(); ++k) p_hat[k] += ws.w[r] * q.at(r, k);
  return p_hat;
}

double distortion_of(const Workspace& ws, const Table& q) {
  double s = 0.0;
  for (std::size_t r = 0; r < ws.rows(); ++r) {
    double row = 0.0;
    for (std::size_t k = 0; k < ws.cols(); ++k) row += ws.f.at(r, k) * q.at(r, k);
    s += ws.w[r] * row;
  }
  return s;
}

double raw_divergence(const Workspace& ws, const std::vector<double>& p_hat) {
  const auto& p = ws.prior;
  switch (ws.kind) {
    case DivergenceKind::TotalVariation: {
      double s = 0.0;
      for (std::size_t k = 0; k < p.size(); ++k) s += std::abs(p[k] - p_hat[k]);
      return 0.5 * s;
    }
    case DivergenceKind::KullbackLeibler: {
      double s = 0.0;
      for (std::size_t k = 0; k < p.size(); ++k) {
        if (p[k] == 0.0) continue;
        if (p_hat[k] <= 0.0) return kInf;
        s += p[k] * std::log(p[k] / p_hat[k]);
      }
      return s;
    }
    case DivergenceKind::JensenShannon: {
      double s = 0.0;
      for (std::size_t k = 0; k < p.size(); ++k) {
        const double m = 0.5 * (p[k] + p_hat[k]);
        if (p[k] > 0.0) s += 0.5 * p[k] * std::log(p[k] / m);
        if (p_hat[k] > 0.0) s += 0.5 * p_hat[k] * std::log(p_hat[k] / m);
      }
      return s;
    }
    case DivergenceKind::Hellinger: {
      double s = 0.0;
      for (std::size_t k = 0; k < p.size(); ++k) {
        const double d = std::sqrt(p[k]) - std::sqrt(p_hat[k]);
        s += d * d;
      }
      return 0.5 * s;
    }
    case DivergenceKind::ChiSquare: {
      double s = 0.0;
      for (std::size_t k = 0; k < p.size(); ++k) {
        if (p_hat[k] <= 0.0) {
          if (p[k] > 0.0) return kInf;
          continue;
        }
        const double d = p[k] - p_hat[k];
        s += d * d / p_hat[k];
      }
      return s;
    }
    case DivergenceKind::Wasserstein1: {
      double w1 = 0.0;
      double cum = 0.0;
      for (std::size_t k = 0; k + 1 < ws.order.size(); ++k) {
        cum += p_hat[ws.order[k]] - p[ws.order[k]];
        w1 += std::abs(cum) * ws.gaps[k];
      }
      return w1;
    }
  }
  return kInf;
}

// Gradient (or a subgradient) of the divergence with respect to the output
// marginal, with the floor applied for the smooth kinds.
void divergence_slope(const Workspace& ws, const std::vector<double>& p_hat,
                      std::vector<double>& slope) {
  const auto& p = ws.prior;
  slope.assign(p.size(), 0.0);
  switch (ws.kind) {
    case DivergenceKind::KullbackLeibler:
      for (std::size_t k = 0; k < p.size(); ++k)
        slope[k] = -p[k] / std::max(p_hat[k], kFloor);
      break;
    case DivergenceKind::JensenShannon:
      for (std::size_t k = 0; k < p.size(); ++k) {
        const double q = std::max(p_hat[k], kFloor);
        slope[k] = 0.5 * std::log(2.0 * q / (p[k] + q));
      }
      break;
    case DivergenceKind::Hellinger:
      for (std::size_t k = 0; k < p.size(); ++k)
        slope[k] = 0.5 * (1.0 - std::sqrt(p[k] / std::max(p_hat[k], kFloor)));
      break;
    case DivergenceKind::ChiSquare:
      for (std::size_t k = 0; k < p.size(); ++k) {
        const double ratio = p[k] / std::max(p_hat[k], kFloor);
        slope[k] = 1.0 - ratio * ratio;
      }
      break;
    case DivergenceKind::TotalVariation:
      for (std::size_t k = 0; k < p.size(); ++k) {
        if (p_hat[k] > p[k]) slope[k] = 0.5;
        else if (p_hat[k] < p[k]) slope[k] = -0.5;
      }
      break;
    case DivergenceKind::Wasserstein1: {
      // Suffix sums of signed segment lengths along the sorted support.
      const std::size_t n = ws.order.size();
      std::vector<double> sgn(n, 0.0);
      double cum = 0.0;
      for (std::size_t k = 0; k + 1 < n; ++k) {
        cum += p_hat[ws.order[k]] - p[ws.order[k]];
        if (cum > 0.0) sgn[k] = ws.gaps[k];
        else if (cum < 0.0) sgn[k] = -ws.gaps[k];
      }
      double suffix = 0.0;
      for (std::size_t k = n; k-- > 0;) {
        if (k + 1 < n) suffix += sgn[k];
        slope[ws.order[k]] = suffix;
      }
      break;
    }
  }
}

void project_row_to_simplex(double* v, std::size_t n) {
  static thread_local std::vector<double> buf;
  buf.assign(v, v + n);
  std::sort(buf.begin(), buf.end(), std::greater<double>());
  double cum = 0.0;
  double theta = 0.0;
  for (std::size_t j = 0; j < n; ++j) {
    cum += buf[j];
    const double t = (1.0 - cum) / static_cast<double>(j + 1);
    if (buf[j] + t > 0.0) theta = t;
  }
  for (std::size_t k = 0; k < n; ++k) v[k] = std::max(0.0, v[k] + theta);
}

Table initial_kernel(const Workspace& ws, const SolveOptions& options) {
  if (options.warm_start) {
    if (options.warm_start->rows() != ws.rows() || options.warm_start->cols() != ws.cols())
      fail(ErrorCode::InvalidArgument, "warm start shape mismatch");
    return *options.warm_start;
  }
  Table q(ws.rows(), ws.cols(), 1.0 / static_cast<double>(ws.cols()));
  return q;
}

Table exact_distortion_optimum(const Workspace& ws) {
  Table q(ws.rows(), ws.cols(), 0.0);
  for (std::size_t r = 0; r < ws.rows(); ++r) {
    std::size_t arg = 0;
    for (std::size_t k = 1; k < ws.cols(); ++k)
      if (ws.f.at(r, k) < ws.f.at(r, arg)) arg = k;
    q.at(r, arg) = 1.0;
  }
  return q;
}

TradeoffPoint finish_point(const Workspace& ws, double lambda, Table q, double gap,
                           bool converged) {
  TradeoffPoint point;
  point.lambda = lambda;
  point.gap = gap;
  point.converged = converged;
  point.estimator = ConditionalKernel::checked(ws.y, ws.xhat, std::move(q));
  point.distortion = mean_distortion(*ws.model, point.estimator, *ws.dist);
  point.perception = raw_divergence(ws, marginal_of(ws, point.estimator.rows));
  return point;
}

TradeoffPoint solve_smooth(const Workspace& ws, double lambda, const SolveOptions& options) {
  const std::size_t iters = options.max_iters ? options.max_iters : kSmoothIters;
  const std::size_t R = ws.rows();
  const std::size_t K = ws.cols();

  Table q = initial_kernel(ws, options);
  Table best = q;
  double best_gap = kInf;
  bool converged = false;

  std::vector<double> slope;
  std::vector<std::size_t> lmo(R);
  for (std::size_t t = 0; t < iters; ++t) {
    const std::vector<double> p_hat = marginal_of(ws, q);
    divergence_slope(ws, p_hat, slope);

    double gap = 0.0;
    for (std::size_t r = 0; r < R; ++r) {
      std::size_t arg = 0;
      double lo = kInf;
      double inner = 0.0;
      for (std::size_t k = 0; k < K; ++k) {
        const double g = ws.w[r] * (ws.f.at(r, k) + lambda * slope[k]);
        inner += g * q.at(r, k);
        if (g < lo) {
          lo = g;
          arg = k;
        }
      }
      lmo[r] = arg;
      gap += inner - lo;
    }
    if (gap < best_gap) {
      best_gap = gap;
      best = q;
    }
    if (gap <= options.tol) {
      converged = true;
      break;
    }
    const double step = 2.0 / static_cast<double>(t + 2);
    for (std::size_t r = 0; r < R; ++r) {
      for (std::size_t k = 0; k < K; ++k) q.at(r, k) *= 1.0 - step;
      q.at(r, lmo[r]) += step;
    }
  }
  return finish_point(ws, lambda, std::move(best), best_gap, converged);
}

TradeoffPoint solve_subgradient(const Workspace& ws, double lambda, const SolveOptions& options) {
  const std::size_t iters = options.max_iters ? options.max_iters : kSubgradIters;
  const std::size_t R = ws.rows();
  const std::size_t K = ws.cols();

  Table q = initial_kernel(ws, options);
  Table sum(R, K, 0.0);
  Table best = q;
  double best_obj = kInf;

  auto objective = [&](const Table& kernel) {
    return distortion_of(ws, kernel) + lambda * raw_divergence(ws, marginal_of(ws, kernel));
  };

  std::vector<double> slope;
  double scale = 0.0;
  for (std::size_t t = 1; t <= iters; ++t) {
    const double obj = objective(q);
    if (obj < best_obj) {
      best_obj = obj;
      best = q;
    }
    for (std::size_t r = 0; r < R; ++r)
      for (std::size_t k = 0; k < K; ++k) sum.at(r, k) += q.at(r, k);

    const std::vector<double> p_hat = marginal_of(ws, q);
    divergence_slope(ws, p_hat, slope);
    if (t == 1) {
      double norm2 = 0.0;
      for (std::size_t r = 0; r < R; ++r)
        for (std::size_t k = 0; k < K; ++k) {
          const double g = ws.w[r] * (ws.f.at(r, k) + lambda * slope[k]);
          norm2 += g * g;
        }
      scale = std::sqrt(2.0 * static_cast<double>(R)) / std::max(std::sqrt(norm2), 1e-12);
    }
    const double step = scale / std::sqrt(static_cast<double>(t));
    for (std::size_t r = 0; r < R; ++r) {
      for (std::size_t k = 0; k < K; ++k)
        q.at(r, k) -= step * ws.w[r] * (ws.f.at(r, k) + lambda * slope[k]);
      project_row_to_simplex(q.row_ptr(r), K);
    }
  }

  for (std::size_t r = 0; r < R; ++r) {
    for (std::size_t k = 0; k < K; ++k) sum.at(r, k) /= static_cast<double>(iters);
    project_row_to_simplex(sum.row_ptr(r), K);
  }
  // Certificate: spread between the averaged iterate and the best iterate.
  const double gap = std::max(0.0, objective(sum) - best_obj);
  return finish_point(ws, lambda, std::move(best), gap, gap <= options.tol);
}

}  // namespace

TradeoffPoint lagrangian_solve(const DegradationModel& model, const DistortionMeasure& dist,
                               DivergenceKind kind, double lambda, const SolveOptions& options) {
  if (!(lambda >= 0.0) || !std::isfinite(lambda))
    fail(ErrorCode::InvalidArgument, "lambda must be finite and non-negative");
  const Workspace ws = make_workspace(model, dist, kind);
  if (lambda == 0.0) return finish_point(ws, 0.0, exact_distortion_optimum(ws), 0.0, true);
  if (is_smooth(kind)) return solve_smooth(ws, lambda, options);
  return solve_subgradient(ws, lambda, options);
}

TradeoffCurve trace_curve(const DegradationModel& model, const DistortionMeasure& dist,
                          DivergenceKind kind, const std::vector<double>& lambdas,
                          const SolveOptions& options) {
  if (lambdas.empty()) fail(ErrorCode::InvalidArgument, "lambda schedule is empty");
  for (std::size_t i = 0; i + 1 < lambdas.size(); ++i)
    if (!(lambdas[i] <= lambdas[i + 1]))
      fail(ErrorCode::InvalidArgument, "lambda schedule must be ascending");

  TradeoffCurve curve;
  curve.kind = kind;
  curve.distortion_id = dist.id;

  Table warm;
  SolveOptions opt = options;
  for (double lambda : lambdas) {
    TradeoffPoint point = lagrangian_solve(model, dist, kind, lambda, opt);
    warm = point.estimator.rows;
    opt.warm_start = &warm;
    curve.points.push_back(std::move(point));
  }
  std::stable_sort(curve.points.begin(), curve.points.end(),
                   [](const TradeoffPoint& a, const TradeoffPoint& b) {
                     return a.distortion < b.distortion;
                   });
  std::vector<std::pair<double, double>> pts;
  pts.reserve(curve.points.size());
  for (const auto& p : curve.points) pts.push_back({p.distortion, p.perception});
  curve.envelope = lower_convex_envelope(std::move(pts));
  return curve;
}

TradeoffPoint constrained_solve(const DegradationModel& model, const DistortionMeasure& dist,
                                DivergenceKind kind, double distortion_budget,
                                const SolveOptions& options) {
  const Workspace ws = make_workspace(model, dist, kind);
  const DMinResult dmin = d_min(model, dist);
  if (distortion_budget < dmin.value - 1e-8)
    fail(ErrorCode::InfeasibleDistortion,
         "distortion budget below the attainable minimum " + fmt17(dmin.value));

  const DMaxResult dmax = d_max(model, dist);
  if (distortion_budget >= dmax.value) {
    TradeoffPoint point;
    point.lambda = kInf;
    point.gap = 0.0;
    point.converged = true;
    point.estimator = dmax.estimator;
    point.distortion = mean_distortion(model, point.estimator, dist);
    point.perception = raw_divergence(ws, marginal_of(ws, point.estimator.rows));
    return point;
  }

  SolveOptions opt = options;
  TradeoffPoint lo = lagrangian_solve(model, dist, kind, 0.0, opt);
  if (std::abs(lo.distortion - distortion_budget) <= 1e-6) return lo;
  Table warm = lo.estimator.rows;
  opt.warm_start = &warm;
  TradeoffPoint hi = lagrangian_solve(model, dist, kind, kLambdaMax, opt);
  if (hi.distortion <= distortion_budget) return hi;

  double lo_lambda = 0.0;
  double hi_lambda = kLambdaMax;
  for (std::size_t depth = 0; depth < kBisectDepth; ++depth) {
    const double mid_lambda = 0.5 * (lo_lambda + hi_lambda);
    warm = (distortion_budget - lo.distortion <= hi.distortion - distortion_budget)
               ? lo.estimator.rows
               : hi.estimator.rows;
    opt.warm_start = &warm;
    TradeoffPoint mid = lagrangian_solve(model, dist, kind, mid_lambda, opt);
    if (std::abs(mid.distortion - distortion_budget) <= 1e-6) return mid;
    if (mid.distortion < distortion_budget) {
      lo = std::move(mid);
      lo_lambda = mid_lambda;
    } else {
      hi = std::move(mid);
      hi_lambda = mid_lambda;
    }
  }

  // The bracket is tight in lambda but the budget sits between the two
  // endpoint distortions; blending the endpoint kernels lands on it exactly
  // because distortion is linear in the kernel.
  const double span = hi.distortion - lo.distortion;
  const double theta = span > 0.0 ? (hi.distortion - distortion_budget) / span : 1.0;
  const std::size_t R = ws.rows();
  const std::size_t K = ws.cols();
  Table mixed(R, K);
  for (std::size_t r = 0; r < R; ++r)
    for (std::size_t k = 0; k < K; ++k)
      mixed.at(r, k) =
          theta * lo.estimator.rows.at(r, k) + (1.0 - theta) * hi.estimator.rows.at(r, k);
  TradeoffPoint point = finish_point(ws, hi_lambda, std::move(mixed),
                                     std::max(lo.gap, hi.gap), lo.converged && hi.converged);
  return point;
}

namespace {

void simplex_grid_rows(std::size_t cols, std::size_t steps, std::vector<double>& scratch,
                       std::vector<std::vector<double>>& out) {
  if (cols == 1) {
    scratch.push_back(static_cast<double>(steps) / 1.0);
    out.push_back(scratch);
    scratch.pop_back();
    return;
  }
  for (std::size_t take = 0; take <= steps; ++take) {
    scratch.push_back(static_cast<double>(take));
    simplex_grid_rows(cols - 1, steps - take, scratch, out);
    scratch.pop_back();
  }
}

struct OracleContext {
  Workspace ws;
  std::vector<std::vector<double>> rows;  // candidate kernel rows
  double budget = 0.0;
  double lambda = 0.0;
  bool constrained = true;
  double best = kInf;
};

void oracle_recurse(OracleContext& ctx, std::size_t r, double partial_distortion,
                    std::vector<double>& partial_marginal) {
  const std::size_t R = ctx.ws.rows();
  const std::size_t K = ctx.ws.cols();
  if (r == R) {
    if (ctx.constrained) {
      if (partial_distortion <= ctx.budget + 1e-12)
        ctx.best = std::min(ctx.best, raw_divergence(ctx.ws, partial_marginal));
    } else {
      const double d = raw_divergence(ctx.ws, partial_marginal);
      const double obj = partial_distortion + ctx.lambda * d;
      if (obj < ctx.best) ctx.best = obj;
    }
    return;
  }
  const double wr = ctx.ws.w[r];
  for (const auto& row : ctx.rows) {
    double add = 0.0;
    for (std::size_t k = 0; k < K; ++k) {
      add += ctx.ws.f.at(r, k) * row[k];
      partial_marginal[k] += wr * row[k];
    }
    oracle_recurse(ctx, r + 1, partial_distortion + wr * add, partial_marginal);
    for (std::size_t k = 0; k < K; ++k) partial_marginal[k] -= wr * row[k];
  }
}

OracleContext make_oracle(const DegradationModel& model, const DistortionMeasure& dist,
                          DivergenceKind kind, std::size_t resolution) {
  if (resolution < 2 || resolution > 21)
    fail(ErrorCode::TooLarge, "oracle resolution must lie in [2, 21]");
  const std::size_t size =
      model.x_alphabet().size() * model.y_alphabet().size() * dist.xhat.size();
  if (size > 64) fail(ErrorCode::TooLarge, "oracle limited to |X| * |Y| * |Xhat| <= 64");

  OracleContext ctx;
  ctx.ws = make_workspace(model, dist, kind);
  const std::size_t steps = resolution - 1;
  std::vector<double> scratch;
  std::vector<std::vector<double>> raw;
  simplex_grid_rows(ctx.ws.cols(), steps, scratch, raw);
  ctx.rows.reserve(raw.size());
  for (auto& counts : raw) {
    std::vector<double> row(counts.size());
    for (std::size_t k = 0; k < counts.size(); ++k)
      row[k] = counts[k] / static_cast<double>(steps);
    ctx.rows.push_back(std::move(row));
  }
  return ctx;
}

}  // namespace

double brute_force_oracle(const DegradationModel& model, const DistortionMeasure& dist,
                          DivergenceKind kind, double distortion_budget,
                          std::size_t resolution) {
  OracleContext ctx = make_oracle(model, dist, kind, resolution);
  ctx.constrained = true;
  ctx.budget = distortion_budget;
  std::vector<double> marginal(ctx.ws.cols(), 0.0);
  oracle_recurse(ctx, 0, 0.0, marginal);
  return ctx.best;
}

double brute_force_lagrangian_oracle(const DegradationModel& model,
                                     const DistortionMeasure& dist, DivergenceKind kind,
                                     double lambda, std::size_t resolution) {
  OracleContext ctx = make_oracle(model, dist, kind, resolution);
  ctx.constrained = false;
  ctx.lambda = lambda;
  std::vector<double> marginal(ctx.ws.cols(), 0.0);
  oracle_recurse(ctx, 0, 0.0, marginal);
  return ctx.best;
}

Estimator mixture_estimator(const Estimator& a, const Estimator& b, double lambda) {
  if (!(lambda >= 0.0) || !(lambda <= 1.0))
    fail(ErrorCode::InvalidArgument, "mixture weight must lie in [0, 1]");
  if (!same_labels(a.input, b.input) || !same_labels(a.output, b.output))
    fail(ErrorCode::AlphabetMismatch, "mixture needs estimators over the same alphabets");
  if (lambda == 1.0) return a;
  if (lambda == 0.0) return b;
  Table rows(a.rows.rows(), a.rows.cols());
  for (std::size_t r = 0; r < rows.rows(); ++r)
    for (std::size_t k = 0; k < rows.cols(); ++k)
      rows.at(r, k) = lambda * a.rows.at(r, k) + (1.0 - lambda) * b.rows.at(r, k);
  return ConditionalKernel::checked(a.input, a.output, std::move(rows));
}

MixtureReport mixture_checks(const DegradationModel& model, const DistortionMeasure& dist,
                             DivergenceKind kind, const Estimator& a, const Estimator& b,
                             double lambda) {
  const Estimator mix = mixture_estimator(a, b, lambda);
  const DiscreteDistribution prior = model.prior_distribution();

  MixtureReport report;
  const double da = mean_distortion(model, a, dist);
  const double db = mean_distortion(model, b, dist);
  report.distortion_mix = mean_distortion(model, mix, dist);
  report.distortion_combo = lambda * da + (1.0 - lambda) * db;
  report.distortion_linear =
      std::abs(report.distortion_mix - report.distortion_combo) <= 1e-10;

  const double va = divergence(kind, prior, output_distribution(model, a));
  const double vb = divergence(kind, prior, output_distribution(model, b));
  report.divergence_mix = divergence(kind, prior, output_distribution(model, mix));
  report.divergence_combo = lambda * va + (1.0 - lambda) * vb;
  report.divergence_convex = std::isinf(report.divergence_combo) ||
                             report.divergence_mix <= report.divergence_combo + 1e-10;
  return report;
}

std::vector<std::pair<double, double>> lower_convex_envelope(
    std::vector<std::pair<double, double>> points) {
  std::vector<std::pair<double, double>> finite;
  finite.reserve(points.size());
  for (const auto& p : points)
    if (std::isfinite(p.first) && std::isfinite(p.second)) finite.push_back(p);
  std::sort(finite.begin(), finite.end());

  std::vector<std::pair<double, double>> uniq;
  for (const auto& p : finite) {
    if (!uniq.empty() && uniq.back().first == p.first) continue;  // keep the lower ordinate
    uniq.push_back(p);
  }

  std::vector<std::pair<double, double>> hull;
  for (const auto& p : uniq) {
    while (hull.size() >= 2) {
      const auto& o = hull[hull.size() - 2];
      const auto& a = hull[hull.size() - 1];
      const double cross = (a.first - o.first) * (p.second - o.second) -
                           (a.second - o.second) * (p.first - o.first);
      if (cross <= 0.0)
        hull.pop_back();
      else
        break;
    }
    hull.push_back(p);
  }

  // Keep only the non-increasing part, up to the first minimum.
  if (hull.empty()) return hull;
  std::size_t cut = 0;
  for (std::size_t i = 1; i < hull.size(); ++i)
    if (hull[i].second < hull[cut].second) cut = i;
  hull.resize(cut + 1);
  return hull;
}

std::string fmt17(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

void write_curve_csv(const TradeoffCurve& curve, std::ostream& out) {
  out << "lambda,distortion,perception,gap,converged\n";
  for (const auto& p : curve.points)
    out << fmt17(p.lambda) << ',' << fmt17(p.distortion) << ',' << fmt17(p.perception) << ','
        << fmt17(p.gap) << ',' << (p.converged ? '1' : '0') << '\n';
}

}  // namespace pdtk
