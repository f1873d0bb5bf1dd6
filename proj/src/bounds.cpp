#include "pdtk/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <queue>

#include "pdtk/estimators.hpp"

namespace pdtk {

namespace {

constexpr double kUnit = 1e-9;
constexpr std::int64_t kTotalUnits = 1000000000;
constexpr double kInf = std::numeric_limits<double>::infinity();

std::vector<std::int64_t> to_units(const std::vector<double>& w) {
  std::vector<std::int64_t> units(w.size());
  std::int64_t total = 0;
  std::size_t largest = 0;
  for (std::size_t i = 0; i < w.size(); ++i) {
    if (!(w[i] >= 0.0)) fail(ErrorCode::NegativeWeight, "transport marginal has a negative atom");
    units[i] = std::llround(w[i] / kUnit);
    total += units[i];
    if (w[i] > w[largest]) largest = i;
  }
  units[largest] += kTotalUnits - total;
  if (units[largest] < 0)
    fail(ErrorCode::InvalidArgument, "transport marginal does not sum to one");
  return units;
}

}  // namespace

TransportResult solve_transport(const TransportProblem& problem) {
  const std::size_t m = problem.supply.size();
  const std::size_t n = problem.demand.size();
  if (m == 0 || n == 0) fail(ErrorCode::InvalidArgument, "transport needs non-empty marginals");
  if (problem.cost.rows() != m || problem.cost.cols() != n)
    fail(ErrorCode::InvalidArgument, "transport cost table shape mismatch");
  for (double c : problem.cost.data())
    if (!(c >= 0.0) || !std::isfinite(c))
      fail(ErrorCode::InvalidArgument, "transport costs must be finite and non-negative");

  std::vector<std::int64_t> rs = to_units(problem.supply);
  std::vector<std::int64_t> rd = to_units(problem.demand);
  std::vector<std::vector<std::int64_t>> flow(m, std::vector<std::int64_t>(n, 0));

  // Node ids: sources 0..m-1, sinks m..m+n-1.
  std::vector<double> phi(m + n, 0.0);
  std::vector<double> dist(m + n);
  std::vector<int> parent(m + n);  // incoming arc partner for path recovery

  std::int64_t remaining = kTotalUnits;
  while (remaining > 0) {
    std::fill(dist.begin(), dist.end(), kInf);
    std::fill(parent.begin(), parent.end(), -1);
    using Item = std::pair<double, std::size_t>;
    std::priority_queue<Item, std::vector<Item>, std::greater<Item>> heap;
    for (std::size_t i = 0; i < m; ++i)
      if (rs[i] > 0) {
        dist[i] = 0.0;
        heap.push({0.0, i});
      }
    while (!heap.empty()) {
      const auto [d, u] = heap.top();
      heap.pop();
      if (d > dist[u]) continue;
      if (u < m) {
        for (std::size_t j = 0; j < n; ++j) {
          const double rc = std::max(0.0, problem.cost.at(u, j) + phi[u] - phi[m + j]);
          const double nd = d + rc;
          if (nd < dist[m + j] - 1e-15) {
            dist[m + j] = nd;
            parent[m + j] = static_cast<int>(u);
            heap.push({nd, m + j});
          }
        }
      } else {
        const std::size_t j = u - m;
        for (std::size_t i = 0; i < m; ++i) {
          if (flow[i][j] <= 0) continue;
          const double rc = std::max(0.0, -problem.cost.at(i, j) + phi[m + j] - phi[i]);
          const double nd = d + rc;
          if (nd < dist[i] - 1e-15) {
            dist[i] = nd;
            parent[i] = static_cast<int>(m + j);
            heap.push({nd, i});
          }
        }
      }
    }

    std::size_t best_sink = m + n;
    double best = kInf;
    for (std::size_t j = 0; j < n; ++j)
      if (rd[j] > 0 && dist[m + j] < best) {
        best = dist[m + j];
        best_sink = m + j;
      }
    if (best_sink == m + n)
      fail(ErrorCode::InvalidArgument, "transport ran out of reachable demand");

    for (std::size_t u = 0; u < m + n; ++u)
      if (std::isfinite(dist[u])) phi[u] += dist[u];

    // Walk back to the path's source, collecting the bottleneck.
    std::int64_t push = rd[best_sink - m];
    std::size_t u = best_sink;
    while (true) {
      const int p = parent[u];
      if (u >= m) {
        if (p < 0) break;  // unreachable structurally; sinks always have parents
        u = static_cast<std::size_t>(p);
        if (parent[u] < 0) break;
      } else {
        const std::size_t j = static_cast<std::size_t>(parent[u]) - m;
        push = std::min(push, flow[u][j]);
        u = static_cast<std::size_t>(parent[u]);
      }
    }
    push = std::min(push, rs[u]);

    std::size_t v = best_sink;
    while (true) {
      const int p = parent[v];
      if (v >= m) {
        const std::size_t i = static_cast<std::size_t>(p);
        flow[i][v - m] += push;
        v = i;
        if (parent[v] < 0) break;
      } else {
        const std::size_t j = static_cast<std::size_t>(p) - m;
        flow[v][j] -= push;
        v = static_cast<std::size_t>(p);
      }
    }
    rs[v] -= push;
    rd[best_sink - m] -= push;
    remaining -= push;
  }

  TransportResult result;
  result.plan = Table(m, n);
  double value = 0.0;
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      const double mass = static_cast<double>(flow[i][j]) * kUnit;
      result.plan.at(i, j) = mass;
      value += mass * problem.cost.at(i, j);
    }
  result.value = value;
  return result;
}

double transport_bruteforce_oracle(const TransportProblem& problem) {
  const std::size_t m = problem.supply.size();
  const std::size_t n = problem.demand.size();
  if (m == 0 || n == 0) fail(ErrorCode::InvalidArgument, "transport needs non-empty marginals");
  if (m > 6 || n > 6) fail(ErrorCode::TooLarge, "oracle limited to 6x6 marginals");

  const std::size_t edges = m * n;
  const std::size_t tree_size = m + n - 1;
  std::vector<std::size_t> pick(tree_size);
  double best = kInf;

  std::vector<int> uf(m + n);
  std::vector<double> node_balance(m + n);
  std::vector<std::vector<std::pair<std::size_t, std::size_t>>> adj(m + n);

  auto find = [&](std::size_t x) {
    while (uf[x] != static_cast<int>(x)) {
      uf[x] = uf[uf[x]];
      x = static_cast<std::size_t>(uf[x]);
    }
    return x;
  };

  // Enumerate all (m+n-1)-subsets of edges; keep the spanning trees; solve the
  // unique basic solution on each by leaf peeling.
  auto evaluate = [&]() {
    for (std::size_t v = 0; v < m + n; ++v) uf[v] = static_cast<int>(v);
    for (std::size_t e : pick) {
      const std::size_t a = e / n;
      const std::size_t b = m + e % n;
      const std::size_t ra = find(a);
      const std::size_t rb = find(b);
      if (ra == rb) return;  // cycle: not a tree
      uf[ra] = static_cast<int>(rb);
    }

    for (auto& a : adj) a.clear();
    for (std::size_t e : pick) {
      const std::size_t i = e / n;
      const std::size_t j = e % n;
      adj[i].push_back({m + j, e});
      adj[m + j].push_back({i, e});
    }
    for (std::size_t i = 0; i < m; ++i) node_balance[i] = problem.supply[i];
    for (std::size_t j = 0; j < n; ++j) node_balance[m + j] = problem.demand[j];

    std::vector<std::size_t> degree(m + n);
    for (std::size_t v = 0; v < m + n; ++v) degree[v] = adj[v].size();
    std::vector<char> used_edge(edges, 0);
    std::vector<std::size_t> leaves;
    for (std::size_t v = 0; v < m + n; ++v)
      if (degree[v] == 1) leaves.push_back(v);

    double cost = 0.0;
    bool feasible = true;
    std::size_t processed = 0;
    while (!leaves.empty()) {
      const std::size_t v = leaves.back();
      leaves.pop_back();
      if (degree[v] != 1) continue;
      std::size_t other = m + n;
      std::size_t edge = edges;
      for (const auto& [w, e] : adj[v])
        if (!used_edge[e]) {
          other = w;
          edge = e;
          break;
        }
      if (edge == edges) break;
      const double amount = node_balance[v];
      if (amount < -1e-12) {
        feasible = false;
        break;
      }
      cost += std::max(0.0, amount) * problem.cost.at(edge / n, edge % n);
      node_balance[other] -= amount;
      node_balance[v] = 0.0;
      used_edge[edge] = 1;
      --degree[v];
      if (--degree[other] == 1) leaves.push_back(other);
      ++processed;
    }
    if (feasible && processed == tree_size && cost < best) best = cost;
  };

  // Lexicographic combinations of edge indices.
  for (std::size_t i = 0; i < tree_size; ++i) pick[i] = i;
  while (true) {
    evaluate();
    std::size_t k = tree_size;
    while (k > 0 && pick[k - 1] == edges - tree_size + k - 1) --k;
    if (k == 0) break;
    ++pick[k - 1];
    for (std::size_t i = k; i < tree_size; ++i) pick[i] = pick[i - 1] + 1;
  }
  return best;
}

DMinResult d_min(const DegradationModel& model, const DistortionMeasure& dist) {
  const ConditionalCost cc = conditional_cost(model, dist);
  const std::size_t nr = cc.f.rows();
  const std::size_t nk = cc.f.cols();
  const auto& ry = model.retained_y();
  const auto& py = model.y_marginal();

  Table rows(nr, nk, 0.0);
  DMinResult result;
  result.value = 0.0;
  for (std::size_t r = 0; r < nr; ++r) {
    std::size_t arg = 0;
    bool tie = false;
    for (std::size_t k = 1; k < nk; ++k) {
      if (cc.f.at(r, k) < cc.f.at(r, arg)) {
        arg = k;
        tie = false;
      } else if (cc.f.at(r, k) == cc.f.at(r, arg)) {
        tie = true;
      }
    }
    rows.at(r, arg) = 1.0;
    if (tie) result.tie_rows.push_back(r);
    result.value += py[ry[r]] * cc.f.at(r, arg);
  }
  result.estimator = ConditionalKernel::checked(cc.y, cc.xhat, std::move(rows));
  return result;
}

DMaxResult d_max(const DegradationModel& model, const DistortionMeasure& dist) {
  if (!same_labels(dist.xhat, model.x_alphabet()))
    fail(ErrorCode::AlphabetMismatch,
         "matching the prior needs the reconstruction alphabet to equal the source alphabet");
  const ConditionalCost cc = conditional_cost(model, dist);
  const auto& ry = model.retained_y();
  const auto& py = model.y_marginal();

  TransportProblem tp;
  tp.supply.reserve(ry.size());
  for (std::size_t j : ry) tp.supply.push_back(py[j]);
  tp.demand = model.prior.weights;
  tp.cost = cc.f;
  const TransportResult tr = solve_transport(tp);

  // Rows of the transported plan, renormalized by the shipped row mass, give
  // the optimal prior-matching estimator.
  Table rows(ry.size(), tp.demand.size(), 0.0);
  for (std::size_t r = 0; r < ry.size(); ++r) {
    double mass = 0.0;
    for (std::size_t k = 0; k < tp.demand.size(); ++k) mass += tr.plan.at(r, k);
    if (mass > 0.0) {
      for (std::size_t k = 0; k < tp.demand.size(); ++k)
        rows.at(r, k) = tr.plan.at(r, k) / mass;
    } else {
      std::size_t arg = 0;
      for (std::size_t k = 1; k < tp.demand.size(); ++k)
        if (cc.f.at(r, k) < cc.f.at(r, arg)) arg = k;
      rows.at(r, arg) = 1.0;
    }
  }
  DMaxResult result;
  result.value = tr.value;
  result.estimator = ConditionalKernel::checked(cc.y, cc.xhat, std::move(rows));
  return result;
}

FactorTwoReport factor_two_report(const DegradationModel& model) {
  if (!model.x_alphabet().has_values())
    fail(ErrorCode::MissingValues, "square-error bounds need numeric source values");

  const Estimator mmse = mmse_estimator(model);
  const DistortionMeasure to_means = square_error_measure(model.x_alphabet(), mmse.output);
  const double mmse_value = mean_distortion(model, mmse, to_means);

  const Estimator sampler = posterior_sampling_estimator(model);
  const DistortionMeasure on_source = square_error_measure(model.x_alphabet(), model.x_alphabet());
  const double sampling = mean_distortion(model, sampler, on_source);

  const DMaxResult dm = d_max(model, on_source);

  FactorTwoReport report;
  report.mmse_value = mmse_value;
  report.sampling_mse = sampling;
  report.d_max_value = dm.value;
  report.ratio = (mmse_value == 0.0 && sampling == 0.0) ? 2.0 : sampling / mmse_value;
  report.ratio_is_two = std::abs(report.ratio - 2.0) <= 1e-9 * 2.0;
  report.d_max_within_bound = dm.value <= sampling + 1e-9;
  return report;
}

}  // namespace pdtk
