#include "pdtk/model.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <set>
#include <sstream>

namespace pdtk {

namespace {

double checked_sum(const std::vector<double>& w, ErrorCode neg_code, const std::string& what) {
  double s = 0.0;
  for (std::size_t i = 0; i < w.size(); ++i) {
    if (!(w[i] >= 0.0)) fail(neg_code, what + ": negative weight at index " + std::to_string(i));
    s += w[i];
  }
  return s;
}

}  // namespace

std::string format_value(double v) {
  char buf[64];
  for (int prec = 1; prec <= 17; ++prec) {
    std::snprintf(buf, sizeof(buf), "%.*g", prec, v);
    if (std::strtod(buf, nullptr) == v) break;
  }
  return buf;
}

Alphabet Alphabet::with_labels(std::vector<std::string> labels) {
  Alphabet a;
  a.labels = std::move(labels);
  validate_alphabet(a);
  return a;
}

Alphabet Alphabet::with_scalar_values(const std::vector<double>& vals) {
  Alphabet a;
  a.labels.reserve(vals.size());
  std::vector<std::vector<double>> vv;
  vv.reserve(vals.size());
  for (double v : vals) {
    a.labels.push_back(format_value(v));
    vv.push_back({v});
  }
  a.values = std::move(vv);
  validate_alphabet(a);
  return a;
}

Alphabet Alphabet::with_labels_and_scalar_values(std::vector<std::string> labels,
                                                 const std::vector<double>& vals) {
  Alphabet a;
  a.labels = std::move(labels);
  std::vector<std::vector<double>> vv;
  vv.reserve(vals.size());
  for (double v : vals) vv.push_back({v});
  a.values = std::move(vv);
  validate_alphabet(a);
  return a;
}

void validate_alphabet(const Alphabet& a) {
  if (a.labels.empty()) fail(ErrorCode::InvalidArgument, "alphabet has no symbols");
  std::set<std::string> seen;
  for (const auto& l : a.labels) {
    if (l.empty()) fail(ErrorCode::InvalidArgument, "alphabet has an empty label");
    if (!seen.insert(l).second)
      fail(ErrorCode::InvalidArgument, "alphabet label repeated: " + l);
  }
  if (a.values) {
    if (a.values->size() != a.labels.size())
      fail(ErrorCode::InvalidArgument, "alphabet values not aligned with labels");
    const std::size_t dim = a.values->empty() ? 0 : (*a.values)[0].size();
    if (dim == 0) fail(ErrorCode::InvalidArgument, "alphabet values have zero dimension");
    for (const auto& v : *a.values) {
      if (v.size() != dim) fail(ErrorCode::InvalidArgument, "alphabet values have mixed dimensions");
      for (double c : v)
        if (!std::isfinite(c)) fail(ErrorCode::InvalidArgument, "alphabet value not finite");
    }
  }
}

bool same_labels(const Alphabet& a, const Alphabet& b) { return a.labels == b.labels; }

DiscreteDistribution DiscreteDistribution::checked(Alphabet alphabet, std::vector<double> weights) {
  DiscreteDistribution d;
  d.alphabet = std::move(alphabet);
  d.weights = std::move(weights);
  validate_distribution(d);
  return d;
}

void validate_distribution(const DiscreteDistribution& d) {
  validate_alphabet(d.alphabet);
  if (d.weights.size() != d.alphabet.size())
    fail(ErrorCode::InvalidArgument, "distribution weights not aligned with alphabet");
  const double s = checked_sum(d.weights, ErrorCode::NegativeWeight, "distribution");
  if (std::abs(s - 1.0) > kMassTolerance)
    fail(ErrorCode::SumNotOne, "distribution weights sum to " + format_value(s));
}

ConditionalKernel ConditionalKernel::checked(Alphabet input, Alphabet output, Table rows) {
  ConditionalKernel k;
  k.input = std::move(input);
  k.output = std::move(output);
  k.rows = std::move(rows);
  validate_kernel(k);
  return k;
}

void validate_kernel(const ConditionalKernel& k) {
  validate_alphabet(k.input);
  validate_alphabet(k.output);
  if (k.rows.rows() != k.input.size() || k.rows.cols() != k.output.size())
    fail(ErrorCode::InvalidArgument, "kernel table shape does not match alphabets");
  for (std::size_t r = 0; r < k.rows.rows(); ++r) {
    double s = 0.0;
    for (std::size_t c = 0; c < k.rows.cols(); ++c) {
      const double w = k.rows.at(r, c);
      if (!(w >= 0.0))
        fail(ErrorCode::NegativeWeight, "kernel row " + std::to_string(r) + " has a negative entry");
      s += w;
    }
    if (std::abs(s - 1.0) > kMassTolerance)
      fail(ErrorCode::SumNotOne,
           "kernel row " + std::to_string(r) + " sums to " + format_value(s));
  }
}

DegradationModel DegradationModel::checked(DiscreteDistribution prior, ConditionalKernel channel) {
  validate_distribution(prior);
  validate_kernel(channel);
  if (!same_labels(prior.alphabet, channel.input))
    fail(ErrorCode::AlphabetMismatch, "channel rows are not indexed by the prior alphabet");

  DegradationModel m;
  m.prior = std::move(prior);
  m.channel = std::move(channel);

  const std::size_t nx = m.prior.alphabet.size();
  const std::size_t ny = m.channel.output.size();
  m.y_marginal_.assign(ny, 0.0);
  for (std::size_t j = 0; j < ny; ++j) {
    double s = 0.0;
    for (std::size_t i = 0; i < nx; ++i) s += m.prior.weights[i] * m.channel.rows.at(i, j);
    m.y_marginal_[j] = s;
  }
  for (std::size_t j = 0; j < ny; ++j)
    if (m.y_marginal_[j] > 0.0) m.retained_y_.push_back(j);
  if (m.retained_y_.empty())
    fail(ErrorCode::InvalidArgument, "every observation symbol has zero probability");

  m.y_support_.labels.reserve(m.retained_y_.size());
  for (std::size_t j : m.retained_y_) m.y_support_.labels.push_back(m.channel.output.labels[j]);
  if (m.channel.output.values) {
    std::vector<std::vector<double>> vv;
    vv.reserve(m.retained_y_.size());
    for (std::size_t j : m.retained_y_) vv.push_back((*m.channel.output.values)[j]);
    m.y_support_.values = std::move(vv);
  }
  return m;
}

Posterior posterior(const DegradationModel& model) {
  const auto& ry = model.retained_y();
  const auto& py = model.y_marginal();
  const std::size_t nx = model.x_alphabet().size();

  Posterior post;
  for (std::size_t j = 0; j < model.y_alphabet().size(); ++j)
    if (py[j] <= 0.0) post.dropped_y.push_back(model.y_alphabet().labels[j]);

  Table rows(ry.size(), nx);
  for (std::size_t r = 0; r < ry.size(); ++r) {
    const std::size_t j = ry[r];
    for (std::size_t i = 0; i < nx; ++i)
      rows.at(r, i) = model.prior.weights[i] * model.channel.rows.at(i, j) / py[j];
  }
  post.kernel = ConditionalKernel::checked(model.y_support_alphabet(), model.x_alphabet(),
                                           std::move(rows));
  return post;
}

DistortionMeasure DistortionMeasure::checked(Alphabet x, Alphabet xhat, Table cost,
                                             std::string id) {
  validate_alphabet(x);
  validate_alphabet(xhat);
  if (cost.rows() != x.size() || cost.cols() != xhat.size())
    fail(ErrorCode::InvalidArgument, "distortion table shape does not match alphabets");
  for (std::size_t i = 0; i < cost.rows(); ++i)
    for (std::size_t j = 0; j < cost.cols(); ++j) {
      const double c = cost.at(i, j);
      if (!(c >= 0.0) || !std::isfinite(c))
        fail(ErrorCode::InvalidArgument, "distortion must be finite and non-negative");
      if (x.labels[i] == xhat.labels[j] && c != 0.0)
        fail(ErrorCode::InvalidArgument,
             "distortion between identical symbols must be zero: " + x.labels[i]);
    }
  DistortionMeasure d;
  d.x = std::move(x);
  d.xhat = std::move(xhat);
  d.cost = std::move(cost);
  d.id = std::move(id);
  return d;
}

namespace {

Table squared_distance_table(const std::vector<std::vector<double>>& a,
                             const std::vector<std::vector<double>>& b) {
  Table t(a.size(), b.size());
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < b.size(); ++j) {
      double s = 0.0;
      for (std::size_t k = 0; k < a[i].size(); ++k) {
        const double diff = a[i][k] - b[j][k];
        s += diff * diff;
      }
      t.at(i, j) = s;
    }
  return t;
}

}  // namespace

DistortionMeasure square_error_measure(const Alphabet& x, const Alphabet& xhat) {
  if (!x.has_values() || !xhat.has_values())
    fail(ErrorCode::MissingValues, "square error needs numeric values on both alphabets");
  if (x.value_dim() != xhat.value_dim())
    fail(ErrorCode::AlphabetMismatch, "square error needs values of equal dimension");
  return DistortionMeasure::checked(x, xhat, squared_distance_table(*x.values, *xhat.values),
                                    "square_error");
}

DistortionMeasure zero_one_measure(const Alphabet& x, const Alphabet& xhat) {
  Table t(x.size(), xhat.size());
  for (std::size_t i = 0; i < x.size(); ++i)
    for (std::size_t j = 0; j < xhat.size(); ++j)
      t.at(i, j) = (x.labels[i] == xhat.labels[j]) ? 0.0 : 1.0;
  return DistortionMeasure::checked(x, xhat, std::move(t), "zero_one");
}

DistortionMeasure feature_map_distortion(const Alphabet& x, const Alphabet& xhat,
                                         const std::vector<std::vector<double>>& features_x,
                                         const std::vector<std::vector<double>>& features_xhat) {
  if (features_x.size() != x.size() || features_xhat.size() != xhat.size())
    fail(ErrorCode::InvalidArgument, "feature lists not aligned with alphabets");
  if (features_x.empty() || features_xhat.empty())
    fail(ErrorCode::InvalidArgument, "feature lists must be non-empty");
  const std::size_t dim = features_x[0].size();
  for (const auto& f : features_x)
    if (f.size() != dim) fail(ErrorCode::InvalidArgument, "features have mixed dimensions");
  for (const auto& f : features_xhat)
    if (f.size() != dim) fail(ErrorCode::InvalidArgument, "features have mixed dimensions");
  Table t = squared_distance_table(features_x, features_xhat);
  // Shared labels must still cost zero; identical features guarantee it, and
  // conflicting features for the same label are rejected by the check below.
  return DistortionMeasure::checked(x, xhat, std::move(t), "feature_map");
}

JointDistribution JointDistribution::checked(Alphabet x, Alphabet xhat, Table mass) {
  validate_alphabet(x);
  validate_alphabet(xhat);
  if (mass.rows() != x.size() || mass.cols() != xhat.size())
    fail(ErrorCode::InvalidArgument, "joint table shape does not match alphabets");
  double s = 0.0;
  for (double w : mass.data()) {
    if (!(w >= 0.0)) fail(ErrorCode::NegativeWeight, "joint distribution has a negative entry");
    s += w;
  }
  if (std::abs(s - 1.0) > kMassTolerance)
    fail(ErrorCode::SumNotOne, "joint mass sums to " + format_value(s));
  JointDistribution j;
  j.x = std::move(x);
  j.xhat = std::move(xhat);
  j.mass = std::move(mass);
  return j;
}

namespace {

double normal_cdf(double z) { return 0.5 * std::erfc(-z / std::sqrt(2.0)); }

}  // namespace

ConditionalKernel gaussian_noise_channel(const std::vector<double>& x_values, double sigma,
                                         const GridSpec& grid) {
  if (!(sigma > 0.0)) fail(ErrorCode::NonPositiveSigma, "sigma must be positive");
  if (x_values.empty()) fail(ErrorCode::InvalidArgument, "no source values given");
  if (grid.n_bins < 3) fail(ErrorCode::InvalidArgument, "grid needs at least 3 bins");
  if (!(grid.lo < grid.hi)) fail(ErrorCode::InvalidArgument, "grid bounds must satisfy lo < hi");

  const double xmin = *std::min_element(x_values.begin(), x_values.end());
  const double xmax = *std::max_element(x_values.begin(), x_values.end());
  if (grid.lo > xmin - 6.0 * sigma + 1e-12 || grid.hi < xmax + 6.0 * sigma - 1e-12)
    fail(ErrorCode::GridTooNarrow, "grid must cover [min(x) - 6 sigma, max(x) + 6 sigma]");

  const std::size_t n = grid.n_bins;
  // Edges interpolated from both ends so that a symmetric grid has exactly
  // mirrored edges.
  std::vector<double> edges(n + 1);
  for (std::size_t k = 0; k <= n; ++k)
    edges[k] = (grid.lo * static_cast<double>(n - k) + grid.hi * static_cast<double>(k)) /
               static_cast<double>(n);
  std::vector<double> centers(n);
  for (std::size_t k = 0; k < n; ++k) centers[k] = 0.5 * (edges[k] + edges[k + 1]);

  Alphabet x_alph = Alphabet::with_scalar_values(x_values);
  Alphabet y_alph;
  y_alph.labels.reserve(n);
  std::vector<std::vector<double>> yv;
  yv.reserve(n);
  for (std::size_t k = 0; k < n; ++k) {
    y_alph.labels.push_back("y" + std::to_string(k));
    yv.push_back({centers[k]});
  }
  y_alph.values = std::move(yv);

  Table rows(x_values.size(), n);
  for (std::size_t i = 0; i < x_values.size(); ++i) {
    const double x = x_values[i];
    // Interior cumulative values; the end bins absorb the tails.
    double prev = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
      const double cur = (k + 1 == n) ? 1.0 : normal_cdf((edges[k + 1] - x) / sigma);
      rows.at(i, k) = std::max(0.0, cur - prev);
      prev = cur;
    }
  }
  return ConditionalKernel::checked(std::move(x_alph), std::move(y_alph), std::move(rows));
}

DegradationModel make_gaussian_model(const std::vector<double>& prior_weights,
                                     const std::vector<double>& x_values, double sigma,
                                     const GridSpec& grid) {
  ConditionalKernel channel = gaussian_noise_channel(x_values, sigma, grid);
  DiscreteDistribution prior = DiscreteDistribution::checked(channel.input, prior_weights);
  return DegradationModel::checked(std::move(prior), std::move(channel));
}

ConditionalCost conditional_cost(const DegradationModel& model, const DistortionMeasure& dist) {
  if (!same_labels(dist.x, model.x_alphabet()))
    fail(ErrorCode::AlphabetMismatch, "distortion source alphabet does not match the model");
  const Posterior post = posterior(model);
  const std::size_t nr = post.kernel.rows.rows();
  const std::size_t nk = dist.xhat.size();
  const std::size_t nx = dist.x.size();

  ConditionalCost cc;
  cc.y = post.kernel.input;
  cc.xhat = dist.xhat;
  cc.f = Table(nr, nk);
  for (std::size_t r = 0; r < nr; ++r)
    for (std::size_t k = 0; k < nk; ++k) {
      double s = 0.0;
      for (std::size_t i = 0; i < nx; ++i) s += dist.cost.at(i, k) * post.kernel.rows.at(r, i);
      cc.f.at(r, k) = s;
    }
  return cc;
}

std::vector<std::size_t> estimator_row_map(const DegradationModel& model, const Estimator& est) {
  const auto& ry = model.retained_y();
  std::vector<std::size_t> map(ry.size());
  if (same_labels(est.input, model.y_alphabet())) {
    for (std::size_t r = 0; r < ry.size(); ++r) map[r] = ry[r];
    return map;
  }
  if (same_labels(est.input, model.y_support_alphabet())) {
    for (std::size_t r = 0; r < ry.size(); ++r) map[r] = r;
    return map;
  }
  fail(ErrorCode::AlphabetMismatch, "estimator input alphabet does not match the observations");
}

DiscreteDistribution output_distribution(const DegradationModel& model, const Estimator& est) {
  const auto rmap = estimator_row_map(model, est);
  const auto& ry = model.retained_y();
  const auto& py = model.y_marginal();
  const std::size_t nk = est.output.size();

  std::vector<double> out(nk, 0.0);
  for (std::size_t r = 0; r < ry.size(); ++r) {
    const double w = py[ry[r]];
    for (std::size_t k = 0; k < nk; ++k) out[k] += w * est.rows.at(rmap[r], k);
  }
  return DiscreteDistribution::checked(est.output, std::move(out));
}

JointDistribution induced_joint(const DegradationModel& model, const Estimator& est) {
  const auto rmap = estimator_row_map(model, est);
  const Posterior post = posterior(model);
  const auto& ry = model.retained_y();
  const auto& py = model.y_marginal();
  const std::size_t nx = model.x_alphabet().size();
  const std::size_t nk = est.output.size();

  Table mass(nx, nk);
  for (std::size_t r = 0; r < ry.size(); ++r) {
    const double w = py[ry[r]];
    for (std::size_t i = 0; i < nx; ++i) {
      const double wx = w * post.kernel.rows.at(r, i);
      if (wx == 0.0) continue;
      for (std::size_t k = 0; k < nk; ++k) mass.at(i, k) += wx * est.rows.at(rmap[r], k);
    }
  }
  return JointDistribution::checked(model.x_alphabet(), est.output, std::move(mass));
}

double mean_distortion(const DegradationModel& model, const Estimator& est,
                       const DistortionMeasure& dist) {
  if (!same_labels(dist.xhat, est.output))
    fail(ErrorCode::AlphabetMismatch, "distortion output alphabet does not match the estimator");
  const ConditionalCost cc = conditional_cost(model, dist);
  const auto rmap = estimator_row_map(model, est);
  const auto& ry = model.retained_y();
  const auto& py = model.y_marginal();

  double total = 0.0;
  for (std::size_t r = 0; r < ry.size(); ++r) {
    double row = 0.0;
    for (std::size_t k = 0; k < cc.f.cols(); ++k) row += cc.f.at(r, k) * est.rows.at(rmap[r], k);
    total += py[ry[r]] * row;
  }
  return total;
}

}  // namespace pdtk
