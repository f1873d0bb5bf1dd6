#include "pdtk/divergence.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace pdtk {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void require_shared_alphabet(const DiscreteDistribution& p, const DiscreteDistribution& q) {
  if (!same_labels(p.alphabet, q.alphabet))
    fail(ErrorCode::AlphabetMismatch, "divergence needs a shared alphabet");
}

double total_variation(const std::vector<double>& p, const std::vector<double>& q) {
  double s = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) s += std::abs(p[i] - q[i]);
  return 0.5 * s;
}

double kl(const std::vector<double>& p, const std::vector<double>& q) {
  double s = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (p[i] == 0.0) continue;
    if (q[i] == 0.0) return kInf;
    s += p[i] * std::log(p[i] / q[i]);
  }
  return s;
}

double jensen_shannon(const std::vector<double>& p, const std::vector<double>& q) {
  double s = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    const double m = 0.5 * (p[i] + q[i]);
    if (p[i] > 0.0) s += 0.5 * p[i] * std::log(p[i] / m);
    if (q[i] > 0.0) s += 0.5 * q[i] * std::log(q[i] / m);
  }
  return s;
}

double hellinger_squared(const std::vector<double>& p, const std::vector<double>& q) {
  double s = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    const double d = std::sqrt(p[i]) - std::sqrt(q[i]);
    s += d * d;
  }
  return 0.5 * s;
}

double chi_square(const std::vector<double>& p, const std::vector<double>& q) {
  double s = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (q[i] == 0.0) {
      if (p[i] > 0.0) return kInf;
      continue;
    }
    const double d = p[i] - q[i];
    s += d * d / q[i];
  }
  return s;
}

std::vector<double> scalar_values_or_fail(const DiscreteDistribution& d) {
  if (!d.alphabet.has_scalar_values())
    fail(ErrorCode::MissingValues, "Wasserstein-1 needs scalar values on the support");
  std::vector<double> v(d.alphabet.size());
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = d.alphabet.scalar_value(i);
  return v;
}

}  // namespace

bool is_smooth(DivergenceKind kind) {
  switch (kind) {
    case DivergenceKind::KullbackLeibler:
    case DivergenceKind::JensenShannon:
    case DivergenceKind::Hellinger:
    case DivergenceKind::ChiSquare:
      return true;
    case DivergenceKind::TotalVariation:
    case DivergenceKind::Wasserstein1:
      return false;
  }
  return false;
}

bool is_convex_in_second(DivergenceKind) { return true; }

const char* kind_name(DivergenceKind kind) {
  switch (kind) {
    case DivergenceKind::TotalVariation: return "tv";
    case DivergenceKind::KullbackLeibler: return "kl";
    case DivergenceKind::JensenShannon: return "js";
    case DivergenceKind::Hellinger: return "hellinger";
    case DivergenceKind::ChiSquare: return "chi2";
    case DivergenceKind::Wasserstein1: return "w1";
  }
  return "?";
}

std::optional<DivergenceKind> kind_from_name(const std::string& name) {
  if (name == "tv") return DivergenceKind::TotalVariation;
  if (name == "kl") return DivergenceKind::KullbackLeibler;
  if (name == "js") return DivergenceKind::JensenShannon;
  if (name == "hellinger") return DivergenceKind::Hellinger;
  if (name == "chi2") return DivergenceKind::ChiSquare;
  if (name == "w1") return DivergenceKind::Wasserstein1;
  return std::nullopt;
}

std::vector<DivergenceKind> all_divergence_kinds() {
  return {DivergenceKind::TotalVariation, DivergenceKind::KullbackLeibler,
          DivergenceKind::JensenShannon, DivergenceKind::Hellinger,
          DivergenceKind::ChiSquare,     DivergenceKind::Wasserstein1};
}

double divergence(DivergenceKind kind, const DiscreteDistribution& p,
                  const DiscreteDistribution& q) {
  if (kind == DivergenceKind::Wasserstein1) return wasserstein1(p, q);
  require_shared_alphabet(p, q);
  switch (kind) {
    case DivergenceKind::TotalVariation: return total_variation(p.weights, q.weights);
    case DivergenceKind::KullbackLeibler: return kl(p.weights, q.weights);
    case DivergenceKind::JensenShannon: return jensen_shannon(p.weights, q.weights);
    case DivergenceKind::Hellinger: return hellinger_squared(p.weights, q.weights);
    case DivergenceKind::ChiSquare: return chi_square(p.weights, q.weights);
    case DivergenceKind::Wasserstein1: break;
  }
  fail(ErrorCode::InvalidArgument, "unknown divergence kind");
}

double wasserstein1(const std::vector<double>& values, const std::vector<double>& p,
                    const std::vector<double>& q) {
  if (values.size() != p.size() || values.size() != q.size())
    fail(ErrorCode::InvalidArgument, "Wasserstein-1 inputs not aligned");
  std::vector<std::size_t> order(values.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });
  double w1 = 0.0;
  double cum = 0.0;
  for (std::size_t k = 0; k + 1 < order.size(); ++k) {
    cum += p[order[k]] - q[order[k]];
    w1 += std::abs(cum) * (values[order[k + 1]] - values[order[k]]);
  }
  return w1;
}

double wasserstein1(const DiscreteDistribution& p, const DiscreteDistribution& q) {
  const std::vector<double> vp = scalar_values_or_fail(p);
  const std::vector<double> vq = scalar_values_or_fail(q);
  std::vector<double> values;
  std::vector<double> pw;
  std::vector<double> qw;
  values.reserve(vp.size() + vq.size());
  for (std::size_t i = 0; i < vp.size(); ++i) {
    values.push_back(vp[i]);
    pw.push_back(p.weights[i]);
    qw.push_back(0.0);
  }
  for (std::size_t i = 0; i < vq.size(); ++i) {
    values.push_back(vq[i]);
    pw.push_back(0.0);
    qw.push_back(q.weights[i]);
  }
  return wasserstein1(values, pw, qw);
}

double success_probability(const DiscreteDistribution& p, const DiscreteDistribution& q) {
  require_shared_alphabet(p, q);
  return 0.5 + 0.5 * total_variation(p.weights, q.weights);
}

double entropy(const DiscreteDistribution& p) {
  double h = 0.0;
  for (double w : p.weights)
    if (w > 0.0) h -= w * std::log(w);
  return h;
}

MeanQualityIdentity mean_quality_identity(const DiscreteDistribution& p_hat,
                                          const DiscreteDistribution& p) {
  require_shared_alphabet(p_hat, p);
  double lhs = 0.0;
  for (std::size_t i = 0; i < p.weights.size(); ++i) {
    if (p_hat.weights[i] == 0.0) continue;
    if (p.weights[i] == 0.0) {
      lhs = -kInf;
      break;
    }
    lhs += p_hat.weights[i] * std::log(p.weights[i]);
  }
  MeanQualityIdentity out;
  out.lhs = lhs;
  out.d_kl = kl(p_hat.weights, p.weights);
  out.entropy = pdtk::entropy(p_hat);
  out.derived_rhs = -out.d_kl - out.entropy;
  out.printed_rhs = -out.d_kl + out.entropy;
  if (std::isinf(out.lhs) && std::isinf(out.derived_rhs) &&
      std::signbit(out.lhs) == std::signbit(out.derived_rhs)) {
    out.residual = 0.0;
  } else {
    out.residual = out.lhs - out.derived_rhs;
  }
  return out;
}

std::pair<DiscreteDistribution, DiscreteDistribution> bin_onto_shared_grid(
    const DiscreteDistribution& p, const DiscreteDistribution& q, std::size_t n_bins) {
  if (n_bins == 0) fail(ErrorCode::InvalidArgument, "need at least one bin");
  const std::vector<double> vp = scalar_values_or_fail(p);
  const std::vector<double> vq = scalar_values_or_fail(q);
  double lo = kInf;
  double hi = -kInf;
  for (double v : vp) { lo = std::min(lo, v); hi = std::max(hi, v); }
  for (double v : vq) { lo = std::min(lo, v); hi = std::max(hi, v); }

  Alphabet bins;
  std::vector<std::vector<double>> centers;
  bins.labels.reserve(n_bins);
  centers.reserve(n_bins);
  const double width = (hi - lo) / static_cast<double>(n_bins);
  for (std::size_t k = 0; k < n_bins; ++k) {
    bins.labels.push_back("b" + std::to_string(k));
    centers.push_back({lo + (static_cast<double>(k) + 0.5) * width});
  }
  bins.values = std::move(centers);

  auto project = [&](const std::vector<double>& vals, const std::vector<double>& w) {
    std::vector<double> out(n_bins, 0.0);
    for (std::size_t i = 0; i < vals.size(); ++i) {
      std::size_t k = 0;
      if (hi > lo) {
        const double t = (vals[i] - lo) / (hi - lo) * static_cast<double>(n_bins);
        k = std::min<std::size_t>(n_bins - 1, static_cast<std::size_t>(std::max(0.0, t)));
      }
      out[k] += w[i];
    }
    return out;
  };
  return {DiscreteDistribution::checked(bins, project(vp, p.weights)),
          DiscreteDistribution::checked(bins, project(vq, q.weights))};
}

}  // namespace pdtk
