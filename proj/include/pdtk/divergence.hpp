#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "pdtk/model.hpp"

namespace pdtk {

// All divergences use natural logarithms. Infinite values are legitimate
// results (for example KL against a missing support), never errors.
enum class DivergenceKind {
  TotalVariation,
  KullbackLeibler,
  JensenShannon,
  Hellinger,  // squared Hellinger distance
  ChiSquare,
  Wasserstein1,
};

// Smooth kinds admit gradient-based minimization; the rest need subgradients.
bool is_smooth(DivergenceKind kind);
// Every listed kind is convex in its second argument; kept explicit so callers
// can assert it where convexity is load-bearing.
bool is_convex_in_second(DivergenceKind kind);
const char* kind_name(DivergenceKind kind);
std::optional<DivergenceKind> kind_from_name(const std::string& name);
std::vector<DivergenceKind> all_divergence_kinds();

// p and q must share an alphabet, except Wasserstein1 which is routed to the
// dedicated operation and only needs scalar values on each support.
double divergence(DivergenceKind kind, const DiscreteDistribution& p,
                  const DiscreteDistribution& q);

// Shared-support form: weights p and q sit on the same scalar values.
double wasserstein1(const std::vector<double>& values, const std::vector<double>& p,
                    const std::vector<double>& q);
// General form over two supports with scalar values.
double wasserstein1(const DiscreteDistribution& p, const DiscreteDistribution& q);

// Probability that an ideal observer tells p from q: 1/2 + TV(p, q) / 2.
double success_probability(const DiscreteDistribution& p, const DiscreteDistribution& q);

double entropy(const DiscreteDistribution& p);

// Decompositions of the expected log-probability sum_x p_hat(x) log p(x).
// derived_rhs = -kl - entropy is the identity that actually holds;
// printed_rhs = -kl + entropy is the commonly printed variant, reported so the
// sign discrepancy stays visible. residual compares lhs against derived_rhs,
// with matching infinities treated as residual zero.
struct MeanQualityIdentity {
  double lhs;
  double d_kl;
  double entropy;
  double derived_rhs;
  double printed_rhs;
  double residual;
};

MeanQualityIdentity mean_quality_identity(const DiscreteDistribution& p_hat,
                                          const DiscreteDistribution& p);

// Projects both distributions onto one uniform value grid spanning the union
// of their supports, so that alphabet-bound divergences can compare them.
std::pair<DiscreteDistribution, DiscreteDistribution> bin_onto_shared_grid(
    const DiscreteDistribution& p, const DiscreteDistribution& q, std::size_t n_bins = 512);

}  // namespace pdtk
