#pragma once

#include <optional>
#include <string>
#include <vector>

#include "pdtk/errors.hpp"
#include "pdtk/table.hpp"

namespace pdtk {

// Tolerance for probability mass sums. Distributions and kernel rows must sum
// to one within this bound; nothing is ever silently renormalized.
inline constexpr double kMassTolerance = 1e-9;

// Finite symbol set. Labels are unique and non-empty; numeric values are
// optional and, when present, are aligned with the labels and share one
// dimension.
struct Alphabet {
  std::vector<std::string> labels;
  std::optional<std::vector<std::vector<double>>> values;

  std::size_t size() const { return labels.size(); }
  bool has_values() const { return values.has_value(); }
  std::size_t value_dim() const { return has_values() && !values->empty() ? (*values)[0].size() : 0; }
  bool has_scalar_values() const { return has_values() && value_dim() == 1; }
  double scalar_value(std::size_t i) const { return (*values)[i][0]; }

  static Alphabet with_labels(std::vector<std::string> labels);
  // Labels are derived from the values themselves (shortest exact decimal form).
  static Alphabet with_scalar_values(const std::vector<double>& vals);
  static Alphabet with_labels_and_scalar_values(std::vector<std::string> labels,
                                                const std::vector<double>& vals);
};

void validate_alphabet(const Alphabet& a);
bool same_labels(const Alphabet& a, const Alphabet& b);

// Probability mass function over an alphabet. Weights are non-negative and sum
// to one within kMassTolerance.
struct DiscreteDistribution {
  Alphabet alphabet;
  std::vector<double> weights;

  static DiscreteDistribution checked(Alphabet alphabet, std::vector<double> weights);
};

void validate_distribution(const DiscreteDistribution& d);

// Row-stochastic kernel: one row per input symbol, one column per output
// symbol.
struct ConditionalKernel {
  Alphabet input;
  Alphabet output;
  Table rows;

  static ConditionalKernel checked(Alphabet input, Alphabet output, Table rows);
};

void validate_kernel(const ConditionalKernel& k);

// An estimator is a row-stochastic kernel from observations to reconstructions.
using Estimator = ConditionalKernel;

// Prior over the source alphabet together with an observation channel whose
// rows are indexed by the source alphabet.
struct DegradationModel {
  DiscreteDistribution prior;
  ConditionalKernel channel;

  static DegradationModel checked(DiscreteDistribution prior, ConditionalKernel channel);

  const Alphabet& x_alphabet() const { return prior.alphabet; }
  const Alphabet& y_alphabet() const { return channel.output; }
  const std::vector<double>& y_marginal() const { return y_marginal_; }
  // Indices of observation symbols with positive marginal probability.
  const std::vector<std::size_t>& retained_y() const { return retained_y_; }
  // Sub-alphabet holding only the retained observation symbols.
  const Alphabet& y_support_alphabet() const { return y_support_; }
  DiscreteDistribution prior_distribution() const { return prior; }

 private:
  std::vector<double> y_marginal_;
  std::vector<std::size_t> retained_y_;
  Alphabet y_support_;
};

// Posterior kernel p(x | y) over the retained observation symbols, along with
// the labels of observation symbols dropped for having zero probability.
struct Posterior {
  ConditionalKernel kernel;
  std::vector<std::string> dropped_y;
};

Posterior posterior(const DegradationModel& model);

// Pairwise cost between source symbols (rows) and reconstruction symbols
// (columns). Costs are non-negative, and zero on shared labels.
struct DistortionMeasure {
  Alphabet x;
  Alphabet xhat;
  Table cost;
  std::string id;

  static DistortionMeasure checked(Alphabet x, Alphabet xhat, Table cost, std::string id);
};

DistortionMeasure square_error_measure(const Alphabet& x, const Alphabet& xhat);
DistortionMeasure zero_one_measure(const Alphabet& x, const Alphabet& xhat);
DistortionMeasure feature_map_distortion(const Alphabet& x, const Alphabet& xhat,
                                         const std::vector<std::vector<double>>& features_x,
                                         const std::vector<std::vector<double>>& features_xhat);

// Joint mass over source and reconstruction symbols.
struct JointDistribution {
  Alphabet x;
  Alphabet xhat;
  Table mass;

  static JointDistribution checked(Alphabet x, Alphabet xhat, Table mass);
};

// Discretized additive Gaussian noise channel. Each source value x maps to a
// row of bin masses for x + N(0, sigma^2) over n_bins equal-width bins
// spanning [lo, hi]; the two end bins absorb the tails. The grid must cover
// [min(x) - 6 sigma, max(x) + 6 sigma].
struct GridSpec {
  double lo;
  double hi;
  std::size_t n_bins;
};

ConditionalKernel gaussian_noise_channel(const std::vector<double>& x_values, double sigma,
                                         const GridSpec& grid);

DegradationModel make_gaussian_model(const std::vector<double>& prior_weights,
                                     const std::vector<double>& x_values, double sigma,
                                     const GridSpec& grid);

// Expected cost of each reconstruction symbol given each retained observation:
// f(xhat, y) = sum_x cost(x, xhat) p(x | y).
struct ConditionalCost {
  Alphabet y;     // retained observation symbols
  Alphabet xhat;  // reconstruction symbols
  Table f;        // f.at(y_index, xhat_index)
};

ConditionalCost conditional_cost(const DegradationModel& model, const DistortionMeasure& dist);

// Maps each retained observation (position in model.retained_y()) to the
// estimator row index. The estimator input alphabet must equal either the full
// observation alphabet or the retained sub-alphabet.
std::vector<std::size_t> estimator_row_map(const DegradationModel& model, const Estimator& est);

DiscreteDistribution output_distribution(const DegradationModel& model, const Estimator& est);
JointDistribution induced_joint(const DegradationModel& model, const Estimator& est);
double mean_distortion(const DegradationModel& model, const Estimator& est,
                       const DistortionMeasure& dist);

// Shortest decimal string that parses back to exactly the same double.
std::string format_value(double v);

}  // namespace pdtk
