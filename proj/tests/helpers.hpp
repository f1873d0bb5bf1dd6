#pragma once

#include <cmath>
#include <cstddef>
#include <random>
#include <string>
#include <vector>

#include "pdtk/errors.hpp"
#include "pdtk/model.hpp"

namespace testutil {

using Rng = std::mt19937_64;

inline std::vector<double> random_simplex(Rng& rng, std::size_t n) {
  std::exponential_distribution<double> gap(1.0);
  std::vector<double> w(n);
  double sum = 0.0;
  for (auto& v : w) {
    v = gap(rng) + 1e-12;
    sum += v;
  }
  for (auto& v : w) v /= sum;
  return w;
}

// Simplex point with every coordinate at least `floor` (requires n * floor < 1).
inline std::vector<double> random_simplex_floored(Rng& rng, std::size_t n, double floor) {
  std::vector<double> w = random_simplex(rng, n);
  const double scale = 1.0 - static_cast<double>(n) * floor;
  for (auto& v : w) v = floor + scale * v;
  return w;
}

inline std::vector<double> random_values(Rng& rng, std::size_t n, double lo = -3.0,
                                         double hi = 3.0) {
  std::uniform_real_distribution<double> u(lo, hi);
  std::vector<double> v(n);
  for (auto& x : v) x = u(rng);
  return v;
}

inline pdtk::Alphabet labeled(const std::string& stem, std::size_t n) {
  std::vector<std::string> labels;
  labels.reserve(n);
  for (std::size_t i = 0; i < n; ++i) labels.push_back(stem + std::to_string(i));
  return pdtk::Alphabet::with_labels(std::move(labels));
}

inline pdtk::Table table_from(const std::vector<std::vector<double>>& rows) {
  pdtk::Table t(rows.size(), rows.empty() ? 0 : rows[0].size());
  for (std::size_t r = 0; r < rows.size(); ++r)
    for (std::size_t c = 0; c < rows[r].size(); ++c) t.at(r, c) = rows[r][c];
  return t;
}

inline pdtk::DegradationModel model_from(const std::vector<double>& prior_weights,
                                         const std::vector<std::vector<double>>& channel_rows,
                                         const std::vector<double>* x_values = nullptr) {
  const std::size_t nx = prior_weights.size();
  const std::size_t ny = channel_rows.empty() ? 0 : channel_rows[0].size();
  pdtk::Alphabet x = x_values ? pdtk::Alphabet::with_scalar_values(*x_values) : labeled("x", nx);
  pdtk::Alphabet y = labeled("y", ny);
  auto prior = pdtk::DiscreteDistribution::checked(x, prior_weights);
  auto channel = pdtk::ConditionalKernel::checked(x, y, table_from(channel_rows));
  return pdtk::DegradationModel::checked(std::move(prior), std::move(channel));
}

// Prior (0.5, 0.5) on values {-1, +1}, channel rows (0.9, 0.1) and (0.2, 0.8).
inline pdtk::DegradationModel binary_model() {
  static const std::vector<double> values{-1.0, 1.0};
  return model_from({0.5, 0.5}, {{0.9, 0.1}, {0.2, 0.8}}, &values);
}

// Symmetric bit flip with the given crossover probability, labels only.
inline pdtk::DegradationModel flip_model(double p) {
  return model_from({0.5, 0.5}, {{1.0 - p, p}, {p, 1.0 - p}});
}

inline pdtk::DegradationModel random_model(Rng& rng, std::size_t nx, std::size_t ny,
                                           bool with_values, double floor = 0.0) {
  std::vector<std::vector<double>> channel(nx);
  for (auto& row : channel)
    row = floor > 0.0 ? random_simplex_floored(rng, ny, floor) : random_simplex(rng, ny);
  const std::vector<double> prior =
      floor > 0.0 ? random_simplex_floored(rng, nx, floor) : random_simplex(rng, nx);
  if (!with_values) return model_from(prior, channel);
  const std::vector<double> values = random_values(rng, nx);
  return model_from(prior, channel, &values);
}

inline pdtk::Estimator random_estimator(Rng& rng, const pdtk::DegradationModel& model) {
  const std::size_t rows = model.retained_y().size();
  const std::size_t cols = model.x_alphabet().size();
  pdtk::Table t(rows, cols);
  for (std::size_t r = 0; r < rows; ++r) {
    const std::vector<double> w = random_simplex(rng, cols);
    for (std::size_t c = 0; c < cols; ++c) t.at(r, c) = w[c];
  }
  return pdtk::ConditionalKernel::checked(model.y_support_alphabet(), model.x_alphabet(),
                                          std::move(t));
}

inline bool non_increasing(const std::vector<double>& ys, double tol) {
  for (std::size_t i = 1; i < ys.size(); ++i)
    if (ys[i] > ys[i - 1] + tol) return false;
  return true;
}

// Midpoint-under-chord test on consecutive triples; triples with a degenerate
// abscissa span are skipped.
inline bool convex_by_chords(const std::vector<double>& xs, const std::vector<double>& ys,
                             double tol) {
  for (std::size_t i = 0; i + 2 < xs.size(); ++i) {
    const double span = xs[i + 2] - xs[i];
    if (!(span > 0.0)) continue;
    const double t = (xs[i + 1] - xs[i]) / span;
    const double chord = (1.0 - t) * ys[i] + t * ys[i + 2];
    if (ys[i + 1] > chord + tol) return false;
  }
  return true;
}

template <class F>
inline bool throws_code(F&& f, pdtk::ErrorCode want) {
  try {
    std::forward<F>(f)();
  } catch (const pdtk::Error& e) {
    return e.code() == want;
  } catch (...) {
    return false;
  }
  return false;
}

}  // namespace testutil
