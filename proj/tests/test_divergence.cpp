#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>
#include <limits>

#include "doctest.h"
#include "helpers.hpp"
#include "pdtk/divergence.hpp"

using namespace pdtk;
using namespace testutil;

namespace {

DiscreteDistribution on_labels(const Alphabet& a, std::vector<double> w) {
  return DiscreteDistribution::checked(a, std::move(w));
}

const Alphabet kPair = Alphabet::with_labels({"a", "b"});
const Alphabet kValued = Alphabet::with_scalar_values({-1.0, 0.0, 1.0});

}  // namespace

TEST_CASE("kind metadata") {
  CHECK(all_divergence_kinds().size() == 6);
  CHECK(is_smooth(DivergenceKind::KullbackLeibler));
  CHECK(is_smooth(DivergenceKind::JensenShannon));
  CHECK(is_smooth(DivergenceKind::Hellinger));
  CHECK(is_smooth(DivergenceKind::ChiSquare));
  CHECK_FALSE(is_smooth(DivergenceKind::TotalVariation));
  CHECK_FALSE(is_smooth(DivergenceKind::Wasserstein1));
  for (DivergenceKind kind : all_divergence_kinds()) {
    CHECK(is_convex_in_second(kind));
    CHECK(kind_from_name(kind_name(kind)) == kind);
  }
  CHECK_FALSE(kind_from_name("no_such_kind").has_value());
}

TEST_CASE("frozen pair values") {
  const auto p = on_labels(kPair, {0.5, 0.5});
  const auto q = on_labels(kPair, {0.75, 0.25});
  CHECK(divergence(DivergenceKind::TotalVariation, p, q) == 0.25);
  CHECK(divergence(DivergenceKind::KullbackLeibler, p, q) ==
        doctest::Approx(0.5 * std::log(4.0 / 3.0)).epsilon(1e-13));

  // Chi-square of (p - q)^2 / q summed over the support.
  const double chi2 = 0.0625 / 0.75 + 0.0625 / 0.25;
  CHECK(divergence(DivergenceKind::ChiSquare, p, q) == doctest::Approx(chi2).epsilon(1e-13));

  const double hell = 0.5 * (std::pow(std::sqrt(0.5) - std::sqrt(0.75), 2) +
                             std::pow(std::sqrt(0.5) - std::sqrt(0.25), 2));
  CHECK(divergence(DivergenceKind::Hellinger, p, q) == doctest::Approx(hell).epsilon(1e-13));

  // Jensen-Shannon against the midpoint, from first principles.
  const auto mid = on_labels(kPair, {0.625, 0.375});
  const double js = 0.5 * divergence(DivergenceKind::KullbackLeibler, p, mid) +
                    0.5 * divergence(DivergenceKind::KullbackLeibler, q, mid);
  CHECK(divergence(DivergenceKind::JensenShannon, p, q) == doctest::Approx(js).epsilon(1e-12));
}

TEST_CASE("disjoint supports") {
  const auto p = on_labels(kPair, {1.0, 0.0});
  const auto q = on_labels(kPair, {0.0, 1.0});
  CHECK(divergence(DivergenceKind::TotalVariation, p, q) == 1.0);
  CHECK(std::isinf(divergence(DivergenceKind::KullbackLeibler, p, q)));
  CHECK(std::isinf(divergence(DivergenceKind::ChiSquare, p, q)));
  CHECK(divergence(DivergenceKind::JensenShannon, p, q) ==
        doctest::Approx(std::log(2.0)).epsilon(1e-13));
  CHECK(divergence(DivergenceKind::Hellinger, p, q) == doctest::Approx(1.0).epsilon(1e-13));
}

TEST_CASE("identity and symmetry") {
  Rng rng(11);
  for (int trial = 0; trial < 20; ++trial) {
    const auto p = DiscreteDistribution::checked(kValued, random_simplex(rng, 3));
    const auto q = DiscreteDistribution::checked(kValued, random_simplex(rng, 3));
    for (DivergenceKind kind : all_divergence_kinds()) {
      CHECK(std::abs(divergence(kind, p, p)) <= 1e-14);
      CHECK(divergence(kind, p, q) >= 0.0);
    }
    for (DivergenceKind kind : {DivergenceKind::TotalVariation, DivergenceKind::JensenShannon,
                                DivergenceKind::Hellinger, DivergenceKind::Wasserstein1}) {
      CHECK(divergence(kind, p, q) == doctest::Approx(divergence(kind, q, p)).epsilon(1e-12));
    }
  }
}

TEST_CASE("convexity in the second argument") {
  Rng rng(12);
  for (int trial = 0; trial < 10; ++trial) {
    const auto p = DiscreteDistribution::checked(kValued, random_simplex(rng, 3));
    const auto q1 = DiscreteDistribution::checked(kValued, random_simplex(rng, 3));
    const auto q2 = DiscreteDistribution::checked(kValued, random_simplex(rng, 3));
    for (DivergenceKind kind : all_divergence_kinds()) {
      const double d1 = divergence(kind, p, q1);
      const double d2 = divergence(kind, p, q2);
      for (double lam : {0.0, 0.25, 0.5, 0.75, 1.0}) {
        std::vector<double> w(3);
        for (std::size_t i = 0; i < 3; ++i)
          w[i] = lam * q1.weights[i] + (1.0 - lam) * q2.weights[i];
        const auto mix = DiscreteDistribution::checked(kValued, std::move(w));
        CHECK(divergence(kind, p, mix) <= lam * d1 + (1.0 - lam) * d2 + 1e-10);
      }
    }
  }
}

TEST_CASE("jensen-shannon stays below log 2") {
  Rng rng(13);
  for (int trial = 0; trial < 30; ++trial) {
    const auto p = DiscreteDistribution::checked(kValued, random_simplex(rng, 3));
    const auto q = DiscreteDistribution::checked(kValued, random_simplex(rng, 3));
    CHECK(divergence(DivergenceKind::JensenShannon, p, q) <= std::log(2.0) + 1e-12);
  }
}

TEST_CASE("divergence rejects mismatched alphabets") {
  const auto p = on_labels(kPair, {0.5, 0.5});
  const auto q = DiscreteDistribution::checked(Alphabet::with_labels({"u", "v"}), {0.5, 0.5});
  CHECK(throws_code([&] { divergence(DivergenceKind::TotalVariation, p, q); },
                    ErrorCode::AlphabetMismatch));
  // Wasserstein-1 tolerates distinct supports but needs scalar values.
  CHECK(throws_code([&] { divergence(DivergenceKind::Wasserstein1, p, q); },
                    ErrorCode::MissingValues));
}

TEST_CASE("wasserstein frozen values") {
  CHECK(wasserstein1({0.0, 1.0}, {0.5, 0.5}, {1.0, 0.0}) == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(wasserstein1({-1.0, 0.0, 1.0}, {1.0, 0.0, 0.0}, {0.0, 0.0, 1.0}) ==
        doctest::Approx(2.0).epsilon(1e-15));
  // Unsorted support values are sorted internally.
  CHECK(wasserstein1({1.0, 0.0}, {0.5, 0.5}, {0.0, 1.0}) == doctest::Approx(0.5).epsilon(1e-15));

  const auto p = DiscreteDistribution::checked(Alphabet::with_scalar_values({0.0, 1.0}),
                                               {0.5, 0.5});
  const auto q = DiscreteDistribution::checked(Alphabet::with_scalar_values({0.5}), {1.0});
  CHECK(wasserstein1(p, q) == doctest::Approx(0.5).epsilon(1e-13));
  CHECK(wasserstein1(q, p) == doctest::Approx(0.5).epsilon(1e-13));

  CHECK(throws_code([] { wasserstein1({0.0, 1.0}, {0.5, 0.5}, {1.0}); },
                    ErrorCode::InvalidArgument));
}

TEST_CASE("success probability identity") {
  Rng rng(14);
  const auto uniform = on_labels(kPair, {0.5, 0.5});
  CHECK(success_probability(uniform, uniform) == 0.5);
  CHECK(success_probability(on_labels(kPair, {1.0, 0.0}), on_labels(kPair, {0.0, 1.0})) == 1.0);
  for (int trial = 0; trial < 50; ++trial) {
    const auto p = DiscreteDistribution::checked(kValued, random_simplex(rng, 3));
    const auto q = DiscreteDistribution::checked(kValued, random_simplex(rng, 3));
    const double tv = divergence(DivergenceKind::TotalVariation, p, q);
    CHECK(std::abs(success_probability(p, q) - 0.5 - 0.5 * tv) <= 1e-15);
  }
}

TEST_CASE("entropy") {
  CHECK(entropy(on_labels(kPair, {1.0, 0.0})) == 0.0);
  CHECK(entropy(on_labels(kPair, {0.5, 0.5})) == doctest::Approx(std::log(2.0)).epsilon(1e-14));
  const Alphabet four = Alphabet::with_labels({"a", "b", "c", "d"});
  CHECK(entropy(DiscreteDistribution::checked(four, {0.25, 0.25, 0.25, 0.25})) ==
        doctest::Approx(std::log(4.0)).epsilon(1e-14));
  // Zero-mass symbols contribute nothing.
  CHECK(entropy(DiscreteDistribution::checked(four, {0.5, 0.5, 0.0, 0.0})) ==
        doctest::Approx(std::log(2.0)).epsilon(1e-14));
}

TEST_CASE("mean quality identity") {
  Rng rng(15);
  for (int trial = 0; trial < 20; ++trial) {
    const auto p_hat = DiscreteDistribution::checked(kValued, random_simplex(rng, 3));
    const auto p = DiscreteDistribution::checked(kValued, random_simplex(rng, 3));
    const MeanQualityIdentity id = mean_quality_identity(p_hat, p);
    CHECK(std::abs(id.residual) <= 1e-12);
    CHECK(id.lhs == doctest::Approx(-id.d_kl - id.entropy).epsilon(1e-12));
    CHECK(id.printed_rhs - id.derived_rhs == doctest::Approx(2.0 * id.entropy).epsilon(1e-12));
    CHECK(id.entropy == doctest::Approx(entropy(p_hat)).epsilon(1e-12));
  }

  // A reconstruction symbol outside the reference support drives everything
  // to minus infinity, with a residual of zero by convention.
  const auto p_hat = on_labels(kPair, {0.5, 0.5});
  const auto p = on_labels(kPair, {1.0, 0.0});
  const MeanQualityIdentity id = mean_quality_identity(p_hat, p);
  CHECK(std::isinf(id.lhs));
  CHECK(id.lhs < 0.0);
  CHECK(std::isinf(id.d_kl));
  CHECK(id.residual == 0.0);
}

TEST_CASE("shared grid binning") {
  const auto p = DiscreteDistribution::checked(Alphabet::with_scalar_values({-2.0, 0.0}),
                                               {0.25, 0.75});
  const auto q = DiscreteDistribution::checked(Alphabet::with_scalar_values({1.0, 3.0}),
                                               {0.5, 0.5});
  const auto [bp, bq] = bin_onto_shared_grid(p, q, 16);
  CHECK(bp.alphabet.size() == 16);
  CHECK(bp.alphabet.labels == bq.alphabet.labels);
  double sp = 0.0, sq = 0.0;
  for (std::size_t i = 0; i < 16; ++i) {
    sp += bp.weights[i];
    sq += bq.weights[i];
  }
  CHECK(sp == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(sq == doctest::Approx(1.0).epsilon(1e-12));
  // Disjoint halves of the span keep the full distance.
  CHECK(divergence(DivergenceKind::TotalVariation, bp, bq) == doctest::Approx(1.0).epsilon(1e-12));

  const auto [one_p, one_q] = bin_onto_shared_grid(p, q, 1);
  CHECK(one_p.weights[0] == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(divergence(DivergenceKind::TotalVariation, one_p, one_q) <= 1e-12);

  CHECK(throws_code([&] { bin_onto_shared_grid(p, q, 0); }, ErrorCode::InvalidArgument));
}
