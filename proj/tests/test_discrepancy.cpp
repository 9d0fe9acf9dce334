#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "imputeval/discrepancy.hpp"
#include "imputeval/rng.hpp"
#include "oracles.hpp"

using namespace imputeval;

namespace {

std::vector<double> random_sample(Rng& rng, std::size_t max_size) {
  std::vector<double> v(1 + rng.below(max_size));
  for (double& x : v) x = 4.0 * rng.normal();
  return v;
}

}  // namespace

TEST_CASE("wasserstein2_1d matches hand-computed cases") {
  CHECK(wasserstein2_1d(std::vector<double>{0, 1}, std::vector<double>{0, 1}) == 0.0);
  CHECK(wasserstein2_1d(std::vector<double>{0, 0}, std::vector<double>{1, 1}) ==
        doctest::Approx(1.0));
  // Unequal sizes: integral of (0-1)^2 over [0,.5) plus (2-1)^2 over [.5,1).
  CHECK(wasserstein2_1d(std::vector<double>{0, 2}, std::vector<double>{1}) ==
        doctest::Approx(1.0));
}

TEST_CASE("wasserstein2_1d rejects empty samples") {
  CHECK_THROWS_AS(wasserstein2_1d(std::vector<double>{}, std::vector<double>{1.0}),
                  std::invalid_argument);
}

TEST_CASE("wasserstein2_1d agrees with the assignment-LP oracle on small samples") {
  Rng rng(2024);
  for (int trial = 0; trial < 200; ++trial) {
    const std::vector<double> a = random_sample(rng, 8);
    const std::vector<double> b = random_sample(rng, 8);
    const double fast = wasserstein2_1d(a, b);
    const double exact = oracles::transport_w2(a, b);
    CHECK(fast == doctest::Approx(exact).epsilon(1e-9));
  }
}

TEST_CASE("wasserstein2_1d symmetry, scaling, translation and identity") {
  Rng rng(5);
  for (int trial = 0; trial < 50; ++trial) {
    const std::vector<double> a = random_sample(rng, 12);
    const std::vector<double> b = random_sample(rng, 12);
    const double w = wasserstein2_1d(a, b);
    CHECK(wasserstein2_1d(b, a) == doctest::Approx(w).epsilon(1e-12));
    CHECK(wasserstein2_1d(a, a) == 0.0);

    const double c = -2.5;
    std::vector<double> ca = a;
    std::vector<double> cb = b;
    for (double& x : ca) x *= c;
    for (double& x : cb) x *= c;
    CHECK(wasserstein2_1d(ca, cb) == doctest::Approx(std::abs(c) * w).epsilon(1e-9));

    std::vector<double> ta = a;
    std::vector<double> tb = b;
    for (double& x : ta) x += 13.75;
    for (double& x : tb) x += 13.75;
    CHECK(wasserstein2_1d(ta, tb) == doctest::Approx(w).epsilon(1e-9).scale(1.0));
  }
}

TEST_CASE("wasserstein2_1d satisfies the triangle inequality on random triples") {
  Rng rng(6);
  for (int trial = 0; trial < 100; ++trial) {
    const std::vector<double> a = random_sample(rng, 6);
    const std::vector<double> b = random_sample(rng, 6);
    const std::vector<double> c = random_sample(rng, 6);
    const double ab = wasserstein2_1d(a, b);
    const double bc = wasserstein2_1d(b, c);
    const double ac = wasserstein2_1d(a, c);
    CHECK(ac <= ab + bc + 1e-9);
  }
}

TEST_CASE("ks_statistic matches enumerated cases") {
  CHECK(ks_statistic(std::vector<double>{1, 2, 3}, std::vector<double>{1, 2, 3}) == 0.0);
  CHECK(ks_statistic(std::vector<double>{0, 1}, std::vector<double>{2, 3}) == 1.0);
  CHECK(ks_statistic(std::vector<double>{1, 2, 3}, std::vector<double>{1, 2, 4}) ==
        doctest::Approx(1.0 / 3.0));
}

TEST_CASE("ks_statistic is bounded and invariant under increasing transforms") {
  Rng rng(7);
  for (int trial = 0; trial < 50; ++trial) {
    const std::vector<double> a = random_sample(rng, 15);
    const std::vector<double> b = random_sample(rng, 15);
    const double ks = ks_statistic(a, b);
    CHECK(ks >= 0.0);
    CHECK(ks <= 1.0);
    std::vector<double> ta = a;
    std::vector<double> tb = b;
    for (double& x : ta) x = std::exp(0.3 * x) + x;  // strictly increasing
    for (double& x : tb) x = std::exp(0.3 * x) + x;
    CHECK(ks_statistic(ta, tb) == doctest::Approx(ks).epsilon(1e-12));
  }
}

TEST_CASE("kl_divergence basic behaviour") {
  const std::vector<double> same{1, 2, 3, 4, 5};
  CHECK(kl_divergence(same, same, 10) == doctest::Approx(0.0));

  // Completely separated point masses: the mass sits where the other
  // histogram has only smoothing, so the divergence is of order log(1/eps).
  const std::vector<double> zeros(50, 0.0);
  const std::vector<double> ones(50, 1.0);
  CHECK(kl_divergence(zeros, ones, 2) > 10.0);

  // Degenerate pooled range
  CHECK(kl_divergence(zeros, zeros, 2) == 0.0);
}

TEST_CASE("kl_divergence is asymmetric in general") {
  // Skewed pair: a concentrated, b spread.
  std::vector<double> a;
  std::vector<double> b;
  Rng rng(8);
  for (int i = 0; i < 400; ++i) {
    a.push_back(0.1 * rng.normal());
    b.push_back(2.0 * rng.normal());
  }
  const double ab = kl_divergence(a, b, 20);
  const double ba = kl_divergence(b, a, 20);
  CHECK(ab != doctest::Approx(ba).epsilon(1e-3));
}

TEST_CASE("kl_divergence is non-negative on random inputs") {
  Rng rng(9);
  for (int trial = 0; trial < 100; ++trial) {
    const std::vector<double> a = random_sample(rng, 40);
    const std::vector<double> b = random_sample(rng, 40);
    CHECK(kl_divergence(a, b, 2 + rng.below(30)) >= 0.0);
  }
}

TEST_CASE("kl_divergence validates arguments") {
  CHECK_THROWS_AS(kl_divergence(std::vector<double>{}, std::vector<double>{1.0}, 10),
                  std::invalid_argument);
  CHECK_THROWS_AS(kl_divergence(std::vector<double>{1.0}, std::vector<double>{1.0}, 1),
                  std::invalid_argument);
}

namespace {

struct StatsCase {
  Matrix truth;
  Matrix imputed;
  Mask mask;
};

StatsCase two_cell_case(double t0, double t1, double i0, double i1) {
  StatsCase c;
  c.truth = Matrix(2, 1);
  c.imputed = Matrix(2, 1);
  c.mask = Mask(2, 1);
  c.truth.at(0, 0) = t0;
  c.truth.at(1, 0) = t1;
  c.imputed.at(0, 0) = i0;
  c.imputed.at(1, 0) = i1;
  c.mask.set(0, 0, true);
  c.mask.set(1, 0, true);
  return c;
}

}  // namespace

TEST_CASE("sample_stats exact values") {
  SUBCASE("perfect imputation") {
    const StatsCase c = two_cell_case(1, 3, 1, 3);
    const SampleStats s = sample_stats(c.truth, c.imputed, c.mask);
    CHECK(s.rmse == 0.0);
    CHECK(s.mae == 0.0);
    CHECK(s.r2 == 1.0);
  }
  SUBCASE("constant imputation of truth {1,3}") {
    const StatsCase c = two_cell_case(1, 3, 2, 2);
    const SampleStats s = sample_stats(c.truth, c.imputed, c.mask);
    CHECK(s.rmse == doctest::Approx(1.0));
    CHECK(s.mae == doctest::Approx(1.0));
    CHECK(s.r2 == doctest::Approx(0.0));
  }
  SUBCASE("anti-correlated imputation gives r2 = -3") {
    const StatsCase c = two_cell_case(1, 3, 3, 1);
    const SampleStats s = sample_stats(c.truth, c.imputed, c.mask);
    CHECK(s.r2 == doctest::Approx(-3.0));
  }
}

TEST_CASE("sample_stats edge contracts") {
  StatsCase c = two_cell_case(2, 2, 3, 1);
  SUBCASE("constant true masked values make r2 undefined") {
    const SampleStats s = sample_stats(c.truth, c.imputed, c.mask);
    CHECK(std::isnan(s.r2));
    CHECK(s.rmse == doctest::Approx(1.0));
  }
  SUBCASE("zero masked cells throw") {
    c.mask = Mask(2, 1);
    CHECK_THROWS_AS(sample_stats(c.truth, c.imputed, c.mask), std::invalid_argument);
  }
}

TEST_CASE("rmse >= mae on random inputs, r2 = 1 iff rmse = 0") {
  Rng rng(10);
  for (int trial = 0; trial < 50; ++trial) {
    Matrix truth(10, 3);
    Matrix imputed(10, 3);
    Mask mask(10, 3);
    for (std::size_t i = 0; i < 10; ++i) {
      for (std::size_t j = 0; j < 3; ++j) {
        truth.at(i, j) = rng.normal();
        imputed.at(i, j) = rng.normal();
        mask.set(i, j, rng.below(2) == 0);
      }
    }
    mask.set(0, 0, true);
    mask.set(1, 0, true);
    const SampleStats s = sample_stats(truth, imputed, mask);
    CHECK(s.rmse >= s.mae - 1e-12);
    if (s.rmse > 0.0) CHECK(s.r2 < 1.0);
  }
}

TEST_CASE("feature_stats identity gives all-zero summaries") {
  Rng rng(11);
  Matrix truth(20, 4);
  for (double& v : truth.data) v = rng.normal();
  Mask mask(20, 4);
  for (std::size_t i = 0; i < 20; i += 2) mask.set(i, i % 4, true);
  const FeatureStats f = feature_stats(truth, truth, mask);
  CHECK(f.min.w2 == 0.0);
  CHECK(f.median.w2 == 0.0);
  CHECK(f.max.w2 == 0.0);
  CHECK(f.max.ks == 0.0);
  CHECK(f.max.kl == doctest::Approx(0.0));
}

TEST_CASE("constant imputation of a spread feature has positive ks and w2") {
  Matrix truth(4, 1);
  truth.at(0, 0) = 0.0;
  truth.at(1, 0) = 1.0;
  truth.at(2, 0) = 2.0;
  truth.at(3, 0) = 3.0;
  Matrix imputed(4, 1);
  for (double& v : imputed.data) v = 1.5;  // column mean
  Mask mask(4, 1);
  for (std::size_t i = 0; i < 4; ++i) mask.set(i, 0, true);
  const FeatureStats f = feature_stats(truth, imputed, mask);
  CHECK(f.max.ks > 0.0);
  CHECK(f.max.w2 > 0.0);
}

TEST_CASE("single masked feature collapses min = median = max") {
  Rng rng(12);
  Matrix truth(10, 3);
  Matrix imputed(10, 3);
  for (double& v : truth.data) v = rng.normal();
  for (double& v : imputed.data) v = rng.normal();
  Mask mask(10, 3);
  mask.set(2, 1, true);
  mask.set(5, 1, true);
  const FeatureStats f = feature_stats(truth, imputed, mask);
  CHECK(f.per_feature.size() == 1);
  CHECK(f.min.w2 == f.median.w2);
  CHECK(f.median.w2 == f.max.w2);
}

TEST_CASE("feature_stats requires at least one masked feature") {
  Matrix m(3, 2);
  CHECK_THROWS_AS(feature_stats(m, m, Mask(3, 2)), std::invalid_argument);
}

TEST_CASE("lower_median picks the lower middle on even counts") {
  CHECK(lower_median({3.0, 1.0, 2.0}) == 2.0);
  CHECK(lower_median({4.0, 1.0, 3.0, 2.0}) == 2.0);
  CHECK(lower_median({7.0}) == 7.0);
}
