#include <cmath>
#include <map>

#include "test_util.hpp"

using namespace petzlab;
using namespace petzlab::testing;

TEST(CounterRng, Deterministic) {
  CounterRng a(cfg(2, 5), Stream::density), b(cfg(2, 5), Stream::density);
  for (int i = 0; i < 100; ++i) EXPECT_EQ(a.next(), b.next());
  CounterRng c(cfg(2, 6), Stream::density);
  EXPECT_NE(CounterRng(cfg(2, 5), Stream::density).next(), c.next());
  EXPECT_NE(CounterRng(cfg(2, 5), Stream::channel).next(), CounterRng(cfg(2, 5), Stream::density).next());
  EXPECT_NE(CounterRng(cfg(2, 5, 1), Stream::density).next(), CounterRng(cfg(2, 5, 2), Stream::density).next());
}

TEST(CounterRng, UniformAndNormalMoments) {
  CounterRng rng(cfg(2, 0), 42);
  const int n = 200000;
  double su = 0, sn = 0, sn2 = 0;
  for (int i = 0; i < n; ++i) {
    const double u = rng.uniform();
    ASSERT_GT(u, 0.0);
    ASSERT_LT(u, 1.0);
    su += u;
  }
  for (int i = 0; i < n; ++i) {
    const double z = rng.normal();
    sn += z;
    sn2 += z * z;
  }
  EXPECT_NEAR(su / n, 0.5, 3 * std::sqrt(1.0 / 12 / n));
  EXPECT_NEAR(sn / n, 0.0, 3 / std::sqrt(n));
  EXPECT_NEAR(sn2 / n, 1.0, 3 * std::sqrt(2.0 / n));
}

TEST(CounterRng, BelowCoversRange) {
  CounterRng rng(cfg(2, 0), 43);
  std::map<std::uint64_t, int> hist;
  for (int i = 0; i < 7000; ++i) ++hist[rng.below(7)];
  ASSERT_EQ(hist.size(), 7u);
  for (const auto& [k, v] : hist) EXPECT_NEAR(v, 1000, 150) << k;
}

TEST(RandomDensity, ValidAndDeterministic) {
  for (std::uint64_t i = 0; i < 20; ++i) {
    const auto a = random_density(cfg(3, i)), b = random_density(cfg(3, i));
    EXPECT_EQ(a.matrix(), b.matrix());
    EXPECT_NEAR(a.trace(), 1.0, 1e-14);
    EXPECT_GE(a.min_eigenvalue(), 0.0);
  }
  EXPECT_NE(random_density(cfg(3, 0)).matrix(), random_density(cfg(3, 0, 99)).matrix());
}

TEST(RandomDensity, HilbertSchmidtPurity) {
  // E tr(rho^2) = 2d / (d^2 + 1) for the induced measure with square Ginibre
  const int n = 20000;
  double sum = 0;
  for (int i = 0; i < n; ++i) {
    const auto rho = random_density(cfg(2, static_cast<std::uint64_t>(i), 777));
    sum += rho.matrix().squaredNorm();
  }
  EXPECT_NEAR(sum / n, 0.8, 3 * 0.1307 / std::sqrt(n));
}

TEST(RandomHermitian, ExactlyHermitian) {
  const auto h = random_hermitian(cfg(4, 0));
  EXPECT_EQ(h.matrix(), ComplexMatrix(h.matrix().adjoint()));
}

TEST(RandomChannel, CptpAndDeterministic) {
  for (std::uint64_t i = 0; i < 100; ++i) {
    const Index d = 2 + i % 3;
    const auto a = random_channel(cfg(d, i)), b = random_channel(cfg(d, i));
    ASSERT_EQ(a.size(), b.size());
    for (std::size_t k = 0; k < a.size(); ++k) EXPECT_EQ(a.kraus_ops()[k], b.kraus_ops()[k]);
    EXPECT_TRUE(validate_cptp(a).is_valid);
  }
}

TEST(RandomChannel, KrausCountRange) {
  std::map<std::size_t, int> hist;
  for (std::uint64_t i = 0; i < 2000; ++i) ++hist[random_channel(cfg(2, i)).size()];
  ASSERT_EQ(hist.size(), 4u);
  EXPECT_EQ(hist.begin()->first, 1u);
  EXPECT_EQ(hist.rbegin()->first, 4u);
  for (const auto& [k, v] : hist) EXPECT_NEAR(v, 500, 100) << k;

  for (std::uint64_t i = 0; i < 200; ++i) {
    const auto c = random_channel(cfg(4, i), {.dim_out = 2, .kraus_count = std::nullopt});
    EXPECT_GE(c.size(), 2u);
    EXPECT_LE(c.size(), 8u);
  }
}

TEST(RandomChannel, FixedKrausCount) {
  EXPECT_EQ(random_channel(cfg(3, 0), {.dim_out = std::nullopt, .kraus_count = 5}).size(), 5u);
  EXPECT_THROW(random_channel(cfg(3, 0), {.dim_out = std::nullopt, .kraus_count = 10}), ShapeMismatch);
  EXPECT_THROW(random_channel(cfg(3, 0), {.dim_out = std::nullopt, .kraus_count = 0}), ShapeMismatch);
  const auto draw = draw_channel(cfg(3, 0));
  EXPECT_EQ(draw.retries, 0);
}

TEST(RandomChannel, UnitaryChannelIsUnitary) {
  for (std::uint64_t i = 0; i < 20; ++i) {
    const auto c = random_unitary_channel(cfg(3, i));
    ASSERT_EQ(c.size(), 1u);
    const ComplexMatrix& u = c.kraus_ops()[0];
    EXPECT_TRUE(MatrixNear(u * u.adjoint(), ComplexMatrix::Identity(3, 3), 1e-12));
  }
}
