#include "test_util.hpp"

using namespace petzlab;
using namespace petzlab::testing;

TEST(PetzRecovery, StoredRoots) {
  const auto s = random_density(cfg(3, 0));
  const auto c = random_channel(cfg(3, 0));
  const PetzRecovery r(s, c);
  const ComplexMatrix sq = r.sqrt_sigma().matrix();
  EXPECT_LE((sq * sq - s.matrix()).norm(), 1e-10 * s.matrix().norm());
  const ComplexMatrix x = r.inv_sqrt_lambda_sigma().matrix();
  const ComplexMatrix inv = matrix_power(r.lambda_sigma(), -1.0).matrix();
  EXPECT_LE((x * x - inv).norm(), 1e-10 * inv.norm());
}

TEST(PetzRecovery, FixedPoint) {
  for (std::uint64_t i = 0; i < 50; ++i) {
    const Index d = 2 + i % 3;
    const auto s = random_density(cfg(d, i), 99);
    const auto c = random_channel(cfg(d, i));
    EXPECT_LE(recovery_error(s, s, c), 1e-9);
  }
}

TEST(PetzRecovery, IdentityChannelRecoversExactly) {
  const auto rho = random_density(cfg(3, 4));
  EXPECT_LE(recovery_error(rho, DensityOperator::maximally_mixed(3), KrausChannel::identity(3)), 1e-12);
}

TEST(PetzRecovery, UnitaryChannelsSaturate) {
  for (std::uint64_t i = 0; i < 30; ++i) {
    const Index d = 2 + i % 3;
    const auto rho = random_density(cfg(d, i));
    const auto s = random_density(cfg(d, i), 5);
    EXPECT_LE(recovery_error(rho, s, random_unitary_channel(cfg(d, i))), 1e-7);
  }
}

TEST(PetzRecovery, FullyDepolarizingMapsToSigma) {
  // Lambda(rho) = tr(rho) I/2 => R(Lambda(rho)) = sigma
  const auto c = KrausChannel::depolarizing_qubit(1.0);
  const DensityOperator s(diag({0.7, 0.3}));
  const auto rho = random_density(cfg(2, 1));
  EXPECT_TRUE(MatrixNear(PetzRecovery(s, c).round_trip(rho).matrix(), s.matrix(), 1e-12));
}

TEST(PetzRecovery, RecoveryIsCptp) {
  int full_rank = 0;
  for (std::uint64_t i = 0; i < 30; ++i) {
    const Index d = 2 + i % 2;
    const auto s = random_density(cfg(d, i), 5);
    const auto c = random_channel(cfg(d, i), {.dim_out = d + 1, .kraus_count = std::nullopt});
    const PetzRecovery r(s, c);
    const auto k = r.kraus();
    EXPECT_EQ(k.dim_in(), d + 1);
    EXPECT_EQ(k.dim_out(), d);
    const auto rep = validate_cptp(k);
    EXPECT_GE(rep.choi_min_eig, -1e-10);
    if (r.lambda_sigma().min_eigenvalue() > 1e-8) {
      ++full_rank;
      EXPECT_LE(rep.completeness_residual, 1e-8);
    } else {
      // trace preserving on supp Lambda(sigma) only
      ComplexMatrix sum = ComplexMatrix::Zero(d + 1, d + 1);
      for (const auto& e : k.kraus_ops()) sum += e.adjoint() * e;
      EXPECT_TRUE(MatrixNear(sum, matrix_power(r.lambda_sigma(), 0.0).matrix(), 1e-8));
    }
    const HermitianOperator m = random_hermitian(cfg(d + 1, i));
    EXPECT_TRUE(MatrixNear(apply(k, m).matrix(), r.recover(m).matrix(), 1e-10));
  }
  EXPECT_GT(full_rank, 0);
}

TEST(PetzRecovery, SingularLambdaSigmaUsesSupport) {
  // the channel onto a 3-dim output space only fills a 2-dim subspace
  ComplexMatrix e = ComplexMatrix::Zero(3, 2);
  e(0, 0) = 1.0;
  e(1, 1) = 1.0;
  const KrausChannel embed({e});
  const DensityOperator s(diag({0.6, 0.4}));
  const PetzRecovery r(s, embed);
  const auto rho = random_density(cfg(2, 2));
  EXPECT_LE(recovery_error(r, rho), 1e-12);
  EXPECT_TRUE(validate_cptp(KrausChannel::unchecked(r.kraus().kraus_ops())).choi_min_eig > -1e-12);
}

TEST(PetzRecovery, Errors) {
  const DensityOperator singular(diag({1.0, 0.0}));
  EXPECT_THROW(PetzRecovery(singular, KrausChannel::identity(2)), SingularSigma);
  EXPECT_THROW(PetzRecovery(DensityOperator::maximally_mixed(3), KrausChannel::identity(2)), DimensionMismatch);
  const PetzRecovery r(DensityOperator::maximally_mixed(2), KrausChannel::identity(2));
  EXPECT_THROW(r.recover(HermitianOperator::identity(3)), DimensionMismatch);
}

TEST(PetzRecovery, DepolarizingWorkedExample) {
  ComplexVector psi(2);
  psi << 1, 0;
  const auto rho = DensityOperator::pure(psi);
  const double lhs = recovery_error(rho, DensityOperator::maximally_mixed(2), KrausChannel::depolarizing_qubit(0.5));
  EXPECT_NEAR(lhs, 0.75, 1e-12);
}

TEST(RecoveryError, AcceptsHermitianInput) {
  const HermitianOperator m = random_hermitian(cfg(2, 0));
  EXPECT_GE(recovery_error(m, DensityOperator::maximally_mixed(2), random_channel(cfg(2, 0))), 0.0);
}
