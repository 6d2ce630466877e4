#include "test_util.hpp"

using namespace petzlab;
using namespace petzlab::testing;

TEST(KrausChannel, IdentityAndUnitary) {
  const auto id = KrausChannel::identity(3);
  EXPECT_EQ(id.dim_in(), 3);
  EXPECT_EQ(id.size(), 1u);
  const HermitianOperator a = random_hermitian(cfg(3, 0));
  EXPECT_TRUE(MatrixNear(apply(id, a).matrix(), a.matrix(), 0));
  const auto x = KrausChannel::unitary(pauli_x());
  EXPECT_TRUE(MatrixNear(apply(x, HermitianOperator(pauli_z())).matrix(), -pauli_z(), 1e-15));
}

TEST(KrausChannel, RejectsIncompleteSets) {
  EXPECT_THROW(KrausChannel({ComplexMatrix::Identity(2, 2) / 2.0}), NotCptp);
  EXPECT_THROW(KrausChannel({}), ShapeMismatch);
  EXPECT_THROW(KrausChannel({ComplexMatrix::Identity(2, 2), ComplexMatrix::Identity(3, 3)}), ShapeMismatch);
  const auto bad = KrausChannel::unchecked({ComplexMatrix::Identity(2, 2) / 2.0});
  EXPECT_NEAR(bad.completeness_residual(), 0.75, 1e-15);
  EXPECT_FALSE(validate_cptp(bad).is_valid);
}

TEST(KrausChannel, DepolarizingQubit) {
  const auto ch = KrausChannel::depolarizing_qubit(0.5);
  EXPECT_EQ(ch.size(), 4u);
  ComplexVector psi(2);
  psi << 1, 0;
  const auto out = apply(ch, HermitianOperator(DensityOperator::pure(psi)));
  EXPECT_TRUE(MatrixNear(out.matrix(), diag({0.75, 0.25}), 1e-15));
  EXPECT_THROW(KrausChannel::depolarizing_qubit(1.5), Error);
}

TEST(Channel, TracePreservingAndAdjoint) {
  for (std::uint64_t i = 0; i < 30; ++i) {
    const auto c = random_channel(cfg(3, i));
    const HermitianOperator a = random_hermitian(cfg(3, i), 1), b = random_hermitian(cfg(3, i), 2);
    EXPECT_NEAR(apply(c, a).trace(), a.trace(), 1e-12);
    EXPECT_NEAR(hs_inner(apply(c, a), b), hs_inner(a, adjoint_apply(c, b)), 1e-12);
    EXPECT_TRUE(MatrixNear(adjoint_apply(c, HermitianOperator::identity(3)).matrix(),
                           ComplexMatrix::Identity(3, 3), 1e-12));
  }
}

TEST(Channel, RectangularChannels) {
  for (const auto& [d, dp] : {std::pair<Index, Index>{2, 3}, {3, 2}, {4, 1}}) {
    const auto c = random_channel(cfg(d, 0), {.dim_out = dp, .kraus_count = std::nullopt});
    EXPECT_EQ(c.dim_in(), d);
    EXPECT_EQ(c.dim_out(), dp);
    EXPECT_GE(static_cast<Index>(c.size()) * dp, d);
    const auto rho = random_density(cfg(d, 0));
    const auto out = apply(c, static_cast<const PositiveOperator&>(rho));
    EXPECT_EQ(out.dim(), dp);
    EXPECT_NEAR(out.trace(), 1.0, 1e-12);
    EXPECT_TRUE(validate_cptp(c).is_valid);
  }
}

TEST(Channel, DimensionMismatch) {
  EXPECT_THROW(apply(KrausChannel::identity(2), HermitianOperator::identity(3)), DimensionMismatch);
}

TEST(Choi, PositiveWithIdentityMarginal) {
  const auto c = random_channel(cfg(2, 3), {.dim_out = 3, .kraus_count = std::nullopt});
  const ChoiMatrix j = choi(c);
  EXPECT_EQ(j.op.dim(), 6);
  EXPECT_GE(j.op.min_eigenvalue(), -1e-12);
  EXPECT_TRUE(MatrixNear(j.partial_trace_output(), ComplexMatrix::Identity(2, 2), 1e-12));
  EXPECT_NEAR(j.op.trace(), 2.0, 1e-12);
}

TEST(Choi, IdentityChannelIsMaximallyEntangled) {
  const ChoiMatrix j = choi(KrausChannel::identity(2));
  EXPECT_NEAR(j.op.max_eigenvalue(), 2.0, 1e-14);
  EXPECT_NEAR(j.op.trace(), 2.0, 1e-14);
}

TEST(ValidateCptp, ReportsSampledChannelsValid) {
  for (std::uint64_t i = 0; i < 50; ++i) {
    const auto r = validate_cptp(random_channel(cfg(2 + i % 3, i)));
    EXPECT_TRUE(r.is_valid);
    EXPECT_LE(r.completeness_residual, 1e-12);
  }
}

TEST(ValidateCptp, FlagsOvercompleteSet) {
  const auto r = validate_cptp(KrausChannel::unchecked({ComplexMatrix::Identity(2, 2) * 1.1}));
  EXPECT_FALSE(r.is_valid);
  EXPECT_NEAR(r.completeness_residual, 0.21, 1e-12);
  EXPECT_GT(r.choi_min_eig, -1e-12);
}
