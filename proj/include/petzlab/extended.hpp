#pragma once

// Quad-precision (113-bit) complex matrices for the monotonicity gap.

#include <complex>
#include <cstdint>
#include <limits>
#include <utility>

#include <Eigen/Eigenvalues>
#include <boost/multiprecision/cpp_bin_float.hpp>

#include "petzlab/errors.hpp"
#include "petzlab/operators.hpp"

namespace petzlab::ext {

using Real = boost::multiprecision::number<
    boost::multiprecision::cpp_bin_float<113, boost::multiprecision::digit_base_2, void, std::int16_t, -16382, 16383>,
    boost::multiprecision::et_off>;
using Scalar = std::complex<Real>;

}  // namespace petzlab::ext

namespace Eigen {

template <>
struct NumTraits<petzlab::ext::Real> : GenericNumTraits<petzlab::ext::Real> {
  using R = petzlab::ext::Real;
  using Real = R;
  using NonInteger = R;
  using Literal = R;
  using Nested = R;
  enum {
    IsInteger = 0,
    IsSigned = 1,
    IsComplex = 0,
    RequireInitialization = 1,
    ReadCost = 1,
    AddCost = 8,
    MulCost = 16
  };
  static R epsilon() { return std::numeric_limits<R>::epsilon(); }
  static R dummy_precision() { return R(1e-30); }
  static R highest() { return (std::numeric_limits<R>::max)(); }
  static R lowest() { return std::numeric_limits<R>::lowest(); }
  static R infinity() { return std::numeric_limits<R>::infinity(); }
  static R quiet_NaN() { return std::numeric_limits<R>::quiet_NaN(); }
  static int digits10() { return std::numeric_limits<R>::digits10; }
  static int digits() { return std::numeric_limits<R>::digits; }
};

}  // namespace Eigen

namespace petzlab::ext {

using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
using RealVec = Eigen::Matrix<Real, Eigen::Dynamic, 1>;

inline Matrix promote(const ComplexMatrix& m) {
  Matrix out(m.rows(), m.cols());
  for (Index i = 0; i < m.rows(); ++i)
    for (Index j = 0; j < m.cols(); ++j) out(i, j) = Scalar(Real(m(i, j).real()), Real(m(i, j).imag()));
  return out;
}

inline ComplexMatrix demote(const Matrix& m) {
  ComplexMatrix out(m.rows(), m.cols());
  for (Index i = 0; i < m.rows(); ++i)
    for (Index j = 0; j < m.cols(); ++j)
      out(i, j) = Complex(static_cast<double>(m(i, j).real()), static_cast<double>(m(i, j).imag()));
  return out;
}

inline Real frobenius_sq(const Matrix& m) {
  Real s = 0;
  for (Index i = 0; i < m.rows(); ++i)
    for (Index j = 0; j < m.cols(); ++j) s += std::norm(m(i, j));
  return s;
}

/// Re tr(A B).
inline Real trace_product(const Matrix& a, const Matrix& b) {
  Real s = 0;
  for (Index i = 0; i < a.rows(); ++i)
    for (Index j = 0; j < a.cols(); ++j) s += (a(i, j) * b(j, i)).real();
  return s;
}

/// Pseudo-powers a^{-1/4} and a^{-1/2} on the eigenvalues above cutoff * lambda_max,
/// from a single eigendecomposition.
inline std::pair<Matrix, Matrix> inverse_quarter_and_half(const Matrix& a, double cutoff) {
  const Matrix h = (a + a.adjoint()) * Scalar(Real(0.5));
  Eigen::SelfAdjointEigenSolver<Matrix> es(h);
  if (es.info() != Eigen::Success) throw ConvergenceFailure("quad-precision eigensolver failed");
  const RealVec& lam = es.eigenvalues();
  const Real threshold = Real(cutoff) * lam.maxCoeff();
  const Index n = lam.size();
  Matrix quarter = Matrix::Zero(n, n), half = Matrix::Zero(n, n);
  for (Index k = 0; k < n; ++k) {
    if (!(lam(k) > threshold)) continue;
    const Real r = 1 / sqrt(lam(k));
    const auto v = es.eigenvectors().col(k);
    const Matrix outer = v * v.adjoint();
    half += Scalar(r) * outer;
    quarter += Scalar(sqrt(r)) * outer;
  }
  return {quarter, half};
}

}  // namespace petzlab::ext
