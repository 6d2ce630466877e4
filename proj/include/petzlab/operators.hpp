#pragma once

// Dense operator substrate: Hermitian / positive / density operator types,
// Hermitian eigendecomposition, fractional powers and Schatten norms.

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <optional>
#include <string>
#include <utility>

#include <Eigen/Dense>

#include "petzlab/errors.hpp"

namespace petzlab {

using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;
using Index = Eigen::Index;

namespace tol {
/// Hermiticity slack, relative to the largest entry magnitude.
inline constexpr double herm = 1e-10;
/// Eigenvalues in [-psd, 0) are treated as round-off and clamped to zero.
inline constexpr double psd = 1e-10;
inline constexpr double trace = 1e-9;
inline constexpr double cptp = 1e-9;
}  // namespace tol

inline constexpr double kInf = std::numeric_limits<double>::infinity();

/// Default relative eigenvalue cutoff for pseudo-powers: d * machine epsilon.
inline double default_rank_cutoff(Index dim) {
  return static_cast<double>(dim) * std::numeric_limits<double>::epsilon();
}

inline double max_abs_entry(const ComplexMatrix& a) {
  return a.size() == 0 ? 0.0 : a.cwiseAbs().maxCoeff();
}

inline double hermiticity_residual(const ComplexMatrix& a) {
  if (a.rows() != a.cols()) return kInf;
  return max_abs_entry(a - a.adjoint());
}

inline ComplexMatrix symmetrize(const ComplexMatrix& a) {
  return (a + a.adjoint()) * 0.5;
}

inline void require_finite(const ComplexMatrix& a, const char* what) {
  if (!a.allFinite()) throw NonFiniteEntry(std::string(what) + " has NaN or Inf entries");
}

inline void require_square(const ComplexMatrix& a, const char* what) {
  if (a.rows() != a.cols() || a.rows() == 0) {
    throw ShapeMismatch(std::string(what) + " must be a nonempty square matrix, got " +
                        std::to_string(a.rows()) + "x" + std::to_string(a.cols()));
  }
}

struct EigenDecomposition {
  RealVector eigenvalues;     // ascending
  ComplexMatrix eigenvectors;  // columns

  ComplexMatrix reconstruct() const {
    return eigenvectors * eigenvalues.cast<Complex>().asDiagonal() * eigenvectors.adjoint();
  }
};

namespace detail {

inline EigenDecomposition eigh_unchecked(const ComplexMatrix& a) {
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(a, Eigen::ComputeEigenvectors);
  if (solver.info() != Eigen::Success) {
    throw ConvergenceFailure("Hermitian eigensolver did not converge");
  }
  return {solver.eigenvalues(), solver.eigenvectors()};
}

}  // namespace detail

/// Square matrix with A = A^dagger up to tol::herm. The stored matrix is
/// always exactly Hermitian (re-symmetrized on construction).
class HermitianOperator {
 public:
  explicit HermitianOperator(const ComplexMatrix& m) {
    require_square(m, "Hermitian operator");
    require_finite(m, "Hermitian operator");
    const double residual = hermiticity_residual(m);
    if (residual > tol::herm * max_abs_entry(m)) {
      throw NonHermitianInput("max |A_ij - conj(A_ji)| = " + std::to_string(residual));
    }
    m_ = symmetrize(m);
  }

  /// Projects onto the Hermitian part without a tolerance check. Used at the
  /// end of arithmetic chains whose result is Hermitian analytically.
  static HermitianOperator symmetrized(const ComplexMatrix& m) {
    require_square(m, "Hermitian operator");
    require_finite(m, "Hermitian operator");
    return HermitianOperator(Trusted{}, symmetrize(m));
  }

  static HermitianOperator zero(Index dim) {
    return HermitianOperator(Trusted{}, ComplexMatrix::Zero(dim, dim));
  }
  static HermitianOperator identity(Index dim) {
    return HermitianOperator(Trusted{}, ComplexMatrix::Identity(dim, dim));
  }

  Index dim() const { return m_.rows(); }
  const ComplexMatrix& matrix() const { return m_; }
  double trace() const { return m_.trace().real(); }

  friend HermitianOperator operator+(const HermitianOperator& a, const HermitianOperator& b) {
    check_same_dim(a, b);
    return HermitianOperator(Trusted{}, a.m_ + b.m_);
  }
  friend HermitianOperator operator-(const HermitianOperator& a, const HermitianOperator& b) {
    check_same_dim(a, b);
    return HermitianOperator(Trusted{}, a.m_ - b.m_);
  }
  friend HermitianOperator operator*(double s, const HermitianOperator& a) {
    return HermitianOperator(Trusted{}, s * a.m_);
  }

 protected:
  struct Trusted {};
  HermitianOperator(Trusted, ComplexMatrix m) : m_(std::move(m)) {}

 private:
  static void check_same_dim(const HermitianOperator& a, const HermitianOperator& b) {
    if (a.dim() != b.dim()) {
      throw DimensionMismatch(std::to_string(a.dim()) + " vs " + std::to_string(b.dim()));
    }
  }

  ComplexMatrix m_;
};

inline EigenDecomposition eigh(const HermitianOperator& h) {
  return detail::eigh_unchecked(h.matrix());
}

/// Checked overload for raw matrices; throws NonHermitianInput.
inline EigenDecomposition eigh(const ComplexMatrix& m) { return eigh(HermitianOperator(m)); }

/// Positive semidefinite operator with its spectrum cached.
class PositiveOperator : public HermitianOperator {
 public:
  explicit PositiveOperator(const HermitianOperator& h) : PositiveOperator(h, eigh(h)) {}
  explicit PositiveOperator(const ComplexMatrix& m) : PositiveOperator(HermitianOperator(m)) {}

  double min_eigenvalue() const { return spectrum_.eigenvalues(0); }
  double max_eigenvalue() const { return spectrum_.eigenvalues(spectrum_.eigenvalues.size() - 1); }
  const EigenDecomposition& spectrum() const { return spectrum_; }

  /// min eigenvalue > cutoff * max eigenvalue
  bool is_strictly_positive(double rank_cutoff) const {
    return max_eigenvalue() > 0.0 && min_eigenvalue() > rank_cutoff * max_eigenvalue();
  }
  bool is_strictly_positive() const { return is_strictly_positive(default_rank_cutoff(dim())); }

 private:
  PositiveOperator(const HermitianOperator& h, EigenDecomposition eig)
      : HermitianOperator(clamped(h, eig)), spectrum_(std::move(eig)) {}

  // Clamps round-off negatives in place and returns the (possibly rebuilt) matrix.
  static HermitianOperator clamped(const HermitianOperator& h, EigenDecomposition& eig) {
    const double lowest = eig.eigenvalues(0);
    if (lowest < -tol::psd) {
      throw NotPositive("minimum eigenvalue " + std::to_string(lowest));
    }
    if (lowest >= 0.0) return h;
    eig.eigenvalues = eig.eigenvalues.cwiseMax(0.0);
    return HermitianOperator::symmetrized(eig.reconstruct());
  }

  EigenDecomposition spectrum_;
};

/// Unit-trace positive operator.
class DensityOperator : public PositiveOperator {
 public:
  explicit DensityOperator(const PositiveOperator& p) : PositiveOperator(p) {
    if (std::abs(trace() - 1.0) > tol::trace) {
      throw NotNormalized("trace " + std::to_string(trace()));
    }
  }
  explicit DensityOperator(const ComplexMatrix& m) : DensityOperator(PositiveOperator(m)) {}

  static DensityOperator maximally_mixed(Index dim) {
    return DensityOperator(ComplexMatrix(ComplexMatrix::Identity(dim, dim) / double(dim)));
  }

  static DensityOperator pure(const ComplexVector& psi) {
    const ComplexVector unit = psi / psi.norm();
    return DensityOperator(PositiveOperator(HermitianOperator::symmetrized(unit * unit.adjoint())));
  }
};

/// V diag(f(lambda)) V^dagger for a real function f of the spectrum.
template <class F>
HermitianOperator spectral_apply(const EigenDecomposition& eig, F&& f) {
  const RealVector mapped = eig.eigenvalues.unaryExpr(std::forward<F>(f));
  return HermitianOperator::symmetrized(eig.eigenvectors * mapped.cast<Complex>().asDiagonal() *
                                        eig.eigenvectors.adjoint());
}

/// P^exponent via the spectrum. For exponent <= 0 the power is taken on the
/// support only: eigenvalues <= rank_cutoff * lambda_max map to zero, so that
/// exponent 0 yields the support projector and negative exponents are
/// pseudo-powers.
inline HermitianOperator matrix_power(const PositiveOperator& p, double exponent,
                                      std::optional<double> rank_cutoff = std::nullopt) {
  const double cutoff = rank_cutoff.value_or(default_rank_cutoff(p.dim()));
  const double lambda_max = std::max(p.max_eigenvalue(), 0.0);
  if (exponent > 0.0) {
    return spectral_apply(p.spectrum(),
                          [exponent](double l) { return std::pow(std::max(l, 0.0), exponent); });
  }
  const double threshold = cutoff * lambda_max;
  if (lambda_max <= 0.0 || p.spectrum().eigenvalues.maxCoeff() <= threshold) {
    throw ZeroOperator("no eigenvalue above the rank cutoff");
  }
  return spectral_apply(p.spectrum(), [exponent, threshold](double l) {
    return l <= threshold ? 0.0 : std::pow(l, exponent);
  });
}

namespace detail {

inline double pnorm_of(const RealVector& magnitudes, double p) {
  if (std::isnan(p) || p < 1.0) throw InvalidP("p must be >= 1, got " + std::to_string(p));
  if (magnitudes.size() == 0) return 0.0;
  const double top = magnitudes.maxCoeff();
  if (std::isinf(p)) return top;
  if (top == 0.0) return 0.0;
  if (p == 1.0) return magnitudes.sum();
  if (p == 2.0) return magnitudes.norm();
  // scaled to avoid overflow for large p
  const double s = (magnitudes / top).array().pow(p).sum();
  return top * std::pow(s, 1.0 / p);
}

}  // namespace detail

/// ||A||_p from singular values; p = kInf gives the operator norm.
inline double schatten_norm(const ComplexMatrix& a, double p) {
  require_finite(a, "Schatten norm argument");
  if (std::isnan(p) || p < 1.0) throw InvalidP("p must be >= 1, got " + std::to_string(p));
  if (a.size() == 0) return 0.0;
  if (p == 2.0) return a.norm();
  Eigen::JacobiSVD<ComplexMatrix> svd(a);
  return detail::pnorm_of(svd.singularValues(), p);
}

/// Hermitian fast path: singular values are |eigenvalues|.
inline double schatten_norm(const HermitianOperator& a, double p) {
  if (std::isnan(p) || p < 1.0) throw InvalidP("p must be >= 1, got " + std::to_string(p));
  if (p == 2.0) return a.matrix().norm();
  return detail::pnorm_of(eigh(a).eigenvalues.cwiseAbs(), p);
}

inline double trace_norm(const HermitianOperator& a) { return schatten_norm(a, 1.0); }

/// <A, B> = tr(A^dagger B)
inline Complex hs_inner(const ComplexMatrix& a, const ComplexMatrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    throw ShapeMismatch(std::to_string(a.rows()) + "x" + std::to_string(a.cols()) + " vs " +
                        std::to_string(b.rows()) + "x" + std::to_string(b.cols()));
  }
  return a.conjugate().cwiseProduct(b).sum();
}

inline double hs_inner(const HermitianOperator& a, const HermitianOperator& b) {
  return hs_inner(a.matrix(), b.matrix()).real();
}

}  // namespace petzlab
