#pragma once

// Quantum channels in Kraus form: Lambda(A) = sum_j E_j A E_j^dagger.

#include <cmath>
#include <string>
#include <utility>
#include <vector>

#include "petzlab/operators.hpp"

namespace petzlab {

struct CptpReport {
  double completeness_residual = 0.0;  // max_ij |(sum_j E_j^dagger E_j - I)_ij|
  double choi_min_eig = 0.0;
  bool is_valid = false;
};

/// A linear map from d x d to d' x d' operators given by its Kraus operators
/// (each d' x d). Constructed via the checked constructor the channel is CPTP
/// within tol::cptp; `unchecked` only validates shapes.
class KrausChannel {
 public:
  explicit KrausChannel(std::vector<ComplexMatrix> kraus_ops) : KrausChannel(Unchecked{}, std::move(kraus_ops)) {
    const double residual = completeness_residual();
    if (residual > tol::cptp) {
      throw NotCptp("completeness residual " + std::to_string(residual));
    }
  }

  static KrausChannel unchecked(std::vector<ComplexMatrix> kraus_ops) {
    return KrausChannel(Unchecked{}, std::move(kraus_ops));
  }

  static KrausChannel identity(Index dim) {
    return KrausChannel({ComplexMatrix::Identity(dim, dim)});
  }

  /// A -> U A U^dagger
  static KrausChannel unitary(const ComplexMatrix& u) { return KrausChannel({u}); }

  /// Qubit depolarizing channel rho -> (1-p) rho + p I/2.
  static KrausChannel depolarizing_qubit(double p) {
    if (p < 0.0 || p > 4.0 / 3.0) throw Error("depolarizing parameter out of range");
    ComplexMatrix x(2, 2), y(2, 2), z(2, 2);
    x << 0, 1, 1, 0;
    y << 0, Complex(0, -1), Complex(0, 1), 0;
    z << 1, 0, 0, -1;
    const double a = std::sqrt(1.0 - 0.75 * p);
    const double b = std::sqrt(p / 4.0);
    return KrausChannel({a * ComplexMatrix::Identity(2, 2), b * x, b * y, b * z});
  }

  Index dim_in() const { return ops_.front().cols(); }
  Index dim_out() const { return ops_.front().rows(); }
  std::size_t size() const { return ops_.size(); }
  const std::vector<ComplexMatrix>& kraus_ops() const { return ops_; }

  double completeness_residual() const {
    ComplexMatrix sum = ComplexMatrix::Zero(dim_in(), dim_in());
    for (const auto& e : ops_) sum.noalias() += e.adjoint() * e;
    sum -= ComplexMatrix::Identity(dim_in(), dim_in());
    return max_abs_entry(sum);
  }

  /// Applies the map to an arbitrary d x d matrix.
  ComplexMatrix apply_matrix(const ComplexMatrix& a) const {
    if (a.rows() != dim_in() || a.cols() != dim_in()) {
      throw DimensionMismatch("channel input is " + std::to_string(dim_in()) +
                              "-dimensional, got " + std::to_string(a.rows()));
    }
    ComplexMatrix out = ComplexMatrix::Zero(dim_out(), dim_out());
    for (const auto& e : ops_) out.noalias() += e * a * e.adjoint();
    return out;
  }

  /// Adjoint w.r.t. tr(A^dagger B): B -> sum_j E_j^dagger B E_j.
  ComplexMatrix adjoint_apply_matrix(const ComplexMatrix& b) const {
    if (b.rows() != dim_out() || b.cols() != dim_out()) {
      throw DimensionMismatch("channel output is " + std::to_string(dim_out()) +
                              "-dimensional, got " + std::to_string(b.rows()));
    }
    ComplexMatrix out = ComplexMatrix::Zero(dim_in(), dim_in());
    for (const auto& e : ops_) out.noalias() += e.adjoint() * b * e;
    return out;
  }

 private:
  struct Unchecked {};
  KrausChannel(Unchecked, std::vector<ComplexMatrix> ops) : ops_(std::move(ops)) {
    if (ops_.empty()) throw ShapeMismatch("a channel needs at least one Kraus operator");
    const Index rows = ops_.front().rows();
    const Index cols = ops_.front().cols();
    if (rows == 0 || cols == 0) throw ShapeMismatch("empty Kraus operator");
    for (const auto& e : ops_) {
      if (e.rows() != rows || e.cols() != cols) {
        throw ShapeMismatch("Kraus operators must share one shape");
      }
      require_finite(e, "Kraus operator");
    }
    if (static_cast<Index>(ops_.size()) > rows * cols) {
      throw ShapeMismatch("at most d*d' Kraus operators are allowed, got " +
                          std::to_string(ops_.size()));
    }
  }

  std::vector<ComplexMatrix> ops_;
};

inline HermitianOperator apply(const KrausChannel& channel, const HermitianOperator& a) {
  return HermitianOperator::symmetrized(channel.apply_matrix(a.matrix()));
}

/// Channel image of a positive operator, with round-off negatives clamped.
inline PositiveOperator apply(const KrausChannel& channel, const PositiveOperator& a) {
  return PositiveOperator(apply(channel, static_cast<const HermitianOperator&>(a)));
}

inline HermitianOperator adjoint_apply(const KrausChannel& channel, const HermitianOperator& b) {
  return HermitianOperator::symmetrized(channel.adjoint_apply_matrix(b.matrix()));
}

/// sum_jk |j><k| (x) Lambda(|j><k|), input factor first, dimension d*d'.
struct ChoiMatrix {
  PositiveOperator op;
  Index dim_in;
  Index dim_out;

  /// Trace over the output factor; equals I_d for trace-preserving maps.
  ComplexMatrix partial_trace_output() const {
    ComplexMatrix out(dim_in, dim_in);
    for (Index j = 0; j < dim_in; ++j)
      for (Index k = 0; k < dim_in; ++k)
        out(j, k) = op.matrix().block(j * dim_out, k * dim_out, dim_out, dim_out).trace();
    return out;
  }
};

namespace detail {

inline HermitianOperator choi_hermitian(const KrausChannel& channel) {
  const Index d = channel.dim_in();
  const Index dp = channel.dim_out();
  ComplexMatrix c = ComplexMatrix::Zero(d * dp, d * dp);
  // Lambda(|j><k|) = sum_e E|j><k|E^dagger = sum_e col_j(E) col_k(E)^dagger
  for (const auto& e : channel.kraus_ops()) {
    for (Index j = 0; j < d; ++j)
      for (Index k = 0; k < d; ++k)
        c.block(j * dp, k * dp, dp, dp).noalias() += e.col(j) * e.col(k).adjoint();
  }
  return HermitianOperator::symmetrized(c);
}

}  // namespace detail

/// Throws NotPositive only if round-off exceeds tol::psd; Kraus maps are CP.
inline ChoiMatrix choi(const KrausChannel& channel) {
  return {PositiveOperator(detail::choi_hermitian(channel)), channel.dim_in(), channel.dim_out()};
}

inline CptpReport validate_cptp(const KrausChannel& channel) {
  CptpReport report;
  report.completeness_residual = channel.completeness_residual();
  report.choi_min_eig = eigh(detail::choi_hermitian(channel)).eigenvalues(0);
  report.is_valid = report.completeness_residual <= tol::cptp && report.choi_min_eig >= -tol::psd;
  return report;
}

}  // namespace petzlab
