#pragma once

// Entropic functionals: Umegaki relative entropy, the sandwiched Renyi trace
// functionals Q~_alpha / D~_alpha, the absolute-value variant Q^_alpha, and
// the monotonicity gap f(rho) = Q~_2(rho||sigma) - Q~_2(Lambda rho||Lambda sigma)
// together with its gradient and (constant) second derivative.
//
// All logarithms are natural.

#include <cmath>
#include <optional>
#include <string>
#include <tuple>
#include <utility>
#include <vector>


#include "petzlab/channels.hpp"
#include "petzlab/extended.hpp"
#include "petzlab/operators.hpp"

namespace petzlab {

namespace detail {

inline void require_strictly_positive(const PositiveOperator& sigma, double cutoff) {
  if (!sigma.is_strictly_positive(cutoff)) {
    throw SingularSigma("min eigenvalue " + std::to_string(sigma.min_eigenvalue()) +
                        " is below the rank cutoff");
  }
}

inline void require_same_dim(const HermitianOperator& a, const HermitianOperator& b) {
  if (a.dim() != b.dim()) {
    throw DimensionMismatch(std::to_string(a.dim()) + " vs " + std::to_string(b.dim()));
  }
}

inline RealVector sandwiched_spectrum(const HermitianOperator& rho, const PositiveOperator& sigma,
                                      double alpha) {
  if (!(alpha >= 0.5)) throw InvalidAlpha("alpha must be >= 1/2, got " + std::to_string(alpha));
  require_same_dim(rho, sigma);
  require_strictly_positive(sigma, default_rank_cutoff(sigma.dim()));
  const double e = (1.0 - alpha) / (2.0 * alpha);
  if (e == 0.0) return eigh(rho).eigenvalues;
  const HermitianOperator s = matrix_power(sigma, e);
  return eigh(HermitianOperator::symmetrized(s.matrix() * rho.matrix() * s.matrix())).eigenvalues;
}

inline bool is_integer(double x) { return std::isfinite(x) && x == std::floor(x); }

}  // namespace detail

/// Weight of rho outside supp(sigma) above which D(rho||sigma) = +inf.
inline constexpr double kSupportTolerance = 1e-10;

/// D(rho||sigma) = tr(rho log rho) - tr(rho log sigma), in nats. Returns
/// +infinity when rho has weight outside the support of sigma.
inline double relative_entropy(const DensityOperator& rho, const DensityOperator& sigma,
                               std::optional<double> rank_cutoff = std::nullopt) {
  detail::require_same_dim(rho, sigma);
  const double cutoff = rank_cutoff.value_or(default_rank_cutoff(sigma.dim()));
  const auto& sig = sigma.spectrum();
  const double threshold = cutoff * sigma.max_eigenvalue();

  double cross = 0.0;
  double off_support = 0.0;
  for (Index k = 0; k < sig.eigenvalues.size(); ++k) {
    const double weight =
        (sig.eigenvectors.col(k).adjoint() * rho.matrix() * sig.eigenvectors.col(k))(0).real();
    if (sig.eigenvalues(k) <= threshold) {
      off_support += weight;
    } else {
      cross += weight * std::log(sig.eigenvalues(k));
    }
  }
  if (off_support > kSupportTolerance) return kInf;

  double neg_entropy = 0.0;
  for (const double l : rho.spectrum().eigenvalues) {
    if (l > 0.0) neg_entropy += l * std::log(l);
  }
  return neg_entropy - cross;
}

/// Q~_alpha(rho||sigma) = tr[(sigma^{(1-a)/2a} rho sigma^{(1-a)/2a})^a] for PSD rho.
inline double q_alpha(const PositiveOperator& rho, const DensityOperator& sigma, double alpha) {
  const RealVector lam = detail::sandwiched_spectrum(rho, sigma, alpha);
  double q = 0.0;
  for (const double l : lam) q += std::pow(std::max(l, 0.0), alpha);
  return q;
}

/// ||sigma^{-1/4} rho sigma^{-1/4}||_2^2 for any Hermitian rho. sigma must be
/// strictly positive; it need not be normalized.
inline double q2_hermitian(const HermitianOperator& rho, const PositiveOperator& sigma) {
  detail::require_same_dim(rho, sigma);
  detail::require_strictly_positive(sigma, default_rank_cutoff(sigma.dim()));
  const HermitianOperator s = matrix_power(sigma, -0.25);
  return (s.matrix() * rho.matrix() * s.matrix()).squaredNorm();
}

/// Q^_alpha = tr|sigma^{(1-a)/2a} rho sigma^{(1-a)/2a}|^a for Hermitian rho, alpha >= 1.
inline double hat_q_alpha(const HermitianOperator& rho, const DensityOperator& sigma, double alpha) {
  if (!(alpha >= 1.0)) throw InvalidAlpha("alpha must be >= 1, got " + std::to_string(alpha));
  if (alpha == 2.0) return q2_hermitian(rho, sigma);
  const RealVector lam = detail::sandwiched_spectrum(rho, sigma, alpha);
  return lam.cwiseAbs().array().pow(alpha).sum();
}

/// D~_alpha = log(Q~_alpha) / (alpha - 1). For integer alpha the power of
/// the sandwiched operator is defined for any Hermitian rho; otherwise rho
/// must be PSD (UndefinedPower). Odd alpha can give Q <= 0 (NonpositiveQ).
inline double d_alpha(const HermitianOperator& rho, const DensityOperator& sigma, double alpha) {
  if (alpha == 1.0) throw InvalidAlpha("alpha = 1 is the relative-entropy limit");
  double q = 0.0;
  if (alpha == 2.0) {
    q = q2_hermitian(rho, sigma);
  } else {
    const RealVector lam = detail::sandwiched_spectrum(rho, sigma, alpha);
    if (detail::is_integer(alpha)) {
      for (const double l : lam) q += std::pow(l, alpha);
    } else {
      const double scale = std::max(1.0, lam.cwiseAbs().maxCoeff());
      if (lam.minCoeff() < -tol::psd * scale) {
        throw UndefinedPower("non-integer power of a non-positive operator");
      }
      for (const double l : lam) q += std::pow(std::max(l, 0.0), alpha);
    }
  }
  if (!(q > 0.0)) throw NonpositiveQ("Q~_alpha = " + std::to_string(q));
  return std::log(q) / (alpha - 1.0);
}

struct EntropyGap {
  double q2_in = 0.0;   // Q~_2(rho || sigma)
  double q2_out = 0.0;  // Q~_2(Lambda rho || Lambda sigma)
  double gap = 0.0;     // q2_in - q2_out
  // Only populated for density-operator rho.
  std::optional<double> d2_in;
  std::optional<double> d2_out;
  std::optional<double> d2_gap;  // log(q2_in) - log(q2_out)
};

/// f(rho) = Q~_2(rho||sigma) - Q~_2(Lambda(rho)||Lambda(sigma)) with every
/// sigma-dependent root precomputed. Lambda(sigma) powers are pseudo-powers
/// on its support.
class MonotonicityGap {
 public:
  MonotonicityGap(const DensityOperator& sigma, KrausChannel channel,
                  std::optional<double> rank_cutoff = std::nullopt)
      : channel_(std::move(channel)),
        cutoff_(rank_cutoff.value_or(default_rank_cutoff(sigma.dim()))),
        sigma_quarter_(checked_power(sigma, channel_, cutoff_, -0.25)),
        sigma_half_(matrix_power(sigma, -0.5)),
        lambda_sigma_(apply(channel_, static_cast<const PositiveOperator&>(sigma))) {
    for (const auto& k : channel_.kraus_ops()) kraus_.push_back(ext::promote(k));
    const ext::Matrix s = ext::promote(sigma.matrix());
    std::tie(xs_quarter_, xs_half_) = ext::inverse_quarter_and_half(s, cutoff_);
    std::tie(xl_quarter_, xl_half_) = ext::inverse_quarter_and_half(ext_apply(s), cutoff_);
  }

  const KrausChannel& channel() const { return channel_; }
  Index dim() const { return channel_.dim_in(); }
  /// sigma^{-1/4}
  const HermitianOperator& sigma_inv_quarter() const { return sigma_quarter_; }
  const HermitianOperator& sigma_inv_half() const { return sigma_half_; }
  const PositiveOperator& lambda_sigma() const { return lambda_sigma_; }

  EntropyGap evaluate(const HermitianOperator& rho) const {
    check_input(rho);
    const ext::Matrix r = ext::promote(rho.matrix());
    const ext::Real in = ext::frobenius_sq(xs_quarter_ * r * xs_quarter_);
    const ext::Real out = ext::frobenius_sq(xl_quarter_ * ext_apply(r) * xl_quarter_);
    EntropyGap g;
    g.q2_in = static_cast<double>(in);
    g.q2_out = static_cast<double>(out);
    g.gap = static_cast<double>(in - out);
    return g;
  }

  EntropyGap evaluate(const DensityOperator& rho) const {
    EntropyGap g = evaluate(static_cast<const HermitianOperator&>(rho));
    g.d2_in = std::log(g.q2_in);
    g.d2_out = std::log(g.q2_out);
    g.d2_gap = std::log1p(g.gap / g.q2_out);
    return g;
  }

  double value(const HermitianOperator& rho) const { return evaluate(rho).gap; }

  /// grad f = 2 sigma^{-1/2} rho sigma^{-1/2} - 2 Lambda^*[X Lambda(rho) X],
  /// X = Lambda(sigma)^{-1/2}.
  HermitianOperator gradient(const HermitianOperator& rho) const {
    check_input(rho);
    const ext::Matrix r = ext::promote(rho.matrix());
    const ext::Matrix out = xs_half_ * r * xs_half_ - ext_adjoint_apply(xl_half_ * ext_apply(r) * xl_half_);
    return HermitianOperator::symmetrized(2.0 * ext::demote(out));
  }

  /// d^2 f(M, N); independent of the base point.
  double second_derivative(const HermitianOperator& m, const HermitianOperator& n) const {
    check_input(m);
    check_input(n);
    const ext::Matrix xm = ext::promote(m.matrix());
    const ext::Matrix xn = ext::promote(n.matrix());
    const ext::Real in = ext::trace_product(xm, xs_half_ * xn * xs_half_);
    const ext::Real out = ext::trace_product(ext_apply(xm), xl_half_ * ext_apply(xn) * xl_half_);
    return static_cast<double>(2 * (in - out));
  }

 private:
  static HermitianOperator checked_power(const DensityOperator& sigma, const KrausChannel& channel,
                                         double cutoff, double exponent) {
    if (sigma.dim() != channel.dim_in()) {
      throw DimensionMismatch("sigma is " + std::to_string(sigma.dim()) +
                              "-dimensional but the channel acts on " +
                              std::to_string(channel.dim_in()));
    }
    detail::require_strictly_positive(sigma, cutoff);
    return matrix_power(sigma, exponent);
  }

  void check_input(const HermitianOperator& rho) const {
    if (rho.dim() != dim()) {
      throw DimensionMismatch("expected dimension " + std::to_string(dim()) + ", got " +
                              std::to_string(rho.dim()));
    }
  }

  ext::Matrix ext_apply(const ext::Matrix& m) const {
    ext::Matrix out = ext::Matrix::Zero(channel_.dim_out(), channel_.dim_out());
    for (const auto& k : kraus_) out += k * m * k.adjoint();
    return out;
  }

  ext::Matrix ext_adjoint_apply(const ext::Matrix& m) const {
    ext::Matrix out = ext::Matrix::Zero(channel_.dim_in(), channel_.dim_in());
    for (const auto& k : kraus_) out += k.adjoint() * m * k;
    return out;
  }

  KrausChannel channel_;
  double cutoff_;
  HermitianOperator sigma_quarter_;
  HermitianOperator sigma_half_;
  PositiveOperator lambda_sigma_;
  std::vector<ext::Matrix> kraus_;
  ext::Matrix xs_quarter_, xs_half_, xl_quarter_, xl_half_;
};

inline EntropyGap entropy_gap(const HermitianOperator& rho, const DensityOperator& sigma,
                              const KrausChannel& channel) {
  return MonotonicityGap(sigma, channel).evaluate(rho);
}

inline EntropyGap entropy_gap(const DensityOperator& rho, const DensityOperator& sigma,
                              const KrausChannel& channel) {
  return MonotonicityGap(sigma, channel).evaluate(rho);
}

inline HermitianOperator grad_f(const HermitianOperator& rho, const DensityOperator& sigma,
                                const KrausChannel& channel) {
  return MonotonicityGap(sigma, channel).gradient(rho);
}

inline double second_derivative_f(const HermitianOperator& m, const HermitianOperator& n,
                                  const DensityOperator& sigma, const KrausChannel& channel) {
  return MonotonicityGap(sigma, channel).second_derivative(m, n);
}

}  // namespace petzlab
