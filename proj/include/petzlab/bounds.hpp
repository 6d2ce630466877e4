#pragma once

// One-norm recovery bounds for the Petz map.
//
//   general:  ||rho - R(Lambda rho)||_1 <= sqrt(f) ||sigma||_2 sqrt(||sigma^{-1}||_inf)
//   q (I/d):  ... <= sqrt(dQ~_2)
//   d (I/d):  ... <= sqrt(d) (1 - exp(-dD~_2))^{1/2}
//   rel-ent:  ... <  4 d (1 - exp(-dD))^{1/4}          (comparison bound)
//
// f and dQ~_2 denote the monotonicity gap of Q~_2; dD~_2 and dD the drops of
// D~_2 and of the relative entropy under Lambda.

#include <cmath>
#include <optional>
#include <string>
#include <vector>

#include "petzlab/channels.hpp"
#include "petzlab/operators.hpp"
#include "petzlab/petz.hpp"
#include "petzlab/renyi.hpp"

namespace petzlab {

/// Gaps in [-kGapClamp, 0) are round-off and clamp to zero.
inline constexpr double kGapClamp = 1e-10;
/// Absolute slack used when checking lhs <= bound.
inline constexpr double kBoundSlack = 1e-9;

inline double clamp_gap(double gap) {
  if (gap < -kGapClamp) {
    throw NegativeGap("monotonicity gap " + std::to_string(gap) + " is negative");
  }
  return gap < 0.0 ? 0.0 : gap;
}

/// ||sigma||_2 * sqrt(||sigma^{-1}||_inf); equals 1 for sigma = I/d.
inline double sigma_bound_factor(const PositiveOperator& sigma) {
  return schatten_norm(sigma, 2.0) * std::sqrt(1.0 / sigma.min_eigenvalue());
}

/// log(q_in) - log(q_out) computed without cancellation for small gaps.
inline double d2_drop(double clamped_gap, double q2_out) {
  return q2_out > 0.0 ? std::log1p(clamped_gap / q2_out) : kInf;
}

inline double bound_from_d2_drop(double drop, Index dim) {
  return std::sqrt(static_cast<double>(dim) * -std::expm1(-drop));
}

inline double bound_general(const HermitianOperator& rho, const DensityOperator& sigma,
                            const KrausChannel& channel) {
  const MonotonicityGap f(sigma, channel);
  return std::sqrt(clamp_gap(f.value(rho))) * sigma_bound_factor(sigma);
}

inline double bound_q(const HermitianOperator& rho, const KrausChannel& channel) {
  const MonotonicityGap f(DensityOperator::maximally_mixed(channel.dim_in()), channel);
  return std::sqrt(clamp_gap(f.value(rho)));
}

inline double bound_d(const DensityOperator& rho, const KrausChannel& channel) {
  const MonotonicityGap f(DensityOperator::maximally_mixed(channel.dim_in()), channel);
  const EntropyGap g = f.evaluate(rho);
  return bound_from_d2_drop(d2_drop(clamp_gap(g.gap), g.q2_out), rho.dim());
}

/// Relative-entropy drop D(rho||I/d) - D(Lambda rho||Lambda(I/d)); absent
/// when either relative entropy is infinite.
inline std::optional<double> relative_entropy_drop(const DensityOperator& rho,
                                                   const KrausChannel& channel) {
  const auto mixed = DensityOperator::maximally_mixed(rho.dim());
  const DensityOperator out(apply(channel, static_cast<const PositiveOperator&>(rho)));
  const DensityOperator mixed_out(apply(channel, static_cast<const PositiveOperator&>(mixed)));
  const double d_in = relative_entropy(rho, mixed);
  const double d_out = relative_entropy(out, mixed_out);
  if (!std::isfinite(d_in) || !std::isfinite(d_out)) return std::nullopt;
  return clamp_gap(d_in - d_out);
}

inline std::optional<double> bound_rel_ent(const DensityOperator& rho, const KrausChannel& channel) {
  const auto drop = relative_entropy_drop(rho, channel);
  if (!drop) return std::nullopt;
  return 4.0 * static_cast<double>(rho.dim()) * std::pow(-std::expm1(-*drop), 0.25);
}

struct RecoveryAssessment {
  Index dim = 0;
  double lhs = 0.0;       // ||rho - (R_sigma o Lambda)(rho)||_1
  double delta_q2 = 0.0;  // f_{sigma,Lambda}(rho), clamped
  double delta_d2 = 0.0;
  std::optional<double> delta_d;  // relative-entropy drop w.r.t. I/d
  double bound_general = 0.0;
  double bound_q = 0.0;
  double bound_d = 0.0;
  std::optional<double> bound_rel_ent;
  double ratio_q = 0.0;
  double ratio_d = 0.0;

  bool sigma_maximally_mixed = true;
  // Recovery error of the I/d Petz map; the I/d bounds and ratios refer to it.
  double lhs_maximally_mixed = 0.0;

  /// Names of the violated invariants; empty for a consistent row.
  std::vector<std::string> violations() const {
    std::vector<std::string> out;
    if (lhs > bound_general + kBoundSlack) out.emplace_back("lhs>bound_general");
    if (lhs_maximally_mixed > bound_q + kBoundSlack) out.emplace_back("lhs>bound_q");
    if (lhs_maximally_mixed > bound_d + kBoundSlack) out.emplace_back("lhs>bound_d");
    if (bound_q > bound_d + 1e-12) out.emplace_back("bound_q>bound_d");
    if (ratio_q < 0.0 || ratio_q > 1.0 + kBoundSlack) out.emplace_back("ratio_q");
    if (ratio_d < 0.0 || ratio_d > 1.0 + kBoundSlack) out.emplace_back("ratio_d");
    return out;
  }
};

namespace detail {

inline double ratio(double lhs, double bound) { return bound > 0.0 ? lhs / bound : 0.0; }

inline bool is_maximally_mixed(const DensityOperator& sigma) {
  const ComplexMatrix target =
      ComplexMatrix::Identity(sigma.dim(), sigma.dim()) / static_cast<double>(sigma.dim());
  return max_abs_entry(sigma.matrix() - target) <= 1e-14;
}

}  // namespace detail

/// Evaluates every bound on one (rho, sigma, Lambda) instance.
inline RecoveryAssessment assess(const DensityOperator& rho, const DensityOperator& sigma,
                                 const KrausChannel& channel) {
  RecoveryAssessment a;
  a.dim = rho.dim();

  const PetzRecovery petz(sigma, channel);
  const MonotonicityGap f(sigma, channel);
  const EntropyGap g = f.evaluate(rho);
  a.lhs = recovery_error(petz, rho);
  a.delta_q2 = clamp_gap(g.gap);
  a.delta_d2 = d2_drop(a.delta_q2, g.q2_out);
  a.bound_general = std::sqrt(a.delta_q2) * sigma_bound_factor(sigma);

  a.sigma_maximally_mixed = detail::is_maximally_mixed(sigma);
  double mixed_gap = a.delta_q2;
  double mixed_drop = a.delta_d2;
  a.lhs_maximally_mixed = a.lhs;
  if (!a.sigma_maximally_mixed) {
    const auto mixed = DensityOperator::maximally_mixed(rho.dim());
    const MonotonicityGap fm(mixed, channel);
    const EntropyGap gm = fm.evaluate(rho);
    mixed_gap = clamp_gap(gm.gap);
    mixed_drop = d2_drop(mixed_gap, gm.q2_out);
    a.lhs_maximally_mixed = recovery_error(PetzRecovery(mixed, channel), rho);
  }
  a.bound_q = std::sqrt(mixed_gap);
  a.bound_d = bound_from_d2_drop(mixed_drop, rho.dim());

  a.delta_d = relative_entropy_drop(rho, channel);
  if (a.delta_d) {
    a.bound_rel_ent = 4.0 * static_cast<double>(rho.dim()) * std::pow(-std::expm1(-*a.delta_d), 0.25);
  }

  a.ratio_q = detail::ratio(a.lhs_maximally_mixed, a.bound_q);
  a.ratio_d = detail::ratio(a.lhs_maximally_mixed, a.bound_d);
  return a;
}

}  // namespace petzlab
