#pragma once

// Petz recovery map
//   R(M) = sigma^{1/2} Lambda^*[ Lambda(sigma)^{-1/2} M Lambda(sigma)^{-1/2} ] sigma^{1/2}.
//
// Lambda(sigma)^{-1/2} is a pseudo-power on the support of Lambda(sigma), so
// components of M outside that support are projected away before the
// adjoint is applied. For strictly positive Lambda(sigma) this is the usual
// Petz map and R is CPTP.

#include <optional>
#include <utility>
#include <vector>

#include "petzlab/channels.hpp"
#include "petzlab/operators.hpp"

namespace petzlab {

class PetzRecovery {
 public:
  PetzRecovery(const DensityOperator& sigma, KrausChannel channel,
               std::optional<double> rank_cutoff = std::nullopt)
      : sigma_(sigma),
        channel_(std::move(channel)),
        cutoff_(rank_cutoff.value_or(default_rank_cutoff(sigma.dim()))),
        lambda_sigma_(checked_image(sigma_, channel_, cutoff_)),
        sqrt_sigma_(matrix_power(sigma_, 0.5)),
        inv_sqrt_lambda_sigma_(matrix_power(lambda_sigma_, -0.5, cutoff_)) {}

  const DensityOperator& sigma() const { return sigma_; }
  const KrausChannel& channel() const { return channel_; }
  const PositiveOperator& lambda_sigma() const { return lambda_sigma_; }
  const HermitianOperator& sqrt_sigma() const { return sqrt_sigma_; }
  const HermitianOperator& inv_sqrt_lambda_sigma() const { return inv_sqrt_lambda_sigma_; }
  double rank_cutoff() const { return cutoff_; }

  /// R(M) for M on the output space.
  HermitianOperator recover(const HermitianOperator& m) const {
    if (m.dim() != channel_.dim_out()) {
      throw DimensionMismatch("recovery input must be " + std::to_string(channel_.dim_out()) +
                              "-dimensional, got " + std::to_string(m.dim()));
    }
    const ComplexMatrix& x = inv_sqrt_lambda_sigma_.matrix();
    const ComplexMatrix& s = sqrt_sigma_.matrix();
    const ComplexMatrix inner = channel_.adjoint_apply_matrix(x * m.matrix() * x);
    return HermitianOperator::symmetrized(s * inner * s);
  }

  /// (R o Lambda)(rho)
  HermitianOperator round_trip(const HermitianOperator& rho) const {
    return recover(apply(channel_, rho));
  }

  /// Kraus form K_j = sigma^{1/2} E_j^dagger Lambda(sigma)^{-1/2}. It is
  /// complete only when Lambda(sigma) is strictly positive, hence unchecked.
  KrausChannel kraus() const {
    std::vector<ComplexMatrix> ops;
    ops.reserve(channel_.size());
    for (const auto& e : channel_.kraus_ops()) {
      ops.push_back(sqrt_sigma_.matrix() * e.adjoint() * inv_sqrt_lambda_sigma_.matrix());
    }
    return KrausChannel::unchecked(std::move(ops));
  }

 private:
  static PositiveOperator checked_image(const DensityOperator& sigma, const KrausChannel& channel,
                                        double cutoff) {
    if (sigma.dim() != channel.dim_in()) {
      throw DimensionMismatch("sigma is " + std::to_string(sigma.dim()) +
                              "-dimensional but the channel acts on " +
                              std::to_string(channel.dim_in()));
    }
    if (!sigma.is_strictly_positive(cutoff)) {
      throw SingularSigma("min eigenvalue " + std::to_string(sigma.min_eigenvalue()) +
                          " is below the rank cutoff");
    }
    return apply(channel, static_cast<const PositiveOperator&>(sigma));
  }

  DensityOperator sigma_;
  KrausChannel channel_;
  double cutoff_;
  PositiveOperator lambda_sigma_;
  HermitianOperator sqrt_sigma_;
  HermitianOperator inv_sqrt_lambda_sigma_;
};

inline PetzRecovery build_petz(const DensityOperator& sigma, const KrausChannel& channel,
                               std::optional<double> rank_cutoff = std::nullopt) {
  return PetzRecovery(sigma, channel, rank_cutoff);
}

inline HermitianOperator recover(const PetzRecovery& r, const HermitianOperator& m) {
  return r.recover(m);
}

/// ||rho - (R o Lambda)(rho)||_1. rho may be any Hermitian operator.
inline double recovery_error(const PetzRecovery& r, const HermitianOperator& rho) {
  return trace_norm(rho - r.round_trip(rho));
}

inline double recovery_error(const HermitianOperator& rho, const DensityOperator& sigma,
                             const KrausChannel& channel) {
  return recovery_error(build_petz(sigma, channel), rho);
}

}  // namespace petzlab
