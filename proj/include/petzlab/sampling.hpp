#pragma once

// Reproducible random states, Hermitian operators and channels.
//
// Every draw is a pure function of (seed, dim, sample_index, stream): the
// generator is a counter-based SplitMix64 stream keyed on that tuple, so
// samples can be produced in any order or in parallel with identical bits.

#include <cmath>
#include <cstdint>
#include <numbers>
#include <optional>
#include <vector>

#include "petzlab/channels.hpp"
#include "petzlab/operators.hpp"

namespace petzlab {

struct SamplerConfig {
  std::uint64_t seed = 0;
  Index dim = 2;
  std::uint64_t sample_index = 0;
};

/// Stream tags for the draws made per sample. Callers needing extra
/// independent draws can pass any other value.
enum class Stream : std::uint64_t {
  density = 0x64656e73ULL,
  channel = 0x6368616eULL,
  kraus_count = 0x6b636e74ULL,
  hermitian = 0x6865726dULL,
  sigma = 0x7369676dULL,
};

inline constexpr std::uint64_t splitmix64(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

class CounterRng {
 public:
  CounterRng(const SamplerConfig& cfg, std::uint64_t stream, std::uint64_t attempt = 0) {
    std::uint64_t k = splitmix64(cfg.seed ^ 0x5045545aULL);
    k = splitmix64(k ^ static_cast<std::uint64_t>(cfg.dim));
    k = splitmix64(k ^ cfg.sample_index);
    k = splitmix64(k ^ stream);
    key_ = splitmix64(k ^ attempt);
  }
  CounterRng(const SamplerConfig& cfg, Stream stream, std::uint64_t attempt = 0)
      : CounterRng(cfg, static_cast<std::uint64_t>(stream), attempt) {}

  std::uint64_t next() {
    ++counter_;
    return splitmix64(key_ + counter_ * 0x9e3779b97f4a7c15ULL);
  }

  /// Uniform on the open interval (0, 1).
  double uniform() { return (static_cast<double>(next() >> 11) + 0.5) * 0x1.0p-53; }

  /// Uniform integer in [0, n), n > 0. Rejection keeps it unbiased.
  std::uint64_t below(std::uint64_t n) {
    const std::uint64_t limit = ~std::uint64_t{0} - (~std::uint64_t{0} % n);
    std::uint64_t x = next();
    while (x >= limit) x = next();
    return x % n;
  }

  /// Standard normal via Box-Muller.
  double normal() {
    if (spare_) {
      const double z = *spare_;
      spare_.reset();
      return z;
    }
    const double r = std::sqrt(-2.0 * std::log(uniform()));
    const double theta = 2.0 * std::numbers::pi * uniform();
    spare_ = r * std::sin(theta);
    return r * std::cos(theta);
  }

  /// Independent unit-variance real and imaginary parts.
  Complex complex_normal() {
    const double re = normal();
    return {re, normal()};
  }

  ComplexMatrix ginibre(Index rows, Index cols) {
    ComplexMatrix m(rows, cols);
    for (Index i = 0; i < rows; ++i)
      for (Index j = 0; j < cols; ++j) m(i, j) = complex_normal();
    return m;
  }

 private:
  std::uint64_t key_ = 0;
  std::uint64_t counter_ = 0;
  std::optional<double> spare_;
};

/// rho = M^dagger M / tr(M^dagger M) with M Ginibre.
inline DensityOperator random_density(const SamplerConfig& cfg,
                                      std::uint64_t stream = static_cast<std::uint64_t>(Stream::density)) {
  CounterRng rng(cfg, stream);
  const ComplexMatrix m = rng.ginibre(cfg.dim, cfg.dim);
  const ComplexMatrix gram = m.adjoint() * m;
  return DensityOperator(
      PositiveOperator(HermitianOperator::symmetrized(gram / gram.trace().real())));
}

/// (G + G^dagger)/2 with G Ginibre; exactly Hermitian.
inline HermitianOperator random_hermitian(const SamplerConfig& cfg,
                                          std::uint64_t stream = static_cast<std::uint64_t>(Stream::hermitian)) {
  CounterRng rng(cfg, stream);
  const ComplexMatrix g = rng.ginibre(cfg.dim, cfg.dim);
  return HermitianOperator::symmetrized(g);
}

struct ChannelOptions {
  std::optional<Index> dim_out;       // defaults to cfg.dim
  std::optional<Index> kraus_count;   // defaults to uniform on {ceil(d/d'), ..., d d'}
};

struct ChannelDraw {
  KrausChannel channel;
  int retries = 0;  // singular Gram matrices that were resampled
};

inline constexpr int kMaxGramRetries = 100;

/// E_j = F_j (sum_k F_k^dagger F_k)^{-1/2} with n Ginibre F_j.
inline ChannelDraw draw_channel(const SamplerConfig& cfg, const ChannelOptions& opts = {}) {
  const Index d = cfg.dim;
  const Index dp = opts.dim_out.value_or(d);
  Index n = 0;
  if (opts.kraus_count) {
    n = *opts.kraus_count;
    if (n < 1 || n > d * dp) throw ShapeMismatch("Kraus count out of range [1, d d']");
  } else {
    // n d' >= d is needed for a nonsingular Gram matrix; for d' = d this is n >= 1.
    const Index lowest = (d + dp - 1) / dp;
    CounterRng count_rng(cfg, Stream::kraus_count);
    n = lowest + static_cast<Index>(count_rng.below(static_cast<std::uint64_t>(d * dp - lowest + 1)));
  }

  for (int attempt = 0; attempt <= kMaxGramRetries; ++attempt) {
    CounterRng rng(cfg, Stream::channel, static_cast<std::uint64_t>(attempt));
    std::vector<ComplexMatrix> f;
    f.reserve(static_cast<std::size_t>(n));
    ComplexMatrix gram = ComplexMatrix::Zero(d, d);
    for (Index j = 0; j < n; ++j) {
      f.push_back(rng.ginibre(dp, d));
      gram.noalias() += f.back().adjoint() * f.back();
    }
    const PositiveOperator g(HermitianOperator::symmetrized(gram));
    if (!g.is_strictly_positive()) continue;
    const HermitianOperator inv_sqrt = matrix_power(g, -0.5);
    for (auto& fj : f) fj = fj * inv_sqrt.matrix();
    // One polishing pass: an ill-conditioned Gram matrix leaves a completeness
    // residual ~eps cond(G); the second Gram matrix is ~I and well conditioned.
    ComplexMatrix s = ComplexMatrix::Zero(d, d);
    for (const auto& fj : f) s.noalias() += fj.adjoint() * fj;
    const HermitianOperator polish = matrix_power(PositiveOperator(HermitianOperator::symmetrized(s)), -0.5);
    for (auto& fj : f) fj = fj * polish.matrix();
    return {KrausChannel(std::move(f)), attempt};
  }
  throw SingularGram("Gram matrix singular after " + std::to_string(kMaxGramRetries) + " retries");
}

inline KrausChannel random_channel(const SamplerConfig& cfg, const ChannelOptions& opts = {}) {
  return draw_channel(cfg, opts).channel;
}

/// Unitary conjugation channel: a single Kraus operator is the polar factor
/// of a Ginibre matrix.
inline KrausChannel random_unitary_channel(const SamplerConfig& cfg) {
  return random_channel(cfg, {.dim_out = std::nullopt, .kraus_count = 1});
}

}  // namespace petzlab
