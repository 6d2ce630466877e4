#pragma once

// Randomized property suite over every module. Each property is checked on
// `trials` random instances per dimension; a trial passes when its excess
// (measured deviation minus the allowed tolerance) is <= 0.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include <json.hpp>

#include "petzlab/bounds.hpp"
#include "petzlab/channels.hpp"
#include "petzlab/operators.hpp"
#include "petzlab/petz.hpp"
#include "petzlab/renyi.hpp"
#include "petzlab/sampling.hpp"

namespace petzlab {

struct PropertyResult {
  std::string module;
  std::string name;
  std::size_t trials = 0;
  std::size_t failures = 0;
  double worst_excess = -kInf;  // max over trials of (deviation - tolerance)
  std::string first_failure;

  bool passed() const { return failures == 0; }
};

struct VerifyReport {
  std::size_t passed = 0;
  std::size_t failed = 0;
  std::vector<PropertyResult> details;

  bool ok() const { return failed == 0; }

  nlohmann::json to_json() const {
    nlohmann::json j;
    j["passed"] = passed;
    j["failed"] = failed;
    j["details"] = nlohmann::json::array();
    for (const auto& p : details) {
      nlohmann::json e{{"module", p.module},     {"name", p.name},
                       {"trials", p.trials},     {"failures", p.failures},
                       {"passed", p.passed()}};
      if (p.trials > 0 && std::isfinite(p.worst_excess)) e["worst_excess"] = p.worst_excess;
      if (!p.first_failure.empty()) e["first_failure"] = p.first_failure;
      j["details"].push_back(e);
    }
    return j;
  }
};

struct VerifyConfig {
  std::uint64_t seed = 20211104;
  std::vector<Index> dims{2, 3};
  std::size_t trials = 1000;
  /// Extra channel fed to the CPTP-validity property (negative control).
  std::optional<KrausChannel> injected_channel;
};

namespace detail {

inline double rel_diff(const ComplexMatrix& a, const ComplexMatrix& b) {
  const double scale = std::max({a.norm(), b.norm(), 1e-300});
  return (a - b).norm() / scale;
}

inline double rel_diff(double a, double b) {
  const double scale = std::max({std::abs(a), std::abs(b), 1e-300});
  return std::abs(a - b) / scale;
}

constexpr std::uint64_t tag(const char* name, std::uint64_t k = 0) {
  std::uint64_t h = 1469598103934665603ULL;
  for (const char* c = name; *c; ++c) h = (h ^ static_cast<unsigned char>(*c)) * 1099511628211ULL;
  return splitmix64(h + k);
}

class PropertyRunner {
 public:
  explicit PropertyRunner(const VerifyConfig& cfg) : cfg_(cfg) {}

  /// `excess(sampler)` returns deviation - tolerance for one trial.
  void run(const std::string& module, const std::string& name,
           const std::function<double(const SamplerConfig&)>& excess) {
    PropertyResult r;
    r.module = module;
    r.name = name;
    for (const Index d : cfg_.dims) {
      for (std::size_t i = 0; i < cfg_.trials; ++i) {
        const SamplerConfig sc{cfg_.seed ^ tag(name.c_str()), d, i};
        ++r.trials;
        double e = 0.0;
        std::string why;
        try {
          e = excess(sc);
          if (std::isnan(e)) why = "NaN";
        } catch (const std::exception& ex) {
          why = ex.what();
          e = kInf;
        }
        r.worst_excess = std::max(r.worst_excess, e);
        if (e > 0.0 || !why.empty()) {
          ++r.failures;
          if (r.first_failure.empty()) {
            r.first_failure = "d=" + std::to_string(d) + " trial=" + std::to_string(i) +
                              (why.empty() ? " excess=" + std::to_string(e) : " " + why);
          }
        }
      }
    }
    results_.push_back(std::move(r));
  }

  void record(PropertyResult r) { results_.push_back(std::move(r)); }

  VerifyReport report() const {
    VerifyReport rep;
    rep.details = results_;
    for (const auto& r : results_) (r.passed() ? rep.passed : rep.failed)++;
    return rep;
  }

 private:
  const VerifyConfig& cfg_;
  std::vector<PropertyResult> results_;
};

inline HermitianOperator unit_direction(const SamplerConfig& sc, std::uint64_t stream) {
  const HermitianOperator m = random_hermitian(sc, stream);
  return (1.0 / m.matrix().norm()) * m;
}

}  // namespace detail

inline VerifyReport verify_suite(const VerifyConfig& cfg) {
  using detail::rel_diff;
  using detail::tag;
  detail::PropertyRunner run(cfg);
  const auto rho_of = [](const SamplerConfig& sc) { return random_density(sc); };
  const auto sigma_of = [](const SamplerConfig& sc) {
    return random_density(sc, static_cast<std::uint64_t>(Stream::sigma));
  };
  const auto herm_of = [](const SamplerConfig& sc, std::uint64_t k) {
    return random_hermitian(sc, tag("hermitian", k));
  };

  // operator-core
  run.run("operator-core", "eigh_round_trip", [&](const SamplerConfig& sc) {
    const HermitianOperator a = herm_of(sc, 0);
    const auto e = eigh(a);
    const double d = static_cast<double>(a.dim());
    const double recon = (a.matrix() - e.reconstruct()).norm() - 1e-12 * d * a.matrix().norm();
    const ComplexMatrix vv = e.eigenvectors.adjoint() * e.eigenvectors;
    const double unitary =
        max_abs_entry(vv - ComplexMatrix::Identity(a.dim(), a.dim())) - 1e-12 * d;
    const bool sorted = std::is_sorted(e.eigenvalues.begin(), e.eigenvalues.end());
    return std::max({recon, unitary, sorted ? -1.0 : 1.0});
  });
  run.run("operator-core", "holder", [&](const SamplerConfig& sc) {
    const HermitianOperator a = herm_of(sc, 0), b = herm_of(sc, 1);
    const ComplexMatrix ab = a.matrix() * b.matrix();
    double worst = -kInf;
    using Triple = std::tuple<double, double, double>;
    for (const auto& [p, q, r] : {Triple{2.0, 2.0, 1.0}, Triple{4.0, 4.0, 2.0}, Triple{1.0, kInf, 1.0}}) {
      const double rhs = schatten_norm(a, p) * schatten_norm(b, q);
      worst = std::max(worst, schatten_norm(ab, r) - rhs * (1.0 + 1e-12));
    }
    return worst;
  });
  run.run("operator-core", "power_norm_identity", [&](const SamplerConfig& sc) {
    const DensityOperator s = sigma_of(sc);
    const double lhs1 = std::pow(schatten_norm(matrix_power(s, 0.5), 4.0), 2.0);
    const double lhs2 = std::pow(schatten_norm(matrix_power(s, -0.25), kInf), 2.0);
    const double inv_norm = schatten_norm(matrix_power(s, -1.0), kInf);
    return std::max(rel_diff(lhs1, schatten_norm(s, 2.0)), rel_diff(lhs2, std::sqrt(inv_norm))) - 1e-10;
  });
  run.run("operator-core", "matrix_power_composition", [&](const SamplerConfig& sc) {
    const DensityOperator s = sigma_of(sc);
    double worst = -kInf;
    using Pair = std::pair<double, double>;
    for (const auto& [a, b] : {Pair{0.5, 0.5}, Pair{-0.25, -0.25}, Pair{0.5, -0.25}, Pair{-0.5, 1.5}}) {
      const ComplexMatrix prod = matrix_power(s, a).matrix() * matrix_power(s, b).matrix();
      worst = std::max(worst, rel_diff(prod, matrix_power(s, a + b).matrix()) - 1e-10);
    }
    return worst;
  });

  // channels
  run.run("channels", "trace_preservation", [&](const SamplerConfig& sc) {
    const KrausChannel c = random_channel(sc);
    const HermitianOperator a = herm_of(sc, 0);
    return std::abs(apply(c, a).trace() - a.trace()) - 1e-10 * trace_norm(a);
  });
  run.run("channels", "complete_positivity", [&](const SamplerConfig& sc) {
    return -1e-10 - validate_cptp(random_channel(sc)).choi_min_eig;
  });
  run.run("channels", "adjointness", [&](const SamplerConfig& sc) {
    const KrausChannel c = random_channel(sc);
    const HermitianOperator a = herm_of(sc, 0), b = herm_of(sc, 1);
    const double lhs = hs_inner(adjoint_apply(c, b), a);
    const double rhs = hs_inner(b, apply(c, a));
    return std::abs(lhs - rhs) - 1e-12 * a.matrix().norm() * b.matrix().norm();
  });
  {
    PropertyResult r;
    r.module = "channels";
    r.name = "cptp_validity";
    std::vector<std::pair<std::string, KrausChannel>> channels;
    for (const Index d : cfg.dims)
      for (std::size_t i = 0; i < cfg.trials; ++i) {
        const SamplerConfig sc{cfg.seed ^ tag("cptp_validity"), d, i};
        channels.emplace_back("d=" + std::to_string(d) + " trial=" + std::to_string(i),
                              random_channel(sc));
      }
    if (cfg.injected_channel) channels.emplace_back("injected fixture", *cfg.injected_channel);
    for (const auto& [label, c] : channels) {
      ++r.trials;
      const CptpReport rep = validate_cptp(c);
      const double excess = std::max(rep.completeness_residual - 1e-10, -tol::psd - rep.choi_min_eig);
      r.worst_excess = std::max(r.worst_excess, excess);
      if (!rep.is_valid || excess > 0.0) {
        ++r.failures;
        if (r.first_failure.empty()) {
          r.first_failure = label + " residual=" + std::to_string(rep.completeness_residual);
        }
      }
    }
    run.record(std::move(r));
  }

  // petz
  run.run("petz", "fixed_point", [&](const SamplerConfig& sc) {
    const DensityOperator s = sigma_of(sc);
    return recovery_error(s, s, random_channel(sc)) - 1e-9;
  });
  run.run("petz", "recovery_is_cptp", [&](const SamplerConfig& sc) {
    const PetzRecovery r(sigma_of(sc), random_channel(sc));
    if (r.lambda_sigma().min_eigenvalue() <= 1e-8) return -1.0;
    const CptpReport rep = validate_cptp(r.kraus());
    return std::max(rep.completeness_residual - 1e-8, -tol::psd - rep.choi_min_eig);
  });
  run.run("petz", "kraus_matches_closure", [&](const SamplerConfig& sc) {
    const PetzRecovery r(sigma_of(sc), random_channel(sc));
    const HermitianOperator m = herm_of(sc, 0);
    const ComplexMatrix closure = r.recover(m).matrix();
    const ComplexMatrix kraus = r.kraus().apply_matrix(m.matrix());
    return (closure - kraus).norm() - 1e-10 * std::max(1.0, closure.norm());
  });
  run.run("petz", "unitary_saturation", [&](const SamplerConfig& sc) {
    const KrausChannel u = random_unitary_channel(sc);
    const DensityOperator rho = rho_of(sc);
    const double mixed = recovery_error(rho, DensityOperator::maximally_mixed(sc.dim), u);
    const double general = recovery_error(rho, sigma_of(sc), u);
    return std::max(mixed, general) - 1e-7;
  });
  run.run("petz", "gradient_identity", [&](const SamplerConfig& sc) {
    const DensityOperator s = sigma_of(sc);
    const KrausChannel c = random_channel(sc);
    const HermitianOperator rho = herm_of(sc, 0);
    const PetzRecovery r(s, c);
    const HermitianOperator inv_half = matrix_power(s, -0.5);
    const ComplexMatrix via_petz =
        2.0 * inv_half.matrix() * (rho - r.round_trip(rho)).matrix() * inv_half.matrix();
    // relative to the input-side term 2 sigma^{-1/2} rho sigma^{-1/2}; both sides
    // vanish for saturating channels
    const double scale = 2.0 * (inv_half.matrix() * rho.matrix() * inv_half.matrix()).norm();
    return (via_petz - grad_f(rho, s, c).matrix()).norm() - 1e-8 * scale;
  });

  // renyi
  run.run("renyi", "hermitian_data_processing", [&](const SamplerConfig& sc) {
    const DensityOperator s = sigma_of(sc);
    const KrausChannel c = random_channel(sc);
    const HermitianOperator rho = herm_of(sc, 0);
    return -1e-10 - entropy_gap(rho, s, c).gap;
  });
  run.run("renyi", "hat_q_data_processing", [&](const SamplerConfig& sc) {
    const DensityOperator s = sigma_of(sc);
    const KrausChannel c = random_channel(sc);
    const HermitianOperator rho = herm_of(sc, 0);
    const DensityOperator out_sigma(apply(c, static_cast<const PositiveOperator&>(s)));
    const HermitianOperator out_rho = apply(c, rho);
    double worst = -kInf;
    for (const double alpha : {1.0, 1.5, 2.0, 3.0}) {
      const double in = hat_q_alpha(rho, s, alpha);
      const double gap = in - hat_q_alpha(out_rho, out_sigma, alpha);
      worst = std::max(worst, -1e-9 * std::max(1.0, in) - gap);
    }
    return worst;
  });
  run.run("renyi", "gradient_finite_difference", [&](const SamplerConfig& sc) {
    const MonotonicityGap f(sigma_of(sc), random_channel(sc));
    const HermitianOperator rho = rho_of(sc);
    const HermitianOperator m = detail::unit_direction(sc, tag("direction"));
    const double h = 1e-5;
    const double fd = (f.value(rho + h * m) - f.value(rho - h * m)) / (2.0 * h);
    const double analytic = hs_inner(f.gradient(rho), m);
    // d/dh of the input-side term alone bounds the size of the round-off
    const double scale = std::max(std::abs(analytic), 2.0 * std::sqrt(f.evaluate(rho).q2_in * f.evaluate(m).q2_in));
    return std::abs(fd - analytic) - 1e-6 * scale;
  });
  run.run("renyi", "quadratic_exactness", [&](const SamplerConfig& sc) {
    const MonotonicityGap f(sigma_of(sc), random_channel(sc));
    const HermitianOperator rho = rho_of(sc);
    const HermitianOperator m = herm_of(sc, 1);
    const double t = 0.37 + static_cast<double>(sc.sample_index % 7);
    const double lhs = f.value(rho + t * m);
    const double lin = t * hs_inner(f.gradient(rho), m);
    const double quad = t * t * f.value(m);
    const double scale = f.evaluate(rho + t * m).q2_in + f.evaluate(rho).q2_in + t * t * f.evaluate(m).q2_in;
    return std::abs(lhs - (f.value(rho) + lin + quad)) - 1e-9 * scale;
  });
  run.run("renyi", "second_derivative_is_2f", [&](const SamplerConfig& sc) {
    const MonotonicityGap f(sigma_of(sc), random_channel(sc));
    const HermitianOperator m = herm_of(sc, 0);
    const double scale = 2.0 * f.evaluate(m).q2_in;
    return std::abs(f.second_derivative(m, m) - 2.0 * f.value(m)) - 1e-9 * scale;
  });
  run.run("renyi", "gradient_norm_bound", [&](const SamplerConfig& sc) {
    const DensityOperator s = sigma_of(sc);
    const MonotonicityGap f(s, random_channel(sc));
    const HermitianOperator rho = (sc.sample_index % 2 == 0)
                                      ? static_cast<HermitianOperator>(rho_of(sc))
                                      : herm_of(sc, 0);
    const double grad = f.gradient(rho).matrix().norm();
    const double factor = std::pow(schatten_norm(f.sigma_inv_quarter(), kInf), 2.0);
    return grad - (2.0 * std::sqrt(clamp_gap(f.value(rho))) * factor + 1e-9);
  });

  // bounds
  run.run("bounds", "bound_satisfaction", [&](const SamplerConfig& sc) {
    const DensityOperator rho = rho_of(sc);
    const KrausChannel c = random_channel(sc);
    const auto mixed = assess(rho, DensityOperator::maximally_mixed(sc.dim), c);
    const auto general = assess(rho, sigma_of(sc), c);
    const double e1 = std::max({mixed.lhs - mixed.bound_q, mixed.lhs - mixed.bound_d,
                                mixed.lhs - mixed.bound_general});
    const double e2 = general.lhs - general.bound_general;
    return std::max(e1, e2) - kBoundSlack;
  });
  run.run("bounds", "bound_ordering", [&](const SamplerConfig& sc) {
    const auto a = assess(rho_of(sc), DensityOperator::maximally_mixed(sc.dim), random_channel(sc));
    return a.bound_q - a.bound_d - 1e-12;
  });
  run.run("bounds", "reduction_consistency", [&](const SamplerConfig& sc) {
    const DensityOperator rho = rho_of(sc);
    const KrausChannel c = random_channel(sc);
    const double general = bound_general(rho, DensityOperator::maximally_mixed(sc.dim), c);
    return std::abs(general - bound_q(rho, c)) - 1e-12;
  });
  run.run("bounds", "ratio_cap", [&](const SamplerConfig& sc) {
    const auto a = assess(rho_of(sc), DensityOperator::maximally_mixed(sc.dim), random_channel(sc));
    return std::max({-a.ratio_q, -a.ratio_d, a.ratio_q - 1.0 - kBoundSlack,
                     a.ratio_d - 1.0 - kBoundSlack});
  });

  // sampling
  run.run("sampling", "determinism", [&](const SamplerConfig& sc) {
    const bool same_rho = rho_of(sc).matrix() == rho_of(sc).matrix();
    const auto c1 = random_channel(sc), c2 = random_channel(sc);
    bool same_channel = c1.size() == c2.size();
    for (std::size_t j = 0; same_channel && j < c1.size(); ++j)
      same_channel = c1.kraus_ops()[j] == c2.kraus_ops()[j];
    return same_rho && same_channel ? -1.0 : 1.0;
  });
  run.run("sampling", "kraus_count_range", [&](const SamplerConfig& sc) {
    const auto n = static_cast<Index>(random_channel(sc).size());
    return (n >= 1 && n <= sc.dim * sc.dim) ? -1.0 : 1.0;
  });

  return run.report();
}

}  // namespace petzlab
