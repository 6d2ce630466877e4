// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any failure.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <string>
#include <vector>

#include "petzlab/petzlab.hpp"

using namespace petzlab;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* f, double a, double b = 0, double c = 0, double d = 0) {
  char buf[256];
  std::snprintf(buf, sizeof buf, f, a, b, c, d);
  return buf;
}

SamplerConfig sc(std::uint64_t salt, Index d, std::uint64_t i) { return {kDefaultSeed ^ salt, d, i}; }

DensityOperator sigma_for(const SamplerConfig& c) {
  return random_density(c, static_cast<std::uint64_t>(Stream::sigma));
}

HermitianOperator unit(const HermitianOperator& m) { return (1.0 / m.matrix().norm()) * m; }

std::vector<std::string> csv_lines(const std::vector<SampleRow>& rows) {
  std::vector<std::string> out;
  out.reserve(rows.size());
  for (const auto& r : rows) out.push_back(csv_line(r));
  return out;
}

Outcome bound_satisfaction() {
  ExperimentConfig cfg;
  cfg.samples_per_dim = 10000;
  std::size_t bad = 0, failed = 0;
  double worst = -kInf;
  for (const Index d : {2, 3}) {
    for (const auto& r : evaluate_dimension(cfg, d)) {
      if (!r.assessment) {
        ++failed;
        continue;
      }
      if (!r.ok()) ++bad;
      const auto& a = *r.assessment;
      worst = std::max({worst, a.lhs - a.bound_general, a.lhs - a.bound_q, a.lhs - a.bound_d});
    }
  }
  return {bad == 0 && failed == 0,
          fmt("20000 samples, %.0f violations, %.0f numeric failures, max(lhs - bound) = %.3g", double(bad),
              double(failed), worst)};
}

Outcome unitary_saturation() {
  double worst = 0;
  for (const Index d : {2, 3, 4}) {
    for (std::uint64_t i = 0; i < 500; ++i) {
      const auto c = sc(0x11, d, i);
      worst = std::max(worst, recovery_error(random_density(c), sigma_for(c), random_unitary_channel(c)));
    }
  }
  return {worst <= 1e-7, fmt("1500 unitary channels, max recovery error %.3g (limit 1e-7)", worst)};
}

Outcome fixed_point() {
  double worst = 0;
  for (std::uint64_t i = 0; i < 1000; ++i) {
    const auto c = sc(0x22, 2 + static_cast<Index>(i % 3), i);
    const auto s = sigma_for(c);
    worst = std::max(worst, recovery_error(s, s, random_channel(c)));
  }
  return {worst <= 1e-9, fmt("1000 instances, max ||(R o Lambda)(sigma) - sigma||_1 = %.3g (limit 1e-9)", worst)};
}

Outcome gradient_fd() {
  double worst = 0;
  for (std::uint64_t i = 0; i < 500; ++i) {
    const auto c = sc(0x33, 2 + static_cast<Index>(i % 2), i);
    const MonotonicityGap f(sigma_for(c), random_channel(c));
    const HermitianOperator rho = random_density(c);
    const HermitianOperator m = unit(random_hermitian(c));
    const double h = 1e-5;
    const double fd = (f.value(rho + h * m) - f.value(rho - h * m)) / (2 * h);
    const double analytic = hs_inner(f.gradient(rho), m);
    const double scale =
        std::max(std::abs(analytic), 2.0 * std::sqrt(f.evaluate(rho).q2_in * f.evaluate(m).q2_in));
    worst = std::max(worst, std::abs(fd - analytic) / scale);
  }
  return {worst <= 1e-6, fmt("500 instances, max relative error %.3g (limit 1e-6)", worst)};
}

Outcome quadratic_structure() {
  double worst_2f = 0, worst_taylor = 0;
  for (std::uint64_t i = 0; i < 500; ++i) {
    const auto c = sc(0x44, 2 + static_cast<Index>(i % 2), i);
    const MonotonicityGap f(sigma_for(c), random_channel(c));
    const HermitianOperator m = random_hermitian(c);
    const HermitianOperator rho = random_density(c);
    const double qm = f.evaluate(m).q2_in;
    worst_2f = std::max(worst_2f, std::abs(f.second_derivative(m, m) - 2 * f.value(m)) / (2 * qm));
    const double t = 0.25 + static_cast<double>(i % 9);
    const double taylor = f.value(rho) + t * hs_inner(f.gradient(rho), m) + t * t * f.value(m);
    const double scale = f.evaluate(rho + t * m).q2_in + f.evaluate(rho).q2_in + t * t * qm;
    worst_taylor = std::max(worst_taylor, std::abs(f.value(rho + t * m) - taylor) / scale);
  }
  return {worst_2f <= 1e-9 && worst_taylor <= 1e-9,
          fmt("500 instances, max relative |d2f(M,M) - 2f(M)| = %.3g, Taylor residual = %.3g (limit 1e-9)",
              worst_2f, worst_taylor)};
}

Outcome hermitian_data_processing() {
  double worst = kInf;
  std::size_t nonpsd = 0;
  for (const Index d : {2, 3}) {
    for (std::uint64_t i = 0; i < 5000; ++i) {
      const auto c = sc(0x55, d, i);
      const HermitianOperator m = random_hermitian(c);
      if (eigh(m).eigenvalues(0) < 0) ++nonpsd;
      const MonotonicityGap f(sigma_for(c), random_channel(c));
      worst = std::min(worst, f.value(m));
    }
  }
  return {worst >= -1e-10,
          fmt("10000 Hermitian inputs (%.0f not PSD), min gap %.3g (limit -1e-10)", double(nonpsd), worst)};
}

Outcome gradient_norm_bound() {
  double worst = -kInf;
  for (std::uint64_t i = 0; i < 5000; ++i) {
    const Index d = 2 + static_cast<Index>(i % 2);
    const auto c = sc(0x66, d, i);
    const DensityOperator s = i % 2 == 0 ? DensityOperator::maximally_mixed(d) : sigma_for(c);
    const MonotonicityGap f(s, random_channel(c));
    const HermitianOperator rho = random_density(c);
    const double factor = std::pow(schatten_norm(matrix_power(s, -0.25), kInf), 2.0);
    const double rhs = 2 * std::sqrt(std::max(f.value(rho), 0.0)) * factor;
    worst = std::max(worst, f.gradient(rho).matrix().norm() - rhs);
  }
  return {worst <= 1e-9, fmt("5000 instances (2500 non-uniform sigma), max(||grad f||_2 - rhs) = %.3g (slack 1e-9)", worst)};
}

Outcome worked_example() {
  ComplexVector psi(2);
  psi << 1, 0;
  const auto a = assess(DensityOperator::pure(psi), DensityOperator::maximally_mixed(2),
                        KrausChannel::depolarizing_qubit(0.5));
  const double r = std::sqrt(0.75);
  const double err = std::max({std::abs(a.lhs - 0.75), std::abs(a.bound_q - r), std::abs(a.bound_d - r)});
  return {err <= 1e-10, fmt("lhs = %.12f, bound_q = %.12f, bound_d = %.12f, max error %.3g", a.lhs, a.bound_q,
                            a.bound_d, err)};
}

// Calibrated against a 100,000-sample run at the default seed (observed max 0.99997).
constexpr double kTightnessThreshold = 0.9;

Outcome appendix_reproduction() {
  ExperimentConfig cfg;
  cfg.samples_per_dim = 100000;
  const auto d2 = summarize(2, evaluate_dimension(cfg, 2));
  const auto d3 = summarize(3, evaluate_dimension(cfg, 3));
  return {d2.max_ratio_q >= kTightnessThreshold && d2.failures == 0,
          fmt("d=2 max ratio_q = %.6f (threshold %.2f), max ratio_d = %.6f; d=3 max ratio_q = %.6f", d2.max_ratio_q,
              kTightnessThreshold, d2.max_ratio_d, d3.max_ratio_q) +
              fmt(", max ratio_d = %.6f (reported only)", d3.max_ratio_d)};
}

Outcome sampler_contracts() {
  std::size_t total = 0, invalid = 0;
  const std::vector<std::pair<Index, Index>> shapes{{2, 2}, {3, 3}, {4, 4}, {2, 3}, {3, 2}, {4, 2}};
  for (const auto& [d, dp] : shapes) {
    for (std::uint64_t i = 0; i < 2000; ++i) {
      ++total;
      if (!validate_cptp(random_channel(sc(0x77, d, i), {.dim_out = dp, .kraus_count = std::nullopt})).is_valid) ++invalid;
    }
  }
  ExperimentConfig cfg;
  cfg.samples_per_dim = 2000;
  cfg.sigma_mode = SigmaMode::random;
  bool identical = true;
  for (const Index d : {2, 3}) {
    cfg.workers = 1;
    const auto a = csv_lines(evaluate_dimension(cfg, d));
    const auto b = csv_lines(evaluate_dimension(cfg, d));
    cfg.workers = 4;
    const auto c = csv_lines(evaluate_dimension(cfg, d));
    identical = identical && a == b && a == c;
  }
  return {invalid == 0 && identical,
          fmt("%.0f/%.0f sampled channels CPTP; ", double(total - invalid), double(total)) +
              (identical ? "CSV rows bit-identical across runs and 1 vs 4 workers"
                         : "CSV rows differ between runs or worker counts")};
}

}  // namespace

int main() {
  const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria{
      {"bound satisfaction", bound_satisfaction},       {"exact-saturation recovery", unitary_saturation},
      {"Petz fixed point", fixed_point},                {"gradient identity", gradient_fd},
      {"quadratic structure", quadratic_structure},     {"Hermitian data processing", hermitian_data_processing},
      {"gradient-norm bound", gradient_norm_bound},     {"worked depolarizing instance", worked_example},
      {"tightness reproduction", appendix_reproduction}, {"sampler contracts", sampler_contracts},
  };
  int failures = 0;
  for (std::size_t k = 0; k < criteria.size(); ++k) {
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = criteria[k].second();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (!o.pass) ++failures;
    std::printf("%s [%zu] %s: %s (%.1fs)\n", o.pass ? "PASS" : "FAIL", k + 1, criteria[k].first, o.detail.c_str(), secs);
    std::fflush(stdout);
  }
  std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failures, criteria.size());
  return failures == 0 ? 0 : 1;
}
