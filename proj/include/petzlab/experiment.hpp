#pragma once

// Monte-Carlo bound experiments: per-dimension sample evaluation on a worker
// pool, CSV persistence and a JSON summary.

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cstdint>
#include <cstdio>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <json.hpp>

#include "petzlab/bounds.hpp"
#include "petzlab/sampling.hpp"

namespace petzlab {

inline constexpr std::uint64_t kDefaultSeed = 20211104;

enum class SigmaMode { maximally_mixed, random, from_file };

inline std::string to_string(SigmaMode m) {
  switch (m) {
    case SigmaMode::maximally_mixed: return "maximally_mixed";
    case SigmaMode::random: return "random";
    case SigmaMode::from_file: return "from_file";
  }
  return "unknown";
}

struct ExperimentConfig {
  std::vector<Index> dims{2, 3};
  std::size_t samples_per_dim = 10000;
  std::uint64_t seed = kDefaultSeed;
  SigmaMode sigma_mode = SigmaMode::maximally_mixed;
  std::optional<DensityOperator> sigma_fixed;  // from_file
  std::filesystem::path outputs = "petzlab-out";
  bool emit_plots = false;
  unsigned workers = 0;  // 0: hardware concurrency
  bool identity_channel = false;

  void validate() const {
    if (dims.empty()) throw Error("ExperimentConfig: dims must be nonempty");
    if (samples_per_dim < 1) throw Error("ExperimentConfig: samples_per_dim must be >= 1");
    for (const Index d : dims)
      if (d < 1) throw Error("ExperimentConfig: dimensions must be positive");
    if (sigma_mode == SigmaMode::from_file && !sigma_fixed) {
      throw Error("ExperimentConfig: from_file sigma mode needs a sigma operator");
    }
  }
};

struct SampleRow {
  std::uint64_t sample_index = 0;
  Index dim = 0;
  std::optional<RecoveryAssessment> assessment;  // absent on numeric failure
  std::string status;                            // ok | violation:<...> | error:<...>

  bool ok() const { return status == "ok"; }
  bool is_violation() const { return status.rfind("violation", 0) == 0; }
};

inline const std::vector<std::string>& csv_columns() {
  static const std::vector<std::string> cols{
      "sample_index", "dim",     "lhs_trace_norm", "delta_q2", "delta_d2",
      "delta_d",      "bound_general", "bound_q",  "bound_d",  "bound_rel_ent",
      "ratio_q",      "ratio_d", "status"};
  return cols;
}

namespace detail {

inline std::string fmt_double(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

inline std::string fmt_optional(const std::optional<double>& x) {
  return x ? fmt_double(*x) : std::string();
}

inline std::string sanitize_status(std::string s) {
  std::replace_if(s.begin(), s.end(), [](char c) { return c == ',' || c == '\n' || c == '\r' || c == '"'; }, ' ');
  return s;
}

}  // namespace detail

inline std::string csv_header() {
  std::string out;
  for (const auto& c : csv_columns()) {
    if (!out.empty()) out += ',';
    out += c;
  }
  return out;
}

inline std::string csv_line(const SampleRow& row) {
  using detail::fmt_double;
  using detail::fmt_optional;
  std::ostringstream os;
  os << row.sample_index << ',' << row.dim << ',';
  if (row.assessment) {
    const auto& a = *row.assessment;
    os << fmt_double(a.lhs) << ',' << fmt_double(a.delta_q2) << ',' << fmt_double(a.delta_d2) << ','
       << fmt_optional(a.delta_d) << ',' << fmt_double(a.bound_general) << ','
       << fmt_double(a.bound_q) << ',' << fmt_double(a.bound_d) << ','
       << fmt_optional(a.bound_rel_ent) << ',' << fmt_double(a.ratio_q) << ','
       << fmt_double(a.ratio_d) << ',';
  } else {
    os << ",,,,,,,,,,";
  }
  os << detail::sanitize_status(row.status);
  return os.str();
}

/// Evaluates one sample. Numeric failures become an error row.
inline SampleRow evaluate_sample(const ExperimentConfig& cfg, Index dim, std::uint64_t index) {
  SampleRow row;
  row.sample_index = index;
  row.dim = dim;
  try {
    const SamplerConfig sc{cfg.seed, dim, index};
    const DensityOperator rho = random_density(sc);
    const KrausChannel channel = cfg.identity_channel ? KrausChannel::identity(dim) : random_channel(sc);
    const DensityOperator sigma = [&] {
      switch (cfg.sigma_mode) {
        case SigmaMode::random: return random_density(sc, static_cast<std::uint64_t>(Stream::sigma));
        case SigmaMode::from_file: return *cfg.sigma_fixed;
        case SigmaMode::maximally_mixed: break;
      }
      return DensityOperator::maximally_mixed(dim);
    }();
    row.assessment = assess(rho, sigma, channel);
    const auto bad = row.assessment->violations();
    if (bad.empty()) {
      row.status = "ok";
    } else {
      row.status = "violation:";
      for (std::size_t i = 0; i < bad.size(); ++i) row.status += (i ? ";" : "") + bad[i];
    }
  } catch (const Error& e) {
    row.assessment.reset();
    row.status = std::string("error:") + e.what();
  }
  return row;
}

inline unsigned resolve_workers(unsigned requested) {
  if (requested > 0) return requested;
  return std::max(1u, std::thread::hardware_concurrency());
}

/// All samples for one dimension, in sample_index order regardless of the
/// worker count.
inline std::vector<SampleRow> evaluate_dimension(const ExperimentConfig& cfg, Index dim) {
  if (cfg.sigma_mode == SigmaMode::from_file && cfg.sigma_fixed->dim() != dim) {
    throw DimensionMismatch("sigma file is " + std::to_string(cfg.sigma_fixed->dim()) +
                            "-dimensional, experiment requests d=" + std::to_string(dim));
  }
  std::vector<SampleRow> rows(cfg.samples_per_dim);
  std::atomic<std::size_t> next{0};
  auto work = [&] {
    for (std::size_t i = next++; i < rows.size(); i = next++) {
      rows[i] = evaluate_sample(cfg, dim, i);
    }
  };
  const unsigned n = std::min<std::size_t>(resolve_workers(cfg.workers), rows.size());
  std::vector<std::jthread> pool;
  for (unsigned w = 1; w < n; ++w) pool.emplace_back(work);
  work();
  return rows;
}

struct DimensionSummary {
  Index dim = 0;
  std::size_t rows = 0;
  std::size_t ok = 0;
  std::size_t violations = 0;
  std::size_t failures = 0;
  double max_ratio_q = 0.0;
  double max_ratio_d = 0.0;
  double max_lhs = 0.0;
  std::filesystem::path csv_path;
};

inline DimensionSummary summarize(Index dim, const std::vector<SampleRow>& rows) {
  DimensionSummary s;
  s.dim = dim;
  s.rows = rows.size();
  for (const auto& r : rows) {
    if (!r.assessment) {
      ++s.failures;
      continue;
    }
    if (r.ok()) ++s.ok;
    if (r.is_violation()) ++s.violations;
    s.max_ratio_q = std::max(s.max_ratio_q, r.assessment->ratio_q);
    s.max_ratio_d = std::max(s.max_ratio_d, r.assessment->ratio_d);
    s.max_lhs = std::max(s.max_lhs, r.assessment->lhs);
  }
  return s;
}

inline void write_csv(const std::filesystem::path& path, const std::vector<SampleRow>& rows) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write " + path.string());
  out << csv_header() << '\n';
  for (const auto& r : rows) out << csv_line(r) << '\n';
  if (!out) throw IoError("write failed for " + path.string());
}

inline nlohmann::json summary_json(const ExperimentConfig& cfg, const std::vector<DimensionSummary>& dims) {
  nlohmann::json j;
  const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  char stamp[32];
  std::strftime(stamp, sizeof stamp, "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&now));
  j["generated_at"] = stamp;
  j["seed"] = cfg.seed;
  j["samples_per_dim"] = cfg.samples_per_dim;
  j["sigma_mode"] = to_string(cfg.sigma_mode);
  j["identity_channel"] = cfg.identity_channel;
  std::size_t total_violations = 0;
  for (const auto& s : dims) {
    total_violations += s.violations;
    j["dims"].push_back({{"dim", s.dim},
                         {"rows", s.rows},
                         {"ok", s.ok},
                         {"violations", s.violations},
                         {"failures", s.failures},
                         {"max_ratio_q", s.max_ratio_q},
                         {"max_ratio_d", s.max_ratio_d},
                         {"max_lhs", s.max_lhs},
                         {"csv", s.csv_path.filename().string()}});
  }
  j["violations"] = total_violations;
  return j;
}

inline std::filesystem::path csv_path_for(const std::filesystem::path& dir, Index dim) {
  return dir / ("samples_d" + std::to_string(dim) + ".csv");
}

}  // namespace petzlab
