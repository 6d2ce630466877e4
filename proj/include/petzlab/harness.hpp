#pragma once

#include <filesystem>
#include <vector>

#include "petzlab/experiment.hpp"
#include "petzlab/io.hpp"
#include "petzlab/plot.hpp"

namespace petzlab {

struct ExperimentResult {
  std::vector<DimensionSummary> dims;
  std::filesystem::path summary_path;

  std::size_t violations() const {
    std::size_t n = 0;
    for (const auto& d : dims) n += d.violations;
    return n;
  }
};

/// Writes samples_d<d>.csv per dimension, summary.json, and optionally
/// plot_q_d<d>.svg / plot_d_d<d>.svg into cfg.outputs.
inline ExperimentResult run_experiment(const ExperimentConfig& cfg) {
  cfg.validate();
  std::error_code ec;
  std::filesystem::create_directories(cfg.outputs, ec);
  if (ec) throw IoError("cannot create " + cfg.outputs.string() + ": " + ec.message());

  ExperimentResult result;
  for (const Index d : cfg.dims) {
    const auto rows = evaluate_dimension(cfg, d);
    DimensionSummary s = summarize(d, rows);
    s.csv_path = csv_path_for(cfg.outputs, d);
    write_csv(s.csv_path, rows);
    if (cfg.emit_plots) {
      const std::string suffix = "_d" + std::to_string(d) + ".svg";
      emit_plot(s.csv_path, BoundKind::q, cfg.outputs / ("plot_q" + suffix));
      emit_plot(s.csv_path, BoundKind::d, cfg.outputs / ("plot_d" + suffix));
    }
    result.dims.push_back(std::move(s));
  }
  result.summary_path = cfg.outputs / "summary.json";
  io::write_json(result.summary_path.string(), summary_json(cfg, result.dims));
  return result;
}

}  // namespace petzlab
