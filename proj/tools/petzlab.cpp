// petzlab command line front end.
//
//   petzlab sample  --dims 2,3 --samples 10000 --sigma maximally_mixed --out out/ [--plots]
//   petzlab plot    --csv out/samples_d2.csv --bound q --out out/plot_q.svg
//   petzlab verify  --dims 2,3 --trials 1000 [--inject-channel bad.json]
//   petzlab assess  --rho rho.json --channel channel.json [--sigma sigma.json]

#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "petzlab/petzlab.hpp"

namespace {

using namespace petzlab;

std::uint64_t resolve_seed(const std::optional<std::uint64_t>& flag) {
  if (flag) return *flag;
  if (const char* env = std::getenv("PETZLAB_SEED"); env && *env) {
    try {
      return std::stoull(env);
    } catch (const std::exception&) {
      throw Error(std::string("PETZLAB_SEED is not an unsigned integer: ") + env);
    }
  }
  return kDefaultSeed;
}

std::vector<Index> to_dims(const std::vector<int>& dims) {
  std::vector<Index> out;
  for (const int d : dims) {
    if (d < 1) throw Error("dimensions must be positive");
    out.push_back(d);
  }
  return out;
}

nlohmann::json assessment_json(const RecoveryAssessment& a) {
  nlohmann::json j{{"dim", a.dim},
                   {"lhs_trace_norm", a.lhs},
                   {"delta_q2", a.delta_q2},
                   {"delta_d2", a.delta_d2},
                   {"bound_general", a.bound_general},
                   {"bound_q", a.bound_q},
                   {"bound_d", a.bound_d},
                   {"ratio_q", a.ratio_q},
                   {"ratio_d", a.ratio_d},
                   {"sigma_maximally_mixed", a.sigma_maximally_mixed},
                   {"lhs_maximally_mixed", a.lhs_maximally_mixed}};
  j["delta_d"] = a.delta_d ? nlohmann::json(*a.delta_d) : nlohmann::json(nullptr);
  j["bound_rel_ent"] = a.bound_rel_ent ? nlohmann::json(*a.bound_rel_ent) : nlohmann::json(nullptr);
  j["violations"] = a.violations();
  return j;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Petz recovery bounds toolkit"};
  app.require_subcommand(1);

  std::optional<std::uint64_t> seed;
  std::vector<int> dims{2, 3};

  // sample
  auto* sample = app.add_subcommand("sample", "Run the Monte-Carlo bound experiment");
  std::size_t samples = 10000;
  bool full = false;
  std::string sigma = "maximally_mixed";
  std::string out_dir = "petzlab-out";
  bool plots = false;
  unsigned workers = 0;
  bool identity = false;
  sample->add_option("--seed", seed, "RNG seed (fallback: PETZLAB_SEED)");
  sample->add_option("--dims", dims, "Hilbert-space dimensions")->delimiter(',');
  sample->add_option("--samples", samples, "Samples per dimension")->check(CLI::PositiveNumber);
  sample->add_flag("--full", full, "Use 100000 samples per dimension");
  sample->add_option("--sigma", sigma, "maximally_mixed | random | path to a matrix JSON file");
  sample->add_option("--out", out_dir, "Output directory");
  sample->add_flag("--plots", plots, "Also write SVG plots");
  sample->add_option("--workers", workers, "Worker threads (0: all cores)");
  sample->add_flag("--identity-channel", identity, "Use the identity channel for every sample");

  // plot
  auto* plot = app.add_subcommand("plot", "Render an SVG scatter plot from a sample CSV");
  std::string csv_path, svg_path, bound = "q";
  std::optional<int> plot_dim;
  plot->add_option("--csv", csv_path, "Sample CSV")->required();
  plot->add_option("--bound", bound, "q | d")->check(CLI::IsMember({"q", "d"}));
  plot->add_option("--out", svg_path, "SVG output path")->required();
  plot->add_option("--dim", plot_dim, "Dimension for the curve when the CSV has no rows");

  // verify
  auto* verify = app.add_subcommand("verify", "Run the randomized property suite");
  std::size_t trials = 1000;
  std::string inject;
  std::string report_path;
  verify->add_option("--seed", seed, "RNG seed (fallback: PETZLAB_SEED)");
  verify->add_option("--dims", dims, "Hilbert-space dimensions")->delimiter(',');
  verify->add_option("--trials", trials, "Trials per property and dimension");
  verify->add_option("--inject-channel", inject, "Channel JSON added to the CPTP-validity check");
  verify->add_option("--out", report_path, "Write the JSON report here instead of stdout");

  // assess
  auto* assess_cmd = app.add_subcommand("assess", "Evaluate all bounds for one instance");
  std::string rho_path, channel_path, sigma_path;
  assess_cmd->add_option("--rho", rho_path, "Density matrix JSON")->required();
  assess_cmd->add_option("--channel", channel_path, "Channel JSON")->required();
  assess_cmd->add_option("--sigma", sigma_path, "Reference state JSON (default I/d)");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*sample) {
      ExperimentConfig cfg;
      cfg.dims = to_dims(dims);
      cfg.samples_per_dim = full ? 100000 : samples;
      cfg.seed = resolve_seed(seed);
      cfg.outputs = out_dir;
      cfg.emit_plots = plots;
      cfg.workers = workers;
      cfg.identity_channel = identity;
      if (sigma == "maximally_mixed") {
        cfg.sigma_mode = SigmaMode::maximally_mixed;
      } else if (sigma == "random") {
        cfg.sigma_mode = SigmaMode::random;
      } else {
        cfg.sigma_mode = SigmaMode::from_file;
        cfg.sigma_fixed = DensityOperator(io::read_matrix(sigma));
      }
      const auto result = run_experiment(cfg);
      for (const auto& d : result.dims) {
        std::cout << "d=" << d.dim << " rows=" << d.rows << " violations=" << d.violations
                  << " failures=" << d.failures << " max_ratio_q=" << d.max_ratio_q
                  << " max_ratio_d=" << d.max_ratio_d << " -> " << d.csv_path.string() << '\n';
      }
      std::cout << "summary: " << result.summary_path.string() << '\n';
      return result.violations() == 0 ? 0 : 1;
    }

    if (*plot) {
      PlotOptions opt;
      if (plot_dim) opt.dim = *plot_dim;
      emit_plot(csv_path, parse_bound_kind(bound), svg_path, opt);
      std::cout << svg_path << '\n';
      return 0;
    }

    if (*verify) {
      VerifyConfig cfg;
      cfg.seed = resolve_seed(seed);
      cfg.dims = to_dims(dims);
      cfg.trials = trials;
      if (!inject.empty()) cfg.injected_channel = io::read_channel(inject, /*checked=*/false);
      const VerifyReport report = verify_suite(cfg);
      for (const auto& p : report.details) {
        std::cerr << (p.passed() ? "PASS " : "FAIL ") << p.module << '/' << p.name << " ("
                  << p.trials - p.failures << '/' << p.trials << ")"
                  << (p.first_failure.empty() ? "" : " first failure: " + p.first_failure) << '\n';
      }
      const std::string text = report.to_json().dump(2);
      if (report_path.empty()) {
        std::cout << text << '\n';
      } else {
        io::write_json(report_path, report.to_json());
      }
      return report.ok() ? 0 : 1;
    }

    if (*assess_cmd) {
      const DensityOperator rho(io::read_matrix(rho_path));
      const KrausChannel channel = io::read_channel(channel_path);
      const DensityOperator sig = sigma_path.empty() ? DensityOperator::maximally_mixed(rho.dim())
                                                     : DensityOperator(io::read_matrix(sigma_path));
      std::cout << assessment_json(assess(rho, sig, channel)).dump(2) << '\n';
      return 0;
    }
  } catch (const std::exception& e) {
    std::cerr << "petzlab: " << e.what() << '\n';
    return 2;
  }
  return 0;
}
