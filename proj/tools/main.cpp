#include <cstdint>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "fracstable/cli/commands.hpp"

namespace fc = fracstable::cli;

namespace {

struct DataFlags {
  std::string delimiter = "whitespace";
  std::string binning = "log";
  double xmin = 0.0;
  double xmax = 0.0;
  CLI::Option* xmin_opt = nullptr;
  CLI::Option* xmax_opt = nullptr;
};

void add_data_flags(CLI::App& cmd, fc::DataOptions& d, DataFlags& f) {
  cmd.add_option("--input", d.ingest.path, "Input table")->required()->check(CLI::ExistingFile);
  cmd.add_option("--column", d.ingest.column, "Column name or 0-based index")->capture_default_str();
  cmd.add_option("--delimiter", f.delimiter, "comma, tab or whitespace")->capture_default_str();
  cmd.add_flag("--skip-header", d.ingest.skip_header, "First non-empty row is a header");
  cmd.add_flag("--drop-nonpositive", d.ingest.drop_nonpositive, "Discard values <= 0");
  f.xmin_opt = cmd.add_option("--xmin", f.xmin, "Window lower edge (default: smallest positive value)");
  f.xmax_opt = cmd.add_option("--xmax", f.xmax, "Window upper edge (default: 0.99 quantile)");
  cmd.add_option("--bins", d.bins, "Number of bins")->capture_default_str()->check(CLI::PositiveNumber);
  cmd.add_option("--binning", f.binning, "linear, log or equalprob")
      ->capture_default_str()
      ->check(CLI::IsMember({"linear", "log", "equalprob"}));
  cmd.add_option("--mc-samples", d.mc_samples, "Monte Carlo draws for cell probabilities")->capture_default_str();
  cmd.add_option("--seed", d.seed, "Random seed")->capture_default_str();
  cmd.add_option("--penalty-A", d.penalty_A, "Penalty wall multiplier")->capture_default_str();
  cmd.add_option("--max-evals", d.max_evals, "Objective evaluation budget")->capture_default_str();
  cmd.add_option("--level", d.level, "Significance level")->capture_default_str();
  cmd.add_option("--min-expected", d.min_expected, "Pool adjacent cells below this expected count (0 disables)")
      ->capture_default_str()
      ->check(CLI::NonNegativeNumber);
  cmd.add_option("--out", d.out, "Report path (default stdout)");
  cmd.add_option("--plot-out", d.plot_out, "Plot table path");
}

void finish_data_flags(fc::DataOptions& d, const DataFlags& f) {
  d.ingest.delimiter = fc::parse_delimiter(f.delimiter);
  d.binning = fracstable::parse_binning(f.binning);
  if (*f.xmin_opt) d.xmin = f.xmin;
  if (*f.xmax_opt) d.xmax = f.xmax;
}

void add_params(CLI::App& cmd, fracstable::FsdParams& p, bool required) {
  auto a = cmd.add_option("--alpha", p.alpha, "Characteristic exponent, 0 < alpha <= 2");
  auto b = cmd.add_option("--beta", p.beta, "Fractional exponent, 0 < beta <= 1");
  auto t = cmd.add_option("--theta", p.theta, "Asymmetry, |theta| <= min(1, 2/alpha - 1)");
  auto l = cmd.add_option("--lambda", p.lambda, "Scale, lambda > 0");
  for (CLI::Option* o : {a, b, t, l}) {
    if (required) o->required();
    else o->capture_default_str();
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Fractional stable distributions: sampling, densities, fitting and goodness of fit"};
  app.set_version_flag("--version", std::string(fc::kVersion));
  app.require_subcommand(1);

  fc::FitArgs fit;
  DataFlags fit_flags;
  auto* fit_cmd = app.add_subcommand("fit", "Fit FSD parameters to a sample by chi-square distance");
  add_data_flags(*fit_cmd, fit.data, fit_flags);
  fit_cmd->add_option("--restarts", fit.restarts, "Searches restarted from the optimum")->capture_default_str();

  fc::GofArgs gof;
  DataFlags gof_flags;
  auto* gof_cmd = app.add_subcommand("gof", "Pearson test of a sample against given FSD parameters");
  add_data_flags(*gof_cmd, gof.data, gof_flags);
  add_params(*gof_cmd, gof.params, true);
  gof_cmd->add_option("--fitted-params", gof.fitted_params, "Parameters estimated from the data")
      ->capture_default_str();

  fc::SampleArgs sample;
  auto* sample_cmd = app.add_subcommand("sample", "Draw FSD variates, one per line");
  add_params(*sample_cmd, sample.params, true);
  sample_cmd->add_option("--n", sample.count, "Number of variates")->required()->check(CLI::PositiveNumber);
  sample_cmd->add_option("--seed", sample.seed, "Random seed")->capture_default_str();
  sample_cmd->add_option("--out", sample.out, "Output path (default stdout)");

  fc::PdfArgs pdf;
  std::string pdf_method = "quadrature";
  auto* pdf_cmd = app.add_subcommand("pdf", "Evaluate the FSD density");
  add_params(*pdf_cmd, pdf.params, true);
  pdf_cmd->add_option("--x", pdf.xs, "Evaluation points (overrides the grid)");
  pdf_cmd->add_option("--xmin", pdf.grid_lo, "Grid lower end")->capture_default_str();
  pdf_cmd->add_option("--xmax", pdf.grid_hi, "Grid upper end")->capture_default_str();
  pdf_cmd->add_option("--points", pdf.points, "Grid points")->capture_default_str();
  pdf_cmd->add_option("--method", pdf_method, "quadrature or mc")
      ->capture_default_str()
      ->check(CLI::IsMember({"quadrature", "mc"}));
  pdf_cmd->add_option("--mc-samples", pdf.mc_samples, "Mixing draws for the mc method")->capture_default_str();
  pdf_cmd->add_option("--seed", pdf.seed, "Random seed")->capture_default_str();
  pdf_cmd->add_option("--out", pdf.out, "Output path (default stdout)");

  fc::CtrwArgs ctrw;
  std::string symmetry = "symmetric";
  auto* ctrw_cmd = app.add_subcommand("ctrw", "Simulate a continuous-time random walk ensemble");
  ctrw_cmd->add_option("--alpha", ctrw.config.alpha, "Jump tail exponent")->capture_default_str();
  ctrw_cmd->add_option("--beta", ctrw.config.beta, "Waiting-time tail exponent")->capture_default_str();
  ctrw_cmd->add_option("--x0", ctrw.config.x0, "Jump scale")->capture_default_str();
  ctrw_cmd->add_option("--t0", ctrw.config.t0, "Waiting-time scale")->capture_default_str();
  ctrw_cmd->add_option("--t", ctrw.config.t, "Observation time")->required();
  ctrw_cmd->add_option("--ensemble", ctrw.config.ensemble, "Number of walkers")
      ->capture_default_str()
      ->check(CLI::PositiveNumber);
  ctrw_cmd->add_option("--symmetry", symmetry, "symmetric or one-sided")
      ->capture_default_str()
      ->check(CLI::IsMember({"symmetric", "one-sided"}));
  ctrw_cmd->add_option("--seed", ctrw.seed, "Random seed")->capture_default_str();
  ctrw_cmd->add_option("--out", ctrw.out, "Scaled positions path (default stdout)");
  ctrw_cmd->add_option("--plot-out", ctrw.plot_out, "Reference density path");
  ctrw_cmd->add_option("--D", ctrw.D, "Diffusion constant of the reference density")->capture_default_str();
  ctrw_cmd->add_option("--plot-range", ctrw.plot_range, "Reference grid half-width")->capture_default_str();
  ctrw_cmd->add_option("--points", ctrw.points, "Reference grid points")->capture_default_str();

  CLI11_PARSE(app, argc, argv);

  try {
    if (*fit_cmd) {
      finish_data_flags(fit.data, fit_flags);
      fc::run_fit(fit);
    } else if (*gof_cmd) {
      finish_data_flags(gof.data, gof_flags);
      fc::run_gof(gof);
    } else if (*sample_cmd) {
      fc::run_sample(sample);
    } else if (*pdf_cmd) {
      pdf.method = pdf_method == "mc" ? fracstable::DensityMethod::monte_carlo : fracstable::DensityMethod::quadrature;
      fc::run_pdf(pdf);
    } else if (*ctrw_cmd) {
      ctrw.config.symmetry = fracstable::parse_symmetry(symmetry);
      fc::run_ctrw(ctrw);
    }
  } catch (const fc::StageError& e) {
    std::cerr << "error [" << e.stage() << "]: " << e.what() << '\n';
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
