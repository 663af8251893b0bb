#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "fracstable/cli/ingest.hpp"
#include "fracstable/ctrw.hpp"
#include "fracstable/fsd.hpp"
#include "fracstable/histogram.hpp"

namespace fracstable::cli {

inline constexpr std::string_view kVersion = "1.0.0";

/// Failure inside one pipeline stage; the stage name goes to the user.
class StageError : public std::runtime_error {
 public:
  StageError(std::string stage, const std::string& what)
      : std::runtime_error(what), stage_(std::move(stage)) {}
  const std::string& stage() const noexcept { return stage_; }

 private:
  std::string stage_;
};

struct DataOptions {
  IngestSpec ingest;
  std::optional<double> xmin;
  std::optional<double> xmax;
  std::size_t bins = 40;
  Binning binning = Binning::logarithmic;
  std::size_t mc_samples = 100000;
  std::uint64_t seed = 1;
  double penalty_A = 100.0;
  std::size_t max_evals = 20000;
  double level = 0.05;
  double min_expected = 5.0;
  std::string out;       // report; empty or "-" writes to stdout
  std::string plot_out;  // plot table; empty skips it
};

struct FitArgs {
  DataOptions data;
  int restarts = 0;
};

struct GofArgs {
  DataOptions data;
  FsdParams params;
  int fitted_params = 4;
};

struct SampleArgs {
  FsdParams params;
  std::size_t count = 0;
  std::uint64_t seed = 1;
  std::string out;
};

struct PdfArgs {
  FsdParams params;
  std::vector<double> xs;  // explicit points; otherwise the grid below
  double grid_lo = -10.0;
  double grid_hi = 10.0;
  std::size_t points = 201;
  DensityMethod method = DensityMethod::quadrature;
  std::size_t mc_samples = 100000;
  std::uint64_t seed = 1;
  std::string out;
};

struct CtrwArgs {
  CtrwConfig config;
  std::uint64_t seed = 1;
  std::string out;
  std::string plot_out;  // reference curve of the self-similar solution
  double D = 1.0;
  double plot_range = 5.0;
  std::size_t points = 201;
};

void run_fit(const FitArgs& args);
void run_gof(const GofArgs& args);
void run_sample(const SampleArgs& args);
void run_pdf(const PdfArgs& args);
void run_ctrw(const CtrwArgs& args);

}  // namespace fracstable::cli
