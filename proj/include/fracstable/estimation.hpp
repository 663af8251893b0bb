#pragma once

#include <array>
#include <cstddef>
#include <optional>
#include <span>
#include <string>

#include "fracstable/fsd.hpp"
#include "fracstable/histogram.hpp"
#include "fracstable/optimizer.hpp"
#include "fracstable/rng.hpp"

namespace fracstable {

/// Sample moments of log|Z|.
struct LogMoments {
  double U = 0.0;  // mean
  double V = 0.0;  // centered second moment
  double M = 0.0;  // centered third moment
  double A = 1.0;  // cbrt(1 + M / (2 zeta(3)))
  std::size_t n = 0;
};

LogMoments log_moments(std::span<const double> sample);

/// Closed-form log-moment estimator, clamped into the closure of G. Throws
/// EstimationError when the alpha radicand is not positive.
FsdParams estimate_moments(std::span<const double> sample);

/// [smallest positive value, 0.99 quantile].
Window default_window(std::span<const double> sample);

struct FitOptions {
  std::optional<Window> window;
  std::size_t bins = 40;
  Binning binning = Binning::logarithmic;
  std::size_t mc_samples = 100000;
  SearchConfig search;  // empty steps: SearchConfig::for_fsd(lambda0)
  /// Coordinates (alpha, beta, theta, lambda) the search may move.
  std::array<bool, 4> free{true, true, true, true};
  /// Skip the moment estimator and start here.
  std::optional<FsdParams> start;
  /// Extra searches restarted from the previous optimum with fresh steps.
  int restarts = 0;
};

struct FitResult {
  FsdParams params;
  double objective = 0.0;
  FsdParams initial;
  double initial_objective = 0.0;
  bool fallback_start = false;
  std::string fallback_reason;
  SearchTrace trace;
  Histogram histogram;
};

/// Penalized chi-square objective over (alpha, beta, theta, lambda): the
/// distance is evaluated at the projection onto G and the wall factor added
/// outside. Holds references to both arguments.
Objective make_chi2_objective(const Histogram& hist, CommonRandomFsd& crn, double multiplier);

/// Minimizes the chi-square distance between the sample histogram over the
/// window and Monte Carlo cell probabilities from a common-random-numbers
/// FSD sample, using Hooke-Jeeves on the penalized objective.
FitResult fit_chi2(std::span<const double> sample, const FitOptions& opts, RngStream rng);

/// Cell probabilities of the model at p on the histogram's bins, from a fresh
/// sample of the given size.
std::vector<double> model_cell_probabilities(const FsdParams& p, const Histogram& shape, std::size_t count,
                                             RngStream rng);

}  // namespace fracstable
