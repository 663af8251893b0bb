#pragma once

#include <array>
#include <cstddef>
#include <functional>
#include <span>
#include <vector>

#include "fracstable/fsd.hpp"

namespace fracstable {

struct SearchConfig {
  std::vector<double> initial_steps;
  double shrink_factor = 0.5;
  double step_tolerance = 1e-4;
  std::size_t max_evaluations = 20000;
  double penalty_multiplier = 100.0;  // A in exp(A |bound - value|)

  void validate() const;

  /// Steps 0.1 for alpha, beta, theta and 0.1 * lambda0 for lambda.
  static SearchConfig for_fsd(double lambda0);
};

struct TracePoint {
  std::vector<double> point;
  double value = 0.0;
  bool accepted = false;  // became a base point
};

struct SearchTrace {
  std::vector<TracePoint> visited;
  std::size_t evaluations = 0;
  bool converged = false;
};

struct SearchResult {
  std::vector<double> argmin;
  double value = 0.0;
  SearchTrace trace;
};

using Objective = std::function<double(std::span<const double>)>;

/// Hooke-Jeeves pattern search: coordinate-wise exploratory moves in index
/// order, a pattern move that repeats the last successful displacement, and
/// a uniform step shrink when exploration fails. Stops once every step is
/// below the tolerance (converged) or the evaluation budget is spent.
SearchResult hooke_jeeves(const Objective& objective, std::vector<double> start, const SearchConfig& cfg);

/// Wall factor for one coordinate: 1 inside, exp(A |bound - value|) outside.
double penalty(double value, double nearest_bound, bool inside, double multiplier);

/// Helper functional: d inside the domain, d + f - 1 outside.
double penalized_objective(double raw_distance, bool inside, double penalty_factor);

/// Point of the extended parameter space mapped back onto G.
struct DomainProjection {
  FsdParams projected;      // coordinate-wise projection onto the closure of G
  double penalty_factor = 1.0;  // product of per-coordinate walls
  bool inside = true;
};

/// Coordinates are (alpha, beta, theta, lambda). Open bounds at zero are
/// projected to small positive floors so the projection stays evaluable.
DomainProjection project_to_domain(std::span<const double> point, double multiplier);

}  // namespace fracstable
