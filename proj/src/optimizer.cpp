#include "fracstable/optimizer.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "fracstable/error.hpp"

namespace fracstable {
namespace {

constexpr double kAlphaFloor = 0.01;
constexpr double kBetaFloor = 0.01;
constexpr double kLambdaFloor = 1e-12;

class Evaluator {
 public:
  Evaluator(const Objective& f, const SearchConfig& cfg, SearchTrace& trace) : f_(f), cfg_(cfg), trace_(trace) {}

  bool exhausted() const { return trace_.evaluations >= cfg_.max_evaluations; }

  // Returns +inf once the budget is spent so no move is ever accepted.
  double operator()(const std::vector<double>& x, std::size_t* index = nullptr) {
    if (exhausted()) return std::numeric_limits<double>::infinity();
    double v = f_(x);
    if (std::isnan(v)) v = std::numeric_limits<double>::infinity();
    ++trace_.evaluations;
    trace_.visited.push_back({x, v, false});
    if (index) *index = trace_.visited.size() - 1;
    return v;
  }

  void accept(std::size_t index) { trace_.visited[index].accepted = true; }

 private:
  const Objective& f_;
  const SearchConfig& cfg_;
  SearchTrace& trace_;
};

struct Probe {
  std::vector<double> point;
  double value;
  std::size_t index;
};

Probe explore(Evaluator& eval, Probe from, const std::vector<double>& steps) {
  for (std::size_t i = 0; i < steps.size(); ++i) {
    for (double dir : {+1.0, -1.0}) {
      std::vector<double> trial = from.point;
      trial[i] += dir * steps[i];
      std::size_t idx = 0;
      const double v = eval(trial, &idx);
      if (v < from.value) {
        from = {std::move(trial), v, idx};
        break;
      }
    }
  }
  return from;
}

}  // namespace

void SearchConfig::validate() const {
  if (initial_steps.empty()) throw DomainError("search needs at least one step size");
  for (double s : initial_steps)
    if (!(s > 0.0)) throw DomainError("initial steps must be positive");
  if (!(shrink_factor > 0.0 && shrink_factor < 1.0)) throw DomainError("shrink factor must lie in (0, 1)");
  if (!(step_tolerance > 0.0)) throw DomainError("step tolerance must be positive");
  if (max_evaluations == 0) throw DomainError("max evaluations must be positive");
  if (!(penalty_multiplier >= 1.0)) throw DomainError("penalty multiplier must be >= 1");
}

SearchConfig SearchConfig::for_fsd(double lambda0) {
  SearchConfig cfg;
  cfg.initial_steps = {0.1, 0.1, 0.1, 0.1 * std::abs(lambda0)};
  if (!(cfg.initial_steps[3] > 0.0)) cfg.initial_steps[3] = 0.1;
  return cfg;
}

SearchResult hooke_jeeves(const Objective& objective, std::vector<double> start, const SearchConfig& cfg) {
  cfg.validate();
  if (start.size() != cfg.initial_steps.size()) throw DomainError("start point and step vector differ in dimension");
  for (double v : start)
    if (!std::isfinite(v)) throw DomainError("start point must be finite");

  SearchResult result;
  SearchTrace& trace = result.trace;
  Evaluator eval(objective, cfg, trace);
  std::vector<double> steps = cfg.initial_steps;

  std::size_t start_index = 0;
  const double f0 = eval(start, &start_index);
  eval.accept(start_index);
  Probe base{std::move(start), f0, start_index};

  while (!eval.exhausted()) {
    Probe moved = explore(eval, base, steps);
    if (moved.value < base.value) {
      // Pattern moves for as long as exploring around them keeps improving.
      while (true) {
        const std::vector<double> previous = base.point;
        base = moved;
        eval.accept(base.index);
        std::vector<double> jump = base.point;
        for (std::size_t i = 0; i < jump.size(); ++i) jump[i] += base.point[i] - previous[i];
        std::size_t jump_index = 0;
        const double fj = eval(jump, &jump_index);
        Probe around = explore(eval, Probe{std::move(jump), fj, jump_index}, steps);
        if (around.value < base.value) {
          moved = std::move(around);
          continue;
        }
        break;
      }
      continue;
    }
    for (double& s : steps) s *= cfg.shrink_factor;
    if (std::all_of(steps.begin(), steps.end(), [&](double s) { return s < cfg.step_tolerance; })) {
      trace.converged = true;
      break;
    }
  }

  result.argmin = base.point;
  result.value = base.value;
  return result;
}

double penalty(double value, double nearest_bound, bool inside, double multiplier) {
  if (inside) return 1.0;
  return std::exp(multiplier * std::abs(nearest_bound - value));
}

double penalized_objective(double raw_distance, bool inside, double penalty_factor) {
  return inside ? raw_distance : raw_distance + penalty_factor - 1.0;
}

DomainProjection project_to_domain(std::span<const double> point, double multiplier) {
  if (point.size() != 4) throw DomainError("parameter point must have four coordinates");
  DomainProjection out;
  double log_factor = 0.0;
  auto wall = [&](double value, double lo, bool lo_open, double hi) {
    if (std::isnan(value)) {
      out.inside = false;
      log_factor = std::numeric_limits<double>::infinity();
      return;
    }
    const bool below = lo_open ? !(value > lo) : value < lo;
    const bool above = value > hi;
    if (below || above) {
      out.inside = false;
      log_factor += multiplier * std::abs((below ? lo : hi) - value);
    }
  };
  const double alpha = point[0], beta = point[1], theta = point[2], lambda = point[3];
  wall(alpha, 0.0, true, 2.0);
  wall(beta, 0.0, true, 1.0);
  const double alpha_p = std::isnan(alpha) ? 2.0 : std::clamp(alpha, kAlphaFloor, 2.0);
  const double bound = max_abs_theta(alpha_p);
  wall(theta, -bound, false, bound);
  wall(lambda, 0.0, true, std::numeric_limits<double>::infinity());

  out.projected.alpha = alpha_p;
  out.projected.beta = std::isnan(beta) ? 1.0 : std::clamp(beta, kBetaFloor, 1.0);
  out.projected.theta = std::isnan(theta) ? 0.0 : std::clamp(theta, -bound, bound);
  out.projected.lambda = std::isnan(lambda) ? 1.0 : std::max(lambda, kLambdaFloor);
  out.penalty_factor = std::exp(log_factor);
  return out;
}

}  // namespace fracstable
