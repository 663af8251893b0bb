#include "fracstable/estimation.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>
#include <vector>

#include <boost/math/special_functions/zeta.hpp>

#include "fracstable/error.hpp"

namespace fracstable {
namespace {

constexpr double kEuler = std::numbers::egamma;
constexpr double kPi = std::numbers::pi;
constexpr double kFloor = 0.01;

FsdParams clamp_to_domain(FsdParams p) {
  p.alpha = std::clamp(p.alpha, kFloor, 2.0);
  p.beta = std::clamp(p.beta, kFloor, 1.0);
  const double t = max_abs_theta(p.alpha);
  p.theta = std::clamp(p.theta, -t, t);
  p.lambda = std::max(p.lambda, 1e-12);
  return p;
}

double quantile(std::vector<double> sorted, double q) {
  const double pos = q * static_cast<double>(sorted.size() - 1);
  const auto i = static_cast<std::size_t>(pos);
  if (i + 1 >= sorted.size()) return sorted.back();
  return sorted[i] + (pos - static_cast<double>(i)) * (sorted[i + 1] - sorted[i]);
}

double median_abs(std::span<const double> sample) {
  std::vector<double> a;
  a.reserve(sample.size());
  for (double x : sample)
    if (std::isfinite(x)) a.push_back(std::abs(x));
  if (a.empty()) return 1.0;
  std::sort(a.begin(), a.end());
  const double m = quantile(std::move(a), 0.5);
  return m > 0.0 ? m : 1.0;
}

}  // namespace

LogMoments log_moments(std::span<const double> sample) {
  if (sample.empty()) throw DomainError("log moments need a nonempty sample");
  LogMoments m;
  m.n = sample.size();
  std::vector<double> logs;
  logs.reserve(sample.size());
  for (std::size_t j = 0; j < sample.size(); ++j) {
    if (sample[j] == 0.0 || !std::isfinite(sample[j])) {
      std::ostringstream os;
      os << "log moments need finite nonzero values (element " << j << " is " << sample[j] << ")";
      throw DomainError(os.str());
    }
    logs.push_back(std::log(std::abs(sample[j])));
  }
  const auto n = static_cast<double>(m.n);
  for (double l : logs) m.U += l;
  m.U /= n;
  for (double l : logs) {
    const double d = l - m.U;
    m.V += d * d;
    m.M += d * d * d;
  }
  m.V /= n;
  m.M /= n;
  m.A = std::cbrt(1.0 + m.M / (2.0 * boost::math::zeta(3.0)));
  return m;
}

FsdParams estimate_moments(std::span<const double> sample) {
  if (sample.size() < 4) throw DomainError("moment estimator needs at least 4 observations");
  const LogMoments m = log_moments(sample);
  std::size_t negative = 0;
  for (double z : sample) negative += z < 0.0;
  FsdParams p;
  p.theta = 1.0 - 2.0 * static_cast<double>(negative) / static_cast<double>(sample.size());
  const double radicand = 12.0 * m.V + kPi * kPi * (2.0 * m.A * m.A + 3.0 * p.theta * p.theta - 1.0);
  if (!(radicand > 0.0)) {
    std::ostringstream os;
    os << "moment estimator failed: alpha radicand " << radicand << " is not positive";
    throw EstimationError(os.str());
  }
  p.alpha = 2.0 * kPi / std::sqrt(radicand);
  p.beta = m.A * p.alpha;
  p.lambda = std::exp(p.alpha * (m.U - kEuler * (m.A - 1.0)));
  return clamp_to_domain(p);
}

Window default_window(std::span<const double> sample) {
  std::vector<double> finite;
  double min_positive = std::numeric_limits<double>::infinity();
  for (double x : sample) {
    if (!std::isfinite(x)) continue;
    finite.push_back(x);
    if (x > 0.0) min_positive = std::min(min_positive, x);
  }
  if (!std::isfinite(min_positive)) throw DomainError("default window needs at least one positive observation");
  std::sort(finite.begin(), finite.end());
  const Window w{min_positive, quantile(std::move(finite), 0.99)};
  if (!(w.lo < w.hi)) throw DomainError("default window is degenerate; pass an explicit window");
  return w;
}

std::vector<double> model_cell_probabilities(const FsdParams& p, const Histogram& shape, std::size_t count,
                                             RngStream rng) {
  const std::vector<double> draws = sample_fsd(p, count, rng);
  return cell_probabilities(draws, shape);
}

Objective make_chi2_objective(const Histogram& hist, CommonRandomFsd& crn, double multiplier) {
  return [&hist, &crn, multiplier](std::span<const double> x) {
    const DomainProjection proj = project_to_domain(x, multiplier);
    const double d = chi2_distance(hist, cell_probabilities(crn.draws(proj.projected), hist));
    return penalized_objective(d, proj.inside, proj.penalty_factor);
  };
}

FitResult fit_chi2(std::span<const double> sample, const FitOptions& opts, RngStream rng) {
  if (opts.mc_samples < 10000) throw DomainError("fit needs at least 10000 Monte Carlo draws");
  const Window window = opts.window ? *opts.window : default_window(sample);
  FitResult result;
  result.histogram = build_histogram(sample, window, opts.bins, opts.binning);
  if (result.histogram.total == 0) throw DomainError("no observations fall inside the fit window");

  if (opts.start) {
    validate(*opts.start);
    result.initial = *opts.start;
  } else {
    std::vector<double> nonzero;
    for (double x : sample)
      if (x != 0.0 && std::isfinite(x)) nonzero.push_back(x);
    try {
      result.initial = estimate_moments(nonzero);
    } catch (const std::exception& e) {
      result.fallback_start = true;
      result.fallback_reason = e.what();
      result.initial = FsdParams{1.0, 0.9, 1.0, median_abs(sample)};
    }
  }

  CommonRandomFsd crn(opts.mc_samples, rng);
  const double multiplier = opts.search.penalty_multiplier;
  const std::array<double, 4> base{result.initial.alpha, result.initial.beta, result.initial.theta,
                                   result.initial.lambda};
  std::vector<std::size_t> moving;
  for (std::size_t i = 0; i < 4; ++i)
    if (opts.free[i]) moving.push_back(i);
  if (moving.empty()) throw DomainError("fit needs at least one free parameter");

  auto expand = [&](std::span<const double> x) {
    std::array<double, 4> full = base;
    for (std::size_t k = 0; k < moving.size(); ++k) full[moving[k]] = x[k];
    return full;
  };
  auto distance_at = [&](const FsdParams& p) {
    return chi2_distance(result.histogram, cell_probabilities(crn.draws(p), result.histogram));
  };
  const Objective full_objective = make_chi2_objective(result.histogram, crn, multiplier);
  const Objective objective = [&](std::span<const double> x) { return full_objective(expand(x)); };

  SearchConfig cfg = opts.search;
  if (cfg.initial_steps.empty()) {
    const SearchConfig fsd = SearchConfig::for_fsd(result.initial.lambda);
    for (std::size_t i : moving) cfg.initial_steps.push_back(fsd.initial_steps[i]);
  }
  if (cfg.initial_steps.size() != moving.size()) throw DomainError("step vector must match the free parameters");

  std::vector<double> start;
  for (std::size_t i : moving) start.push_back(base[i]);
  result.initial_objective = distance_at(result.initial);

  SearchResult best = hooke_jeeves(objective, start, cfg);
  for (int r = 0; r < opts.restarts; ++r) {
    SearchResult again = hooke_jeeves(objective, best.argmin, cfg);
    const bool improved = again.value < best.value;
    again.trace.visited.insert(again.trace.visited.begin(), best.trace.visited.begin(), best.trace.visited.end());
    again.trace.evaluations += best.trace.evaluations;
    if (!improved) {
      best.trace = std::move(again.trace);
      break;
    }
    best = std::move(again);
  }

  const std::array<double, 4> full = expand(best.argmin);
  result.params = project_to_domain(full, multiplier).projected;
  result.objective = distance_at(result.params);
  result.trace = std::move(best.trace);
  return result;
}

}  // namespace fracstable
