#pragma once

#include <cstddef>
#include <cstdint>
#include <memory>
#include <mutex>
#include <unordered_map>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "fracstable/rng.hpp"
#include "fracstable/stable.hpp"

namespace fracstable {

/// Fractional stable law q(x; alpha, beta, theta, lambda): the law of
/// lambda^(1/alpha) Y(alpha, theta) S(beta)^(-beta/alpha).
struct FsdParams {
  double alpha = 2.0;
  double beta = 1.0;
  double theta = 0.0;
  double lambda = 1.0;

  friend bool operator==(const FsdParams&, const FsdParams&) = default;
};

/// Throws DomainError naming the first violated bound of the domain G.
void validate(const FsdParams& p);
bool in_domain(const FsdParams& p) noexcept;

inline StableParams stable_part(const FsdParams& p) { return {p.alpha, p.theta, p.lambda}; }

/// Draws of S(beta, 1) kept fixed so that Monte Carlo densities are
/// deterministic functions of the remaining parameters.
struct MixingSample {
  std::vector<double> values;
  double beta = 1.0;
  std::uint64_t seed = 0;
  std::uint64_t stream = 0;

  /// beta = 1 yields the point mass at 1.
  static MixingSample draw(double beta, std::size_t count, RngStream rng);
};

double fsd_from_uniforms(const FsdParams& p, double u1, double u2, double u3, double u4);

double sample_fsd(const FsdParams& p, RngStream& rng);
std::vector<double> sample_fsd(const FsdParams& p, std::size_t count, RngStream& rng);

enum class DensityMethod { quadrature, monte_carlo };

/// Density of the fractional stable law. The Monte Carlo method needs a
/// mixing sample drawn with the same beta.
double fsd_pdf(double x, const FsdParams& p, DensityMethod method = DensityMethod::quadrature,
               const MixingSample* mix = nullptr);

/// Quadrature evaluator: the Mellin-type integral
///   q(x) = int g(x y^(beta/alpha); alpha, theta, lambda) g(y; beta, 1, 1) y^(beta/alpha) dy
/// taken over u = log y, with both stable densities from StableDensity.
class FsdDensity {
 public:
  explicit FsdDensity(const FsdParams& p);

  double operator()(double x) const;

  const FsdParams& params() const noexcept { return params_; }

 private:
  double integrand(double x, double u) const;
  double mixing_density(double u) const;
  double upper_log_limit(double x) const;

  FsdParams params_;
  StableDensity outer_;
  std::optional<StableDensity> mixing_;
  double ratio_;  // beta / alpha
  double u_lo_ = 0.0;
  double u_mode_ = 0.0;
  // Outer panels are aligned on a fixed grid in u, so the mixing density is
  // evaluated at the same nodes for every x and can be memoized.
  struct Cache {
    std::mutex mutex;
    std::unordered_map<double, double> values;
  };
  std::shared_ptr<Cache> cache_ = std::make_shared<Cache>();
};

struct McDensityEstimate {
  double value = 0.0;
  double std_error = 0.0;
};

/// Unbiased estimator (1/M) sum_j w_j g(x w_j), w_j = S_j^(beta/alpha), with g
/// read from a TabulatedStableDensity.
class FsdMonteCarloDensity {
 public:
  FsdMonteCarloDensity(const FsdParams& p, const MixingSample& mix);

  McDensityEstimate estimate(double x) const;
  double operator()(double x) const { return estimate(x).value; }

 private:
  FsdParams params_;
  TabulatedStableDensity density_;
  std::vector<double> weights_;
};

enum class SpecialCase { general, strictly_stable, gaussian, cauchy, levy_smirnov };

SpecialCase special_case_of(const FsdParams& p);
std::string_view to_string(SpecialCase c);

/// Fixed uniforms transformed per parameter point (common random numbers).
/// Pieces depending only on (alpha, theta) or on (alpha, beta) are cached, so
/// a coordinate-wise search recomputes only what changed.
class CommonRandomFsd {
 public:
  CommonRandomFsd(std::size_t count, RngStream rng);

  std::size_t size() const noexcept { return u1_.size(); }

  /// Draws at p; the view is invalidated by the next call.
  std::span<const double> draws(const FsdParams& p);

 private:
  std::vector<double> u1_, u2_, u3_, u4_;
  std::vector<double> stable_, log_one_sided_, mixing_, out_;
  std::optional<std::pair<double, double>> stable_key_;
  std::optional<double> one_sided_key_;
  std::optional<std::pair<double, double>> mixing_key_;
};

}  // namespace fracstable
