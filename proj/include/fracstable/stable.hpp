#pragma once

#include <array>
#include <complex>
#include <limits>
#include <optional>
#include <vector>

#include "fracstable/rng.hpp"

namespace fracstable {

/// Strictly stable law with characteristic function
/// exp(-lambda |k|^alpha exp(-i alpha theta (pi/2) sign k)).
struct StableParams {
  double alpha = 2.0;
  double theta = 0.0;
  double lambda = 1.0;
};

/// Largest admissible |theta| for a given alpha: min(1, 2/alpha - 1).
double max_abs_theta(double alpha);

/// Throws DomainError naming the first violated bound.
void validate(const StableParams& p);

// Chambers-Mallows-Stuck in the theta form; u1 drives the angle, u2 the
// exponential. Both must lie in (0,1].
double stable_from_uniforms(double alpha, double theta, double u1, double u2);

// Kanter's representation of the one-sided law with Laplace transform
// exp(-k^beta), 0 < beta < 1.
double one_sided_from_uniforms(double beta, double u3, double u4);

/// One standard (lambda = 1) variate. Callers scale by lambda^(1/alpha).
double sample_stable(const StableParams& p, RngStream& rng);

/// One variate of S(beta, 1), support (0, inf).
double sample_one_sided(double beta, RngStream& rng);

std::complex<double> stable_cf(double k, const StableParams& p);

/// Density by inversion of the characteristic function; see StableDensity.
double stable_pdf(double x, const StableParams& p);

/// Reusable density evaluator for one parameter point.
///
/// Near the mode the density is obtained by adaptive quadrature of
/// (1/pi) Re int_0^kmax exp(-ikx) cf(k) dk, with kmax where the envelope
/// exp(-lambda k^alpha cos(alpha theta pi/2)) falls below 1e-12. Far in the
/// tails, where that integral is a sum of many cancelling oscillations, the
/// power series in |x|^(-alpha n - 1) takes over: convergent for alpha <= 1,
/// asymptotic for alpha > 1 and only used where its smallest term is
/// negligible. alpha = 2 uses the closed-form Gaussian.
class StableDensity {
 public:
  explicit StableDensity(const StableParams& p);

  double operator()(double x) const;

  const StableParams& params() const noexcept { return params_; }

  /// |x| (in standard units) beyond which the series is used on the given
  /// side (+1 or -1); infinity when the side never uses it.
  double series_threshold(int side) const;

  /// Characteristic function inversion only, in standard units.
  double inversion(double z) const;

  /// Tail series only, in standard units; nullopt if it is not accurate at z.
  std::optional<double> series(double z) const;

 private:
  enum class TailKind { series, zero, light };
  struct Tail {
    TailKind kind = TailKind::series;
    double threshold = std::numeric_limits<double>::infinity();
    std::vector<double> log_magnitude;  // log(Gamma(n alpha + 1) / (n! pi))
    std::vector<double> coefficient;    // (-1)^(n+1) sin(n pi alpha rho)
  };

  double standard_density(double z) const;
  std::optional<double> tail_sum(double az, const Tail& tail) const;
  const Tail& tail_for(double z) const { return z >= 0.0 ? tails_[0] : tails_[1]; }

  StableParams params_;
  double scale_;  // lambda^(1/alpha)
  double envelope_rate_;
  double phase_rate_;
  double k_max_;
  std::array<Tail, 2> tails_;
};

/// Cubic interpolation of a StableDensity on a uniform grid over its core,
/// falling back to the exact evaluator outside. Meant for Monte Carlo sums
/// that need millions of evaluations; accuracy is ~1e-8 absolute.
class TabulatedStableDensity {
 public:
  explicit TabulatedStableDensity(const StableParams& p, std::size_t max_nodes = 8000);

  double operator()(double x) const;

  const StableDensity& exact() const noexcept { return exact_; }

 private:
  StableDensity exact_;
  double scale_;
  double lo_ = 0.0;
  double step_ = 0.0;
  std::vector<double> nodes_;
};

}  // namespace fracstable
