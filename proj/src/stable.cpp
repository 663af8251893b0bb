#include "fracstable/stable.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "fracstable/error.hpp"
#include "fracstable/quadrature.hpp"

namespace fracstable {
namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kThetaSlack = 1e-12;
// -log(1e-12): envelope level at which the inversion integral is truncated.
constexpr double kEnvelopeCut = 27.631021115928547;
constexpr double kInversionTarget = 1e-10;
constexpr double kInversionLimit = 1e-8;
constexpr int kSeriesTerms = 400;
// Beyond this many standard units the short tail of a totally skewed
// alpha > 1 law is below any representable density.
constexpr double kLightTailCut = 30.0;

std::string describe(const char* name, double value, const char* bound) {
  std::ostringstream os;
  os << name << " must satisfy " << bound << " (got " << value << ")";
  return os.str();
}

}  // namespace

double max_abs_theta(double alpha) { return std::min(1.0, 2.0 / alpha - 1.0); }

void validate(const StableParams& p) {
  if (!(p.alpha > 0.0 && p.alpha <= 2.0)) throw DomainError(describe("alpha", p.alpha, "0 < alpha <= 2"));
  if (!(std::abs(p.theta) <= max_abs_theta(p.alpha) + kThetaSlack))
    throw DomainError(describe("theta", p.theta, "|theta| <= min(1, 2/alpha - 1)"));
  if (!(p.lambda > 0.0) || !std::isfinite(p.lambda)) throw DomainError(describe("lambda", p.lambda, "lambda > 0"));
}

double stable_from_uniforms(double alpha, double theta, double u1, double u2) {
  const double v = kPi * (0.5 - u1);
  if (alpha == 1.0) {
    // Cauchy with scale cos(theta pi/2) shifted by sin(theta pi/2); the
    // scale is written so that it is exactly zero at |theta| = 1.
    const double scale = std::sin((1.0 - std::abs(theta)) * kPi / 2.0);
    return std::tan(v) * scale + std::sin(theta * kPi / 2.0);
  }
  const double w = -std::log(u2);
  const double a = alpha * (v + theta * kPi / 2.0);
  const double s = std::sin(a);
  if (s == 0.0) return 0.0;
  const double base = std::max(std::cos(v - a), 0.0) / w;
  const double log_abs = std::log(std::abs(s)) - std::log(std::cos(v)) / alpha +
                         (1.0 - alpha) / alpha * std::log(base);
  return std::copysign(std::exp(log_abs), s);
}

double one_sided_from_uniforms(double beta, double u3, double u4) {
  const double w = -std::log(u4);
  const double e = 1.0 / beta - 1.0;
  const double log_s = std::log(std::sin(beta * kPi * u3)) + e * std::log(std::sin((1.0 - beta) * kPi * u3)) -
                       std::log(std::sin(kPi * u3)) / beta - e * std::log(w);
  return std::exp(log_s);
}

double sample_stable(const StableParams& p, RngStream& rng) {
  validate(p);
  if (p.lambda != 1.0) throw DomainError(describe("lambda", p.lambda, "lambda == 1 for standard variates"));
  const double u1 = rng.uniform();
  const double u2 = rng.uniform();
  return stable_from_uniforms(p.alpha, p.theta, u1, u2);
}

double sample_one_sided(double beta, RngStream& rng) {
  if (!(beta > 0.0 && beta < 1.0)) throw DomainError(describe("beta", beta, "0 < beta < 1"));
  const double u3 = rng.uniform();
  const double u4 = rng.uniform();
  return one_sided_from_uniforms(beta, u3, u4);
}

std::complex<double> stable_cf(double k, const StableParams& p) {
  validate(p);
  if (k == 0.0) return {1.0, 0.0};
  const double sign = k > 0.0 ? 1.0 : -1.0;
  const std::complex<double> rotation = std::polar(1.0, -p.alpha * p.theta * (kPi / 2.0) * sign);
  return std::exp(-p.lambda * std::pow(std::abs(k), p.alpha) * rotation);
}

double stable_pdf(double x, const StableParams& p) { return StableDensity(p)(x); }

StableDensity::StableDensity(const StableParams& p) : params_(p) {
  validate(p);
  scale_ = std::pow(p.lambda, 1.0 / p.alpha);
  envelope_rate_ = std::cos(p.alpha * p.theta * kPi / 2.0);
  phase_rate_ = std::sin(p.alpha * p.theta * kPi / 2.0);
  if (p.alpha == 2.0) return;
  if (!(envelope_rate_ > 1e-12))
    throw DomainError("density undefined: alpha = 1 with |theta| = 1 is a point mass");
  k_max_ = std::pow(kEnvelopeCut / envelope_rate_, 1.0 / p.alpha);

  for (int side = 0; side < 2; ++side) {
    Tail& tail = tails_[side];
    const double theta = side == 0 ? p.theta : -p.theta;
    const double rho = (1.0 + theta) / 2.0;
    const double alpha_rho = p.alpha * rho;
    if (p.alpha < 1.0 && rho < 1e-12) {
      tail.kind = TailKind::zero;
      continue;
    }
    if (p.alpha > 1.0 && std::abs(alpha_rho - std::round(alpha_rho)) < 1e-12) {
      tail.kind = TailKind::light;
      continue;
    }
    tail.log_magnitude.resize(kSeriesTerms);
    tail.coefficient.resize(kSeriesTerms);
    for (int n = 1; n <= kSeriesTerms; ++n) {
      tail.log_magnitude[n - 1] = std::lgamma(n * p.alpha + 1.0) - std::lgamma(n + 1.0) - std::log(kPi);
      tail.coefficient[n - 1] = (n % 2 == 1 ? 1.0 : -1.0) * std::sin(n * kPi * alpha_rho);
    }
    // Smallest point of a geometric ladder from which the series is accurate
    // here and at the next few rungs.
    for (int step = 0; step < 160; ++step) {
      const double z = 0.25 * std::pow(2.0, step / 4.0);
      if (tail_sum(z, tail) && tail_sum(1.5 * z, tail) && tail_sum(3.0 * z, tail)) {
        tail.threshold = z;
        break;
      }
    }
  }
}

double StableDensity::series_threshold(int side) const {
  if (params_.alpha == 2.0) return std::numeric_limits<double>::infinity();
  const Tail& tail = side >= 0 ? tails_[0] : tails_[1];
  return tail.kind == TailKind::series ? tail.threshold : std::numeric_limits<double>::infinity();
}

std::optional<double> StableDensity::tail_sum(double az, const Tail& tail) const {
  if (!(az > 0.0)) return std::nullopt;
  const double alpha = params_.alpha;
  const bool asymptotic = alpha > 1.0;
  const double log_z = std::log(az);
  double sum = 0.0;
  double largest = 0.0;
  double previous = std::numeric_limits<double>::infinity();
  for (int n = 1; n <= kSeriesTerms; ++n) {
    const double bound = std::exp(tail.log_magnitude[n - 1] - (n * alpha + 1.0) * log_z);
    if (asymptotic && bound > previous) {
      if (sum > 0.0 && previous <= 1e-13 * sum) return sum;
      return std::nullopt;
    }
    sum += tail.coefficient[n - 1] * bound;
    largest = std::max(largest, bound);
    if (n >= 2 && bound <= 1e-17 * std::abs(sum)) {
      if (!(sum > 0.0) || largest > 1e4 * sum) return std::nullopt;
      return sum;
    }
    previous = bound;
  }
  return std::nullopt;
}

std::optional<double> StableDensity::series(double z) const {
  if (params_.alpha == 2.0) return std::nullopt;
  const Tail& tail = tail_for(z);
  if (tail.kind == TailKind::zero) return 0.0;
  if (tail.kind == TailKind::light) return std::nullopt;
  return tail_sum(std::abs(z), tail);
}

double StableDensity::inversion(double z) const {
  const double alpha = params_.alpha;
  const double c = envelope_rate_;
  const double s = phase_rate_;
  auto integrand = [alpha, c, s, z](double k) {
    const double ka = std::pow(k, alpha);
    return std::exp(-c * ka) * std::cos(s * ka - k * z);
  };
  const double phase = std::abs(z) * k_max_ + std::abs(s) * std::pow(k_max_, alpha);
  QuadratureOptions opts;
  opts.abs_tol = kPi * kInversionTarget;
  opts.initial_panels = static_cast<std::size_t>(std::clamp(std::ceil(phase / kPi), 4.0, 200000.0));
  opts.max_intervals = opts.initial_panels + 40000;
  const QuadratureResult r = integrate_adaptive(integrand, 0.0, k_max_, opts);
  const double err = r.abs_error / kPi;
  if (err > kInversionLimit) throw NumericError("stable density inversion did not converge", err);
  return std::max(0.0, r.value / kPi);
}

double StableDensity::standard_density(double z) const {
  const Tail& tail = tail_for(z);
  const double az = std::abs(z);
  switch (tail.kind) {
    case TailKind::zero:
      return 0.0;
    case TailKind::light:
      if (az > kLightTailCut) return 0.0;
      break;
    case TailKind::series:
      if (az >= tail.threshold) {
        if (auto v = tail_sum(az, tail)) return *v;
      }
      break;
  }
  if (z == 0.0 && params_.alpha < 1.0 && std::abs(params_.theta) >= 1.0 - kThetaSlack) return 0.0;
  return inversion(z);
}

double StableDensity::operator()(double x) const {
  if (params_.alpha == 2.0) {
    const double var2 = 4.0 * params_.lambda;  // density exp(-x^2 / (4 lambda))
    return std::exp(-x * x / var2) / std::sqrt(kPi * var2);
  }
  return standard_density(x / scale_) / scale_;
}

TabulatedStableDensity::TabulatedStableDensity(const StableParams& p, std::size_t max_nodes)
    : exact_(p), scale_(std::pow(p.lambda, 1.0 / p.alpha)) {
  if (p.alpha == 2.0) return;
  constexpr double kCap = 200.0;
  auto reach = [&](int side) {
    const double t = exact_.series_threshold(side);
    if (std::isfinite(t)) return std::min(t, kCap);
    // Zero or light side: the table only has to cover the transition.
    return std::min(kLightTailCut, kCap);
  };
  const double hi = reach(+1);
  const double lo = -reach(-1);
  const std::size_t nodes = std::max<std::size_t>(16, max_nodes);
  step_ = std::max(0.005, (hi - lo) / static_cast<double>(nodes - 1));
  lo_ = lo;
  const auto count = static_cast<std::size_t>(std::ceil((hi - lo) / step_)) + 1;
  nodes_.resize(count);
  for (std::size_t i = 0; i < count; ++i) nodes_[i] = exact_(scale_ * (lo_ + step_ * static_cast<double>(i))) * scale_;
}

double TabulatedStableDensity::operator()(double x) const {
  if (nodes_.empty()) return exact_(x);
  const double z = x / scale_;
  const double pos = (z - lo_) / step_;
  const auto last = static_cast<double>(nodes_.size() - 1);
  if (!(pos >= 1.0 && pos <= last - 2.0)) return exact_(x);
  const auto i = static_cast<std::size_t>(pos);
  const double t = pos - static_cast<double>(i);
  const double y0 = nodes_[i - 1], y1 = nodes_[i], y2 = nodes_[i + 1], y3 = nodes_[i + 2];
  // Four-point Lagrange through nodes i-1 .. i+2.
  const double v = y1 + t * (-(y0 / 3.0) - y1 / 2.0 + y2 - y3 / 6.0) +
                   t * t * (y0 / 2.0 - y1 + y2 / 2.0) + t * t * t * (-(y0 / 6.0) + y1 / 2.0 - y2 / 2.0 + y3 / 6.0);
  return std::max(0.0, v) / scale_;
}

}  // namespace fracstable
