#include "fracstable/fsd.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "fracstable/error.hpp"
#include "fracstable/quadrature.hpp"

namespace fracstable {
namespace {

constexpr double kThetaSlack = 1e-12;
constexpr double kMaxLog = 700.0;

double mixing_factor(const FsdParams& p, double u3, double u4) {
  if (p.beta == 1.0) return 1.0;
  return std::exp(-(p.beta / p.alpha) * std::log(one_sided_from_uniforms(p.beta, u3, u4)));
}

}  // namespace

void validate(const FsdParams& p) {
  auto fail = [](const char* name, double v, const char* bound) {
    std::ostringstream os;
    os << name << " must satisfy " << bound << " (got " << v << ")";
    throw DomainError(os.str());
  };
  if (!(p.alpha > 0.0 && p.alpha <= 2.0)) fail("alpha", p.alpha, "0 < alpha <= 2");
  if (!(p.beta > 0.0 && p.beta <= 1.0)) fail("beta", p.beta, "0 < beta <= 1");
  if (!(std::abs(p.theta) <= max_abs_theta(p.alpha) + kThetaSlack))
    fail("theta", p.theta, "|theta| <= min(1, 2/alpha - 1)");
  if (!(p.lambda > 0.0) || !std::isfinite(p.lambda)) fail("lambda", p.lambda, "lambda > 0");
}

bool in_domain(const FsdParams& p) noexcept {
  return p.alpha > 0.0 && p.alpha <= 2.0 && p.beta > 0.0 && p.beta <= 1.0 &&
         std::abs(p.theta) <= max_abs_theta(p.alpha) + kThetaSlack && p.lambda > 0.0 && std::isfinite(p.lambda);
}

MixingSample MixingSample::draw(double beta, std::size_t count, RngStream rng) {
  if (!(beta > 0.0 && beta <= 1.0)) {
    std::ostringstream os;
    os << "beta must satisfy 0 < beta <= 1 (got " << beta << ")";
    throw DomainError(os.str());
  }
  MixingSample mix;
  mix.beta = beta;
  mix.seed = rng.seed();
  mix.stream = rng.stream();
  mix.values.resize(count, 1.0);
  if (beta < 1.0) {
    for (double& v : mix.values) v = sample_one_sided(beta, rng);
  }
  return mix;
}

double fsd_from_uniforms(const FsdParams& p, double u1, double u2, double u3, double u4) {
  const double y = stable_from_uniforms(p.alpha, p.theta, u1, u2);
  return std::pow(p.lambda, 1.0 / p.alpha) * y * mixing_factor(p, u3, u4);
}

double sample_fsd(const FsdParams& p, RngStream& rng) {
  validate(p);
  const double u1 = rng.uniform();
  const double u2 = rng.uniform();
  const double y = stable_from_uniforms(p.alpha, p.theta, u1, u2);
  double m = 1.0;
  if (p.beta < 1.0) {
    const double u3 = rng.uniform();
    const double u4 = rng.uniform();
    m = mixing_factor(p, u3, u4);
  }
  return std::pow(p.lambda, 1.0 / p.alpha) * y * m;
}

std::vector<double> sample_fsd(const FsdParams& p, std::size_t count, RngStream& rng) {
  validate(p);
  std::vector<double> out(count);
  for (double& z : out) z = sample_fsd(p, rng);
  return out;
}

double fsd_pdf(double x, const FsdParams& p, DensityMethod method, const MixingSample* mix) {
  if (method == DensityMethod::quadrature) return FsdDensity(p)(x);
  if (mix == nullptr) throw DomainError("monte-carlo density requires a mixing sample");
  return FsdMonteCarloDensity(p, *mix).estimate(x).value;
}

// ---------------------------------------------------------------------------

FsdDensity::FsdDensity(const FsdParams& p)
    : params_((validate(p), p)), outer_(stable_part(p)), ratio_(p.beta / p.alpha) {
  if (p.beta == 1.0) return;
  mixing_.emplace(StableParams{p.beta, 1.0, 1.0});
  // Below u_lo the one-sided density exp(-(1-b) b^(b/(1-b)) y^(-b/(1-b)))
  // has underflowed.
  const double b = p.beta;
  const double k = (1.0 - b) * std::pow(b, b / (1.0 - b));
  u_lo_ = -((1.0 - b) / b) * std::log(745.0 / k);
  u_mode_ = std::numbers::egamma * (1.0 / b - 1.0);
}

double FsdDensity::mixing_density(double u) const {
  {
    std::lock_guard lock(cache_->mutex);
    if (auto it = cache_->values.find(u); it != cache_->values.end()) return it->second;
  }
  const double v = (*mixing_)(std::exp(u)) * std::exp(u);
  std::lock_guard lock(cache_->mutex);
  cache_->values.emplace(u, v);
  return v;
}

double FsdDensity::integrand(double x, double u) const {
  const double gs = mixing_density(u);
  if (gs == 0.0) return 0.0;
  const double w = std::exp(ratio_ * u);
  return outer_(x * w) * gs * w;
}

double FsdDensity::upper_log_limit(double x) const {
  double cap = kMaxLog;
  double crossover = u_mode_;
  if (x != 0.0) {
    cap = std::min(cap, (kMaxLog - std::log(std::abs(x))) / ratio_);
    crossover = std::max(crossover, -std::log(std::abs(x)) / ratio_);
  } else {
    cap = std::min(cap, kMaxLog / ratio_);
  }
  double peak = 0.0;
  int quiet = 0;
  const double first = std::max(0.0, std::floor((u_mode_ - 3.0 - u_lo_) / 0.5));
  for (double u = u_lo_ + 0.5 * first; u < cap; u += 0.5) {
    const double h = std::abs(integrand(x, u));
    peak = std::max(peak, h);
    if (u > crossover && u > u_mode_ + 2.0 && h <= 1e-15 * peak) {
      if (++quiet >= 4) return u;
    } else {
      quiet = 0;
    }
  }
  return cap;
}

double FsdDensity::operator()(double x) const {
  if (!mixing_) return outer_(x);
  const double a = params_.alpha;
  if (x == 0.0) {
    const double g0 = outer_(0.0);
    if (g0 == 0.0) return 0.0;
    // E[S^s] = Gamma(1 - s/beta) / Gamma(1 - s) is finite only for s < beta.
    if (a <= 1.0) return std::numeric_limits<double>::infinity();
    return g0 * std::tgamma(1.0 - 1.0 / a) / std::tgamma(1.0 - params_.beta / a);
  }
  constexpr double kPanel = 0.5;
  QuadratureOptions opts;
  opts.abs_tol = 1e-10;
  opts.rel_tol = 1e-9;
  opts.initial_panels = static_cast<std::size_t>(std::ceil((upper_log_limit(x) - u_lo_) / kPanel));
  opts.max_intervals = opts.initial_panels + 4000;
  const double u_hi = u_lo_ + kPanel * static_cast<double>(opts.initial_panels);
  const QuadratureResult r = integrate_adaptive([&](double u) { return integrand(x, u); }, u_lo_, u_hi, opts);
  if (r.abs_error > std::max(1e-8, 1e-6 * std::abs(r.value)))
    throw NumericError("fractional stable density quadrature did not converge", r.abs_error);
  return std::max(0.0, r.value);
}

// ---------------------------------------------------------------------------

FsdMonteCarloDensity::FsdMonteCarloDensity(const FsdParams& p, const MixingSample& mix)
    : params_((validate(p), p)), density_(stable_part(p)) {
  if (mix.values.empty()) throw DomainError("mixing sample is empty");
  if (mix.beta != p.beta) {
    std::ostringstream os;
    os << "mixing sample drawn with beta " << mix.beta << " but density requested at beta " << p.beta;
    throw DomainError(os.str());
  }
  const double r = p.beta / p.alpha;
  weights_.reserve(mix.values.size());
  for (double s : mix.values) weights_.push_back(p.beta == 1.0 ? 1.0 : std::pow(s, r));
}

McDensityEstimate FsdMonteCarloDensity::estimate(double x) const {
  // Welford keeps the variance stable for heavy-tailed summands.
  double mean = 0.0;
  double m2 = 0.0;
  std::size_t n = 0;
  for (double w : weights_) {
    const double v = w * density_(x * w);
    ++n;
    const double d = v - mean;
    mean += d / static_cast<double>(n);
    m2 += d * (v - mean);
  }
  McDensityEstimate e;
  e.value = mean;
  e.std_error = n > 1 ? std::sqrt(m2 / static_cast<double>(n - 1) / static_cast<double>(n)) : 0.0;
  return e;
}

// ---------------------------------------------------------------------------

SpecialCase special_case_of(const FsdParams& p) {
  if (p.beta != 1.0) return SpecialCase::general;
  if (p.alpha == 2.0 && p.theta == 0.0) return SpecialCase::gaussian;
  if (p.alpha == 1.0 && p.theta == 0.0) return SpecialCase::cauchy;
  if (p.alpha == 0.5 && p.theta == 1.0) return SpecialCase::levy_smirnov;
  return SpecialCase::strictly_stable;
}

std::string_view to_string(SpecialCase c) {
  switch (c) {
    case SpecialCase::general: return "general";
    case SpecialCase::strictly_stable: return "strictly-stable";
    case SpecialCase::gaussian: return "gaussian";
    case SpecialCase::cauchy: return "cauchy";
    case SpecialCase::levy_smirnov: return "levy-smirnov";
  }
  return "general";
}

// ---------------------------------------------------------------------------

CommonRandomFsd::CommonRandomFsd(std::size_t count, RngStream rng)
    : u1_(count), u2_(count), u3_(count), u4_(count), stable_(count), log_one_sided_(count), mixing_(count),
      out_(count) {
  for (std::size_t j = 0; j < count; ++j) {
    u1_[j] = rng.uniform();
    u2_[j] = rng.uniform();
    u3_[j] = rng.uniform();
    u4_[j] = rng.uniform();
  }
}

std::span<const double> CommonRandomFsd::draws(const FsdParams& p) {
  validate(p);
  const std::size_t n = size();
  const std::pair<double, double> skey{p.alpha, p.theta};
  if (stable_key_ != skey) {
    for (std::size_t j = 0; j < n; ++j) stable_[j] = stable_from_uniforms(p.alpha, p.theta, u1_[j], u2_[j]);
    stable_key_ = skey;
  }
  const std::pair<double, double> mkey{p.alpha, p.beta};
  if (mixing_key_ != mkey) {
    if (p.beta == 1.0) {
      std::fill(mixing_.begin(), mixing_.end(), 1.0);
    } else {
      if (one_sided_key_ != p.beta) {
        for (std::size_t j = 0; j < n; ++j) log_one_sided_[j] = std::log(one_sided_from_uniforms(p.beta, u3_[j], u4_[j]));
        one_sided_key_ = p.beta;
      }
      const double r = -p.beta / p.alpha;
      for (std::size_t j = 0; j < n; ++j) mixing_[j] = std::exp(r * log_one_sided_[j]);
    }
    mixing_key_ = mkey;
  }
  const double scale = std::pow(p.lambda, 1.0 / p.alpha);
  for (std::size_t j = 0; j < n; ++j) out_[j] = scale * stable_[j] * mixing_[j];
  return out_;
}

}  // namespace fracstable
