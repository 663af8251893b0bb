#include "fracstable/ctrw.hpp"

#include <cmath>
#include <sstream>
#include <string>

#include "fracstable/error.hpp"
#include "fracstable/fsd.hpp"

namespace fracstable {

std::string_view to_string(JumpSymmetry s) { return s == JumpSymmetry::symmetric ? "symmetric" : "one-sided"; }

JumpSymmetry parse_symmetry(std::string_view name) {
  if (name == "symmetric") return JumpSymmetry::symmetric;
  if (name == "one-sided" || name == "onesided") return JumpSymmetry::one_sided;
  throw DomainError("unknown jump symmetry '" + std::string(name) + "' (expected symmetric or one-sided)");
}

void CtrwConfig::validate() const {
  auto fail = [](const char* what, double v) {
    std::ostringstream os;
    os << what << " (got " << v << ")";
    throw DomainError(os.str());
  };
  if (!(alpha > 0.0 && alpha <= 2.0)) fail("jump exponent alpha must satisfy 0 < alpha <= 2", alpha);
  if (!(beta > 0.0 && beta <= 1.0)) fail("wait exponent beta must satisfy 0 < beta <= 1", beta);
  if (!(x0 > 0.0)) fail("jump scale x0 must be positive", x0);
  if (!(t0 > 0.0)) fail("wait scale t0 must be positive", t0);
  if (!(t > 0.0) || !std::isfinite(t)) fail("observation time t must be positive", t);
  if (ensemble == 0) throw DomainError("ensemble size must be positive");
}

double pareto_from_uniform(double exponent, double scale, double u) {
  if (!(exponent > 0.0) || !(scale > 0.0)) throw DomainError("Pareto exponent and scale must be positive");
  return scale * std::pow(u, -1.0 / exponent);
}

double sample_pareto(double exponent, double scale, RngStream& rng) {
  return pareto_from_uniform(exponent, scale, rng.uniform());
}

WalkerState simulate_walker(double t, const VariateSource& wait, const VariateSource& jump) {
  WalkerState s;
  while (true) {
    const double next = s.elapsed + wait();
    if (!(next < t)) break;
    s.elapsed = next;
    s.position += jump();
    ++s.jumps;
  }
  return s;
}

WalkerState simulate_walker(const CtrwConfig& cfg, RngStream& rng) {
  cfg.validate();
  WalkerState s;
  while (true) {
    const double next = s.elapsed + sample_pareto(cfg.beta, cfg.t0, rng);
    if (!(next < cfg.t)) break;
    s.elapsed = next;
    double step = sample_pareto(cfg.alpha, cfg.x0, rng);
    if (cfg.symmetry == JumpSymmetry::symmetric && rng.uniform() <= 0.5) step = -step;
    s.position += step;
    ++s.jumps;
  }
  return s;
}

std::vector<WalkerState> simulate_ensemble(const CtrwConfig& cfg, const RngStream& rng) {
  cfg.validate();
  std::vector<WalkerState> out(cfg.ensemble);
  for (std::size_t i = 0; i < cfg.ensemble; ++i) {
    RngStream walker = rng.split(i);
    out[i] = simulate_walker(cfg, walker);
  }
  return out;
}

std::vector<double> scaled_positions(const std::vector<WalkerState>& walkers, const CtrwConfig& cfg) {
  const double factor = std::pow(cfg.t, -cfg.beta / cfg.alpha);
  std::vector<double> out;
  out.reserve(walkers.size());
  for (const WalkerState& w : walkers) out.push_back(w.position * factor);
  return out;
}

double ctrw_limit_pdf(double x, double t, double alpha, double beta, double D) {
  if (!(D > 0.0)) throw DomainError("diffusion constant D must be positive");
  if (!(t > 0.0)) throw DomainError("time t must be positive");
  const double scale = std::pow(D * std::pow(t, beta), -1.0 / alpha);
  return scale * fsd_pdf(std::abs(x) * scale, FsdParams{alpha, beta, 0.0, 1.0});
}

}  // namespace fracstable
