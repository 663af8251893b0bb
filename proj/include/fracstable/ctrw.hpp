#pragma once

#include <cstddef>
#include <functional>
#include <string_view>
#include <vector>

#include "fracstable/rng.hpp"

namespace fracstable {

enum class JumpSymmetry { symmetric, one_sided };

std::string_view to_string(JumpSymmetry s);
JumpSymmetry parse_symmetry(std::string_view name);

struct CtrwConfig {
  double alpha = 1.5;  // jump tail exponent
  double beta = 0.7;   // waiting-time tail exponent
  double x0 = 1.0;     // jump scale
  double t0 = 1.0;     // waiting-time scale
  double t = 1.0;      // observation time
  std::size_t ensemble = 1;
  JumpSymmetry symmetry = JumpSymmetry::symmetric;

  void validate() const;
};

struct WalkerState {
  double position = 0.0;
  double elapsed = 0.0;
  std::size_t jumps = 0;
};

/// Pure Pareto variate scale * u^(-1/exponent), u in (0, 1].
double pareto_from_uniform(double exponent, double scale, double u);
double sample_pareto(double exponent, double scale, RngStream& rng);

using VariateSource = std::function<double()>;

/// Walker driven by explicit wait and jump sources: the position after the
/// N(t) jumps whose cumulative waits stay strictly below t.
WalkerState simulate_walker(double t, const VariateSource& wait, const VariateSource& jump);

/// Walker with Pareto waits and Pareto (optionally random-signed) jumps.
WalkerState simulate_walker(const CtrwConfig& cfg, RngStream& rng);

/// Final states of cfg.ensemble walkers; walker i uses rng.split(i).
std::vector<WalkerState> simulate_ensemble(const CtrwConfig& cfg, const RngStream& rng);

/// Positions multiplied by t^(-beta/alpha).
std::vector<double> scaled_positions(const std::vector<WalkerState>& walkers, const CtrwConfig& cfg);

/// Self-similar solution (D t^beta)^(-1/alpha) q(|x| (D t^beta)^(-1/alpha); alpha, beta, 0, 1).
double ctrw_limit_pdf(double x, double t, double alpha, double beta, double D);

}  // namespace fracstable
