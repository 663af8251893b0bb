#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <queue>
#include <vector>

#include <boost/math/quadrature/gauss_kronrod.hpp>

namespace fracstable {

struct QuadratureOptions {
  double abs_tol = 1e-10;
  double rel_tol = 0.0;
  std::size_t initial_panels = 1;
  std::size_t max_intervals = 50000;
};

struct QuadratureResult {
  double value = 0.0;
  double abs_error = 0.0;
  std::size_t intervals = 0;
};

/// Globally adaptive Gauss-Kronrod (10/21) integration over [a, b].
///
/// The interval with the largest error estimate is bisected until the summed
/// estimate drops below max(abs_tol, rel_tol * |value|) or the interval budget
/// runs out; callers decide what an unmet tolerance means.
template <class F>
QuadratureResult integrate_adaptive(F&& f, double a, double b, const QuadratureOptions& opts = {}) {
  using Rule = boost::math::quadrature::gauss_kronrod<double, 21>;
  struct Piece {
    double lo, hi, value, error;
    bool operator<(const Piece& other) const { return error < other.error; }
  };
  auto eval = [&](double lo, double hi) {
    double err = 0.0;
    const double v = Rule::integrate(f, lo, hi, 0, 0.0, &err);
    return Piece{lo, hi, v, err};
  };

  QuadratureResult out;
  if (!(b > a)) return out;

  std::priority_queue<Piece> heap;
  const std::size_t panels = std::max<std::size_t>(1, opts.initial_panels);
  const double width = (b - a) / static_cast<double>(panels);
  double total = 0.0;
  double total_err = 0.0;
  for (std::size_t i = 0; i < panels; ++i) {
    const double lo = a + width * static_cast<double>(i);
    const double hi = (i + 1 == panels) ? b : a + width * static_cast<double>(i + 1);
    Piece p = eval(lo, hi);
    total += p.value;
    total_err += p.error;
    heap.push(p);
  }

  while (total_err > std::max(opts.abs_tol, opts.rel_tol * std::abs(total)) &&
         heap.size() < opts.max_intervals) {
    const Piece worst = heap.top();
    const double mid = 0.5 * (worst.lo + worst.hi);
    if (!(mid > worst.lo && mid < worst.hi)) break;
    heap.pop();
    const Piece left = eval(worst.lo, mid);
    const Piece right = eval(mid, worst.hi);
    total += left.value + right.value - worst.value;
    total_err += left.error + right.error - worst.error;
    heap.push(left);
    heap.push(right);
  }

  // Re-sum to shed drift from the running updates.
  out.intervals = heap.size();
  while (!heap.empty()) {
    out.value += heap.top().value;
    out.abs_error += heap.top().error;
    heap.pop();
  }
  return out;
}

}  // namespace fracstable
