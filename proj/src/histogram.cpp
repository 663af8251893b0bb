#include "fracstable/histogram.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include <boost/math/special_functions/gamma.hpp>

#include "fracstable/error.hpp"

namespace fracstable {
namespace {

bool in_window(double x, Window w) { return x >= w.lo && x <= w.hi; }

void check_window(Window w, std::size_t bins) {
  if (!(std::isfinite(w.lo) && std::isfinite(w.hi) && w.lo < w.hi)) {
    std::ostringstream os;
    os << "window must satisfy a < b (got [" << w.lo << ", " << w.hi << "])";
    throw DomainError(os.str());
  }
  if (bins < 2) throw DomainError("at least 2 bins are required");
}

GofReport decide(double statistic, int dof, double level) {
  GofReport r;
  r.statistic = statistic;
  r.dof = dof;
  r.level = level;
  r.p_value = chi2_upper_tail(statistic, dof);
  r.decision = r.p_value < level ? Decision::reject : Decision::accept;
  return r;
}

}  // namespace

std::string_view to_string(Binning b) {
  switch (b) {
    case Binning::linear: return "linear";
    case Binning::logarithmic: return "log";
    case Binning::equal_probability: return "equalprob";
  }
  return "log";
}

Binning parse_binning(std::string_view name) {
  if (name == "linear") return Binning::linear;
  if (name == "log" || name == "logarithmic") return Binning::logarithmic;
  if (name == "equalprob" || name == "equal-probability") return Binning::equal_probability;
  throw DomainError("unknown binning '" + std::string(name) + "' (expected linear, log or equalprob)");
}

std::string_view to_string(Decision d) { return d == Decision::accept ? "accept" : "reject"; }

std::optional<std::size_t> Histogram::bin_of(double x) const {
  if (!(x >= edges.front() && x <= edges.back())) return std::nullopt;
  auto it = std::lower_bound(edges.begin() + 1, edges.end(), x);
  return static_cast<std::size_t>(it - (edges.begin() + 1));
}

std::vector<double> make_edges(std::span<const double> sample, Window w, std::size_t bins, Binning binning) {
  check_window(w, bins);
  std::vector<double> edges(bins + 1);
  const auto n = static_cast<double>(bins);
  switch (binning) {
    case Binning::linear:
      for (std::size_t i = 0; i <= bins; ++i) edges[i] = w.lo + (w.hi - w.lo) * static_cast<double>(i) / n;
      break;
    case Binning::logarithmic: {
      if (!(w.lo > 0.0)) {
        std::ostringstream os;
        os << "logarithmic binning requires a > 0 (got a = " << w.lo << ")";
        throw DomainError(os.str());
      }
      const double l0 = std::log(w.lo), l1 = std::log(w.hi);
      for (std::size_t i = 0; i <= bins; ++i) edges[i] = std::exp(l0 + (l1 - l0) * static_cast<double>(i) / n);
      break;
    }
    case Binning::equal_probability: {
      std::vector<double> inside;
      for (double x : sample)
        if (in_window(x, w)) inside.push_back(x);
      std::sort(inside.begin(), inside.end());
      std::size_t distinct = inside.empty() ? 0 : 1;
      for (std::size_t i = 1; i < inside.size(); ++i) distinct += inside[i] != inside[i - 1];
      if (distinct < bins) {
        std::ostringstream os;
        os << "equal-probability binning needs at least " << bins << " distinct values in the window (got " << distinct
           << ")";
        throw DomainError(os.str());
      }
      const std::size_t m = inside.size();
      for (std::size_t i = 1; i < bins; ++i) {
        const std::size_t k = std::clamp<std::size_t>((i * m + bins / 2) / bins, 1, m - 1);
        edges[i] = 0.5 * (inside[k - 1] + inside[k]);
      }
      break;
    }
  }
  edges.front() = w.lo;
  edges.back() = w.hi;
  for (std::size_t i = 1; i <= bins; ++i)
    if (!(edges[i] > edges[i - 1])) throw DomainError("bin edges are not strictly increasing (too many tied values)");
  return edges;
}

Histogram count_on_edges(std::span<const double> sample, std::vector<double> edges, Binning binning) {
  if (edges.size() < 3) throw DomainError("at least 2 bins are required");
  Histogram h;
  h.edges = std::move(edges);
  h.counts.assign(h.edges.size() - 1, 0);
  h.binning = binning;
  for (double x : sample) {
    if (auto i = h.bin_of(x)) {
      ++h.counts[*i];
      ++h.total;
    }
  }
  return h;
}

Histogram build_histogram(std::span<const double> sample, Window w, std::size_t bins, Binning binning) {
  return count_on_edges(sample, make_edges(sample, w, bins, binning), binning);
}

std::vector<double> cell_probabilities(std::span<const double> model_sample, const Histogram& shape) {
  if (model_sample.empty()) throw DomainError("model sample is empty");
  const Histogram model = count_on_edges(model_sample, shape.edges, shape.binning);
  const double floor = 1.0 / (10.0 * static_cast<double>(model_sample.size()));
  const double inside = static_cast<double>(model.total);
  std::vector<double> p(model.bins());
  double sum = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    p[i] = model.counts[i] > 0 ? static_cast<double>(model.counts[i]) / inside : floor;
    sum += p[i];
  }
  for (double& v : p) v /= sum;
  return p;
}

double chi2_distance(const Histogram& hist, std::span<const double> probs) {
  if (probs.size() != hist.bins()) throw DomainError("cell probabilities and bins differ in length");
  if (hist.total == 0) throw DomainError("histogram has no observations in the window");
  const auto n = static_cast<double>(hist.total);
  double d = 0.0;
  for (std::size_t i = 0; i < probs.size(); ++i) {
    if (!(probs[i] > 0.0)) throw DomainError("cell probabilities must be strictly positive");
    const double expected = n * probs[i];
    const double diff = expected - static_cast<double>(hist.counts[i]);
    d += diff * diff / expected;
  }
  return d;
}

double chi2_upper_tail(double x, double dof) {
  if (!(dof > 0.0)) throw DomainError("degrees of freedom must be positive");
  if (!(x >= 0.0)) throw DomainError("chi-square statistic must be nonnegative");
  if (x == 0.0) return 1.0;
  if (std::isinf(x)) return 0.0;
  return boost::math::gamma_q(dof / 2.0, x / 2.0);
}

double chi2_quantile(double p, double dof) {
  if (!(p > 0.0 && p < 1.0)) throw DomainError("quantile level must lie in (0, 1)");
  if (!(dof > 0.0)) throw DomainError("degrees of freedom must be positive");
  return 2.0 * boost::math::gamma_p_inv(dof / 2.0, p);
}

GofReport pearson_test(const Histogram& hist, std::span<const double> probs, int fitted_params, double level) {
  if (!(level > 0.0 && level < 1.0)) throw DomainError("significance level must lie in (0, 1)");
  if (fitted_params < 0) throw DomainError("fitted parameter count must be nonnegative");
  const int dof = static_cast<int>(hist.bins()) - 1 - fitted_params;
  if (dof <= 0) {
    std::ostringstream os;
    os << "degrees of freedom " << hist.bins() << " - 1 - " << fitted_params << " = " << dof
       << " must be positive; use more bins";
    throw DomainError(os.str());
  }
  double sum = 0.0;
  for (double p : probs) sum += p;
  if (std::abs(sum - 1.0) > 1e-6) throw DomainError("cell probabilities must sum to 1 over the window");
  return decide(chi2_distance(hist, probs), dof, level);
}

PooledCells pool_sparse_cells(const Histogram& hist, std::span<const double> probs, double min_expected) {
  if (probs.size() != hist.bins()) throw DomainError("cell probabilities and bins differ in length");
  if (!(min_expected >= 0.0)) throw DomainError("minimum expected count must be nonnegative");
  PooledCells out;
  out.hist.binning = hist.binning;
  out.hist.total = hist.total;
  out.hist.edges.push_back(hist.edges.front());
  const auto n = static_cast<double>(hist.total);
  double p = 0.0;
  std::size_t c = 0;
  for (std::size_t i = 0; i < hist.bins(); ++i) {
    p += probs[i];
    c += hist.counts[i];
    if (n * p >= min_expected) {
      out.hist.edges.push_back(hist.edges[i + 1]);
      out.hist.counts.push_back(c);
      out.probs.push_back(p);
      p = 0.0;
      c = 0;
    }
  }
  if (out.probs.empty()) {
    out.hist.edges.push_back(hist.edges.back());
    out.hist.counts.push_back(c);
    out.probs.push_back(p);
  } else if (p > 0.0 || c > 0) {
    out.hist.edges.back() = hist.edges.back();
    out.hist.counts.back() += c;
    out.probs.back() += p;
  }
  return out;
}

GofReport homogeneity_test(const Histogram& a, const Histogram& b, double level) {
  if (a.edges != b.edges) throw DomainError("histograms must share bin edges");
  if (a.total == 0 || b.total == 0) throw DomainError("both histograms need observations in the window");
  const auto na = static_cast<double>(a.total), nb = static_cast<double>(b.total);
  const double ka = std::sqrt(nb / na), kb = std::sqrt(na / nb);
  double stat = 0.0;
  int used = 0;
  for (std::size_t i = 0; i < a.bins(); ++i) {
    const auto ca = static_cast<double>(a.counts[i]), cb = static_cast<double>(b.counts[i]);
    if (ca + cb == 0.0) continue;
    const double diff = ka * ca - kb * cb;
    stat += diff * diff / (ca + cb);
    ++used;
  }
  if (used < 2) throw DomainError("homogeneity test needs at least two occupied bins");
  return decide(stat, used - 1, level);
}

}  // namespace fracstable
