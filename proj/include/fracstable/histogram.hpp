#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

namespace fracstable {

enum class Binning { linear, logarithmic, equal_probability };

std::string_view to_string(Binning b);
/// Accepts "linear", "log", "logarithmic", "equalprob", "equal-probability".
Binning parse_binning(std::string_view name);

struct Window {
  double lo = 0.0;
  double hi = 0.0;
};

/// Bins are [e0, e1], (e1, e2], ..., (e_{n-1}, e_n] so they partition [a, b].
struct Histogram {
  std::vector<double> edges;
  std::vector<std::size_t> counts;
  std::size_t total = 0;
  Binning binning = Binning::logarithmic;

  std::size_t bins() const noexcept { return counts.size(); }
  Window window() const { return {edges.front(), edges.back()}; }
  std::optional<std::size_t> bin_of(double x) const;
};

std::vector<double> make_edges(std::span<const double> sample, Window w, std::size_t bins, Binning binning);

Histogram build_histogram(std::span<const double> sample, Window w, std::size_t bins, Binning binning);

/// Counts a sample on fixed edges (e.g. a model sample on the data's bins).
Histogram count_on_edges(std::span<const double> sample, std::vector<double> edges, Binning binning);

/// Window-conditional cell probabilities from a model sample. Empty cells are
/// floored at 1/(10 M) before renormalizing, so every probability is positive.
std::vector<double> cell_probabilities(std::span<const double> model_sample, const Histogram& shape);

/// Sum of (N P_i - nu_i)^2 / (N P_i).
double chi2_distance(const Histogram& hist, std::span<const double> probs);

/// Q(dof/2, x/2), the upper tail of the chi-square law.
double chi2_upper_tail(double x, double dof);
double chi2_quantile(double p, double dof);

enum class Decision { accept, reject };
std::string_view to_string(Decision d);

struct GofReport {
  double statistic = 0.0;
  int dof = 0;
  double p_value = 1.0;
  double level = 0.05;
  Decision decision = Decision::accept;
};

GofReport pearson_test(const Histogram& hist, std::span<const double> probs, int fitted_params, double level = 0.05);

struct PooledCells {
  Histogram hist;
  std::vector<double> probs;
};

/// Merges adjacent cells left to right until each expected count N P_i is at
/// least min_expected; a short remainder joins the last closed cell. Keeps the
/// chi-square approximation valid when a window edge sits on a sparse tail.
PooledCells pool_sparse_cells(const Histogram& hist, std::span<const double> probs, double min_expected = 5.0);

/// Two-sample chi-square homogeneity test on histograms sharing edges. Bins
/// empty in both samples are skipped.
GofReport homogeneity_test(const Histogram& a, const Histogram& b, double level = 0.05);

}  // namespace fracstable
