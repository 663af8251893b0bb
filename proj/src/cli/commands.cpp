#include "fracstable/cli/commands.hpp"

#include <cmath>
#include <cstdio>
#include <span>
#include <fstream>
#include <iostream>
#include <string>
#include <utility>

#include <fmt/format.h>

#include "fracstable/error.hpp"
#include "fracstable/estimation.hpp"

namespace fracstable::cli {
namespace {

std::string num(double v) { return fmt::format("{:.9g}", v); }

template <class F>
auto stage(const char* name, F&& f) -> decltype(f()) {
  try {
    return f();
  } catch (const StageError&) {
    throw;
  } catch (const std::exception& e) {
    throw StageError(name, e.what());
  }
}

class Report {
 public:
  void put(std::string_view key, std::string_view value) { text_ += fmt::format("{}={}\n", key, value); }
  void put(std::string_view key, double value) { put(key, num(value)); }
  void put(std::string_view key, std::size_t value) { put(key, std::to_string(value)); }
  void put(std::string_view key, int value) { put(key, std::to_string(value)); }
  void put(std::string_view key, bool value) { put(key, value ? "true" : "false"); }
  void put(std::string_view key, const char* value) { put(key, std::string_view(value)); }

  void params(std::string_view prefix, const FsdParams& p) {
    put(fmt::format("{}.alpha", prefix), p.alpha);
    put(fmt::format("{}.beta", prefix), p.beta);
    put(fmt::format("{}.theta", prefix), p.theta);
    put(fmt::format("{}.lambda", prefix), p.lambda);
  }

  std::string take() { return std::move(text_); }

 private:
  std::string text_;
};

bool is_stdout(const std::string& path) { return path.empty() || path == "-"; }

/// Outputs are staged next to their targets and renamed only after every
/// one was written, so a failed command leaves no partial files behind.
class OutputSet {
 public:
  void add(std::string path, std::string content) { files_.push_back({std::move(path), std::move(content)}); }

  void commit() {
    stage("write", [&] {
      std::vector<std::string> staged;
      try {
        for (const auto& [path, content] : files_) {
          if (is_stdout(path)) continue;
          const std::string tmp = path + ".partial";
          staged.push_back(tmp);
          std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
          out << content;
          out.close();
          if (!out) throw IoError("cannot write '" + path + "'");
        }
        std::size_t k = 0;
        for (const auto& [path, content] : files_) {
          if (is_stdout(path)) continue;
          if (std::rename(staged[k].c_str(), path.c_str()) != 0) throw IoError("cannot write '" + path + "'");
          ++k;
        }
      } catch (...) {
        for (const auto& tmp : staged) std::remove(tmp.c_str());
        throw;
      }
      for (const auto& [path, content] : files_) {
        if (is_stdout(path)) std::cout << content << std::flush;
      }
      return 0;
    });
  }

 private:
  std::vector<std::pair<std::string, std::string>> files_;
};

Window resolve_window(const std::vector<double>& values, const DataOptions& d) {
  if (d.xmin && d.xmax) return {*d.xmin, *d.xmax};
  const Window def = default_window(values);
  return {d.xmin.value_or(def.lo), d.xmax.value_or(def.hi)};
}

void check_dof(std::size_t bins, int fitted) {
  const long dof = static_cast<long>(bins) - 1 - fitted;
  if (dof <= 0)
    throw DomainError(fmt::format("degrees of freedom {} - 1 - {} = {} must be positive; use more bins", bins, fitted,
                                  dof));
}

void describe_input(Report& r, const DataOptions& d, const IngestResult& data, const Histogram& h) {
  r.put("input.path", d.ingest.path);
  r.put("input.column", d.ingest.column);
  r.put("input.rows", data.rows);
  r.put("input.dropped", data.dropped);
  r.put("input.in_window", h.total);
  r.put("window.lo", h.edges.front());
  r.put("window.hi", h.edges.back());
  r.put("bins", h.bins());
  r.put("binning", to_string(h.binning));
  r.put("mc_samples", d.mc_samples);
}

struct PooledGof {
  GofReport report;
  std::size_t cells = 0;
};

PooledGof pooled_gof(const Histogram& h, std::span<const double> probs, int fitted, const DataOptions& d) {
  const PooledCells pooled = pool_sparse_cells(h, probs, d.min_expected);
  return {pearson_test(pooled.hist, pooled.probs, fitted, d.level), pooled.hist.bins()};
}

void describe_gof(Report& r, const PooledGof& pg, int fitted, const DataOptions& d) {
  const GofReport& g = pg.report;
  r.put("gof.fitted_params", fitted);
  r.put("gof.min_expected", d.min_expected);
  r.put("gof.cells", pg.cells);
  r.put("gof.statistic", g.statistic);
  r.put("gof.dof", g.dof);
  r.put("gof.p_value", g.p_value);
  r.put("gof.level", g.level);
  r.put("gof.decision", to_string(g.decision));
}

double bin_center(const Histogram& h, std::size_t i) {
  const double lo = h.edges[i], hi = h.edges[i + 1];
  if (h.binning == Binning::logarithmic) return std::sqrt(lo * hi);
  return 0.5 * (lo + hi);
}

std::string plot_table(const Histogram& data, const std::vector<double>& model, std::span<const double> probs) {
  const Histogram m = count_on_edges(model, data.edges, data.binning);
  std::string out = "bin_lo,bin_hi,center,count,empirical_density,model_density,model_density_unconditional\n";
  const auto n = static_cast<double>(data.total);
  const auto total = static_cast<double>(model.size());
  for (std::size_t i = 0; i < data.bins(); ++i) {
    const double width = data.edges[i + 1] - data.edges[i];
    out += fmt::format("{},{},{},{},{},{},{}\n", num(data.edges[i]), num(data.edges[i + 1]), num(bin_center(data, i)),
                       data.counts[i], num(static_cast<double>(data.counts[i]) / (n * width)),
                       num(probs[i] / width), num(static_cast<double>(m.counts[i]) / (total * width)));
  }
  return out;
}

void header(Report& r, std::string_view command, std::uint64_t seed) {
  r.put("tool", "fracstable");
  r.put("version", kVersion);
  r.put("command", command);
  r.put("seed", std::to_string(seed));
}

}  // namespace

void run_fit(const FitArgs& args) {
  const DataOptions& d = args.data;
  stage("options", [&] {
    check_dof(d.bins, 4);
    return 0;
  });
  const IngestResult data = stage("ingest", [&] { return ingest_table(d.ingest); });
  const Window window = stage("window", [&] { return resolve_window(data.values, d); });
  FitOptions opts;
  opts.window = window;
  opts.bins = d.bins;
  opts.binning = d.binning;
  opts.mc_samples = d.mc_samples;
  opts.search.penalty_multiplier = d.penalty_A;
  opts.search.max_evaluations = d.max_evals;
  opts.restarts = args.restarts;
  const FitResult fit = stage("fit", [&] { return fit_chi2(data.values, opts, RngStream(d.seed, 0)); });
  const std::vector<double> model =
      stage("simulate", [&] {
        RngStream rng(d.seed, 1);
        return sample_fsd(fit.params, d.mc_samples, rng);
      });
  const std::vector<double> probs = stage("gof", [&] { return cell_probabilities(model, fit.histogram); });
  const PooledGof gof = stage("gof", [&] { return pooled_gof(fit.histogram, probs, 4, d); });

  Report r;
  header(r, "fit", d.seed);
  describe_input(r, d, data, fit.histogram);
  r.put("penalty_A", d.penalty_A);
  r.put("max_evals", d.max_evals);
  r.put("restarts", args.restarts);
  r.put("initial.source", fit.fallback_start ? "fallback" : "moments");
  if (fit.fallback_start) r.put("initial.fallback_reason", fit.fallback_reason);
  r.params("initial", fit.initial);
  r.put("initial.objective", fit.initial_objective);
  r.params("final", fit.params);
  r.put("final.objective", fit.objective);
  r.put("final.special_case", to_string(special_case_of(fit.params)));
  std::size_t accepted = 0;
  for (const auto& v : fit.trace.visited) accepted += v.accepted;
  r.put("search.evaluations", fit.trace.evaluations);
  r.put("search.accepted_points", accepted);
  r.put("search.converged", fit.trace.converged);
  describe_gof(r, gof, 4, d);

  OutputSet outputs;
  if (!d.plot_out.empty()) outputs.add(d.plot_out, plot_table(fit.histogram, model, probs));
  outputs.add(d.out, r.take());
  outputs.commit();
}

void run_gof(const GofArgs& args) {
  const DataOptions& d = args.data;
  stage("options", [&] {
    validate(args.params);
    if (args.fitted_params < 0) throw DomainError("fitted parameter count must be nonnegative");
    check_dof(d.bins, args.fitted_params);
    return 0;
  });
  const IngestResult data = stage("ingest", [&] { return ingest_table(d.ingest); });
  const Window window = stage("window", [&] { return resolve_window(data.values, d); });
  const Histogram hist = stage("histogram", [&] {
    Histogram h = build_histogram(data.values, window, d.bins, d.binning);
    if (h.total == 0) throw DomainError("no observations fall inside the window");
    return h;
  });
  const std::vector<double> model = stage("simulate", [&] {
    RngStream rng(d.seed, 1);
    return sample_fsd(args.params, d.mc_samples, rng);
  });
  const std::vector<double> probs = stage("gof", [&] { return cell_probabilities(model, hist); });
  const PooledGof gof = stage("gof", [&] { return pooled_gof(hist, probs, args.fitted_params, d); });

  Report r;
  header(r, "gof", d.seed);
  describe_input(r, d, data, hist);
  r.params("model", args.params);
  describe_gof(r, gof, args.fitted_params, d);

  OutputSet outputs;
  if (!d.plot_out.empty()) outputs.add(d.plot_out, plot_table(hist, model, probs));
  outputs.add(d.out, r.take());
  outputs.commit();
}

void run_sample(const SampleArgs& args) {
  const std::vector<double> draws = stage("sample", [&] {
    validate(args.params);
    if (args.count == 0) throw DomainError("sample count must be at least 1");
    RngStream rng(args.seed, 0);
    return sample_fsd(args.params, args.count, rng);
  });
  std::string text;
  text.reserve(draws.size() * 16);
  for (double z : draws) {
    text += num(z);
    text += '\n';
  }
  OutputSet outputs;
  outputs.add(args.out, std::move(text));
  outputs.commit();
}

void run_pdf(const PdfArgs& args) {
  const std::vector<double> xs = stage("options", [&] {
    validate(args.params);
    if (!args.xs.empty()) return args.xs;
    if (args.points < 2 || !(args.grid_lo < args.grid_hi)) throw DomainError("grid needs lo < hi and at least 2 points");
    std::vector<double> g(args.points);
    for (std::size_t i = 0; i < g.size(); ++i)
      g[i] = args.grid_lo + (args.grid_hi - args.grid_lo) * static_cast<double>(i) / static_cast<double>(g.size() - 1);
    return g;
  });
  const std::string text = stage("density", [&] {
    std::string out = "x,pdf\n";
    if (args.method == DensityMethod::quadrature) {
      const FsdDensity q(args.params);
      for (double x : xs) out += fmt::format("{},{}\n", num(x), num(q(x)));
    } else {
      const MixingSample mix = MixingSample::draw(args.params.beta, args.mc_samples, RngStream(args.seed, 2));
      const FsdMonteCarloDensity q(args.params, mix);
      for (double x : xs) out += fmt::format("{},{}\n", num(x), num(q(x)));
    }
    return out;
  });
  OutputSet outputs;
  outputs.add(args.out, text);
  outputs.commit();
}

void run_ctrw(const CtrwArgs& args) {
  const std::vector<double> scaled = stage("simulate", [&] {
    const auto walkers = simulate_ensemble(args.config, RngStream(args.seed, 3));
    return scaled_positions(walkers, args.config);
  });
  std::string text;
  for (double y : scaled) {
    text += num(y);
    text += '\n';
  }
  OutputSet outputs;
  if (!args.plot_out.empty()) {
    const std::string curve = stage("reference", [&] {
      if (args.points < 2 || !(args.plot_range > 0.0)) throw DomainError("reference grid needs range > 0 and 2 points");
      std::string out = "x,pdf\n";
      for (std::size_t i = 0; i < args.points; ++i) {
        const double x = -args.plot_range + 2.0 * args.plot_range * static_cast<double>(i) /
                                                static_cast<double>(args.points - 1);
        out += fmt::format("{},{}\n", num(x), num(ctrw_limit_pdf(x, 1.0, args.config.alpha, args.config.beta, args.D)));
      }
      return out;
    });
    outputs.add(args.plot_out, curve);
  }
  outputs.add(args.out, std::move(text));
  outputs.commit();
}

}  // namespace fracstable::cli
