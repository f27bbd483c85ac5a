#include "incomedist/fit.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "incomedist/errors.hpp"

namespace incomedist {

namespace {

constexpr int kGridSize = 60;
constexpr double kGridTopTail = 0.5;
constexpr double kGridBottomTail = 1.0e-4;

std::string num(double x) { return format_number(x); }

std::string window_text(IncomeWindow w) { return "[" + num(w.lo) + ", " + num(w.hi) + "]"; }

struct IndexRange {
  std::size_t begin = 0;
  std::size_t end = 0;
  std::size_t size() const { return end > begin ? end - begin : 0; }
};

IndexRange points_in(const EmpiricalCCDF& e, IncomeWindow w) {
  const auto& xs = e.sorted_incomes;
  const auto lo = std::lower_bound(xs.begin(), xs.end(), w.lo);
  const auto hi = std::upper_bound(xs.begin(), xs.end(), w.hi);
  return {static_cast<std::size_t>(lo - xs.begin()), static_cast<std::size_t>(hi - xs.begin())};
}

// Ordinary least squares on points sorted by ascending x, with the slope
// variance propagated from the empirical-CCDF covariance.
LineFit fit_line(const std::vector<double>& x, const std::vector<double>& y,
                 const std::vector<double>& positions, double n_total) {
  const std::size_t n = x.size();
  LineFit f;
  f.n = n;
  double mx = 0.0;
  double my = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= static_cast<double>(n);
  my /= static_cast<double>(n);
  double sxx = 0.0;
  double sxy = 0.0;
  double syy = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double dx = x[i] - mx;
    const double dy = y[i] - my;
    sxx += dx * dx;
    sxy += dx * dy;
    syy += dy * dy;
  }
  if (!(sxx > 0.0)) throw NumericError("regression window has no income spread");
  f.slope = sxy / sxx;
  f.intercept = my - f.slope * mx;
  for (std::size_t i = 0; i < n; ++i) {
    const double r = y[i] - f.intercept - f.slope * x[i];
    f.ssr += r * r;
  }
  f.r_squared = syy > 0.0 ? 1.0 - f.ssr / syy : 1.0;
  f.ols_slope_se = n > 2 ? std::sqrt(f.ssr / static_cast<double>(n - 2) / sxx) : 0.0;

  double var = 0.0;
  double suffix = 0.0;
  double prev_c = 0.0;
  std::vector<double> tail_weight(n);
  for (std::size_t i = n; i-- > 0;) {
    suffix += (x[i] - mx) / sxx;
    tail_weight[i] = suffix;
  }
  for (std::size_t i = 0; i < n; ++i) {
    const double p = positions[i];
    const double c = (1.0 - p) / (n_total * p);
    var += (c - prev_c) * tail_weight[i] * tail_weight[i];
    prev_c = c;
  }
  f.slope_se = std::sqrt(std::max(var, 0.0));
  return f;
}

template <class Fn>
auto labeled(const std::string& step, Fn&& fn) {
  try {
    return fn();
  } catch (const PreconditionError& e) {
    throw PreconditionError(step + ": " + e.what());
  } catch (const NumericError& e) {
    throw NumericError(step + ": " + e.what());
  }
}

// Prefix sums for O(1) segment regressions.
class SegmentSums {
 public:
  explicit SegmentSums(const EmpiricalCCDF& e) {
    const std::size_t n = e.size();
    const double ref = e.sorted_incomes[n / 2];
    cols_.assign(kCols, std::vector<double>(n + 1, 0.0));
    for (std::size_t i = 0; i < n; ++i) {
      const double m = e.sorted_incomes[i];
      const double u = m / ref;
      const double l = m > 0.0 ? std::log(u) : 0.0;
      const double y = std::log(e.plot_positions[i]);
      const double row[kCols] = {u, u * u, u * y, l, l * l, l * y, y, y * y};
      for (int c = 0; c < kCols; ++c) cols_[c][i + 1] = cols_[c][i] + row[c];
    }
  }

  double ssr(IndexRange r, bool log_x) const {
    const double n = static_cast<double>(r.size());
    const int o = log_x ? 3 : 0;
    const double sx = sum(o, r);
    const double sxx = sum(o + 1, r) - sx * sx / n;
    const double sxy = sum(o + 2, r) - sx * sum(6, r) / n;
    const double sy = sum(6, r);
    const double syy = sum(7, r) - sy * sy / n;
    if (!(sxx > 0.0)) return std::numeric_limits<double>::infinity();
    return std::max(0.0, syy - sxy * sxy / sxx);
  }

  double slope(IndexRange r, bool log_x) const {
    const double n = static_cast<double>(r.size());
    const int o = log_x ? 3 : 0;
    const double sx = sum(o, r);
    return (sum(o + 2, r) - sx * sum(6, r) / n) / (sum(o + 1, r) - sx * sx / n);
  }

 private:
  static constexpr int kCols = 8;
  double sum(int c, IndexRange r) const { return cols_[c][r.end] - cols_[c][r.begin]; }
  std::vector<std::vector<double>> cols_;
};

struct Segments {
  IndexRange exponential;
  IndexRange medium;
  IndexRange high;
  bool usable() const {
    return exponential.size() >= kMinWindowPoints && medium.size() >= kMinWindowPoints &&
           high.size() >= kMinWindowPoints;
  }
};

Segments segments_for(const EmpiricalCCDF& e, double m0, double m1) {
  const double top = e.sorted_incomes.back();
  return {points_in(e, {e.sorted_incomes.front(), m0}),
          points_in(e, {(1.0 + kGuardBand) * m0, (1.0 - kGuardBand) * m1}),
          points_in(e, {(1.0 + kGuardBand) * m1, top})};
}

std::vector<double> candidate_grid(const EmpiricalCCDF& e) {
  const std::size_t n = e.size();
  std::vector<double> grid;
  for (int i = 0; i < kGridSize; ++i) {
    const double tail =
        kGridTopTail * std::pow(kGridBottomTail / kGridTopTail, static_cast<double>(i) / (kGridSize - 1));
    const auto k = std::min(n - 1, static_cast<std::size_t>((1.0 - tail) * static_cast<double>(n)));
    grid.push_back(e.sorted_incomes[k]);
  }
  return grid;
}

// Relative uncertainty from the curvature of the objective profile in ln m.
double profile_uncertainty(const std::vector<double>& grid, const std::vector<double>& profile,
                           std::size_t best, double noise_variance) {
  const auto finite = [&](std::size_t i) { return std::isfinite(profile[i]); };
  double step = 0.0;
  if (best > 0) step = std::max(step, std::log(grid[best] / grid[best - 1]));
  if (best + 1 < grid.size()) step = std::max(step, std::log(grid[best + 1] / grid[best]));
  const double floor = 0.5 * step;
  if (best == 0 || best + 1 >= grid.size() || !finite(best - 1) || !finite(best + 1)) {
    return step;
  }
  const double x0 = std::log(grid[best - 1]);
  const double x1 = std::log(grid[best]);
  const double x2 = std::log(grid[best + 1]);
  if (!(x0 < x1 && x1 < x2)) return floor;
  const double d1 = (profile[best] - profile[best - 1]) / (x1 - x0);
  const double d2 = (profile[best + 1] - profile[best]) / (x2 - x1);
  const double curvature = 2.0 * (d2 - d1) / (x2 - x0);
  if (!(curvature > 0.0)) return step;
  return std::max(std::sqrt(2.0 * noise_variance / curvature), floor);
}

}  // namespace

CrossoverEstimate detect_crossovers(const EmpiricalCCDF& ecdf, const CrossoverOverrides& fixed) {
  const std::string manual = "; set both crossovers manually (--m0, --m1)";
  const std::size_t n = ecdf.size();
  if (n < 100) {
    throw PreconditionError("crossover detection needs at least 100 points, got " +
                            std::to_string(n) + manual);
  }
  const auto first_positive = std::upper_bound(ecdf.sorted_incomes.begin(), ecdf.sorted_incomes.end(), 0.0);
  const double lo = first_positive == ecdf.sorted_incomes.end() ? 0.0 : *first_positive;
  const double hi = ecdf.sorted_incomes.back();
  if (!(lo > 0.0) || hi / lo < 100.0) {
    throw PreconditionError("crossover detection needs incomes spanning at least 2 decades" + manual);
  }

  const SegmentSums sums(ecdf);
  const std::vector<double> grid = candidate_grid(ecdf);
  const std::vector<double> m0_cands = fixed.m0 ? std::vector<double>{*fixed.m0} : grid;
  const std::vector<double> m1_cands = fixed.m1 ? std::vector<double>{*fixed.m1} : grid;
  const double inf = std::numeric_limits<double>::infinity();
  std::vector<std::vector<double>> objective(m0_cands.size(), std::vector<double>(m1_cands.size(), inf));

  double best = inf;
  std::size_t bi = 0;
  std::size_t bj = 0;
  for (std::size_t i = 0; i < m0_cands.size(); ++i) {
    for (std::size_t j = 0; j < m1_cands.size(); ++j) {
      if (!(m0_cands[i] > 0.0) || !(m0_cands[i] < m1_cands[j])) continue;
      const Segments s = segments_for(ecdf, m0_cands[i], m1_cands[j]);
      if (!s.usable()) continue;
      const double total =
          sums.ssr(s.exponential, false) + sums.ssr(s.medium, true) + sums.ssr(s.high, true);
      objective[i][j] = total;
      if (total < best) {
        best = total;
        bi = i;
        bj = j;
      }
    }
  }
  if (!std::isfinite(best)) {
    throw PreconditionError("no crossover pair leaves " + std::to_string(kMinWindowPoints) +
                            " points in every segment" + manual);
  }

  CrossoverEstimate est;
  est.m0 = m0_cands[bi];
  est.m1 = m1_cands[bj];
  est.objective = best;
  const Segments s = segments_for(ecdf, est.m0, est.m1);
  const double used = static_cast<double>(s.exponential.size() + s.medium.size() + s.high.size());
  const double noise = best / std::max(1.0, used - 6.0);
  if (!fixed.m0) {
    std::vector<double> profile(m0_cands.size());
    for (std::size_t i = 0; i < m0_cands.size(); ++i) profile[i] = objective[i][bj];
    est.m0_rel_uncertainty = profile_uncertainty(m0_cands, profile, bi, noise);
  }
  if (!fixed.m1) {
    est.m1_rel_uncertainty = profile_uncertainty(m1_cands, objective[bi], bj, noise);
    const double alpha = -sums.slope(s.medium, true);
    const double alpha1 = -sums.slope(s.high, true);
    if (alpha1 >= alpha) {
      est.high_regime_detected = false;
      est.m1 = grid.back();
    }
  }
  return est;
}

TemperatureFit fit_temperature(const EmpiricalCCDF& ecdf, double m_init, double m0) {
  require(m0 > m_init, "temperature window needs m0 > m_init");
  TemperatureFit out;
  out.window = {m_init, m0};
  const IndexRange r = points_in(ecdf, out.window);
  if (r.size() < kMinWindowPoints) {
    throw PreconditionError("window " + window_text(out.window) + " holds " +
                            std::to_string(r.size()) + " points, need at least " +
                            std::to_string(kMinWindowPoints));
  }
  std::vector<double> x, y, p;
  for (std::size_t i = r.begin; i < r.end; ++i) {
    x.push_back(ecdf.sorted_incomes[i] - m_init);
    y.push_back(std::log(ecdf.plot_positions[i]));
    p.push_back(ecdf.plot_positions[i]);
  }
  out.line = fit_line(x, y, p, static_cast<double>(ecdf.size()));
  if (!(out.line.slope < 0.0)) {
    throw PreconditionError("data not exponential on window " + window_text(out.window));
  }
  out.temperature = -1.0 / out.line.slope;
  out.std_error = out.line.slope_se / (out.line.slope * out.line.slope);
  return out;
}

ParetoFit fit_pareto(const EmpiricalCCDF& ecdf, IncomeWindow window) {
  require(window.lo > 0.0 && window.hi > window.lo, "Pareto window needs 0 < lo < hi");
  ParetoFit out;
  out.window = window;
  const IndexRange r = points_in(ecdf, window);
  if (r.size() < kMinWindowPoints) {
    throw PreconditionError("window " + window_text(window) + " holds " + std::to_string(r.size()) +
                            " points, need at least " + std::to_string(kMinWindowPoints));
  }
  std::vector<double> x, y, p;
  for (std::size_t i = r.begin; i < r.end; ++i) {
    x.push_back(std::log(ecdf.sorted_incomes[i]));
    y.push_back(std::log(ecdf.plot_positions[i]));
    p.push_back(ecdf.plot_positions[i]);
  }
  out.line = fit_line(x, y, p, static_cast<double>(ecdf.size()));
  if (!(out.line.slope < 0.0)) {
    throw PreconditionError("data not power-law on window " + window_text(window));
  }
  out.exponent = -out.line.slope;
  out.scale = std::exp(out.line.intercept / out.exponent);
  out.std_error = out.line.slope_se;
  return out;
}

FitReport fit_pipeline(const EmpiricalCCDF& ecdf, const CrossoverOverrides& overrides) {
  require(ecdf.size() >= 2, "fit needs at least 2 incomes");
  FitReport rep;
  rep.n_points = ecdf.size();
  const double m_init = ecdf.sorted_incomes.front();
  const double top = ecdf.sorted_incomes.back();

  CrossoverEstimate cross;
  if (overrides.m0 && overrides.m1) {
    require(*overrides.m0 > m_init && *overrides.m1 > *overrides.m0,
            "crossover overrides need m_init < m0 < m1");
    cross.m0 = *overrides.m0;
    cross.m1 = *overrides.m1;
  } else {
    cross = labeled("crossover detection", [&] { return detect_crossovers(ecdf, overrides); });
  }
  rep.m0_overridden = overrides.m0.has_value();
  rep.m1_overridden = overrides.m1.has_value();
  rep.high_regime_detected = cross.high_regime_detected;

  const TemperatureFit tf =
      labeled("temperature fit", [&] { return fit_temperature(ecdf, m_init, cross.m0); });
  const ParetoFit medium = labeled("medium-class Pareto fit", [&] {
    return fit_pareto(ecdf, {(1.0 + kGuardBand) * cross.m0, (1.0 - kGuardBand) * cross.m1});
  });
  ParetoFit high = medium;
  if (cross.high_regime_detected) {
    high = labeled("high-class Pareto fit",
                   [&] { return fit_pareto(ecdf, {(1.0 + kGuardBand) * cross.m1, top}); });
  } else {
    high.window = {cross.m1, top};
    rep.notes.push_back("no high-income regime detected; m1 pinned at the upper quantile bound and alpha1 = alpha");
  }

  auto& p = rep.params;
  p.T = tf.temperature;
  p.T1 = tf.temperature;
  p.m0 = cross.m0;
  p.m1 = cross.m1;
  p.alpha = medium.exponent;
  p.alpha1 = high.exponent;
  p.m_init = m_init;

  rep.windows = {tf.window, medium.window, high.window};
  rep.r_squared = {tf.line.r_squared, medium.line.r_squared, high.line.r_squared};
  rep.std_errors = {tf.std_error, medium.std_error, high.std_error,
                    cross.m0_rel_uncertainty * cross.m0, cross.m1_rel_uncertainty * cross.m1};
  rep.crossover_uncertainty = std::max(cross.m0_rel_uncertainty, cross.m1_rel_uncertainty);
  rep.infinite_variance_flag = p.alpha1 < 1.0;
  rep.finite_variance_medium = p.alpha > 2.0;
  if (rep.infinite_variance_flag) {
    rep.notes.push_back("alpha1 < 1: high-class incomes have infinite variance");
  }
  if (rep.finite_variance_medium) {
    rep.notes.push_back("alpha > 2: medium-class incomes have finite variance");
  }
  if (rep.crossover_uncertainty > 0.10) {
    rep.notes.push_back("crossover uncertainty " + num(rep.crossover_uncertainty) + " exceeds 0.1");
  }
  if (p.alpha <= 1.0) rep.notes.push_back("alpha <= 1: parameters cannot be normalized by the model");
  return rep;
}

KeyValueConfig FitReport::to_config() const {
  KeyValueConfig c;
  c.set("T", num(params.T));
  c.set("T1", num(params.T1));
  c.set("m0", num(params.m0));
  c.set("m1", num(params.m1));
  c.set("alpha", num(params.alpha));
  c.set("alpha1", num(params.alpha1));
  c.set("m_init", num(params.m_init));
  c.set("fit.se.T", num(std_errors.T));
  c.set("fit.se.alpha", num(std_errors.alpha));
  c.set("fit.se.alpha1", num(std_errors.alpha1));
  c.set("fit.se.m0", num(std_errors.m0));
  c.set("fit.se.m1", num(std_errors.m1));
  const char* names[3] = {"temperature", "alpha", "alpha1"};
  for (int i = 0; i < 3; ++i) {
    c.set(std::string("fit.window.") + names[i] + ".lo", num(windows[i].lo));
    c.set(std::string("fit.window.") + names[i] + ".hi", num(windows[i].hi));
    c.set(std::string("fit.r_squared.") + names[i], num(r_squared[i]));
  }
  c.set("fit.infinite_variance", infinite_variance_flag ? "true" : "false");
  c.set("fit.finite_variance_medium", finite_variance_medium ? "true" : "false");
  c.set("fit.high_regime_detected", high_regime_detected ? "true" : "false");
  c.set("fit.m0_overridden", m0_overridden ? "true" : "false");
  c.set("fit.m1_overridden", m1_overridden ? "true" : "false");
  c.set("fit.crossover_uncertainty", num(crossover_uncertainty));
  c.set("fit.n_points", std::to_string(n_points));
  for (std::size_t i = 0; i < notes.size(); ++i) c.set("fit.note." + std::to_string(i + 1), notes[i]);
  return c;
}

std::string FitReport::to_delimited() const {
  std::string out = "parameter\tvalue\tstd_error\n";
  const auto row = [&](const char* name, double v, double se) {
    out += std::string(name) + "\t" + num(v) + "\t" + num(se) + "\n";
  };
  row("T", params.T, std_errors.T);
  row("T1", params.T1, std_errors.T);
  row("m0", params.m0, std_errors.m0);
  row("m1", params.m1, std_errors.m1);
  row("alpha", params.alpha, std_errors.alpha);
  row("alpha1", params.alpha1, std_errors.alpha1);
  row("m_init", params.m_init, 0.0);
  return out;
}

}  // namespace incomedist
