#pragma once

#include <array>
#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "incomedist/empirical.hpp"
#include "incomedist/keyvalue.hpp"
#include "incomedist/params.hpp"

namespace incomedist {

/// Minimum number of points in any regression window.
inline constexpr std::size_t kMinWindowPoints = 30;
/// Pareto windows stay this fraction of a crossover away from it.
inline constexpr double kGuardBand = 0.10;

struct IncomeWindow {
  double lo = 0.0;
  double hi = 0.0;
};

/// Least-squares line y = intercept + slope * x.
///
/// `slope_se` is the standard error of the slope implied by the covariance of
/// the empirical CCDF, Cov(ln P_i, ln P_j) = (1 - P_i) / (N P_i) for x_i <= x_j.
/// `ols_slope_se` is the textbook residual-based value.
struct LineFit {
  double slope = 0.0;
  double intercept = 0.0;
  double slope_se = 0.0;
  double ols_slope_se = 0.0;
  double r_squared = 0.0;
  double ssr = 0.0;
  std::size_t n = 0;
};

struct TemperatureFit {
  double temperature = 0.0;
  double std_error = 0.0;
  IncomeWindow window;
  LineFit line;
};

struct ParetoFit {
  double exponent = 0.0;
  double scale = 0.0;  // m_s in P(m) = (m / m_s)^(-exponent)
  double std_error = 0.0;
  IncomeWindow window;
  LineFit line;
};

struct CrossoverEstimate {
  double m0 = 0.0;
  double m1 = 0.0;
  double m0_rel_uncertainty = 0.0;
  double m1_rel_uncertainty = 0.0;
  bool high_regime_detected = true;
  double objective = 0.0;  // summed squared residuals of the three segments
};

struct CrossoverOverrides {
  std::optional<double> m0;
  std::optional<double> m1;
};

/// Grid search over pairs of empirical quantiles (tail probabilities log-spaced
/// from 0.5 to 1e-4, 60 x 60) minimizing the summed residuals of the
/// exponential segment and the two guarded Pareto segments. A fixed override
/// restricts the search to the other crossover.
CrossoverEstimate detect_crossovers(const EmpiricalCCDF& ecdf, const CrossoverOverrides& fixed = {});

/// Regression of ln(position) on income over [m_init, m0]; T = -1/slope.
TemperatureFit fit_temperature(const EmpiricalCCDF& ecdf, double m_init, double m0);

/// Regression of ln(position) on ln(income) over the window; exponent = -slope.
ParetoFit fit_pareto(const EmpiricalCCDF& ecdf, IncomeWindow window);

struct FitReport {
  EffectiveParams params;
  std::array<IncomeWindow, 3> windows{};  // temperature, alpha, alpha1
  std::array<double, 3> r_squared{};
  struct StdErrors {
    double T = 0.0;
    double alpha = 0.0;
    double alpha1 = 0.0;
    double m0 = 0.0;
    double m1 = 0.0;
  } std_errors;
  bool infinite_variance_flag = false;
  bool finite_variance_medium = false;
  bool high_regime_detected = true;
  bool m0_overridden = false;
  bool m1_overridden = false;
  double crossover_uncertainty = 0.0;  // larger relative uncertainty of m0, m1
  std::size_t n_points = 0;
  std::vector<std::string> notes;

  /// Parameter keys readable by read_effective, plus `fit.*` diagnostics.
  KeyValueConfig to_config() const;
  /// Tab-separated `parameter value std_error` block with a header line.
  std::string to_delimited() const;
};

FitReport fit_pipeline(const EmpiricalCCDF& ecdf, const CrossoverOverrides& overrides = {});

}  // namespace incomedist
