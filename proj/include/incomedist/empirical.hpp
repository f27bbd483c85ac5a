#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <string>
#include <vector>

namespace incomedist {

enum class Source { Survey, RichList };

std::string to_string(Source s);
/// "survey" / "richlist" (case-insensitive). Throws ParseError otherwise.
Source source_from_string(const std::string& text);

struct IncomeSample {
  double income = 0.0;
  Source source = Source::Survey;
  int year = 0;

  bool operator==(const IncomeSample&) const = default;
};

/// Sorted incomes with Weibull plotting positions 1 - i/(N+1), one point per
/// record (ties keep distinct ranks).
struct EmpiricalCCDF {
  std::vector<double> sorted_incomes;
  std::vector<double> plot_positions;
  std::vector<Source> sources;

  std::size_t size() const { return sorted_incomes.size(); }
};

/// 1 - i/(N+1) for i = 1..N.
std::vector<double> weibull_positions(std::size_t n);

/// Stable ascending sort, then Weibull positions. Requires at least 2 samples.
EmpiricalCCDF build_ccdf(std::span<const IncomeSample> samples);
EmpiricalCCDF build_ccdf(std::span<const double> incomes);

/// sup_i |position_i - model(income_i)| over the plotted points.
double ks_distance(const EmpiricalCCDF& ecdf, const std::function<double(double)>& model);

struct SlopePoint {
  double income;  // geometric mean of the window
  double slope;   // d log(position) / d log(income)
};

struct SlopeProfile {
  std::vector<SlopePoint> points;
  std::size_t skipped = 0;  // windows with no income spread or non-positive incomes
};

/// Sliding least-squares slope of log(position) against log(income) over
/// `window` consecutive points.
SlopeProfile local_log_slope(const EmpiricalCCDF& ecdf, std::size_t window);

}  // namespace incomedist
