#include "incomedist/empirical.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <numeric>

#include "incomedist/errors.hpp"

namespace incomedist {

std::string to_string(Source s) { return s == Source::Survey ? "survey" : "richlist"; }

Source source_from_string(const std::string& text) {
  std::string lower(text);
  std::transform(lower.begin(), lower.end(), lower.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  if (lower == "survey") return Source::Survey;
  if (lower == "richlist") return Source::RichList;
  throw ParseError("unknown source '" + text + "' (expected survey or richlist)");
}

std::vector<double> weibull_positions(std::size_t n) {
  require(n >= 1, "weibull_positions: n must be >= 1");
  std::vector<double> pos(n);
  const double denom = static_cast<double>(n) + 1.0;
  for (std::size_t i = 0; i < n; ++i) pos[i] = 1.0 - static_cast<double>(i + 1) / denom;
  return pos;
}

EmpiricalCCDF build_ccdf(std::span<const IncomeSample> samples) {
  require(samples.size() >= 2, "build_ccdf: at least 2 samples required");
  std::vector<std::size_t> order(samples.size());
  std::iota(order.begin(), order.end(), 0);
  for (const auto& s : samples) require(std::isfinite(s.income), "build_ccdf: non-finite income");
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return samples[a].income < samples[b].income;
  });
  EmpiricalCCDF out;
  out.sorted_incomes.reserve(samples.size());
  out.sources.reserve(samples.size());
  for (std::size_t idx : order) {
    out.sorted_incomes.push_back(samples[idx].income);
    out.sources.push_back(samples[idx].source);
  }
  out.plot_positions = weibull_positions(samples.size());
  return out;
}

EmpiricalCCDF build_ccdf(std::span<const double> incomes) {
  std::vector<IncomeSample> samples;
  samples.reserve(incomes.size());
  for (double x : incomes) samples.push_back({x, Source::Survey, 0});
  return build_ccdf(samples);
}

double ks_distance(const EmpiricalCCDF& ecdf, const std::function<double(double)>& model) {
  require(ecdf.size() > 0, "ks_distance: empty ECDF");
  double d = 0.0;
  for (std::size_t i = 0; i < ecdf.size(); ++i) {
    d = std::max(d, std::abs(ecdf.plot_positions[i] - model(ecdf.sorted_incomes[i])));
  }
  return d;
}

SlopeProfile local_log_slope(const EmpiricalCCDF& ecdf, std::size_t window) {
  require(window >= 3, "local_log_slope: window must be >= 3");
  require(window <= ecdf.size(), "local_log_slope: window larger than the sample");
  const std::size_t n = ecdf.size();
  std::vector<double> lx(n);
  std::vector<double> ly(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double x = ecdf.sorted_incomes[i];
    lx[i] = x > 0.0 ? std::log(x) : std::nan("");
    ly[i] = std::log(ecdf.plot_positions[i]);
  }
  SlopeProfile out;
  const double w = static_cast<double>(window);
  for (std::size_t start = 0; start + window <= n; ++start) {
    if (std::isnan(lx[start]) || ecdf.sorted_incomes[start + window - 1] == ecdf.sorted_incomes[start]) {
      ++out.skipped;
      continue;
    }
    double mx = 0.0;
    double my = 0.0;
    for (std::size_t i = start; i < start + window; ++i) {
      mx += lx[i];
      my += ly[i];
    }
    mx /= w;
    my /= w;
    double sxx = 0.0;
    double sxy = 0.0;
    for (std::size_t i = start; i < start + window; ++i) {
      sxx += (lx[i] - mx) * (lx[i] - mx);
      sxy += (lx[i] - mx) * (ly[i] - my);
    }
    if (!(sxx > 0.0)) {
      ++out.skipped;
      continue;
    }
    out.points.push_back({std::exp(mx), sxy / sxx});
  }
  return out;
}

}  // namespace incomedist
