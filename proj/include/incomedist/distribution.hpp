#pragma once

#include <cstdint>
#include <vector>

#include "incomedist/model.hpp"

namespace incomedist {

/// Boltzmann-Gibbs CCDF exp(-(m - m_init)/T).
double bg_ccdf(double m, double T, double m_init);

/// Weak Pareto CCDF (m / m_s)^-alpha.
double pareto_ccdf(double m, double alpha, double m_s);

/// Numeric CCDF  Pi(m) = int_m^inf P(m') dm'  of the stationary density.
///
/// A 512-point table (log-spaced in m - m_init, with m1 as an extra node) holds
/// exact cumulative masses; evaluation adds one quadrature from m to the next
/// node. Past tail_cutoff the closed-form power-law tail is used.
class ModelCCDF {
 public:
  explicit ModelCCDF(const EffectiveParams& params);

  const EffectiveParams& params() const { return density_.params(); }
  const StationaryDensity& density() const { return density_; }
  double tail_cutoff() const { return density_.tail_cutoff(); }
  const std::vector<double>& grid() const { return grid_; }
  const std::vector<double>& values() const { return values_; }

  double ccdf(double m) const;
  double operator()(double m) const { return ccdf(m); }
  /// Density consistent with ccdf (-dPi/dm).
  double pdf(double m) const;

  /// m with ccdf(m) = u, u in (0, 1].
  double quantile(double u) const;

  /// n inverse-CCDF draws; a fixed function of (params, n, seed).
  std::vector<double> sample(std::size_t n, std::uint64_t seed) const;

 private:
  StationaryDensity density_;
  std::vector<double> grid_;
  std::vector<double> values_;
  std::vector<double> mass_above_;  // unrenormalized mass above each node
  double total_ = 1.0;
};

double model_ccdf(double m, const EffectiveParams& e);
double model_quantile(double u, const EffectiveParams& e);
std::vector<double> sample(std::size_t n, const EffectiveParams& e, std::uint64_t seed);

}  // namespace incomedist
