#include "incomedist/distribution.hpp"

#include <algorithm>
#include <cmath>
#include <utility>

#include <boost/math/tools/roots.hpp>

#include "incomedist/errors.hpp"
#include "incomedist/rng.hpp"

namespace incomedist {

namespace {
constexpr std::size_t kTableSize = 512;
constexpr int kQuantileBits = 44;
}  // namespace

double bg_ccdf(double m, double T, double m_init) {
  require(T > 0.0, "bg_ccdf: T must be > 0");
  require(m >= m_init, "bg_ccdf: income below m_init");
  return std::exp(-(m - m_init) / T);
}

double pareto_ccdf(double m, double alpha, double m_s) {
  require(m > 0.0 && m_s > 0.0 && alpha > 0.0, "pareto_ccdf: inputs must be positive");
  return std::pow(m / m_s, -alpha);
}

ModelCCDF::ModelCCDF(const EffectiveParams& params) : density_(params) {
  grid_ = density_.partition(kTableSize);
  const std::size_t n = grid_.size();
  mass_above_.assign(n, 0.0);
  mass_above_[n - 1] = density_.tail_mass(grid_[n - 1]);
  for (std::size_t k = n - 1; k-- > 0;) {
    mass_above_[k] = mass_above_[k + 1] + density_.integrate(grid_[k], grid_[k + 1]);
  }
  total_ = mass_above_[0];
  values_.resize(n);
  for (std::size_t k = 0; k < n; ++k) values_[k] = mass_above_[k] / total_;
}

double ModelCCDF::ccdf(double m) const {
  require(m >= params().m_init, "model_ccdf: income below m_init");
  if (m >= tail_cutoff()) return density_.tail_mass(m) / total_;
  const auto it = std::upper_bound(grid_.begin(), grid_.end(), m);
  const auto k = static_cast<std::size_t>(it - grid_.begin());  // grid_[k-1] <= m < grid_[k]
  return (mass_above_[k] + density_.integrate(m, grid_[k])) / total_;
}

double ModelCCDF::pdf(double m) const { return density_.pdf(m) / total_; }

double ModelCCDF::quantile(double u) const {
  require(u > 0.0 && u <= 1.0, "model_quantile: u must be in (0, 1]");
  if (u == 1.0) return params().m_init;
  const double cutoff = tail_cutoff();
  if (u <= values_.back()) {
    // Solve log Pi(exp(y)) = log u on the closed-form tail.
    const double beta = params().alpha1 + 1.0;
    const double y_cut = std::log(cutoff);
    const double guess = y_cut + std::log(values_.back() / u) / (beta - 1.0);
    const auto f = [&](double y) {
      const double m = std::exp(y);
      const double tail = density_.tail_mass(m) / total_;
      return std::make_pair(std::log(tail) - std::log(u), -m * pdf(m) / tail);
    };
    const double y = boost::math::tools::newton_raphson_iterate(f, std::max(guess, y_cut), y_cut,
                                                                y_cut + 1500.0, kQuantileBits);
    return std::exp(y);
  }
  // values_ is non-increasing: find values_[k] >= u > values_[k+1].
  const auto it = std::upper_bound(values_.begin(), values_.end(), u, std::greater<>());
  const auto k = static_cast<std::size_t>(it - values_.begin()) - 1;
  const double lo = grid_[k];
  const double hi = grid_[k + 1];
  // Interpolate log Pi linearly for the starting point.
  const double t = std::log(values_[k] / u) / std::log(values_[k] / values_[k + 1]);
  const double guess = lo + std::clamp(t, 0.0, 1.0) * (hi - lo);
  const auto f = [&](double m) {
    return std::make_pair((mass_above_[k + 1] + density_.integrate(m, hi)) / total_ - u, -pdf(m));
  };
  return boost::math::tools::newton_raphson_iterate(f, guess, lo, hi, kQuantileBits);
}

std::vector<double> ModelCCDF::sample(std::size_t n, std::uint64_t seed) const {
  require(n >= 1, "sample: n must be >= 1");
  Rng rng(seed);
  std::vector<double> out(n);
  for (auto& x : out) x = quantile(rng.uniform());
  return out;
}

double model_ccdf(double m, const EffectiveParams& e) { return ModelCCDF(e).ccdf(m); }

double model_quantile(double u, const EffectiveParams& e) { return ModelCCDF(e).quantile(u); }

std::vector<double> sample(std::size_t n, const EffectiveParams& e, std::uint64_t seed) {
  return ModelCCDF(e).sample(n, seed);
}

}  // namespace incomedist
