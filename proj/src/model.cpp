#include "incomedist/model.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "incomedist/errors.hpp"
#include "incomedist/quadrature.hpp"

namespace incomedist {

namespace {

constexpr double kArctanSaturation = 1e-6;
constexpr double kQuadRelTol = 1e-12;
// Shapes peak at 1; contributions this small are subnormal noise.
constexpr double kQuadAbsFloor = 1e-280;
constexpr std::size_t kNormalizationNodes = 512;

double raw_log_shape(double m, double m0, double temperature, double exponent) {
  const double x = m / m0;
  return -(m0 / temperature) * std::atan(x) - 0.5 * exponent * std::log1p(x * x);
}

// int_{x}^{inf} t^-beta (1 + c/t + d/t^2) dt for beta > 1.
double tail_antiderivative(double x, double beta, double c, double d) {
  const double p = std::pow(x, -beta);
  return p * (x / (beta - 1.0) + c / beta + d / ((beta + 1.0) * x));
}

}  // namespace

StationaryDensity::StationaryDensity(const EffectiveParams& params) : params_(params) {
  params_.validate();
  const double m0 = params_.m0;
  below_ = {params_.T, params_.alpha + 1.0, 0.0};
  if (std::isfinite(params_.m1)) {
    above_ = {params_.T1, params_.alpha1 + 1.0, 0.0};
    above_.shift = raw_log_shape(params_.m1, m0, below_.temperature, below_.exponent) -
                   raw_log_shape(params_.m1, m0, above_.temperature, above_.exponent);
  } else {
    above_ = below_;
  }
  // Reference the log shape to its value at m_init so the maximum is exp(0).
  const double ref = log_shape(params_.m_init);
  below_.shift -= ref;
  above_.shift -= ref;

  tail_cutoff_ = m0 / std::tan(kArctanSaturation);

  const auto nodes = partition(kNormalizationNodes);
  double mass = 0.0;
  const auto f = [this](double m) { return std::exp(log_shape(m)); };
  for (std::size_t k = 0; k + 1 < nodes.size(); ++k) {
    mass += integrate_gk(f, nodes[k], nodes[k + 1], kQuadRelTol, kQuadAbsFloor).value;
  }
  mass += unnormalized_tail(tail_cutoff_, kInfinity);
  if (!(mass > 0.0) || !std::isfinite(mass)) {
    throw NumericError("stationary density: normalizer is not finite and positive");
  }
  log_z_ = std::log(mass);
}

StationaryDensity StationaryDensity::single_branch(EffectiveParams params) {
  params.m1 = kInfinity;
  params.T1 = params.T;
  params.alpha1 = params.alpha;
  return StationaryDensity(params);
}

const StationaryDensity::BranchShape& StationaryDensity::shape_at(double m) const {
  return branch_of(m, params_.m1) == Branch::Below ? below_ : above_;
}

double StationaryDensity::log_shape(double m) const {
  const auto& s = shape_at(m);
  return s.shift + raw_log_shape(m, params_.m0, s.temperature, s.exponent);
}

double StationaryDensity::log_pdf(double m) const {
  require(m >= params_.m_init, "stationary_pdf: income below m_init");
  return log_shape(m) - log_z_;
}

double StationaryDensity::pdf(double m) const { return std::exp(log_pdf(m)); }

std::vector<double> StationaryDensity::partition(std::size_t n) const {
  const double scale = std::min(params_.T, params_.m0);
  return offset_log_partition(params_.m_init, tail_cutoff_, 1e-6 * scale, n, {params_.m1});
}

double StationaryDensity::unnormalized_tail(double lo, double hi) const {
  // exp(log_shape) = K x^-beta exp(c atan(1/x)) (1 + x^-2)^(-beta/2),  x = m/m0
  //               ~ K x^-beta (1 + c/x + (c^2 - beta)/(2 x^2)),     x >= 1e6
  const double m0 = params_.m0;
  const auto segment = [m0](const BranchShape& s, double a, double b) {
    const double c = m0 / s.temperature;
    const double d = 0.5 * (c * c - s.exponent);
    const double log_k = s.shift - c * std::numbers::pi / 2.0;
    const double upper = std::isfinite(b) ? tail_antiderivative(b / m0, s.exponent, c, d) : 0.0;
    return std::exp(log_k) * m0 * (tail_antiderivative(a / m0, s.exponent, c, d) - upper);
  };
  const double m1 = params_.m1;
  if (hi <= m1) return segment(below_, lo, hi);
  if (lo >= m1) return segment(above_, lo, hi);
  return segment(below_, lo, m1) + segment(above_, m1, hi);
}

double StationaryDensity::tail_mass(double m) const {
  require(m >= tail_cutoff_, "tail_mass: income below tail cutoff");
  return unnormalized_tail(m, kInfinity) / std::exp(log_z_);
}

double StationaryDensity::integrate(double lo, double hi) const {
  require(lo >= params_.m_init && hi >= lo && hi <= tail_cutoff_,
          "integrate: interval outside [m_init, tail_cutoff]");
  if (hi == lo) return 0.0;
  const auto f = [this](double m) { return std::exp(log_shape(m) - log_z_); };
  std::vector<double> cuts{lo, hi};
  if (lo < params_.m1 && params_.m1 < hi) cuts.insert(cuts.begin() + 1, params_.m1);
  double sum = 0.0;
  for (std::size_t k = 0; k + 1 < cuts.size(); ++k) {
    const double a = cuts[k];
    const double b = cuts[k + 1];
    if (b <= 2.0 * a || b - a < 1e-3 * params_.m0) {
      sum += integrate_gk(f, a, b, kQuadRelTol, kQuadAbsFloor).value;
      continue;
    }
    const double first = std::max(1e-6 * (b - a), std::min(a, b - a) * 1e-3);
    const std::size_t n = 8 + static_cast<std::size_t>(16.0 * std::log10((b - a) / first));
    const auto nodes = offset_log_partition(a, b, first, n);
    for (std::size_t j = 0; j + 1 < nodes.size(); ++j) {
      sum += integrate_gk(f, nodes[j], nodes[j + 1], kQuadRelTol, kQuadAbsFloor).value;
    }
  }
  return sum;
}

double stationary_pdf(double m, const EffectiveParams& e) { return StationaryDensity(e).pdf(m); }

double single_branch_pdf(double m, const EffectiveParams& e) {
  return StationaryDensity::single_branch(e).pdf(m);
}

// ---------------------------------------------------------------------------

QuadratureDensity::QuadratureDensity(const MicroParams& params, double rel_tol)
    : params_(params), rel_tol_(rel_tol) {
  params_.validate();
  const double m_init = params_.m_init;
  const double m0 = std::sqrt(params_.B0 / params_.b);
  double scale = m0;
  if (params_.A0 > 0.0) scale = std::min(scale, params_.B0 / params_.A0);
  if (m_init > 0.0) scale = std::min(scale, m_init);
  double reach = 1e3 * std::max(scale, std::isfinite(params_.m1) ? params_.m1 : 0.0);
  const std::size_t n = 32 + static_cast<std::size_t>(30.0 * std::log10(reach / (1e-6 * scale)));
  nodes_ = offset_log_partition(m_init, m_init + reach, 1e-6 * scale, n, {params_.m1});

  const double b_ref = diffusion_B(m_init, params_);
  cumulative_.assign(1, 0.0);
  double mass = 0.0;
  const auto interval_mass = [&](double lo, double hi, double i_lo) {
    const auto density = [&](double m) {
      const double i_m = i_lo + integral_drift_ratio(lo, m);
      return std::exp(-i_m) * b_ref / diffusion_B(m, params_);
    };
    return integrate_gk(density, lo, hi, rel_tol_, kQuadAbsFloor).value;
  };
  for (std::size_t k = 0; k + 1 < nodes_.size(); ++k) {
    mass += interval_mass(nodes_[k], nodes_[k + 1], cumulative_[k]);
    cumulative_.push_back(cumulative_[k] + integral_drift_ratio(nodes_[k], nodes_[k + 1]));
  }

  // Extend decade by decade until the remaining mass is negligible; the
  // remainder past the last decade is extrapolated geometrically.
  double previous = -1.0;
  for (int decade = 0;; ++decade) {
    const double lo = nodes_.back();
    if (lo > 1e280) {
      throw NumericError("quadrature density: normalizer did not converge; last decade mass " +
                         std::to_string(previous / mass) + " relative");
    }
    double decade_mass = 0.0;
    for (int j = 1; j <= 10; ++j) {
      const double a = nodes_.back();
      const double b = lo * std::pow(10.0, j / 10.0);
      decade_mass += interval_mass(a, b, cumulative_.back());
      cumulative_.push_back(cumulative_.back() + integral_drift_ratio(a, b));
      nodes_.push_back(b);
    }
    mass += decade_mass;
    if (decade >= 2 && previous > 0.0) {
      const double ratio = decade_mass / previous;
      if (ratio < 0.9 && decade_mass * ratio / (1.0 - ratio) < 0.1 * rel_tol_ * mass) {
        mass += decade_mass * ratio / (1.0 - ratio);
        break;
      }
    }
    if (decade >= 2 && decade_mass == 0.0) break;
    previous = decade_mass;
  }
  z_ = mass / b_ref;
}

double QuadratureDensity::integral_drift_ratio(double lo, double hi) const {
  if (hi <= lo) return 0.0;
  const auto ratio = [this](double m) { return drift_A(m, params_) / diffusion_B(m, params_); };
  const double m1 = params_.m1;
  if (lo < m1 && m1 < hi) return integral_drift_ratio(lo, m1) + integral_drift_ratio(m1, hi);
  if (hi > 4.0 * lo && lo > 0.0) {
    const double mid = std::sqrt(lo * hi);
    return integral_drift_ratio(lo, mid) + integral_drift_ratio(mid, hi);
  }
  return integrate_gk(ratio, lo, hi, rel_tol_, 1e-300).value;
}

double QuadratureDensity::potential(double m) const {
  require(m >= params_.m_init, "stationary_pdf_quadrature: income below m_init");
  auto it = std::upper_bound(nodes_.begin(), nodes_.end(), m);
  const std::size_t k = static_cast<std::size_t>(std::distance(nodes_.begin(), it)) - 1;
  const double i_m = cumulative_[k] + integral_drift_ratio(nodes_[k], m);
  return i_m + std::log(diffusion_B(m, params_));
}

double QuadratureDensity::pdf(double m) const { return std::exp(-potential(m)) / z_; }

double stationary_pdf_quadrature(double m, const MicroParams& p) {
  return QuadratureDensity(p).pdf(m);
}

}  // namespace incomedist
