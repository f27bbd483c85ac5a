#pragma once

#include <vector>

#include "incomedist/params.hpp"

namespace incomedist {

/// Closed-form two-branch stationary density
///
///   P(m) = c'  exp(-(m0/T)  atan(m/m0)) / [1 + (m/m0)^2]^((alpha+1)/2),   m <  m1
///   P(m) = c'' exp(-(m0/T1) atan(m/m0)) / [1 + (m/m0)^2]^((alpha1+1)/2),  m >= m1
///
/// on [m_init, inf). c''/c' is fixed by continuity at m1, c' by normalization.
/// The normalizer is computed once at construction; instances are immutable.
class StationaryDensity {
 public:
  explicit StationaryDensity(const EffectiveParams& params);

  /// Single-branch (m1 = inf) additive+multiplicative density.
  static StationaryDensity single_branch(EffectiveParams params);

  const EffectiveParams& params() const { return params_; }

  double pdf(double m) const;
  double log_pdf(double m) const;

  /// log of the unnormalized density; continuous at m1.
  double log_shape(double m) const;
  double log_normalizer() const { return log_z_; }

  /// Smallest income where pi/2 - atan(m/m0) < 1e-6.
  double tail_cutoff() const { return tail_cutoff_; }

  /// Integral of the normalized density over [lo, hi] by quadrature.
  /// Requires m_init <= lo <= hi <= tail_cutoff.
  double integrate(double lo, double hi) const;

  /// Closed-form integral of the normalized asymptotic tail over [m, inf),
  /// m >= tail_cutoff.
  double tail_mass(double m) const;

  /// Partition of [m_init, tail_cutoff] used for normalization (m1 included).
  std::vector<double> partition(std::size_t n) const;

 private:
  struct BranchShape {
    double temperature;
    double exponent;  // pdf decays as x^-(exponent) for x >> 1
    double shift;     // additive constant in log space
  };
  const BranchShape& shape_at(double m) const;
  double unnormalized_tail(double lo, double hi) const;

  EffectiveParams params_;
  BranchShape below_{};
  BranchShape above_{};
  double tail_cutoff_ = 0.0;
  double log_z_ = 0.0;
};

/// Convenience wrappers; each call builds (and normalizes) a density.
double stationary_pdf(double m, const EffectiveParams& e);
double single_branch_pdf(double m, const EffectiveParams& e);

/// Evaluation straight from the Langevin coefficients:
///   P(m) = const / B(m) * exp(-int_{m_init}^m A/B dm'),
/// with A/B integrated numerically and the normalizer found by quadrature out
/// to where the density has decayed. Independent of StationaryDensity.
class QuadratureDensity {
 public:
  explicit QuadratureDensity(const MicroParams& params, double rel_tol = 1e-12);

  const MicroParams& params() const { return params_; }
  double pdf(double m) const;
  /// -log of the unnormalized density at m (includes log B).
  double potential(double m) const;
  double normalizer() const { return z_; }

 private:
  double integral_drift_ratio(double lo, double hi) const;

  MicroParams params_;
  double rel_tol_;
  std::vector<double> nodes_;
  std::vector<double> cumulative_;  // int_{m_init}^{node_k} A/B
  double z_ = 0.0;
};

double stationary_pdf_quadrature(double m, const MicroParams& p);

}  // namespace incomedist
