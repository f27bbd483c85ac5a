#pragma once

#include <limits>

namespace incomedist {

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

/// The effective (fitted) parameters of the two-branch stationary density.
///
/// All incomes are in currency units. `m1 = +inf` collapses the model to the
/// single-branch additive+multiplicative form.
struct EffectiveParams {
  double T = 0.0;       // income temperature below m1
  double T1 = 0.0;      // temperature above m1
  double m0 = 0.0;      // additive / multiplicative crossover
  double m1 = kInfinity;  // medium / high class threshold
  double alpha = 0.0;   // Pareto exponent, medium class
  double alpha1 = 0.0;  // Pareto exponent, high class
  double m_init = 0.0;  // lowest income, left edge of the support

  /// Throws PreconditionError naming the first violated invariant.
  void validate() const;

  /// alpha1 < 1: the high-class Pareto tail has no finite mean or variance.
  bool infinite_variance_tail() const { return alpha1 < 1.0; }
  /// alpha > 2: the medium-class Pareto law has a finite variance.
  bool finite_variance_medium() const { return alpha > 2.0; }

  bool operator==(const EffectiveParams&) const = default;
};

/// Langevin coefficients of the threshold process
///   A(m) = A0 + a m (m < m1),  A0p + ap m (m >= m1);  B(m) = B0 + b m^2.
struct MicroParams {
  double A0 = 0.0;
  double A0p = 0.0;
  double a = 0.0;
  double ap = 0.0;
  double B0 = 0.0;
  double b = 0.0;
  double m1 = kInfinity;
  double m_init = 0.0;

  void validate() const;

  bool operator==(const MicroParams&) const = default;
};

enum class Branch { Below, Above };

/// m == m1 belongs to the upper branch.
inline Branch branch_of(double m, double m1) { return m < m1 ? Branch::Below : Branch::Above; }

/// Drift A(m). Throws on m < 0.
double drift_A(double m, const MicroParams& p);

/// Diffusion B(m) = B0 + b m^2. Throws on m < 0.
double diffusion_B(double m, const MicroParams& p);

/// Builds the Langevin coefficients in the time gauge set by `b` (only ratios
/// to b are observable in the stationary law).
MicroParams micro_from_effective(const EffectiveParams& e, double b = 1.0);

EffectiveParams effective_from_micro(const MicroParams& p);

/// Parameter set reported with the 2007 EU household-income fit (T1 = T, m_init = 0).
EffectiveParams eu2007_params();

}  // namespace incomedist
