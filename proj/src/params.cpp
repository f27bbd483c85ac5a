#include "incomedist/params.hpp"

#include <cmath>
#include <string>

#include "incomedist/errors.hpp"

namespace incomedist {

namespace {
bool finite_positive(double x) { return std::isfinite(x) && x > 0.0; }
}  // namespace

void EffectiveParams::validate() const {
  require(finite_positive(T), "T must be finite and > 0");
  require(finite_positive(T1), "T1 must be finite and > 0");
  require(finite_positive(m0), "m0 must be finite and > 0");
  require(!std::isnan(m1) && m1 >= m0, "m1 must satisfy m1 >= m0");
  require(std::isfinite(m_init) && m_init >= 0.0, "m_init must be finite and >= 0");
  require(m_init < m0, "m_init must be < m0");
  require(std::isfinite(alpha) && alpha > 1.0, "alpha must be > 1");
  if (std::isfinite(m1)) {
    require(std::isfinite(alpha1) && alpha1 > 0.0,
            "alpha1 must be > 0 (tail exponent alpha1+1 <= 1 is not normalizable)");
  }
}

void MicroParams::validate() const {
  require(finite_positive(B0), "B0 must be finite and > 0");
  require(finite_positive(b), "b must be finite and > 0");
  require(std::isfinite(A0) && std::isfinite(A0p) && std::isfinite(a) && std::isfinite(ap),
          "drift coefficients must be finite");
  require(!std::isnan(m1) && m1 > 0.0, "m1 must be > 0");
  require(std::isfinite(m_init) && m_init >= 0.0, "m_init must be finite and >= 0");
}

double drift_A(double m, const MicroParams& p) {
  require(m >= 0.0, "drift_A: income must be >= 0");
  return branch_of(m, p.m1) == Branch::Below ? p.A0 + p.a * m : p.A0p + p.ap * m;
}

double diffusion_B(double m, const MicroParams& p) {
  require(m >= 0.0, "diffusion_B: income must be >= 0");
  return p.B0 + p.b * m * m;
}

MicroParams micro_from_effective(const EffectiveParams& e, double b) {
  require(finite_positive(b), "micro_from_effective: time-scale rate b must be > 0");
  MicroParams p;
  p.b = b;
  p.a = (e.alpha - 1.0) * b;
  p.ap = (e.alpha1 - 1.0) * b;
  p.B0 = b * e.m0 * e.m0;
  p.A0 = p.B0 / e.T;
  p.A0p = p.B0 / e.T1;
  p.m1 = e.m1;
  p.m_init = e.m_init;
  return p;
}

EffectiveParams effective_from_micro(const MicroParams& p) {
  EffectiveParams e;
  e.T = p.B0 / p.A0;
  e.T1 = p.B0 / p.A0p;
  e.m0 = std::sqrt(p.B0 / p.b);
  e.alpha = 1.0 + p.a / p.b;
  e.alpha1 = 1.0 + p.ap / p.b;
  e.m1 = p.m1;
  e.m_init = p.m_init;
  return e;
}

EffectiveParams eu2007_params() {
  EffectiveParams e;
  e.T = 37.0e3;
  e.T1 = 37.0e3;
  e.m0 = 1.6e5;
  e.m1 = 3.0e5;
  e.alpha = 2.8643;
  e.alpha1 = 0.70;
  e.m_init = 0.0;
  return e;
}

}  // namespace incomedist
