#include <cmath>
#include <numbers>
#include <vector>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "doctest.h"
#include "incomedist/errors.hpp"
#include "incomedist/model.hpp"

using namespace incomedist;

namespace {

double rel_diff(double a, double b) { return std::abs(a - b) / std::max(std::abs(a), std::abs(b)); }

// Independent normalization check: integrate in u = log(m - m_init + h) out to
// an astronomically large income, no closed-form tail.
double brute_force_mass(const StationaryDensity& d) {
  const double lo = d.params().m_init;
  const double h = 1e-3;
  const auto f = [&](double u) {
    const double m = lo + std::exp(u) - h;
    return d.pdf(m) * std::exp(u);
  };
  double sum = 0.0;
  const double u_lo = std::log(h);
  const double u_hi = std::log(1e45);
  const int panels = 2000;
  for (int k = 0; k < panels; ++k) {
    const double a = u_lo + (u_hi - u_lo) * k / panels;
    const double b = u_lo + (u_hi - u_lo) * (k + 1) / panels;
    sum += boost::math::quadrature::gauss_kronrod<double, 31>::integrate(f, a, b, 10, 1e-13);
  }
  return sum;
}

std::vector<double> oracle_grid(double lo, double hi, int n) {
  std::vector<double> g{lo};
  const double first = 1.0;
  for (int k = 1; k < n; ++k) {
    g.push_back(lo + first * std::pow((hi - lo) / first, static_cast<double>(k - 1) / (n - 2)));
  }
  return g;
}

MicroParams micro_test() {
  MicroParams p;
  p.A0 = 1.0;
  p.a = 2.0;
  p.m1 = 10.0;
  p.B0 = 4.0;
  p.b = 1.0;
  p.A0p = 0.5;
  p.ap = -0.3;
  return p;
}

}  // namespace

TEST_CASE("drift and diffusion coefficients") {
  const auto p = micro_test();
  CHECK(drift_A(0.0, p) == 1.0);
  CHECK(drift_A(3.0, p) == 7.0);
  CHECK(drift_A(10.0, p) == doctest::Approx(0.5 - 0.3 * 10.0));  // m1 is on the upper branch
  CHECK(diffusion_B(0.0, p) == 4.0);
  CHECK(diffusion_B(2.0, p) == 8.0);
  const double m0 = std::sqrt(p.B0 / p.b);
  CHECK(diffusion_B(m0, p) == doctest::Approx(2.0 * p.B0));
  CHECK_THROWS_AS(drift_A(-1.0, p), PreconditionError);
  CHECK_THROWS_AS(diffusion_B(-1e-9, p), PreconditionError);
}

TEST_CASE("effective <-> micro parameter maps") {
  auto e = eu2007_params();
  SUBCASE("EU 2007 values in gauge b = 1") {
    const auto p = micro_from_effective(e, 1.0);
    CHECK(p.B0 == doctest::Approx(2.56e10));
    CHECK(p.A0 == doctest::Approx(6.9189e5).epsilon(1e-5));
    CHECK(p.ap / p.b == doctest::Approx(-0.30));
    CHECK(p.ap < 0.0);
  }
  SUBCASE("alpha = 2 gives a/b = 1") {
    e.alpha = 2.0;
    const auto p = micro_from_effective(e, 3.0);
    CHECK(p.a / p.b == doctest::Approx(1.0));
  }
  SUBCASE("a = 0 gives alpha = 1") {
    auto p = micro_from_effective(e, 1.0);
    p.a = 0.0;
    CHECK(effective_from_micro(p).alpha == 1.0);
  }
  SUBCASE("round trip in several gauges") {
    for (double b : {0.5, 1.0, 7.0}) {
      const auto back = effective_from_micro(micro_from_effective(e, b));
      CHECK(rel_diff(back.T, e.T) < 1e-15);
      CHECK(rel_diff(back.T1, e.T1) < 1e-15);
      CHECK(rel_diff(back.m0, e.m0) < 1e-15);
      CHECK(rel_diff(back.alpha, e.alpha) < 1e-15);
      CHECK(rel_diff(back.alpha1, e.alpha1) < 1e-15);
      CHECK(back.m1 == e.m1);
      CHECK(back.m_init == e.m_init);
    }
  }
  CHECK_THROWS_AS(micro_from_effective(e, 0.0), PreconditionError);
  CHECK_THROWS_AS(micro_from_effective(e, -1.0), PreconditionError);
}

TEST_CASE("parameter validation") {
  auto e = eu2007_params();
  CHECK_NOTHROW(e.validate());
  e.alpha1 = 0.0;
  CHECK_THROWS_AS(StationaryDensity{e}, PreconditionError);
  e = eu2007_params();
  e.alpha1 = 0.5;  // accepted, infinite-variance tail
  CHECK_NOTHROW(StationaryDensity{e});
  CHECK(e.infinite_variance_tail());
  e = eu2007_params();
  e.m1 = 0.5 * e.m0;
  CHECK_THROWS_AS(e.validate(), PreconditionError);
  e = eu2007_params();
  e.m_init = e.m0;
  CHECK_THROWS_AS(e.validate(), PreconditionError);
}

TEST_CASE("closed-form density: continuity, normalization, tail slope") {
  const StationaryDensity d(eu2007_params());
  const double m1 = d.params().m1;
  const double below = d.pdf(std::nextafter(m1, 0.0));
  const double at = d.pdf(m1);
  CHECK(rel_diff(below, at) < 1e-12);

  CHECK(std::abs(brute_force_mass(d) - 1.0) < 1e-8);
  CHECK_THROWS_AS(d.pdf(-1.0), PreconditionError);

  // Finite-difference log slope at 1e3 m0 vs the analytic local slope and its
  // m -> inf limit -(alpha1 + 1).
  const double m = 1e3 * d.params().m0;
  const double h = 1e-4;
  const double fd = (d.log_pdf(m * (1 + h)) - d.log_pdf(m * (1 - h))) /
                    (std::log1p(h) - std::log1p(-h));
  const double x = m / d.params().m0;
  const double analytic = -(d.params().m0 / d.params().T1) * x / (1 + x * x) -
                          (d.params().alpha1 + 1) * x * x / (1 + x * x);
  CHECK(fd == doctest::Approx(analytic).epsilon(1e-6));
  CHECK(fd == doctest::Approx(-(d.params().alpha1 + 1)).epsilon(3e-3));
}

TEST_CASE("tail splice agrees with quadrature at the cutoff") {
  const StationaryDensity d(eu2007_params());
  const double c = d.tail_cutoff();
  CHECK(std::numbers::pi / 2 - std::atan(c / d.params().m0) < 1e-6);
  // Mass of [c, 4c] from the analytic tail vs direct quadrature beyond the cutoff.
  const double analytic = d.tail_mass(c) - d.tail_mass(4 * c);
  const auto f = [&](double m) { return d.pdf(m); };
  const double direct =
      boost::math::quadrature::gauss_kronrod<double, 61>::integrate(f, c, 4 * c, 15, 1e-14);
  CHECK(rel_diff(analytic, direct) < 1e-9);
}

TEST_CASE("single-branch density") {
  auto e = eu2007_params();
  const auto y = StationaryDensity::single_branch(e);
  auto e_high = e;
  e_high.m1 = 1e30;
  e_high.T1 = e.T;
  e_high.alpha1 = e.alpha;
  const StationaryDensity far(e_high);
  for (double m : {0.0, 1e3, 1e5, 1e7}) {
    CHECK(rel_diff(y.pdf(m), far.pdf(m)) < 1e-9);
    CHECK(rel_diff(single_branch_pdf(m, e), y.pdf(m)) < 1e-14);
  }
  // At m = 0 the shape factor is 1, so the value is the normalization constant.
  CHECK(y.log_shape(0.0) == 0.0);
  CHECK(y.pdf(0.0) == doctest::Approx(std::exp(-y.log_normalizer())));
  // Small-income regime behaves like the Boltzmann-Gibbs exponential.
  const double m = e.m0 / 100.0;
  const double ratio = y.pdf(m) / y.pdf(e.m_init);
  CHECK(ratio == doctest::Approx(std::exp(-(m - e.m_init) / e.T)).epsilon(0.01));
}

TEST_CASE("quadrature oracle matches the closed form on the EU 2007 set") {
  const auto e = eu2007_params();
  const StationaryDensity closed(e);
  const QuadratureDensity quad(micro_from_effective(e, 1.0));
  double worst = 0.0;
  for (double m : oracle_grid(e.m_init, 1e3 * e.m1, 200)) {
    worst = std::max(worst, rel_diff(closed.pdf(m), quad.pdf(m)));
  }
  CHECK(worst < 1e-6);
}

TEST_CASE("quadrature oracle is gauge invariant") {
  const auto e = eu2007_params();
  const QuadratureDensity ref(micro_from_effective(e, 1.0));
  for (double b : {0.5, 7.0}) {
    const QuadratureDensity other(micro_from_effective(e, b));
    for (double m : {0.0, 1e4, 2e5, 3e5, 1e7, 1e10}) {
      CHECK(rel_diff(ref.pdf(m), other.pdf(m)) < 1e-9);
    }
  }
}

TEST_CASE("quadrature oracle reduces to Boltzmann-Gibbs and Pareto limits") {
  SUBCASE("additive only") {
    MicroParams p;
    p.A0 = 1.0;
    p.A0p = 1.0;
    p.B0 = 37000.0;
    p.b = 1e-30;
    p.m_init = 5000.0;
    const double T = p.B0 / p.A0;
    const QuadratureDensity q(p);
    for (double m = p.m_init; m < p.m_init + 30 * T; m += 0.37 * T) {
      const double expected = std::exp(-(m - p.m_init) / T) / T;
      CHECK(rel_diff(q.pdf(m), expected) < 1e-8);
    }
  }
  SUBCASE("pure Gibrat") {
    MicroParams p;
    p.b = 1.0;
    p.a = 1.8643;
    p.ap = p.a;
    p.m_init = 1e4;
    p.B0 = 1e-12 * p.b * p.m_init * p.m_init;
    const double alpha = 1 + p.a / p.b;
    const QuadratureDensity q(p);
    const double m = 1e6;
    const double h = 1e-4;
    const double slope = (std::log(q.pdf(m * (1 + h))) - std::log(q.pdf(m * (1 - h)))) /
                         (std::log1p(h) - std::log1p(-h));
    CHECK(slope == doctest::Approx(-(alpha + 1)).epsilon(1e-6));
    for (double x : {1e4, 3e4, 1e5, 1e7, 1e9}) {
      const double pareto = alpha * std::pow(p.m_init, alpha) / std::pow(x, alpha + 1);
      CHECK(rel_diff(q.pdf(x), pareto) < 1e-6);
    }
  }
}
