#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <vector>

#include "doctest.h"
#include "incomedist/distribution.hpp"
#include "incomedist/errors.hpp"

using namespace incomedist;

namespace {

EffectiveParams bg_limit() {
  EffectiveParams e;
  e.T = 37000.0;
  e.T1 = e.T;
  e.m0 = 1e5 * e.T;  // multiplicative regime pushed out of reach
  e.m1 = kInfinity;
  e.alpha = 2.0;
  e.alpha1 = 2.0;
  e.m_init = 1000.0;
  return e;
}

// Two-sided KS statistic of sorted draws against a CCDF.
template <class Ccdf>
double ks_statistic(std::vector<double> xs, const Ccdf& ccdf) {
  std::sort(xs.begin(), xs.end());
  const double n = static_cast<double>(xs.size());
  double d = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double cdf = 1.0 - ccdf(xs[i]);
    d = std::max({d, cdf - i / n, (i + 1) / n - cdf});
  }
  return d;
}

}  // namespace

TEST_CASE("Boltzmann-Gibbs and Pareto CCDFs") {
  CHECK(bg_ccdf(500.0, 37000.0, 500.0) == 1.0);
  CHECK(bg_ccdf(500.0 + 37000.0, 37000.0, 500.0) == doctest::Approx(0.3678794).epsilon(1e-7));
  CHECK(bg_ccdf(74000.0, 37000.0, 0.0) == doctest::Approx(0.1353353).epsilon(1e-7));
  CHECK_THROWS_AS(bg_ccdf(1.0, 37000.0, 2.0), PreconditionError);

  CHECK(pareto_ccdf(5.0, 2.0, 5.0) == 1.0);
  CHECK(pareto_ccdf(50.0, 2.0, 5.0) == doctest::Approx(0.01).epsilon(1e-14));
  CHECK(pareto_ccdf(2.0, 2.8643, 1.0) == doctest::Approx(0.1374).epsilon(1e-3));
  CHECK_THROWS_AS(pareto_ccdf(0.0, 2.0, 1.0), PreconditionError);
  CHECK_THROWS_AS(pareto_ccdf(1.0, -2.0, 1.0), PreconditionError);
}

TEST_CASE("model CCDF on the EU 2007 parameter set") {
  const ModelCCDF pi(eu2007_params());
  const auto& e = pi.params();

  CHECK(std::abs(pi.ccdf(e.m_init) - 1.0) <= 1e-9);
  CHECK(pi.values().front() == 1.0);
  CHECK_THROWS_AS(pi.ccdf(e.m_init - 1.0), PreconditionError);

  SUBCASE("table invariants") {
    const auto& v = pi.values();
    for (std::size_t k = 1; k < v.size(); ++k) {
      CHECK(v[k] <= v[k - 1]);
      CHECK(v[k] > 0.0);
    }
    CHECK(std::adjacent_find(pi.grid().begin(), pi.grid().end(), std::greater_equal<>()) ==
          pi.grid().end());
  }

  SUBCASE("monotone on random income pairs") {
    std::mt19937_64 gen(11);
    std::uniform_real_distribution<double> logm(0.0, std::log(1e12));
    for (int trial = 0; trial < 300; ++trial) {
      double a = std::exp(logm(gen)) - 1.0;
      double b = std::exp(logm(gen)) - 1.0;
      if (a > b) std::swap(a, b);
      CHECK(pi.ccdf(a) >= pi.ccdf(b));
    }
  }

  SUBCASE("far-tail log-log slope") {
    const double m = 1e3 * e.m1;
    const double h = 1e-3;
    const double slope = (std::log(pi.ccdf(m * (1 + h))) - std::log(pi.ccdf(m * (1 - h)))) /
                         (std::log1p(h) - std::log1p(-h));
    CHECK(slope == doctest::Approx(-e.alpha1).epsilon(0.01));
  }

  SUBCASE("tail splice is continuous") {
    const double c = pi.tail_cutoff();
    const double below = pi.ccdf(std::nextafter(c, 0.0));
    const double above = pi.ccdf(c);
    CHECK(std::abs(below - above) / above < 1e-9);
  }

  SUBCASE("-dPi/dm matches the density") {
    const auto& g = pi.grid();
    for (std::size_t k = 5; k + 5 < g.size(); k += 7) {
      const double m = 0.5 * (g[k] + g[k + 1]);
      if (std::abs(m - e.m1) < 1e-3 * e.m1) continue;
      const double h = 1e-4 * (m - e.m_init);
      const double deriv = -(pi.ccdf(m + h) - pi.ccdf(m - h)) / (2 * h);
      CHECK(deriv == doctest::Approx(pi.pdf(m)).epsilon(1e-5));
    }
  }
}

TEST_CASE("quantile inversion") {
  const ModelCCDF pi(eu2007_params());
  CHECK(pi.quantile(1.0) == pi.params().m_init);
  for (double u : {0.9, 0.5, 0.01, 1e-5, 1e-9, 1e-14}) {
    const double m = pi.quantile(u);
    CHECK(std::abs(pi.ccdf(m) - u) <= std::max(1e-8 * u, 1e-15));
  }
  CHECK_THROWS_AS(pi.quantile(0.0), PreconditionError);
  CHECK_THROWS_AS(pi.quantile(1.5), PreconditionError);

  const ModelCCDF bg(bg_limit());
  const auto& e = bg.params();
  CHECK(bg.quantile(0.5) == doctest::Approx(e.m_init + e.T * std::log(2.0)).epsilon(1e-7));
}

TEST_CASE("sampling") {
  const ModelCCDF pi(eu2007_params());
  CHECK_THROWS_AS(pi.sample(0, 1), PreconditionError);
  const auto one = pi.sample(1, 42);
  REQUIRE(one.size() == 1);
  CHECK(one[0] >= pi.params().m_init);
  CHECK(pi.sample(1000, 7) == pi.sample(1000, 7));
  CHECK(pi.sample(1000, 7) != pi.sample(1000, 8));

  SUBCASE("KS distance of 1e5 draws") {
    const auto xs = pi.sample(100000, 2024);
    CHECK(ks_statistic(xs, pi) < 0.006);
  }

  SUBCASE("Boltzmann-Gibbs mean") {
    const ModelCCDF bg(bg_limit());
    const auto xs = bg.sample(1000000, 99);
    const double mean = std::accumulate(xs.begin(), xs.end(), 0.0) / xs.size();
    const auto& e = bg.params();
    CHECK(std::abs(mean - (e.m_init + e.T)) < 3.0 * e.T / 1e3);
  }
}

TEST_CASE("exponential regime deep into subnormal densities") {
  const EffectiveParams p{.T = 37000, .T1 = 37000, .m0 = 1e9, .m1 = kInfinity, .alpha = 2, .alpha1 = 2, .m_init = 500};
  const ModelCCDF model(p);
  CHECK(model.ccdf(p.m_init) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(model.ccdf(p.m_init + 37000.0) == doctest::Approx(std::exp(-1.0)).epsilon(1e-4));
  CHECK(model.ccdf(3e7) >= 0.0);
}
