#include "incomedist/sde.hpp"

#include <algorithm>
#include <cmath>

#include "incomedist/errors.hpp"
#include "incomedist/params_io.hpp"
#include "incomedist/rng.hpp"

namespace incomedist {

double max_rate(const MicroParams& p) {
  double r = std::max({std::abs(p.a), std::abs(p.ap), p.b});
  if (p.B0 > 0.0) r = std::max({r, p.A0 * p.A0 / p.B0, p.A0p * p.A0p / p.B0});
  return r;
}

double default_dt(const MicroParams& p) { return 0.01 / max_rate(p); }

void SimConfig::validate() const {
  params.validate();
  const double h = effective_dt();
  require(std::isfinite(h) && h > 0.0, "simulation: dt must be > 0");
  require(h < 0.1 / max_rate(params),
          "simulation: dt = " + format_number(h) + " violates the stability bound dt < 0.1/max_rate = " +
              format_number(0.1 / max_rate(params)));
  require(n_walkers >= 1, "simulation: n_walkers must be >= 1");
  require(sample_every >= 1, "simulation: sample_every must be >= 1");
  require(total_samples >= 1, "simulation: total_samples must be >= 1");
}

SimConfig SimConfig::from_config(const KeyValueConfig& cfg) {
  SimConfig c;
  c.params = read_micro(cfg);
  c.n_walkers = static_cast<std::size_t>(cfg.get_int("n_walkers", static_cast<std::int64_t>(c.n_walkers)));
  c.dt = cfg.get_double("dt", 0.0);
  c.burn_in = static_cast<std::uint64_t>(cfg.get_int("burn_in", static_cast<std::int64_t>(c.burn_in)));
  c.sample_every =
      static_cast<std::uint64_t>(cfg.get_int("sample_every", static_cast<std::int64_t>(c.sample_every)));
  c.total_samples =
      static_cast<std::size_t>(cfg.get_int("total_samples", static_cast<std::int64_t>(c.total_samples)));
  c.seed = static_cast<std::uint64_t>(cfg.get_int("seed"));
  const std::string boundary = cfg.get_string("boundary", "reflect");
  if (boundary != "reflect") throw ParseError("boundary: only 'reflect' is supported, got '" + boundary + "'");
  for (const char* key : {"n_walkers", "burn_in", "sample_every", "total_samples"}) {
    if (cfg.get_int(key, 0) < 0) throw ParseError(std::string(key) + " must not be negative");
  }
  return c;
}

KeyValueConfig SimConfig::to_config() const {
  KeyValueConfig c;
  write_micro(c, params);
  c.set("n_walkers", std::to_string(n_walkers));
  c.set("dt", effective_dt());
  c.set("burn_in", std::to_string(burn_in));
  c.set("sample_every", std::to_string(sample_every));
  c.set("total_samples", std::to_string(total_samples));
  c.set("seed", std::to_string(seed));
  c.set("boundary", "reflect");
  return c;
}

double step(double m, const MicroParams& p, double dt, double noise) {
  const double A = m < p.m1 ? p.A0 + p.a * m : p.A0p + p.ap * m;
  const double B = p.B0 + p.b * m * m;
  double next = m - A * dt + std::sqrt(2.0 * B * dt) * noise;
  if (next < p.m_init) next = 2.0 * p.m_init - next;
  return next;
}

std::vector<double> simulate_samples(const SimConfig& config) {
  config.validate();
  const MicroParams& p = config.params;
  const double dt = config.effective_dt();
  const std::size_t nw = config.n_walkers;
  const std::size_t total = config.total_samples;
  std::vector<double> out(total);
  const std::size_t walkers = std::min(nw, total);
  for (std::size_t w = 0; w < walkers; ++w) {
    Rng rng(config.seed, w);
    double m = p.m_init;
    std::uint64_t t = 0;
    const auto advance = [&](std::uint64_t steps) {
      for (std::uint64_t s = 0; s < steps; ++s, ++t) {
        m = step(m, p, dt, rng.normal());
        if (!std::isfinite(m)) {
          throw NumericError("walker " + std::to_string(w) + " left the finite range at step " +
                             std::to_string(t));
        }
      }
    };
    advance(config.burn_in);
    for (std::size_t k = 0; k * nw + w < total; ++k) {
      if (k > 0) advance(config.sample_every);
      out[k * nw + w] = m;
    }
  }
  return out;
}

StationaryHistogram log_histogram(std::span<const double> samples, std::size_t bins) {
  require(bins >= 1, "histogram: need at least one bin");
  StationaryHistogram h;
  double lo = std::numeric_limits<double>::infinity();
  double hi = 0.0;
  for (double x : samples) {
    if (x > 0.0) {
      lo = std::min(lo, x);
      hi = std::max(hi, x);
    }
  }
  require(hi > 0.0, "histogram: no positive samples");
  if (!(hi > lo)) hi = lo * 2.0;
  const double llo = std::log(lo);
  const double width = (std::log(hi) - llo) / static_cast<double>(bins);
  h.edges.resize(bins + 1);
  for (std::size_t i = 0; i <= bins; ++i) h.edges[i] = std::exp(llo + width * static_cast<double>(i));
  h.edges.front() = lo;
  h.edges.back() = hi;
  h.counts.assign(bins, 0.0);
  std::size_t inside = 0;
  for (double x : samples) {
    if (!(x >= lo)) {
      ++h.outside;
      continue;
    }
    auto k = static_cast<std::size_t>((std::log(x) - llo) / width);
    k = std::min(k, bins - 1);
    while (k > 0 && x < h.edges[k]) --k;
    while (k + 1 < bins && x >= h.edges[k + 1]) ++k;
    h.counts[k] += 1.0;
    ++inside;
  }
  h.densities.resize(bins);
  for (std::size_t i = 0; i < bins; ++i) {
    h.densities[i] = h.counts[i] / (static_cast<double>(inside) * (h.edges[i + 1] - h.edges[i]));
  }
  return h;
}

StationaryHistogram run(const SimConfig& config, std::size_t bins) {
  const auto samples = simulate_samples(config);
  return log_histogram(samples, bins);
}

std::string StationaryHistogram::to_delimited() const {
  std::string out = "bin_low\tbin_high\tdensity\n";
  for (std::size_t i = 0; i < densities.size(); ++i) {
    out += format_number(edges[i]) + "\t" + format_number(edges[i + 1]) + "\t" + format_number(densities[i]) + "\n";
  }
  return out;
}

}  // namespace incomedist
