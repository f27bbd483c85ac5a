#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "incomedist/keyvalue.hpp"
#include "incomedist/params.hpp"

namespace incomedist {

enum class Boundary { ReflectAtMinit };

/// Fastest relaxation rate of the process: max(|a|, |ap|, b, A0^2/B0, A0p^2/B0).
double max_rate(const MicroParams& p);
/// 0.01 / max_rate.
double default_dt(const MicroParams& p);

struct SimConfig {
  MicroParams params;
  std::size_t n_walkers = 1000;
  double dt = 0.0;  // 0 selects default_dt(params)
  std::uint64_t burn_in = 1000000;
  std::uint64_t sample_every = 100;
  std::size_t total_samples = 100000;
  std::uint64_t seed = 0;
  Boundary boundary = Boundary::ReflectAtMinit;

  double effective_dt() const { return dt > 0.0 ? dt : default_dt(params); }

  /// Throws PreconditionError, including when dt >= 0.1 / max_rate.
  void validate() const;

  /// Parameter keys as read_micro, plus n_walkers, dt, burn_in, sample_every,
  /// total_samples, boundary and the mandatory seed.
  static SimConfig from_config(const KeyValueConfig& cfg);
  KeyValueConfig to_config() const;
};

/// One Euler-Maruyama update m - A(m) dt + sqrt(2 B(m) dt) noise, reflected about m_init.
double step(double m, const MicroParams& p, double dt, double noise);

/// Walker positions recorded after burn-in, snapshot-major. Deterministic given the seed.
std::vector<double> simulate_samples(const SimConfig& config);

struct StationaryHistogram {
  std::vector<double> edges;  // log-spaced, size = bins + 1
  std::vector<double> counts;
  std::vector<double> densities;
  std::size_t outside = 0;  // samples below the first edge (non-positive incomes)

  /// `bin_low bin_high density` rows, tab separated, with a header.
  std::string to_delimited() const;
};

StationaryHistogram log_histogram(std::span<const double> samples, std::size_t bins = 60);

/// simulate_samples followed by log_histogram.
StationaryHistogram run(const SimConfig& config, std::size_t bins = 60);

}  // namespace incomedist
