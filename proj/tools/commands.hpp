#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <vector>

namespace incomedist::cli {

struct Options {
  std::optional<std::filesystem::path> config;
  std::optional<std::uint64_t> seed;
  std::optional<double> m0;
  std::optional<double> m1;
  std::optional<std::size_t> window;
  std::filesystem::path out_dir = ".";
  std::vector<std::filesystem::path> inputs;
};

int cmd_merge(const Options& opt);
int cmd_fit(const Options& opt);
int cmd_eval(const Options& opt);
int cmd_sample(const Options& opt);
int cmd_simulate(const Options& opt);
int cmd_slope(const Options& opt);

}  // namespace incomedist::cli
