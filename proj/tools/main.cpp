#include <CLI11.hpp>

#include <iostream>

#include "commands.hpp"
#include "incomedist/errors.hpp"
#include "run_io.hpp"

namespace {

constexpr int kExitParse = 2;
constexpr int kExitPrecondition = 3;
constexpr int kExitNumeric = 4;

}  // namespace

int main(int argc, char** argv) {
  using namespace incomedist;
  using namespace incomedist::cli;

  CLI::App app{"Income distribution model: merge, fit, evaluate, sample, simulate"};
  app.set_version_flag("--version", kToolVersion);
  app.require_subcommand(1);

  Options opt;
  std::string out_dir = ".";
  std::string config;
  std::uint64_t seed = 0;
  double m0 = 0.0;
  double m1 = 0.0;
  std::size_t window = 0;
  std::vector<std::string> inputs;

  const auto common = [&](CLI::App* sub) {
    sub->add_option("--config", config, "key = value configuration file");
    sub->add_option("--out-dir", out_dir, "directory for outputs")->capture_default_str();
  };
  auto* merge = app.add_subcommand("merge", "join survey incomes with rich-list incomes");
  merge->add_option("survey", inputs, "survey sample file and wealth file")->expected(2)->required();
  common(merge);
  auto* fit = app.add_subcommand("fit", "three-step fit of the model parameters");
  fit->add_option("samples", inputs, "sample file")->expected(1)->required();
  fit->add_option("--m0", m0, "fix the additive/multiplicative crossover");
  fit->add_option("--m1", m1, "fix the medium/high class threshold");
  common(fit);
  auto* eval = app.add_subcommand("eval", "tabulate density and CCDF");
  common(eval);
  auto* sample = app.add_subcommand("sample", "draw incomes from the model");
  sample->add_option("--seed", seed, "random seed");
  common(sample);
  auto* simulate = app.add_subcommand("simulate", "Langevin ensemble simulation");
  simulate->add_option("--seed", seed, "random seed");
  common(simulate);
  auto* slope = app.add_subcommand("slope", "local log-log slope of the empirical CCDF");
  slope->add_option("samples", inputs, "sample file")->expected(1)->required();
  slope->add_option("--window", window, "points per window");
  common(slope);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitParse;
  }

  auto* sub = app.get_subcommands().front();
  if (!config.empty()) opt.config = config;
  opt.out_dir = out_dir;
  for (const auto& in : inputs) opt.inputs.emplace_back(in);
  if (sub->get_option_no_throw("--seed") && sub->count("--seed") > 0) opt.seed = seed;
  if (sub->get_option_no_throw("--m0") && sub->count("--m0") > 0) opt.m0 = m0;
  if (sub->get_option_no_throw("--m1") && sub->count("--m1") > 0) opt.m1 = m1;
  if (sub->get_option_no_throw("--window") && sub->count("--window") > 0) opt.window = window;

  try {
    if (sub == merge) return cmd_merge(opt);
    if (sub == fit) return cmd_fit(opt);
    if (sub == eval) return cmd_eval(opt);
    if (sub == sample) return cmd_sample(opt);
    if (sub == simulate) return cmd_simulate(opt);
    return cmd_slope(opt);
  } catch (const ParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitParse;
  } catch (const PreconditionError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitPrecondition;
  } catch (const NumericError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitNumeric;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
