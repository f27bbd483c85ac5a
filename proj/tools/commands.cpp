#include "commands.hpp"

#include <cmath>
#include <iostream>

#include "incomedist/distribution.hpp"
#include "incomedist/empirical.hpp"
#include "incomedist/errors.hpp"
#include "incomedist/fit.hpp"
#include "incomedist/ingest.hpp"
#include "incomedist/params_io.hpp"
#include "incomedist/sde.hpp"
#include "run_io.hpp"

namespace incomedist::cli {

namespace fs = std::filesystem;

namespace {

KeyValueConfig load_config(const Options& opt, bool required) {
  if (opt.config) return KeyValueConfig::load(*opt.config);
  if (required) throw PreconditionError("this command needs --config");
  return {};
}

std::uint64_t resolve_seed(const Options& opt, const KeyValueConfig& cfg) {
  if (opt.seed) return *opt.seed;
  if (!cfg.has("seed")) throw PreconditionError("a seed is required (--seed or 'seed' in the config)");
  const auto s = cfg.get_int("seed");
  if (s < 0) throw ParseError("seed must not be negative");
  return static_cast<std::uint64_t>(s);
}

const fs::path& input(const Options& opt, std::size_t i, const char* what) {
  if (opt.inputs.size() <= i) throw PreconditionError(std::string("missing input file: ") + what);
  return opt.inputs[i];
}

fs::path out(const Options& opt, const char* name) { return opt.out_dir / name; }

void emit(const Options& opt, const char* name, const std::string& text, RunManifest& manifest) {
  const fs::path p = out(opt, name);
  write_atomic(p, text);
  manifest.outputs.emplace_back(fs::path(name).stem().string(), p);
}

void finish(const Options& opt, RunManifest& manifest) {
  write_atomic(out(opt, (manifest.command + "_manifest.txt").c_str()), manifest.to_text());
}

std::string samples_text(const std::vector<double>& xs) {
  std::vector<IncomeSample> s;
  s.reserve(xs.size());
  for (double x : xs) s.push_back({x, Source::Survey, 0});
  return format_samples(s);
}

void report_row_errors(const LoadReport& report, const fs::path& path) {
  for (const auto& e : report.errors) {
    std::cerr << path.string() << ": line " << e.line << ": " << e.message << " (row skipped)\n";
  }
}

}  // namespace

int cmd_merge(const Options& opt) {
  const KeyValueConfig cfg = load_config(opt, true);
  const MergeSettings settings = MergeSettings::from_config(cfg);
  const fs::path& survey_path = input(opt, 0, "survey file");
  const fs::path& wealth_path = input(opt, 1, "wealth file");

  const auto survey = load_samples(survey_path, settings.survey);
  report_row_errors(survey.report, survey_path);
  const auto wealth = load_wealth(wealth_path, settings.wealth);
  report_row_errors(wealth.report, wealth_path);
  const auto conv = incomes_from_wealth(wealth.records, settings.year_from, settings.year_to, settings.fx_rate);
  for (const auto& n : conv.notices) std::cerr << n << "\n";

  const double f = conv.incomes.empty() || survey.records.empty()
                       ? 1.0
                       : find_scale_factor(survey.records, conv.incomes);
  const auto result = incomedist::merge(survey.records, conv.incomes, f, settings.fx_rate, conv.dropped_nonpositive);

  RunManifest manifest;
  manifest.command = "merge";
  manifest.resolved.set("fx_rate", settings.fx_rate);
  manifest.resolved.set("year_from", std::to_string(settings.year_from));
  manifest.resolved.set("year_to", std::to_string(settings.year_to));
  manifest.resolved.set("max_malformed_fraction", settings.survey.max_malformed_fraction);
  manifest.resolved.set("survey.income_column", settings.survey.income_column);
  manifest.resolved.set("survey.year_column", settings.survey.year_column);
  manifest.resolved.set("wealth.id_column", settings.wealth.id_column);
  manifest.resolved.set("wealth.year_column", settings.wealth.year_column);
  manifest.resolved.set("wealth.wealth_column", settings.wealth.wealth_column);
  manifest.resolved.set("wealth.currency_column", settings.wealth.currency_column);
  manifest.inputs = {{"survey", survey_path}, {"wealth", wealth_path}};

  const std::string report = result.report.to_config().to_text();
  emit(opt, "merged.csv", format_samples(result.samples), manifest);
  emit(opt, "merge_report.txt", report, manifest);
  finish(opt, manifest);
  std::cout << report;
  return 0;
}

int cmd_fit(const Options& opt) {
  const KeyValueConfig cfg = load_config(opt, false);
  const fs::path& path = input(opt, 0, "samples file");
  const auto loaded = load_samples(path);
  report_row_errors(loaded.report, path);
  const auto ecdf = build_ccdf(std::span<const IncomeSample>(loaded.records));

  CrossoverOverrides overrides;
  overrides.m0 = opt.m0 ? opt.m0 : (cfg.has("fit.m0") ? std::optional(cfg.get_double("fit.m0")) : std::nullopt);
  overrides.m1 = opt.m1 ? opt.m1 : (cfg.has("fit.m1") ? std::optional(cfg.get_double("fit.m1")) : std::nullopt);
  const FitReport rep = fit_pipeline(ecdf, overrides);

  RunManifest manifest;
  manifest.command = "fit";
  if (overrides.m0) manifest.resolved.set("fit.m0", *overrides.m0);
  if (overrides.m1) manifest.resolved.set("fit.m1", *overrides.m1);
  manifest.inputs = {{"samples", path}};

  const std::string text = rep.to_config().to_text();
  const std::string table = rep.to_delimited();
  emit(opt, "fit_report.txt", text, manifest);
  emit(opt, "fit_report.tsv", table, manifest);
  finish(opt, manifest);
  std::cout << text << "\n" << table;
  return 0;
}

int cmd_eval(const Options& opt) {
  const KeyValueConfig cfg = load_config(opt, true);
  const EffectiveParams p = read_effective(cfg);
  p.validate();
  const auto points = cfg.get_int("grid.points", 200);
  if (points < 2) throw PreconditionError("grid.points must be >= 2");
  const double lo = cfg.get_double("grid.min", p.m_init > 0.0 ? p.m_init : 1.0e-3 * p.T);
  const double hi = cfg.get_double("grid.max", std::isfinite(p.m1) ? 1.0e3 * p.m1 : 1.0e4 * p.m0);
  if (!(lo > 0.0 && hi > lo && lo >= p.m_init)) {
    throw PreconditionError("grid needs m_init <= grid.min < grid.max with grid.min > 0");
  }

  const ModelCCDF model(p);
  std::string table = "m\tpdf\tccdf\n";
  std::string loglog = "m\tccdf\n";
  const auto row = [&](double m) {
    const double c = model.ccdf(m);
    table += format_number(m) + "\t" + format_number(model.pdf(m)) + "\t" + format_number(c) + "\n";
    if (m > 0.0) loglog += format_number(m) + "\t" + format_number(c) + "\n";
  };
  if (lo > p.m_init) row(p.m_init);
  for (std::int64_t i = 0; i < points; ++i) {
    row(i + 1 == points ? hi : lo * std::pow(hi / lo, static_cast<double>(i) / static_cast<double>(points - 1)));
  }

  RunManifest manifest;
  manifest.command = "eval";
  write_effective(manifest.resolved, p);
  manifest.resolved.set("grid.points", std::to_string(points));
  manifest.resolved.set("grid.min", lo);
  manifest.resolved.set("grid.max", hi);
  emit(opt, "eval.tsv", table, manifest);
  emit(opt, "loglog.tsv", loglog, manifest);
  finish(opt, manifest);
  std::cout << "wrote " << points + (lo > p.m_init ? 1 : 0) << " rows to " << out(opt, "eval.tsv").string() << "\n";
  return 0;
}

int cmd_sample(const Options& opt) {
  const KeyValueConfig cfg = load_config(opt, true);
  const EffectiveParams p = read_effective(cfg);
  p.validate();
  const std::uint64_t seed = resolve_seed(opt, cfg);
  const auto n = cfg.get_int("n", 100000);
  if (n < 1) throw PreconditionError("n must be >= 1");
  const auto xs = ModelCCDF(p).sample(static_cast<std::size_t>(n), seed);

  RunManifest manifest;
  manifest.command = "sample";
  manifest.seed = seed;
  write_effective(manifest.resolved, p);
  manifest.resolved.set("n", std::to_string(n));
  emit(opt, "samples.csv", samples_text(xs), manifest);
  finish(opt, manifest);
  std::cout << "wrote " << n << " samples to " << out(opt, "samples.csv").string() << "\n";
  return 0;
}

int cmd_simulate(const Options& opt) {
  KeyValueConfig cfg = load_config(opt, true);
  if (opt.seed) cfg.set("seed", std::to_string(*opt.seed));
  if (!cfg.has("seed")) throw PreconditionError("a seed is required (--seed or 'seed' in the config)");
  const SimConfig sim = SimConfig::from_config(cfg);
  const auto bins = cfg.get_int("bins", 60);
  if (bins < 1) throw PreconditionError("bins must be >= 1");
  const auto xs = simulate_samples(sim);
  const auto hist = log_histogram(xs, static_cast<std::size_t>(bins));

  const EffectiveParams eff = effective_from_micro(sim.params);
  const double ks = ks_distance(build_ccdf(std::span<const double>(xs)), ModelCCDF(eff));

  RunManifest manifest;
  manifest.command = "simulate";
  manifest.seed = sim.seed;
  manifest.resolved = sim.to_config();
  manifest.resolved.set("bins", std::to_string(bins));
  emit(opt, "histogram.tsv", hist.to_delimited(), manifest);
  emit(opt, "sim_samples.csv", samples_text(xs), manifest);
  finish(opt, manifest);
  std::cout << "samples = " << xs.size() << "\n"
            << "dt = " << format_number(sim.effective_dt()) << "\n"
            << "ks_vs_model = " << format_number(ks) << "\n";
  return 0;
}

int cmd_slope(const Options& opt) {
  const KeyValueConfig cfg = load_config(opt, false);
  const fs::path& path = input(opt, 0, "samples file");
  const auto loaded = load_samples(path);
  report_row_errors(loaded.report, path);
  const auto ecdf = build_ccdf(std::span<const IncomeSample>(loaded.records));
  const auto window = opt.window ? static_cast<std::int64_t>(*opt.window) : cfg.get_int("slope.window", 100);
  if (window < 3) throw PreconditionError("slope window must be >= 3");
  const auto profile = local_log_slope(ecdf, static_cast<std::size_t>(window));

  std::string table = "income\tslope\n";
  for (const auto& pt : profile.points) table += format_number(pt.income) + "\t" + format_number(pt.slope) + "\n";

  RunManifest manifest;
  manifest.command = "slope";
  manifest.resolved.set("slope.window", std::to_string(window));
  manifest.inputs = {{"samples", path}};
  emit(opt, "slope.tsv", table, manifest);
  finish(opt, manifest);
  std::cout << "windows = " << profile.points.size() << "\nskipped = " << profile.skipped << "\n";
  return 0;
}

}  // namespace incomedist::cli
