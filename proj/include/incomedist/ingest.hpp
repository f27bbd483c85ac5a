#pragma once

#include <cstddef>
#include <filesystem>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "incomedist/empirical.hpp"
#include "incomedist/keyvalue.hpp"

namespace incomedist {

/// One rich-list entity with its wealth per year (source currency).
struct WealthRecord {
  std::string entity_id;
  std::map<int, double> wealth_by_year;
  std::string currency;
};

struct RowError {
  std::size_t line = 0;
  std::string message;
};

struct LoadReport {
  std::size_t rows_read = 0;
  std::vector<RowError> errors;

  double malformed_fraction() const {
    return rows_read == 0 ? 0.0 : static_cast<double>(errors.size()) / static_cast<double>(rows_read);
  }
};

template <class T>
struct Loaded {
  std::vector<T> records;
  LoadReport report;
};

/// Column names for sample files (survey or merged). `year` and `source` are
/// optional columns; `weight` is accepted and ignored.
struct SampleSchema {
  std::string income_column = "income";
  std::string year_column = "year";
  std::string source_column = "source";
  double max_malformed_fraction = 0.01;
};

struct WealthSchema {
  std::string id_column = "id";
  std::string year_column = "year";
  std::string wealth_column = "wealth";
  std::string currency_column = "currency";
  double max_malformed_fraction = 0.01;
};

/// Schema and conversion settings of a merge run.
struct MergeSettings {
  SampleSchema survey;
  WealthSchema wealth;
  double fx_rate = 1.0;
  int year_from = 0;
  int year_to = 0;

  /// Keys: survey.income_column, survey.year_column, wealth.id_column,
  /// wealth.year_column, wealth.wealth_column, wealth.currency_column,
  /// max_malformed_fraction, fx_rate, year_from, year_to (the last three required).
  static MergeSettings from_config(const KeyValueConfig& cfg);
};

/// Comma- or tab-delimited text with a header row. Malformed rows are listed
/// with their line numbers; when they exceed the schema's fraction the load
/// aborts with ParseError. Negative incomes are malformed.
Loaded<IncomeSample> load_samples(const std::filesystem::path& path, const SampleSchema& schema = {});
Loaded<WealthRecord> load_wealth(const std::filesystem::path& path, const WealthSchema& schema = {});

Loaded<IncomeSample> parse_samples(std::string_view text, const SampleSchema& schema = {},
                                   const std::string& origin = "<text>");
Loaded<WealthRecord> parse_wealth(std::string_view text, const WealthSchema& schema = {},
                                  const std::string& origin = "<text>");

/// `income,source,year` with incomes in shortest round-trip form.
std::string format_samples(std::span<const IncomeSample> samples);

struct WealthConversion {
  std::vector<IncomeSample> incomes;
  std::size_t dropped_nonpositive = 0;
  std::size_t skipped_missing_year = 0;
  std::vector<std::string> notices;
};

/// income = (wealth[year_to] - wealth[year_from]) * fx, kept only when > 0.
WealthConversion incomes_from_wealth(std::span<const WealthRecord> records, int year_from,
                                     int year_to, double fx);

/// Largest log-ratio of consecutive incomes within the top decile.
double max_log_gap_top_decile(std::span<const double> incomes);

/// Gap score of the joint sample survey + f * richlist: the largest
/// rank-standardized log spacing in the joint top decile, in excess of its
/// 1% extreme-value level (0 when no spacing stands out).
double gap_score(std::span<const IncomeSample> survey, std::span<const IncomeSample> richlist,
                 double f);

/// Factor f in [min(survey)/max(richlist), 1] removing the horizontal gap
/// between the survey and rich-list segments; 1 when no gap exists.
double find_scale_factor(std::span<const IncomeSample> survey,
                         std::span<const IncomeSample> richlist);

struct MergeReport {
  double scale_factor = 1.0;
  double overlap_lo = 0.0;  // overlap of survey and scaled rich-list ranges;
  double overlap_hi = 0.0;  // lo > hi means a gap remains
  std::size_t n_survey = 0;
  std::size_t n_richlist_kept = 0;
  std::size_t n_richlist_dropped_nonpositive = 0;
  double exchange_rate_used = 1.0;

  KeyValueConfig to_config() const;
};

struct MergeResult {
  std::vector<IncomeSample> samples;
  MergeReport report;
};

/// Survey samples followed by rich-list samples scaled by f.
MergeResult merge(std::span<const IncomeSample> survey, std::span<const IncomeSample> richlist,
                  double f, double exchange_rate_used = 1.0, std::size_t dropped_nonpositive = 0);

}  // namespace incomedist
