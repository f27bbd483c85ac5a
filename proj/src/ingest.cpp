#include "incomedist/ingest.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <optional>
#include <sstream>

#include <boost/math/tools/minima.hpp>

#include "incomedist/errors.hpp"
#include "incomedist/params.hpp"

namespace incomedist {

namespace {

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot read " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return std::string(s.substr(first, last - first + 1));
}

// Splits one delimited line; double quotes protect delimiters ("" escapes a quote).
std::vector<std::string> split_fields(std::string_view line, char delim) {
  std::vector<std::string> fields;
  std::string cur;
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quoted) {
      if (c == '"' && i + 1 < line.size() && line[i + 1] == '"') {
        cur += '"';
        ++i;
      } else if (c == '"') {
        quoted = false;
      } else {
        cur += c;
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == delim) {
      fields.push_back(trim(cur));
      cur.clear();
    } else {
      cur += c;
    }
  }
  fields.push_back(trim(cur));
  return fields;
}

struct Table {
  char delim = ',';
  std::vector<std::string> header;
  std::vector<std::pair<std::size_t, std::vector<std::string>>> rows;  // (line, fields)

  std::optional<std::size_t> column(const std::string& name) const {
    const auto it = std::find(header.begin(), header.end(), name);
    if (it == header.end()) return std::nullopt;
    return static_cast<std::size_t>(it - header.begin());
  }
};

Table parse_table(std::string_view text) {
  Table t;
  std::size_t line_no = 0;
  bool have_header = false;
  while (!text.empty()) {
    const auto eol = text.find('\n');
    std::string_view line = text.substr(0, eol);
    text = eol == std::string_view::npos ? std::string_view{} : text.substr(eol + 1);
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (trim(line).empty()) continue;
    if (!have_header) {
      t.delim = line.find('\t') != std::string_view::npos ? '\t' : ',';
      t.header = split_fields(line, t.delim);
      have_header = true;
      continue;
    }
    t.rows.emplace_back(line_no, split_fields(line, t.delim));
  }
  return t;
}

std::size_t required_column(const Table& t, const std::string& name, const std::string& origin) {
  const auto c = t.column(name);
  if (!c) throw ParseError(origin + ": header lacks required column '" + name + "'");
  return *c;
}

void enforce_malformed_limit(const LoadReport& report, double limit, const std::string& origin) {
  if (report.errors.empty() || report.malformed_fraction() <= limit) return;
  std::string msg = origin + ": " + std::to_string(report.errors.size()) + " of " +
                    std::to_string(report.rows_read) + " rows malformed";
  const std::size_t shown = std::min<std::size_t>(report.errors.size(), 5);
  for (std::size_t i = 0; i < shown; ++i) {
    msg += "\n  line " + std::to_string(report.errors[i].line) + ": " + report.errors[i].message;
  }
  throw ParseError(msg);
}

const std::string& field(const std::vector<std::string>& row, std::size_t col) {
  if (col >= row.size()) throw ParseError("missing field " + std::to_string(col + 1));
  return row[col];
}

}  // namespace

MergeSettings MergeSettings::from_config(const KeyValueConfig& cfg) {
  MergeSettings s;
  s.survey.income_column = cfg.get_string("survey.income_column", s.survey.income_column);
  s.survey.year_column = cfg.get_string("survey.year_column", s.survey.year_column);
  s.wealth.id_column = cfg.get_string("wealth.id_column", s.wealth.id_column);
  s.wealth.year_column = cfg.get_string("wealth.year_column", s.wealth.year_column);
  s.wealth.wealth_column = cfg.get_string("wealth.wealth_column", s.wealth.wealth_column);
  s.wealth.currency_column = cfg.get_string("wealth.currency_column", s.wealth.currency_column);
  const double limit = cfg.get_double("max_malformed_fraction", 0.01);
  s.survey.max_malformed_fraction = limit;
  s.wealth.max_malformed_fraction = limit;
  s.fx_rate = cfg.get_double("fx_rate");
  s.year_from = static_cast<int>(cfg.get_int("year_from"));
  s.year_to = static_cast<int>(cfg.get_int("year_to"));
  return s;
}

Loaded<IncomeSample> parse_samples(std::string_view text, const SampleSchema& schema,
                                   const std::string& origin) {
  Loaded<IncomeSample> out;
  const Table t = parse_table(text);
  if (t.header.empty()) return out;
  const std::size_t income_col = required_column(t, schema.income_column, origin);
  const auto year_col = t.column(schema.year_column);
  const auto source_col = t.column(schema.source_column);
  for (const auto& [line, row] : t.rows) {
    ++out.report.rows_read;
    try {
      IncomeSample s;
      s.income = parse_double(field(row, income_col), "income");
      if (!std::isfinite(s.income)) throw ParseError("income is not finite");
      if (s.income < 0.0) throw ParseError("negative income");
      if (year_col && !field(row, *year_col).empty()) {
        s.year = static_cast<int>(parse_int(field(row, *year_col), "year"));
      }
      if (source_col && !field(row, *source_col).empty()) {
        s.source = source_from_string(field(row, *source_col));
      }
      if (s.source == Source::RichList && !(s.income > 0.0)) {
        throw ParseError("rich-list income must be > 0");
      }
      out.records.push_back(s);
    } catch (const ParseError& err) {
      out.report.errors.push_back({line, err.what()});
    }
  }
  enforce_malformed_limit(out.report, schema.max_malformed_fraction, origin);
  return out;
}

Loaded<WealthRecord> parse_wealth(std::string_view text, const WealthSchema& schema,
                                  const std::string& origin) {
  Loaded<WealthRecord> out;
  const Table t = parse_table(text);
  if (t.header.empty()) return out;
  const std::size_t id_col = required_column(t, schema.id_column, origin);
  const std::size_t year_col = required_column(t, schema.year_column, origin);
  const std::size_t wealth_col = required_column(t, schema.wealth_column, origin);
  const std::size_t currency_col = required_column(t, schema.currency_column, origin);
  std::map<std::string, std::size_t> index;
  for (const auto& [line, row] : t.rows) {
    ++out.report.rows_read;
    try {
      const std::string& id = field(row, id_col);
      if (id.empty()) throw ParseError("empty id");
      const int year = static_cast<int>(parse_int(field(row, year_col), "year"));
      const double wealth = parse_double(field(row, wealth_col), "wealth");
      if (!std::isfinite(wealth) || !(wealth > 0.0)) throw ParseError("wealth must be positive");
      const std::string& currency = field(row, currency_col);
      auto [it, inserted] = index.try_emplace(id, out.records.size());
      if (inserted) out.records.push_back({id, {}, currency});
      auto& rec = out.records[it->second];
      if (rec.currency != currency) throw ParseError("currency differs from earlier rows of " + id);
      if (!rec.wealth_by_year.emplace(year, wealth).second) {
        throw ParseError("duplicate year " + std::to_string(year) + " for " + id);
      }
    } catch (const ParseError& err) {
      out.report.errors.push_back({line, err.what()});
    }
  }
  enforce_malformed_limit(out.report, schema.max_malformed_fraction, origin);
  return out;
}

Loaded<IncomeSample> load_samples(const std::filesystem::path& path, const SampleSchema& schema) {
  return parse_samples(read_file(path), schema, path.string());
}

Loaded<WealthRecord> load_wealth(const std::filesystem::path& path, const WealthSchema& schema) {
  return parse_wealth(read_file(path), schema, path.string());
}

std::string format_samples(std::span<const IncomeSample> samples) {
  std::string out = "income,source,year\n";
  for (const auto& s : samples) {
    out += format_exact(s.income) + "," + to_string(s.source) + "," + std::to_string(s.year) + "\n";
  }
  return out;
}

WealthConversion incomes_from_wealth(std::span<const WealthRecord> records, int year_from,
                                     int year_to, double fx) {
  require(std::isfinite(fx) && fx > 0.0, "incomes_from_wealth: exchange rate must be > 0");
  WealthConversion out;
  for (const auto& rec : records) {
    const auto from = rec.wealth_by_year.find(year_from);
    const auto to = rec.wealth_by_year.find(year_to);
    if (from == rec.wealth_by_year.end() || to == rec.wealth_by_year.end()) {
      ++out.skipped_missing_year;
      out.notices.push_back("record '" + rec.entity_id + "' skipped: missing year " +
                            std::to_string(from == rec.wealth_by_year.end() ? year_from : year_to));
      continue;
    }
    const double income = (to->second - from->second) * fx;
    if (!(income > 0.0)) {
      ++out.dropped_nonpositive;
      continue;
    }
    out.incomes.push_back({income, Source::RichList, year_to});
  }
  return out;
}

double max_log_gap_top_decile(std::span<const double> incomes) {
  std::vector<double> xs(incomes.begin(), incomes.end());
  require(xs.size() >= 2, "max_log_gap_top_decile: need at least 2 incomes");
  const std::size_t k = std::max<std::size_t>(2, xs.size() / 10);
  std::partial_sort(xs.begin(), xs.begin() + k, xs.end(), std::greater<>());
  double gap = 0.0;
  for (std::size_t i = 0; i + 1 < k; ++i) {
    if (xs[i + 1] > 0.0) gap = std::max(gap, std::log(xs[i] / xs[i + 1]));
  }
  return gap;
}

namespace {

// Descending top-k of the survey (pre-sorted) merged with f * rich (pre-sorted).
std::vector<double> joint_top(const std::vector<double>& survey_desc,
                              const std::vector<double>& rich_desc, double f, std::size_t k) {
  std::vector<double> top;
  top.reserve(k);
  std::size_t i = 0;
  std::size_t j = 0;
  while (top.size() < k && (i < survey_desc.size() || j < rich_desc.size())) {
    const bool take_rich =
        j < rich_desc.size() && (i >= survey_desc.size() || f * rich_desc[j] > survey_desc[i]);
    top.push_back(take_rich ? f * rich_desc[j++] : survey_desc[i++]);
  }
  return top;
}

double standardized_gap_excess(const std::vector<double>& top_desc) {
  // Renyi representation: for a locally power-law tail, k * log(x_(k) / x_(k+1))
  // are i.i.d. exponential. Standardize by the median-based scale and compare
  // the maximum with the 1% level of the maximum of K exponentials.
  std::vector<double> z;
  z.reserve(top_desc.size());
  for (std::size_t k = 0; k + 1 < top_desc.size(); ++k) {
    if (!(top_desc[k + 1] > 0.0)) break;
    z.push_back(static_cast<double>(k + 1) * std::log(top_desc[k] / top_desc[k + 1]));
  }
  if (z.size() < 2) return 0.0;
  std::vector<double> sorted(z);
  std::nth_element(sorted.begin(), sorted.begin() + sorted.size() / 2, sorted.end());
  const double scale = sorted[sorted.size() / 2] / std::log(2.0);
  if (!(scale > 0.0)) return 0.0;
  const double level = std::log(static_cast<double>(z.size())) + std::log(100.0);
  const double zmax = *std::max_element(z.begin(), z.end()) / scale;
  return std::max(0.0, zmax - level);
}

struct GapScorer {
  std::vector<double> survey_desc;
  std::vector<double> rich_desc;
  std::size_t k;

  GapScorer(std::span<const IncomeSample> survey, std::span<const IncomeSample> richlist) {
    for (const auto& s : survey) survey_desc.push_back(s.income);
    for (const auto& s : richlist) rich_desc.push_back(s.income);
    std::sort(survey_desc.begin(), survey_desc.end(), std::greater<>());
    std::sort(rich_desc.begin(), rich_desc.end(), std::greater<>());
    k = std::max<std::size_t>(2, (survey_desc.size() + rich_desc.size()) / 10);
  }
  double operator()(double f) const {
    return standardized_gap_excess(joint_top(survey_desc, rich_desc, f, k));
  }
};

}  // namespace

double gap_score(std::span<const IncomeSample> survey, std::span<const IncomeSample> richlist,
                 double f) {
  require(f > 0.0, "gap_score: factor must be > 0");
  return GapScorer(survey, richlist)(f);
}

double find_scale_factor(std::span<const IncomeSample> survey,
                         std::span<const IncomeSample> richlist) {
  require(!survey.empty() && !richlist.empty(), "find_scale_factor: empty input");
  const GapScorer score(survey, richlist);
  const double survey_max = score.survey_desc.front();
  const double rich_min = score.rich_desc.back();
  if (survey_max >= rich_min) return 1.0;

  double survey_min = kInfinity;
  for (double x : score.survey_desc) {
    if (x > 0.0) survey_min = std::min(survey_min, x);
  }
  require(std::isfinite(survey_min), "find_scale_factor: survey has no positive income");
  const double log_lo = std::log(survey_min / score.rich_desc.front());
  constexpr int kGrid = 400;
  std::vector<double> grid(kGrid);
  std::vector<double> scores(kGrid);
  for (int i = 0; i < kGrid; ++i) {
    grid[i] = i + 1 == kGrid ? 1.0 : std::exp(log_lo * (1.0 - static_cast<double>(i) / (kGrid - 1)));
    scores[i] = score(grid[i]);
  }
  const double best = *std::min_element(scores.begin(), scores.end());
  int idx = kGrid - 1;
  while (scores[idx] != best) --idx;  // ties go to the larger factor
  if (idx + 1 == kGrid) return grid[idx];

  if (best == 0.0) {
    // Largest factor still on the zero plateau.
    double lo = std::log(grid[idx]);
    double hi = std::log(grid[idx + 1]);
    for (int it = 0; it < 60; ++it) {
      const double mid = 0.5 * (lo + hi);
      (score(std::exp(mid)) == 0.0 ? lo : hi) = mid;
    }
    return std::exp(lo);
  }
  const double a = std::log(grid[std::max(idx - 1, 0)]);
  const double b = std::log(grid[idx + 1]);
  const auto [x, fx] = boost::math::tools::brent_find_minima(
      [&](double y) { return score(std::exp(y)); }, a, b, 40);
  return fx < best ? std::exp(x) : grid[idx];
}

KeyValueConfig MergeReport::to_config() const {
  KeyValueConfig c;
  c.set("scale_factor", format_number(scale_factor));
  c.set("overlap_lo", format_number(overlap_lo));
  c.set("overlap_hi", format_number(overlap_hi));
  c.set("n_survey", std::to_string(n_survey));
  c.set("n_richlist_kept", std::to_string(n_richlist_kept));
  c.set("n_richlist_dropped_nonpositive", std::to_string(n_richlist_dropped_nonpositive));
  c.set("exchange_rate_used", format_number(exchange_rate_used));
  return c;
}

MergeResult merge(std::span<const IncomeSample> survey, std::span<const IncomeSample> richlist,
                  double f, double exchange_rate_used, std::size_t dropped_nonpositive) {
  require(std::isfinite(f) && f > 0.0, "merge: scale factor must be > 0");
  MergeResult out;
  out.samples.assign(survey.begin(), survey.end());
  for (auto s : richlist) {
    s.income *= f;
    out.samples.push_back(s);
  }
  auto& r = out.report;
  r.scale_factor = f;
  r.n_survey = survey.size();
  r.n_richlist_kept = richlist.size();
  r.n_richlist_dropped_nonpositive = dropped_nonpositive;
  r.exchange_rate_used = exchange_rate_used;
  if (!survey.empty() && !richlist.empty()) {
    const auto [smin, smax] = std::minmax_element(survey.begin(), survey.end(),
        [](const auto& x, const auto& y) { return x.income < y.income; });
    const auto [rmin, rmax] = std::minmax_element(richlist.begin(), richlist.end(),
        [](const auto& x, const auto& y) { return x.income < y.income; });
    r.overlap_lo = std::max(smin->income, f * rmin->income);
    r.overlap_hi = std::min(smax->income, f * rmax->income);
  }
  return out;
}

}  // namespace incomedist
