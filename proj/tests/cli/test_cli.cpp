#include <doctest.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "../common/merge_fixture.hpp"
#include "incomedist/ingest.hpp"
#include "incomedist/keyvalue.hpp"

namespace fs = std::filesystem;
using namespace incomedist;

namespace {

const fs::path kWork = fs::path(INCOMEDIST_TEST_WORKDIR) / "cli";

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void spit(const fs::path& p, const std::string& text) {
  fs::create_directories(p.parent_path());
  std::ofstream(p, std::ios::binary) << text;
}

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result run(const std::string& args) {
  fs::create_directories(kWork);
  const fs::path out = kWork / "stdout.txt";
  const fs::path err = kWork / "stderr.txt";
  const std::string cmd = std::string("cd '") + kWork.string() + "' && '" + INCOMEDIST_CLI + "' " + args +
                          " > '" + out.string() + "' 2> '" + err.string() + "'";
  const int status = std::system(cmd.c_str());
  return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, slurp(out), slurp(err)};
}

std::vector<std::vector<double>> read_table(const fs::path& p) {
  std::istringstream in(slurp(p));
  std::string line;
  std::getline(in, line);
  std::vector<std::vector<double>> rows;
  while (std::getline(in, line)) {
    std::istringstream ls(line);
    std::vector<double> row;
    std::string cell;
    while (std::getline(ls, cell, '\t')) row.push_back(parse_double(cell, "table"));
    rows.push_back(row);
  }
  return rows;
}

const char* kEu2007 = "T = 37000\nm0 = 160000\nm1 = 300000\nalpha = 2.8643\nalpha1 = 0.7\n";

}  // namespace

TEST_CASE("sample is reproducible and its manifest replays it") {
  spit(kWork / "eu2007.cfg", std::string(kEu2007) + "n = 100000\n");
  REQUIRE(run("sample --config eu2007.cfg --seed 11 --out-dir s1").code == 0);
  REQUIRE(run("sample --config eu2007.cfg --seed 11 --out-dir s2").code == 0);
  CHECK(slurp(kWork / "s1/samples.csv") == slurp(kWork / "s2/samples.csv"));
  CHECK(slurp(kWork / "s1/sample_manifest.txt") == slurp(kWork / "s2/sample_manifest.txt"));
  REQUIRE(run("sample --config s1/sample_manifest.txt --out-dir s3").code == 0);
  CHECK(slurp(kWork / "s3/samples.csv") == slurp(kWork / "s1/samples.csv"));
  CHECK(run("sample --config eu2007.cfg --out-dir s4").code == 3);
}

TEST_CASE("sample file feeds fit") {
  spit(kWork / "eu2007.cfg", std::string(kEu2007) + "n = 100000\n");
  REQUIRE(run("sample --config eu2007.cfg --seed 12 --out-dir rt").code == 0);
  const auto r = run("fit rt/samples.csv --out-dir rt");
  REQUIRE(r.code == 0);
  const auto rep = KeyValueConfig::load(kWork / "rt/fit_report.txt");
  CHECK(rep.get_double("alpha") > 1.0);
  CHECK(rep.get_string("fit.n_points", "") == "100000");
  CHECK(r.out.find("parameter\tvalue\tstd_error") != std::string::npos);
  CHECK(fs::exists(kWork / "rt/fit_report.tsv"));

  const auto o = run("fit rt/samples.csv --m0 150000 --m1 320000 --out-dir rt_override");
  REQUIRE(o.code == 0);
  const auto orep = KeyValueConfig::load(kWork / "rt_override/fit_report.txt");
  CHECK(orep.get_double("m0") == 150000.0);
  CHECK(orep.get_double("m1") == 320000.0);
  CHECK(orep.get_string("fit.m0_overridden", "") == "true");
  const auto man = KeyValueConfig::load(kWork / "rt_override/fit_manifest.txt");
  CHECK(man.get_double("fit.m0") == 150000.0);
}

TEST_CASE("malformed sample file exits 2 with line diagnostics") {
  spit(kWork / "bad.csv", "income,source,year\n100,survey,2007\nabc,survey,2007\n");
  const auto r = run("fit bad.csv");
  CHECK(r.code == 2);
  CHECK(r.err.find("line 3") != std::string::npos);
  CHECK(run("fit missing_file.csv").code == 2);
  CHECK(run("no_such_command").code == 2);
}

TEST_CASE("eval table") {
  spit(kWork / "eu2007.cfg", kEu2007);
  REQUIRE(run("eval --config eu2007.cfg --out-dir ev").code == 0);
  const auto rows = read_table(kWork / "ev/eval.tsv");
  REQUIRE(rows.size() == 201);
  CHECK(rows[0][0] == 0.0);
  CHECK(rows[0][2] == 1.0);
  for (std::size_t i = 1; i < rows.size(); ++i) CHECK(rows[i][2] <= rows[i - 1][2]);
  // Top decade of the grid.
  const auto& b = rows.back();
  std::size_t k = rows.size() - 1;
  while (rows[k - 1][0] >= b[0] / 10.0) --k;
  const auto& a = rows[k];
  REQUIRE(b[0] / a[0] > 9.0);
  const double slope = std::log(b[2] / a[2]) / std::log(b[0] / a[0]);
  CHECK(slope == doctest::Approx(-0.7).epsilon(0.01));
  CHECK(read_table(kWork / "ev/loglog.tsv").size() == 200);

  spit(kWork / "bad_params.cfg", "T = 37000\nm0 = 160000\nalpha = 0.5\n");
  CHECK(run("eval --config bad_params.cfg").code == 3);
}

TEST_CASE("merge with an empty wealth file keeps the survey") {
  const std::string survey = "income,source,year\n1000,survey,2007\n25000.5,survey,2007\n";
  spit(kWork / "m/survey.csv", survey);
  spit(kWork / "m/wealth.csv", "");
  spit(kWork / "m/merge.cfg", "fx_rate = 0.75\nyear_from = 2006\nyear_to = 2007\n");
  const auto r = run("merge m/survey.csv m/wealth.csv --config m/merge.cfg --out-dir m/out");
  REQUIRE(r.code == 0);
  CHECK(slurp(kWork / "m/out/merged.csv") == survey);
  CHECK(KeyValueConfig::load(kWork / "m/out/merge_report.txt").get_double("scale_factor") == 1.0);
}

TEST_CASE("merge recovers the gap-closing factor and is deterministic") {
  const auto fx = testing::pareto_merge_fixture(0.7, 20000, 1.0e4 * std::pow(0.02, -1.0 / 0.7), 0.01, 21);
  spit(kWork / "g/survey.csv", format_samples(fx.survey));
  std::string wealth = "id,year,wealth,currency\n";
  for (std::size_t i = 0; i < fx.richlist.size(); ++i) {
    const std::string id = "p" + std::to_string(i);
    wealth += id + ",2006,1,USD\n";
    wealth += id + ",2007," + format_exact(1.0 + fx.richlist[i].income) + ",USD\n";
  }
  wealth += "loser,2006,10,USD\nloser,2007,4,USD\n";
  spit(kWork / "g/wealth.csv", wealth);
  spit(kWork / "g/merge.cfg", "fx_rate = 1\nyear_from = 2006\nyear_to = 2007\n");
  REQUIRE(run("merge g/survey.csv g/wealth.csv --config g/merge.cfg --out-dir g/a").code == 0);
  REQUIRE(run("merge g/survey.csv g/wealth.csv --config g/merge.cfg --out-dir g/a2").code == 0);
  const auto rep = KeyValueConfig::load(kWork / "g/a/merge_report.txt");
  CHECK(rep.get_double("scale_factor") == doctest::Approx(0.01).epsilon(0.2));
  CHECK(rep.get_int("n_richlist_dropped_nonpositive") == 1);
  CHECK(rep.get_int("n_richlist_kept") == static_cast<std::int64_t>(fx.richlist.size()));
  CHECK(slurp(kWork / "g/a/merge_manifest.txt") == slurp(kWork / "g/a2/merge_manifest.txt"));
  const auto merged = load_samples(kWork / "g/a/merged.csv");
  CHECK(merged.records.size() == fx.survey.size() + fx.richlist.size());
  CHECK(merged.records.back().source == Source::RichList);
}

TEST_CASE("simulate is reproducible and reports the model distance") {
  spit(kWork / "sim.cfg", std::string(kEu2007) +
                              "n_walkers = 200\nburn_in = 5000\nsample_every = 500\ntotal_samples = 2000\n");
  const auto a = run("simulate --config sim.cfg --seed 5 --out-dir sa");
  REQUIRE(a.code == 0);
  REQUIRE(run("simulate --config sim.cfg --seed 5 --out-dir sb").code == 0);
  CHECK(slurp(kWork / "sa/histogram.tsv") == slurp(kWork / "sb/histogram.tsv"));
  CHECK(slurp(kWork / "sa/sim_samples.csv") == slurp(kWork / "sb/sim_samples.csv"));
  CHECK(a.out.find("ks_vs_model = ") != std::string::npos);
  CHECK(run("simulate --config sim.cfg --out-dir sc").code == 3);
  spit(kWork / "unstable.cfg", std::string(kEu2007) + "dt = 1\nseed = 1\n");
  CHECK(run("simulate --config unstable.cfg --out-dir sd").code == 3);
}

TEST_CASE("slope command") {
  spit(kWork / "eu2007.cfg", std::string(kEu2007) + "n = 5000\n");
  REQUIRE(run("sample --config eu2007.cfg --seed 2 --out-dir sl").code == 0);
  REQUIRE(run("slope sl/samples.csv --window 50 --out-dir sl").code == 0);
  CHECK(read_table(kWork / "sl/slope.tsv").size() == 5000 - 50 + 1);
  CHECK(run("slope sl/samples.csv --window 2 --out-dir sl").code == 3);
}
