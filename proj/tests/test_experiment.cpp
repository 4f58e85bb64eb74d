#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "charlab/experiment.hpp"

using namespace charlab;
namespace fs = std::filesystem;

namespace {

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

std::string render(const std::vector<Record>& rows, bool csv) {
  std::ostringstream os;
  csv ? write_csv(os, rows) : write_jsonl(os, rows);
  return os.str();
}

RunConfig small(const std::string& sub, const std::string& q) {
  RunConfig c;
  c.subcommand = sub;
  c.q_spec = q;
  c.threads = 1;
  return c;
}

}  // namespace

TEST(QSpec, RangesListsAndDuplicates) {
  EXPECT_EQ(parse_q_spec("499"), (std::vector<std::uint64_t>{499}));
  EXPECT_EQ(parse_q_spec("10-13, 7,11"), (std::vector<std::uint64_t>{7, 10, 11, 12, 13}));
  EXPECT_TRUE(parse_q_spec("").empty());
  EXPECT_THROW(parse_q_spec("13-7"), std::invalid_argument);
  EXPECT_THROW(parse_q_spec("1x"), std::invalid_argument);
}

TEST(ParallelFor, EveryIndexOnceAndErrorsPropagate) {
  std::vector<int> hits(1000, 0);
  parallel_for(hits.size(), 4, [&](std::size_t i) { hits[i] += 1; });
  for (int h : hits) EXPECT_EQ(h, 1);
  EXPECT_THROW(parallel_for(10, 3, [](std::size_t i) { if (i == 5) throw std::runtime_error("x"); }),
               std::runtime_error);
}

TEST(Format, SeventeenDigitsRoundTrip) {
  for (double v : {0.1, 1.0 / 3.0, 6.02214076e23, -2.5e-300, 123456789.123456789}) {
    const auto s = format_double(v);
    EXPECT_EQ(std::strtod(s.c_str(), nullptr), v) << s;
  }
  EXPECT_EQ(format_double(1.0), "1");
}

TEST(Emit, JsonlToCsvPreservesNumbersBitExactly) {
  const auto res = run_experiment(small("extreme-s1", "499"));
  const auto jsonl = render(res.records, false);
  const auto csv = render(res.records, true);
  std::istringstream jl(jsonl), cs(csv);
  std::string header, line;
  std::getline(cs, header);
  std::vector<std::string> cols;
  {
    std::stringstream hs(header);
    std::string c;
    while (std::getline(hs, c, ',')) cols.push_back(c);
  }
  std::size_t rows = 0;
  while (std::getline(jl, line)) {
    const auto obj = nlohmann::json::parse(line);
    std::string cl;
    ASSERT_TRUE(std::getline(cs, cl));
    std::vector<std::string> cells;
    std::stringstream ls(cl);
    std::string c;
    while (std::getline(ls, c, ',')) cells.push_back(c);
    while (cells.size() < cols.size()) cells.emplace_back();
    for (std::size_t i = 0; i < cols.size(); ++i) {
      if (!obj.contains(cols[i])) {
        EXPECT_TRUE(cells[i].empty());
        continue;
      }
      const auto& v = obj[cols[i]];
      if (v.is_number_float()) EXPECT_EQ(std::strtod(cells[i].c_str(), nullptr), v.get<double>()) << cols[i];
      if (v.is_number_integer()) EXPECT_EQ(std::stoull(cells[i]), v.get<std::uint64_t>()) << cols[i];
    }
    ++rows;
  }
  EXPECT_EQ(rows, res.records.size());
}

TEST(Emit, EmptyStreamGivesEmptyFileAndManifest) {
  const auto dir = fs::temp_directory_path() / "charlab_emit_test";
  fs::create_directories(dir);
  auto cfg = small("meanvalue", "13");
  cfg.subgroups = "";
  cfg.out = (dir / "empty.jsonl").string();
  const auto res = run_experiment(cfg);
  EXPECT_TRUE(res.records.empty());
  EXPECT_TRUE(res.success());
  emit(cfg, res, 0.0);
  EXPECT_EQ(fs::file_size(cfg.out), 0u);
  const auto m = nlohmann::json::parse(slurp(cfg.out + ".manifest.json"));
  EXPECT_EQ(m["totals"]["records"], 0);
  EXPECT_EQ(m["run_id"], run_id(cfg));
  EXPECT_TRUE(m.contains("version"));
  EXPECT_TRUE(m.contains("timestamp"));
  cfg.out = (dir / "missing_dir" / "x.jsonl").string();
  EXPECT_THROW(emit(cfg, res, 0.0), std::runtime_error);
}

TEST(Run, CompositeModulusIsAnErrorRecord) {
  const auto res = run_experiment(small("meanvalue", "9,13"));
  EXPECT_FALSE(res.success());
  EXPECT_EQ(res.failed, 1u);
  const auto* st = res.records.front().find("status");
  ASSERT_NE(st, nullptr);
  EXPECT_EQ(std::get<std::string>(*st), "error");
}

TEST(Run, SmallSubgroupsAreSkippedNotFailed) {
  const auto res = run_experiment(small("extreme-s1", "499"));
  EXPECT_TRUE(res.success());
  EXPECT_GT(res.skipped, 0u);
  EXPECT_GT(res.ok, 0u);
}

TEST(Run, OutputIndependentOfThreadCount) {
  auto a = small("extreme-half", "101,199");
  auto b = a;
  b.threads = 4;
  EXPECT_EQ(run_id(a), run_id(b));
  EXPECT_EQ(render(run_experiment(a).records, false), render(run_experiment(b).records, false));
}

TEST(Run, StatisticsSubcommands) {
  auto sp = small("spacings", "13");
  sp.n_exponents = {1.0};
  sp.h_exponent = std::log(4.0) / std::log(13.0);
  const auto res = run_experiment(sp);
  ASSERT_EQ(res.records.size(), 1u);
  const auto& r = res.records[0];
  EXPECT_EQ(std::get<std::uint64_t>(*r.find("N")), 12u);
  EXPECT_EQ(std::get<std::uint64_t>(*r.find("H")), 4u);
  EXPECT_NEAR(std::get<double>(*r.find("V")), (4.0 / 13.0) * (9.0 / 13.0), 1e-12);

  auto pc = small("paircorr", "499");
  pc.gammas = {0.0};
  const auto zero = run_experiment(pc);
  EXPECT_EQ(std::get<double>(*zero.records[0].find("R2_mean")), 0.0);

  EXPECT_THROW(run_experiment(small("nope", "13")), std::invalid_argument);
}
