#include "config.hpp"
#include "experiment.hpp"

#include "featrank/csv.hpp"
#include "support/synthetic.hpp"

#include "json.hpp"

#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <sys/wait.h>

namespace featrank::app {
namespace {

namespace fs = std::filesystem;

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void spit(const fs::path& p, const std::string& s) {
  std::ofstream out(p, std::ios::binary);
  out << s;
}

class Workdir : public ::testing::Test {
 protected:
  void SetUp() override {
    const auto* info = ::testing::UnitTest::GetInstance()->current_test_info();
    dir_ = fs::temp_directory_path() / ("featrank_cli_" + std::string(info->name()));
    fs::remove_all(dir_);
    fs::create_directories(dir_);
    spit(dir_ / "bench.csv", featrank::testing::synthetic_benchmark_csv(4));
  }
  void TearDown() override { fs::remove_all(dir_); }

  /// Config text for a small sweep over the synthetic file.
  std::string small_config(const std::string& extra_protocol = "") const {
    return "[data]\npath = " + (dir_ / "bench.csv").string() +
           "\n[protocol]\ntasks = binary\nvariants = current\nmethods = relieff, mrmr\n"
           "repeats = 2\nfolds = 3\nk_grid.current = 3, 13\n" +
           extra_protocol + "[output]\ndir = " + (dir_ / "out").string() + "\n";
  }

  fs::path write_config(const std::string& text, const std::string& name = "run.ini") const {
    spit(dir_ / name, text);
    return dir_ / name;
  }

  int run_cli(const std::string& args) const {
    const std::string cmd = std::string(FEATRANK_CLI) + " " + args + " > " + (dir_ / "stdout.txt").string() +
                            " 2> " + (dir_ / "stderr.txt").string();
    const int status = std::system(cmd.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  }
  std::string err() const { return slurp(dir_ / "stderr.txt"); }
  std::string out() const { return slurp(dir_ / "stdout.txt"); }

  fs::path dir_;
};

TEST(Config, DefaultsRoundTrip) {
  const ExperimentConfig c;
  const std::string text = to_text(c);
  EXPECT_EQ(to_text(parse_config(text)), text);
  EXPECT_EQ(c.tasks.size() * c.variants.size() * c.methods.size(), 30u);
  EXPECT_EQ(c.folds, 5);
  EXPECT_EQ(c.k_grids.at(Variant::Combined), (std::vector<int>{3, 5, 7, 10, 13, 16, 20, 26}));
}

TEST(Config, OverridesAndRoundTrip) {
  const auto c = parse_config(
      "# comment\n[protocol]\nseed = 99\nmethods = ard, mrmr\n[spike_slab]\npi = 0.25\n"
      "[solver]\ntol = 1e-8\n[ard]\nupdate_precision = false\n");
  EXPECT_EQ(c.seed, 99u);
  EXPECT_EQ(c.methods, (std::vector<Method>{Method::ArdLogistic, Method::MRMR}));
  EXPECT_EQ(c.rankers.spike_slab.pi, 0.25);
  EXPECT_EQ(c.rankers.ard.fit.solver.tol, 1e-8);
  EXPECT_EQ(c.rankers.lasso.solver.tol, 1e-8);
  EXPECT_FALSE(c.rankers.ard.fit.update_precision);
  EXPECT_EQ(to_text(parse_config(to_text(c))), to_text(c));
}

TEST(Config, Errors) {
  EXPECT_THROW(parse_config("[nope]\n"), ConfigError);
  EXPECT_THROW(parse_config("[protocol]\nfoo = 1\n"), ConfigError);
  EXPECT_THROW(parse_config("seed = 1\n"), ConfigError);
  EXPECT_THROW(parse_config("[protocol]\nseed = abc\n"), ConfigError);
  EXPECT_THROW(parse_config("[protocol]\nfolds = 1\n"), ConfigError);
  EXPECT_THROW(parse_config("[protocol]\nmethods = ard, lassso\n"), ConfigError);
  EXPECT_THROW(parse_config("[protocol]\nseed = 1\nseed = 2\n"), ConfigError);
  EXPECT_THROW(parse_config("[spike_slab]\ntau0_sq = 2\n"), ConfigError);
  EXPECT_THROW(parse_config("[protocol\n"), ConfigError);
  try {
    parse_config("[protocol]\nmethods = lassso\n", "x.ini");
    FAIL();
  } catch (const ConfigError& e) {
    const std::string msg = e.what();
    EXPECT_NE(msg.find("x.ini:2"), std::string::npos);
    EXPECT_NE(msg.find("spike_slab"), std::string::npos);
  }
}

TEST(Format, FixedAndCell) {
  EXPECT_EQ(fixed6(0.5), "0.500000");
  EXPECT_EQ(fixed6(-1e-9), "0.000000");
  EXPECT_EQ(fixed6(1.0 / 3.0), "0.333333");
  BestResult b;
  b.best_balanced_accuracy = 0.9186;
  b.best_k = 5;
  b.stability = 0.8554;
  EXPECT_EQ(table_cell(b), "0.919/k=5/J=0.855");
}

TEST_F(Workdir, PrintConfigRoundTrips) {
  ASSERT_EQ(run_cli("print-config --seed 7"), 0) << err();
  const std::string printed = out();
  EXPECT_NE(printed.find("seed = 7"), std::string::npos);
  const auto path = write_config(printed, "printed.ini");
  ASSERT_EQ(run_cli("print-config --config " + path.string()), 0) << err();
  EXPECT_EQ(out(), printed);
}

TEST_F(Workdir, UsageAndConfigErrorsExitTwo) {
  EXPECT_EQ(run_cli(""), 2);
  EXPECT_EQ(run_cli("frobnicate"), 2);
  EXPECT_EQ(run_cli("evaluate --bogus"), 2);
  EXPECT_EQ(run_cli("evaluate --config " + (dir_ / "missing.ini").string()), 2);
  EXPECT_EQ(run_cli("evaluate --config " + write_config("[protocol]\nrepeats = 0\n").string()), 2);
  EXPECT_NE(err().find("repeats"), std::string::npos);
}

TEST_F(Workdir, MethodTypoListsValidMethods) {
  const auto cfg = write_config(small_config());
  EXPECT_EQ(run_cli("rank --config " + cfg.string() + " --method lassso"), 2);
  const std::string e = err();
  for (const char* m : {"ard", "spike_slab", "lasso", "relieff", "mrmr"}) {
    EXPECT_NE(e.find(m), std::string::npos) << m;
  }
}

TEST_F(Workdir, MissingDataIsRuntimeFailure) {
  const auto cfg = write_config("[data]\npath = " + (dir_ / "absent.csv").string() + "\n");
  EXPECT_EQ(run_cli("rank --config " + cfg.string() + " --method ard"), 1);
  EXPECT_NE(err().find("absent.csv"), std::string::npos);
}

TEST_F(Workdir, RankFileShapeAndDeterminism) {
  const auto cfg = write_config(small_config());
  ASSERT_EQ(run_cli("rank --config " + cfg.string() + " --variant combined --method ard"), 0) << err();
  const fs::path file = dir_ / "out" / "ranking_binary_combined_ard.csv";
  ASSERT_TRUE(fs::exists(file));
  const std::string first = slurp(file);
  ASSERT_EQ(run_cli("rank --config " + cfg.string() + " --variant combined --method ard"), 0);
  EXPECT_EQ(slurp(file), first);

  std::string body;
  std::istringstream in(first);
  std::string line;
  bool saw_meta = false;
  while (std::getline(in, line)) {
    if (line.rfind("# ", 0) == 0) {
      saw_meta |= line.find("ard.epsilon") != std::string::npos;
      continue;
    }
    body += line + "\n";
  }
  EXPECT_TRUE(saw_meta);
  const auto rows = csv::parse(body);
  ASSERT_EQ(rows.size(), 27u);
  EXPECT_EQ(rows[0], (csv::Row{"rank", "feature", "score"}));
  EXPECT_EQ(rows[1][0], "1");
}

TEST_F(Workdir, EvaluateAndReport) {
  const auto cfg = write_config(small_config());
  ASSERT_EQ(run_cli("evaluate --config " + cfg.string()), 0) << err();
  const fs::path out_dir = dir_ / "out";
  const auto summary = csv::parse(slurp(out_dir / "summary.csv"));
  ASSERT_EQ(summary.size(), 3u);
  EXPECT_EQ(summary[0], (csv::Row{"task", "variant", "method", "best_balanced_accuracy", "best_k", "stability",
                                  "n_features", "cell"}));
  const auto records = csv::parse(slurp(out_dir / "records.csv"));
  EXPECT_EQ(records.size(), 1u + 2u * (2 * 3 * 2));
  for (std::size_t i = 1; i < summary.size(); ++i) {
    const auto& row = summary[i];
    EXPECT_TRUE(row[4] == "3" || row[4] == "13");
    if (row[4] == "13") EXPECT_EQ(row[5], "1.000000");
    EXPECT_EQ(row[3].size(), 8u);  // d.dddddd
  }

  const auto manifest = nlohmann::json::parse(slurp(out_dir / "manifest.json"));
  EXPECT_EQ(manifest["cells"].size(), 2u);
  EXPECT_EQ(manifest["records"].size(), 24u);
  EXPECT_EQ(manifest["feature_names"]["binary/current"].size(), 13u);

  ASSERT_EQ(run_cli("report --out " + out_dir.string()), 0) << err();
  const auto fig1 = csv::parse(slurp(out_dir / "fig1_data.csv"));
  EXPECT_EQ(fig1.size(), 3u);
  const auto fig2 = csv::parse(slurp(out_dir / "fig2_data.csv"));
  EXPECT_EQ(fig2.size(), 1u + 3u * 13u);
  for (std::size_t i = 1; i < fig2.size(); ++i) {
    const double f = std::stod(fig2[i][6]);
    EXPECT_GE(f, 0.0);
    EXPECT_LE(f, 1.0);
    if (fig2[i][5] == "13") EXPECT_EQ(fig2[i][6], "1.000000");
  }
  EXPECT_TRUE(fs::exists(out_dir / "report.md"));
}

TEST_F(Workdir, ReplayFromManifestAndSeedOverride) {
  const auto cfg = write_config(small_config());
  ASSERT_EQ(run_cli("evaluate --config " + cfg.string()), 0) << err();
  const std::string summary = slurp(dir_ / "out" / "summary.csv");
  const auto manifest = nlohmann::json::parse(slurp(dir_ / "out" / "manifest.json"));
  const auto replay = write_config(manifest["config_text"].get<std::string>(), "replay.ini");
  ASSERT_EQ(run_cli("evaluate --config " + replay.string() + " --out " + (dir_ / "again").string()), 0) << err();
  EXPECT_EQ(slurp(dir_ / "again" / "summary.csv"), summary);

  ASSERT_EQ(run_cli("evaluate --config " + cfg.string() + " --seed 12345 --out " + (dir_ / "other").string()), 0);
  const auto m2 = nlohmann::json::parse(slurp(dir_ / "other" / "manifest.json"));
  EXPECT_EQ(m2["config"]["seed"].get<std::uint64_t>(), 12345u);
}

TEST_F(Workdir, ReportOnEmptyDirNamesFiles) {
  fs::create_directories(dir_ / "empty");
  EXPECT_EQ(run_cli("report --out " + (dir_ / "empty").string()), 1);
  const std::string e = err();
  for (const char* f : {"records.csv", "summary.csv", "manifest.json"}) EXPECT_NE(e.find(f), std::string::npos);
}

TEST_F(Workdir, ReportOnCorruptFiles) {
  const auto cfg = write_config(small_config());
  ASSERT_EQ(run_cli("evaluate --config " + cfg.string()), 0) << err();
  spit(dir_ / "out" / "manifest.json", "{ not json");
  EXPECT_EQ(run_cli("report --out " + (dir_ / "out").string()), 1);
  EXPECT_NE(err().find("manifest.json"), std::string::npos);
}

}  // namespace
}  // namespace featrank::app
