#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "commands.hpp"
#include "ikwsms/errors.hpp"
#include "ikwsms/experiment.hpp"
#include "ikwsms/io.hpp"

using namespace ikwsms;
namespace fs = std::filesystem;

namespace {

ExperimentSpec small_spec(int replications) {
  ExperimentSpec spec;
  spec.dgp.n = 150;
  spec.replications = replications;
  spec.master_seed = 17;
  return spec;
}

RejectionRow row(double alpha, double multiplier) {
  RejectionRow r;
  r.design = Design::UN;
  r.n = 1000;
  r.alpha = alpha;
  r.multiplier = multiplier;
  r.replications = 500;
  r.effective = 500;
  r.acv_rejections = 89;
  r.bcv_rejections = 47;
  r.acv = 1.6448536269514724;
  r.bcv = 2.125;
  return r;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream s;
  s << in.rdbuf();
  return s.str();
}

struct TempDir {
  fs::path path;
  explicit TempDir(const std::string& name)
      : path(fs::temp_directory_path() / ("ikwsms_test_" + name)) {
    fs::remove_all(path);
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
};

int run_cli(std::vector<std::string> args, std::string* out_text = nullptr,
            std::string* err_text = nullptr) {
  args.insert(args.begin(), "ikwsms");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
  if (out_text) *out_text = out.str();
  if (err_text) *err_text = err.str();
  return code;
}

}  // namespace

TEST(Tables, EmptyTableIsHeaderOnly) {
  const std::string csv = emit_csv(RejectionTable{});
  EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), 1);
  EXPECT_EQ(csv.rfind("mode,design,n,alpha,multiplier", 0), 0u);
  EXPECT_TRUE(parse_csv(csv).rows.empty());
}

TEST(Tables, CsvRoundTrip) {
  RejectionTable t;
  t.rows.push_back(row(0.1, 1.0));
  t.replications = 500;
  const RejectionTable back = parse_csv(emit_csv(t));
  ASSERT_EQ(back.rows.size(), 1u);
  EXPECT_EQ(back.rows[0].acv_rate(), t.rows[0].acv_rate());
  EXPECT_EQ(back.rows[0].bcv_rate(), t.rows[0].bcv_rate());
  EXPECT_EQ(back.rows[0].bcv, 2.125);
  EXPECT_EQ(back.rows[0].design, Design::UN);
  EXPECT_EQ(emit_csv(back), emit_csv(t));
}

TEST(Tables, SizeLayoutHasSixRateColumns) {
  RejectionTable t;
  for (double a : {0.1, 0.05, 0.01}) {
    for (double m : {1.0, 0.75, 0.5}) t.rows.push_back(row(a, m));
  }
  const std::string text = emit_text(t, TableLayout::size);
  std::istringstream in(text);
  std::string line;
  int data_rows = 0;
  while (std::getline(in, line)) {
    std::istringstream fields(line);
    std::vector<std::string> tokens;
    for (std::string tok; fields >> tok;) tokens.push_back(tok);
    if (tokens.empty() || (tokens[0] != "UN" && tokens[0] != "0.05" && tokens[0] != "0.01")) continue;
    const std::size_t first_rate = tokens[0] == "UN" ? 2 : 1;
    EXPECT_EQ(tokens.size() - first_rate, 6u) << line;
    ++data_rows;
  }
  EXPECT_EQ(data_rows, 3);
  EXPECT_NE(text.find("0.75h"), std::string::npos);
}

TEST(Tables, FileNames) {
  EXPECT_EQ(csv_file_name(ExperimentMode::size, Design::HE, 1000), "size_HE_n1000.csv");
  EXPECT_EQ(csv_file_name(ExperimentMode::power, Design::T3, 250), "power_T3_n250.csv");
}

TEST(Experiment, RatesAreCountsOverReplications) {
  ExperimentSpec spec = small_spec(10);
  spec.multipliers = {1.0, 0.5};
  const RejectionTable t = run_experiment(spec);
  EXPECT_EQ(t.rows.size(), 6u);
  EXPECT_EQ(t.replications, 10);
  for (const auto& r : t.rows) {
    EXPECT_EQ(r.effective + r.failures, 10);
    EXPECT_GE(r.acv_rate(), 0.0);
    EXPECT_LE(r.bcv_rate(), 1.0);
    const double scaled = r.bcv_rate() * r.effective;
    EXPECT_NEAR(scaled, std::round(scaled), 1e-12);
  }
}

TEST(Experiment, WarpSpeedUsesOneBootstrapDrawPerReplication) {
  ExperimentSpec spec = small_spec(6);
  std::vector<std::vector<ReplicationDraw>> draws(1);
  for (int m = 0; m < 6; ++m) draws[0].push_back(run_replication(spec, m).at(0));
  const RejectionTable direct = tabulate(spec, draws);
  EXPECT_EQ(emit_csv(direct), emit_csv(run_experiment(spec)));
  std::vector<double> pooled;
  for (const auto& d : draws[0]) {
    if (d.ok) pooled.push_back(d.bootstrap_statistic);
  }
  EXPECT_EQ(direct.rows[0].bcv, bootstrap_critical_value(pooled, spec.alphas[0]));
}

TEST(Experiment, IndependentOfThreadCount) {
  ExperimentSpec spec = small_spec(5);
  const std::string one = emit_csv(run_experiment(spec));
  spec.threads = 3;
  EXPECT_EQ(emit_csv(run_experiment(spec)), one);
}

TEST(Experiment, SpecValidation) {
  ExperimentSpec spec = small_spec(0);
  EXPECT_THROW(spec.validate(), UsageError);
  spec = small_spec(5);
  spec.alphas = {1.5};
  EXPECT_THROW(spec.validate(), UsageError);
  spec = small_spec(5);
  spec.mode = ExperimentMode::power;
  EXPECT_EQ(spec.resolved_hypothesis().value(), 0.0);
}

TEST(Io, ParsesThreeRows) {
  io::LoadReport report;
  const Dataset d = io::parse_dataset("y,x1,x2,v\n1,0.5,1.5,0.2\n0,-1,2,0.4\n1,2,-3,0.9\n", &report);
  EXPECT_EQ(d.size(), 3u);
  EXPECT_EQ(report.rows, 3u);
  EXPECT_EQ(report.columns, (std::vector<std::string>{"y", "x1", "x2", "v"}));
  EXPECT_EQ(d.x_tilde(2, 0), -3.0);
}

TEST(Io, ColumnOrderDoesNotMatter) {
  const Dataset d = io::parse_dataset("v,x2,y,x1\n0.2,1.5,1,0.5\n");
  EXPECT_EQ(d.y(0), 1);
  EXPECT_EQ(d.x1(0), 0.5);
  EXPECT_EQ(d.x_tilde(0, 0), 1.5);
  EXPECT_EQ(d.v(0), 0.2);
}

TEST(Io, NonBinaryOutcomeNamesRowAndColumn) {
  std::string text = "y,x1,x2,v\n";
  for (int i = 0; i < 4; ++i) text += "1,0.1,0.2,0.5\n";
  text += "2,0.1,0.2,0.5\n";
  try {
    io::parse_dataset(text);
    FAIL();
  } catch (const ParseError& e) {
    EXPECT_EQ(e.row(), 5);
    EXPECT_EQ(e.column(), "y");
    EXPECT_NE(std::string(e.what()).find("row 5"), std::string::npos);
  }
}

TEST(Io, RejectsMalformedInput) {
  EXPECT_THROW(io::parse_dataset("y,x1,x2\n1,2,3\n"), ParseError);
  EXPECT_THROW(io::parse_dataset("y,x1,x2,v,z\n1,2,3,0.5,1\n"), ParseError);
  try {
    io::parse_dataset("y,x1,x2,v\n1,nan,3,0.5\n");
    FAIL();
  } catch (const ParseError& e) {
    EXPECT_EQ(e.row(), 1);
    EXPECT_EQ(e.column(), "x1");
  }
  EXPECT_THROW(io::parse_dataset("y,x1,x2,v\n1,abc,3,0.5\n"), ParseError);
  EXPECT_THROW(io::parse_dataset("y,x1,x2,v\n1,2,3\n"), ParseError);
}

TEST(Io, GeneratedDataRoundTrips) {
  TempDir dir("roundtrip");
  DgpSpec spec;
  spec.n = 250;
  spec.seed = 5;
  spec.design = Design::T3;
  const Dataset d = generate_dataset(spec);
  const fs::path p = dir.path / "d.csv";
  io::save_dataset(d, p);
  EXPECT_TRUE(io::load_dataset(p) == d);
  EXPECT_FALSE(fs::exists(dir.path / "d.csv.tmp"));
}

TEST(Io, ShortestRoundTripDoubles) {
  for (double x : {0.1, 1.0 / 3.0, -2.5e-300, 123456789.125}) {
    EXPECT_EQ(std::stod(io::format_double(x)), x);
  }
  EXPECT_EQ(io::format_double(0.1), "0.1");
}

TEST(Cli, DgpWritesRequestedRowsDeterministically) {
  TempDir dir("cli_dgp");
  const auto a = (dir.path / "a.csv").string(), b = (dir.path / "b.csv").string();
  EXPECT_EQ(run_cli({"dgp", "-n", "100", "--seed", "7", "-o", a}), 0);
  EXPECT_EQ(run_cli({"dgp", "-n", "100", "--seed", "7", "-o", b}), 0);
  const std::string text = slurp(a);
  EXPECT_EQ(std::count(text.begin(), text.end(), '\n'), 101);
  EXPECT_EQ(text, slurp(b));
}

TEST(Cli, InvalidDesignIsUsageError) {
  std::string err;
  EXPECT_EQ(run_cli({"dgp", "--design", "XX"}, nullptr, &err), 2);
  EXPECT_NE(err.find("UN, NR, T3, LG, HE"), std::string::npos);
  EXPECT_EQ(run_cli({"frobnicate"}), 2);
}

TEST(Cli, ConfigRejectsUnknownKeys) {
  TempDir dir("cli_config");
  const auto cfg = (dir.path / "c.json").string();
  std::ofstream(cfg) << R"({"n": 100, "sede": 3})";
  std::string err;
  EXPECT_EQ(run_cli({"dgp", "--config", cfg, "--out-dir", dir.path.string()}, nullptr, &err), 2);
  EXPECT_NE(err.find("sede"), std::string::npos);
  EXPECT_THROW(cli::parse_config(R"({"n": "many"})"), UsageError);
  const auto c = cli::parse_config(R"({"n": 120, "design": "LG", "alphas": [0.1]})");
  EXPECT_EQ(c.n, 120u);
  EXPECT_EQ(c.design, Design::LG);
}

TEST(Cli, FlagsOverrideConfigFile) {
  TempDir dir("cli_override");
  const auto cfg = (dir.path / "c.json").string();
  std::ofstream(cfg) << R"({"n": 80, "seed": 3})";
  const auto a = (dir.path / "a.csv").string();
  EXPECT_EQ(run_cli({"dgp", "--config", cfg, "-n", "60", "-o", a}), 0);
  const std::string text = slurp(a);
  EXPECT_EQ(std::count(text.begin(), text.end(), '\n'), 61);
}

TEST(Cli, EstimateWritesStableResult) {
  TempDir dir("cli_estimate");
  const auto data = (dir.path / "d.csv").string();
  ASSERT_EQ(run_cli({"dgp", "-n", "300", "--seed", "2", "-o", data}), 0);
  const auto r1 = (dir.path / "r1.json").string(), r2 = (dir.path / "r2.json").string();
  std::string out;
  EXPECT_EQ(run_cli({"estimate", "-i", data, "-o", r1}, &out), 0);
  EXPECT_EQ(run_cli({"estimate", "-i", data, "-o", r2, "--threads", "2"}), 0);
  EXPECT_EQ(slurp(r1), slurp(r2));
  EXPECT_NE(out.find("beta_hat"), std::string::npos);
  const std::string json = slurp(r1);
  const auto pos = json.find("\"beta_hat\"");
  ASSERT_NE(pos, std::string::npos);
  const auto open = json.find('[', pos), close = json.find(']', pos);
  const std::string entries = json.substr(open + 1, close - open - 1);
  EXPECT_EQ(std::count(entries.begin(), entries.end(), ','), 0);
}

TEST(Cli, EstimateOutsideWeightSupportFails) {
  TempDir dir("cli_window");
  const auto data = (dir.path / "d.csv").string();
  {
    std::ofstream out(data);
    out << "y,x1,x2,v\n";
    for (int i = 0; i < 100; ++i) {
      out << (i % 2) << ',' << (i % 7) - 3 << ',' << (i % 5) - 2 << ',' << 0.0002 * (i + 1) << "\n";
    }
  }
  std::string err;
  const int code = run_cli({"estimate", "-i", data, "--out-dir", dir.path.string()}, nullptr, &err);
  EXPECT_NE(code, 0);
  EXPECT_NE(err.find("error"), std::string::npos);
}

TEST(Cli, TestReportsAndWaldIsTSquared) {
  TempDir dir("cli_test");
  const auto data = (dir.path / "d.csv").string();
  ASSERT_EQ(run_cli({"dgp", "-n", "200", "--seed", "4", "-o", data}), 0);
  const auto t1 = (dir.path / "t1.json").string(), t2 = (dir.path / "t2.json").string();
  const auto w = (dir.path / "w.json").string();
  std::string out;
  ASSERT_EQ(run_cli({"test", "-i", data, "--null", "1", "-B", "9", "-o", t1}, &out), 0);
  EXPECT_NE(out.find("BCV"), std::string::npos);
  ASSERT_EQ(run_cli({"test", "-i", data, "--null", "1", "-B", "9", "-o", t2}), 0);
  EXPECT_EQ(slurp(t1), slurp(t2));
  ASSERT_EQ(run_cli({"test", "-i", data, "--null", "1", "-B", "9", "--test", "wald", "-o", w}), 0);
  auto stat = [](const std::string& json) {
    const auto p = json.find("\"statistic\":");
    return std::stod(json.substr(p + 12));
  };
  const double t = stat(slurp(t1));
  EXPECT_NEAR(stat(slurp(w)), t * t, 1e-12 * std::max(1.0, t * t));
  std::string err;
  EXPECT_EQ(run_cli({"test", "-i", data, "--coefficient", "x9"}, nullptr, &err), 2);
}

TEST(Cli, SimulateSmokeRun) {
  TempDir a("cli_sim_a"), b("cli_sim_b");
  std::string out;
  ASSERT_EQ(run_cli({"simulate", "-n", "150", "-R", "10", "--seed", "1", "--out-dir",
                     a.path.string(), "-q"},
                    &out),
            0);
  ASSERT_EQ(run_cli({"simulate", "-n", "150", "-R", "10", "--seed", "1", "--out-dir",
                     b.path.string(), "-q", "--threads", "2"}),
            0);
  const auto csv = slurp(a.path / "size_NR_n150.csv");
  EXPECT_EQ(csv, slurp(b.path / "size_NR_n150.csv"));
  EXPECT_TRUE(fs::exists(a.path / "size_NR_n150.txt"));
  for (const auto& r : parse_csv(csv).rows) {
    EXPECT_NEAR(r.acv_rate() * 10, std::round(r.acv_rate() * 10), 1e-12);
    EXPECT_NEAR(r.bcv_rate() * 10, std::round(r.bcv_rate() * 10), 1e-12);
  }
}
