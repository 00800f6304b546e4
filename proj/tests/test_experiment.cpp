#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <atomic>
#include <cmath>
#include <cstdlib>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <sys/wait.h>

#include "sns/config.hpp"
#include "sns/experiment.hpp"
#include "sns/initial_data.hpp"
#include "sns/io.hpp"
#include "sns/snapshot.hpp"
#include "sns/verify.hpp"
#include "sns/worker_pool.hpp"
#include "support.hpp"

using namespace sns;
namespace fs = std::filesystem;

namespace {

const char* kNoisy = R"(
grid.n = 16
gamma = 0.5
noise.channels = 1
noise.channel.0.lambda = 7
noise.channel.0.kernel = "gaussian"   # amplitude and sigma default to 1
time.horizon = 1.0
time.steps = 50
search.t_probe_max = 0.5
monte_carlo.num_paths = 4
)";

fs::path scratch_dir(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / ("sns_test_" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

int run_cli(const std::string& args) {
  const std::string cmd = std::string(SNS_CLI_PATH) + " " + args + " >/dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::vector<std::string> violations_of(const std::string& text) {
  try {
    parse_config(text);
  } catch (const ValidationError& e) {
    return e.violations();
  }
  return {};
}

bool mentions(const std::vector<std::string>& v, const std::string& needle) {
  for (const auto& s : v) {
    if (s.find(needle) != std::string::npos) return true;
  }
  return false;
}

}  // namespace

TEST_CASE("config defaults and minimal noisy config") {
  const ExperimentConfig d = parse_config("");
  CHECK(d.grid_n == 32);
  CHECK(d.gamma == 0.5);
  CHECK(d.noise.empty());

  const ExperimentConfig c = parse_config(kNoisy);
  REQUIRE(c.noise.size() == 1);
  CHECK(c.noise.channels[0].alpha == doctest::Approx(2.0).epsilon(1e-15));
  CHECK(c.noise.channels[0].kernel.l1_norm == 1.0);
  CHECK(c.num_paths == 4);
}

TEST_CASE("config validation") {
  auto v = violations_of("gamma = 1.5\n");
  CHECK(mentions(v, "gamma"));

  std::string bad_lambda = kNoisy;
  bad_lambda += "noise.channel.0.lambda = 6.4\n";  // duplicate key: parse error first
  CHECK_THROWS_AS(parse_config(bad_lambda), ParseError);

  v = violations_of("noise.channels = 1\nnoise.channel.0.lambda = 6.4\n");
  CHECK(mentions(v, "6.464"));

  // Every problem is reported at once.
  v = violations_of("grid.n = 33\ngamma = 0\ntime.steps = 1\nbogus.key = 1\nsimulate.time = 5\n");
  CHECK(v.size() >= 5);
  CHECK(mentions(v, "grid.n"));
  CHECK(mentions(v, "unknown key 'bogus.key'"));
  CHECK(mentions(v, "simulate.time"));

  v = violations_of("noise.channels = 1\nnoise.channel.0.lambda = 7\nnoise.channel.0.kernel = \"cauchy\"\n");
  CHECK(mentions(v, "kernel"));
  v = violations_of("noise.channels = 1\n");
  CHECK(mentions(v, "lambda is required"));
  v = violations_of("grid.n = 3.5\n");
  CHECK(mentions(v, "integer"));
  v = violations_of("initial_data.field = \"snapshot\"\n");
  CHECK(mentions(v, "initial_data.snapshot"));
}

TEST_CASE("config syntax errors carry the line") {
  try {
    parse_config("grid.n = 32\n\ngamma 0.5\n");
    FAIL("expected ParseError");
  } catch (const ParseError& e) {
    CHECK(e.line() == 3);
  }
  CHECK_THROWS_AS(parse_config("output.dir = \"out\n"), ParseError);
  CHECK_THROWS_AS(parse_config("initial_data.amplitudes = [1, x]\n"), ParseError);
  CHECK_THROWS_AS(parse_config("bad key = 1\n"), ParseError);
  CHECK_THROWS_AS(parse_config("grid.n = 32\ngrid.n = 16\n"), ParseError);
  CHECK_THROWS_AS(load_config("/nonexistent/sns.cfg"), ConfigError);

  const auto entries = parse_config_text("a = \"x # not a comment\"  # comment\nb = [1, 2.5]\nc = true\n");
  CHECK(std::get<std::string>(entries.at("a").value) == "x # not a comment");
  CHECK(std::get<std::vector<double>>(entries.at("b").value) == std::vector<double>{1.0, 2.5});
  CHECK(std::get<bool>(entries.at("c").value));
}

TEST_CASE("config hash ignores the output directory") {
  const ExperimentConfig a = parse_config(kNoisy);
  ExperimentConfig b = a;
  b.output_dir = "elsewhere";
  CHECK(config_hash(a) == config_hash(b));
  CHECK(config_hash(a).size() == 16);
  b.base_seed = 99;
  CHECK(config_hash(a) != config_hash(b));
}

TEST_CASE("snapshots") {
  const auto g = Grid::create(16);
  const SpectralField f = random_solenoidal(g, 5, 1.0, 5.0);
  const fs::path dir = scratch_dir("snap");
  const std::string path = (dir / "f.snsf").string();
  save_snapshot(path, f);
  CHECK(fs::file_size(path) == 4 + 4 + 4 + 8 + 4 + 3u * 16 * 16 * 16 * 16);
  const SpectralField back = load_snapshot(path, g);
  CHECK(sns::test::rel_l2(back, f) == 0.0);
  CHECK_THROWS_AS(load_snapshot(path, Grid::create(32)), GridMismatch);

  SUBCASE("corrupt input") {
    std::string bytes = slurp(path);
    std::istringstream truncated(bytes.substr(0, bytes.size() / 2));
    CHECK_THROWS(read_snapshot(truncated));
    std::string magic = bytes;
    magic[0] = 'X';
    std::istringstream bad_magic(magic);
    CHECK_THROWS(read_snapshot(bad_magic));
    // Break Hermitian symmetry of one coefficient.
    std::string skew = bytes;
    const std::size_t at = 24 + 16 * (1 * 16 * 16 + 2 * 16 + 3) + 8;
    double im = 0.0;
    std::memcpy(&im, skew.data() + at, 8);
    im += 1.0;
    std::memcpy(skew.data() + at, &im, 8);
    std::istringstream not_real(skew);
    CHECK_THROWS(read_snapshot(not_real));
  }
}

TEST_CASE("atomic writes") {
  const fs::path dir = scratch_dir("atomic");
  const std::string path = (dir / "nested" / "out.txt").string();
  write_file_atomic(path, [](std::ostream& os) { os << "first"; });
  CHECK(slurp(path) == "first");
  CHECK_THROWS(write_file_atomic(path, [](std::ostream& os) {
    os << "partial";
    throw std::runtime_error("interrupted");
  }));
  CHECK(slurp(path) == "first");
  for (const auto& e : fs::directory_iterator(dir / "nested")) CHECK(e.path().filename() == "out.txt");
  CHECK(format_real(0.1) == "0.10000000000000001");
}

TEST_CASE("worker pool") {
  std::vector<int> out(100, 0);
  parallel_for(out.size(), 4, [&](std::size_t i) { out[i] = static_cast<int>(i * i); });
  for (std::size_t i = 0; i < out.size(); ++i) CHECK(out[i] == static_cast<int>(i * i));

  std::atomic<int> ran{0};
  try {
    parallel_for(20, 3, [&](std::size_t i) {
      ++ran;
      if (i == 7 || i == 13) throw std::runtime_error("job " + std::to_string(i));
    });
    FAIL("expected an exception");
  } catch (const std::runtime_error& e) {
    CHECK(std::string(e.what()) == "job 7");
  }
  CHECK(ran == 20);
  parallel_for(0, 4, [](std::size_t) { FAIL("no jobs expected"); });
}

TEST_CASE("eta jobs") {
  const ExperimentConfig cfg = parse_config(kNoisy);
  const auto g = Grid::create(cfg.grid_n);
  const auto one = run_eta_jobs(cfg, g, 1);
  const auto four = run_eta_jobs(cfg, g, 4);
  CHECK(eta_csv(one) == eta_csv(four));
  for (const auto& r : one) {
    CHECK(r.violations == 0);
    CHECK(r.seed == job_seed(cfg, r.index));
  }

  SUBCASE("zero kernel closed form") {
    ExperimentConfig z = parse_config(
        "grid.n = 16\nnoise.channels = 1\nnoise.channel.0.lambda = 0.1\nnoise.channel.0.kernel = \"zero\"\n"
        "time.horizon = 1.0\ntime.steps = 200\nsearch.t_probe_max = 0.5\n");
    const EtaRecord rec = eta_job(z, g, 0);
    const BrownianPath path = job_path(z, 0);
    double expect = 0.0;
    for (int m = 0; m <= path.steps(); ++m) {
      expect = std::max(expect, std::exp(path.value(0, m) * 0.1 - path.time(m) * 0.01 / 2.0));
    }
    CHECK(std::abs(rec.sup_eta - expect) <= 1e-12 * expect);
  }
}

TEST_CASE("calibration file") {
  Calibration cal;
  cal.c_hat = 0.04;
  cal.c_gamma_derived = derived_c_gamma(0.04, 0.5);
  cal.gamma = 0.5;
  cal.grid_n = 16;
  cal.grid_length = 2.0;
  cal.points = {{0.05, 0.03, 0.01}};
  cal.seed = 3;
  const Calibration back = parse_calibration_json(calibration_json(cal));
  CHECK(back.c_hat == cal.c_hat);
  CHECK(back.c_gamma_derived == cal.c_gamma_derived);
  CHECK(back.points.size() == 1);
  CHECK_THROWS_AS(parse_calibration_json("{\"c_hat\": 1}"), ConfigError);
  CHECK_THROWS_AS(parse_calibration_json("not json"), ConfigError);
}

TEST_CASE("amplitude slope") {
  std::vector<LifespanRecord> recs;
  for (double a : {1.0, 2.0, 4.0}) {
    LifespanRecord r;
    r.amplitude = a;
    r.report.t_empirical = 0.3 * std::pow(a, -4.0);
    recs.push_back(r);
  }
  CHECK(amplitude_slope(recs) == doctest::Approx(-4.0).epsilon(1e-12));
  recs.resize(1);
  CHECK(std::isnan(amplitude_slope(recs)));
}

TEST_CASE("invariant suite reporting") {
  ExperimentConfig cfg = parse_config("grid.n = 16\n");
  const auto all = run_invariant_suite(cfg);
  for (const auto& r : all) {
    INFO(r.module, " / ", r.name);
    CHECK(r.status == CheckStatus::pass);
  }

  SUBCASE("two steps skip the refinement check") {
    cfg.picard_steps = 2;
    bool skipped = false;
    for (const auto& r : run_invariant_suite(cfg)) {
      if (r.name == "trapezoidal refinement order") skipped = r.status == CheckStatus::skipped;
    }
    CHECK(skipped);
    CHECK(std::string(to_string(CheckStatus::skipped)) == "SKIPPED");
  }
  SUBCASE("tampered partition tolerance fails by name") {
    cfg.partition_tolerance = -1.0;
    std::vector<std::string> failed;
    for (const auto& r : run_invariant_suite(cfg)) {
      if (r.status == CheckStatus::fail) failed.push_back(r.name);
    }
    CHECK(failed == std::vector<std::string>{"partition of unity"});
  }
}

TEST_CASE("command line exit codes") {
  const fs::path dir = scratch_dir("cli");
  const auto write = [&](const std::string& name, const std::string& text) {
    std::ofstream(dir / name) << text;
    return (dir / name).string();
  };
  const std::string out = " --out " + (dir / "out").string();

  CHECK(run_cli("verify --config " + write("ok.cfg", "grid.n = 16\n") + out) == 0);
  const std::string verify_csv = slurp(dir / "out" / "verify.csv");
  CHECK(verify_csv.find("PASS") != std::string::npos);

  CHECK(run_cli("verify --config " + write("steps.cfg", "grid.n = 16\npicard.steps = 2\n") + out) == 0);
  CHECK(slurp(dir / "out" / "verify.csv").find("SKIPPED") != std::string::npos);

  CHECK(run_cli("verify --config " + write("tamper.cfg", "grid.n = 16\nverify.partition_tolerance = -1\n") + out) == 1);
  CHECK(slurp(dir / "out" / "verify.csv").find("\"partition of unity\",FAIL") != std::string::npos);

  CHECK(run_cli("verify --config " + write("gamma.cfg", "gamma = 1.5\n") + out) == 2);
  CHECK(run_cli("verify --config " + write("lambda.cfg", "noise.channels = 1\nnoise.channel.0.lambda = 6.4\n") + out) == 2);
  CHECK(run_cli("verify --config " + write("syntax.cfg", "gamma 0.5\n") + out) == 2);
  CHECK(run_cli("verify --config " + (dir / "missing.cfg").string()) == 2);
  CHECK(run_cli("frobnicate") == 2);
  CHECK(run_cli("lifespan --config " + write("nocal.cfg", "grid.n = 16\n") + " --calibration " +
                (dir / "none.json").string() + out) == 2);
}

TEST_CASE("eta-stats output is deterministic and seed-addressable") {
  const fs::path dir = scratch_dir("eta_cli");
  std::ofstream(dir / "eta.cfg") << kNoisy;
  const std::string cfg = (dir / "eta.cfg").string();
  REQUIRE(run_cli("eta-stats --config " + cfg + " --out " + (dir / "a").string()) == 0);
  REQUIRE(run_cli("eta-stats --config " + cfg + " --workers 3 --out " + (dir / "b").string()) == 0);
  REQUIRE(run_cli("eta-stats --config " + cfg + " --seed 5 --out " + (dir / "c").string()) == 0);
  CHECK(slurp(dir / "a" / "eta_stats.csv") == slurp(dir / "b" / "eta_stats.csv"));
  CHECK(slurp(dir / "a" / "eta_stats.csv") != slurp(dir / "c" / "eta_stats.csv"));
  CHECK(slurp(dir / "a" / "eta_stats_summary.json").find("\"config_hash\"") != std::string::npos);
}
