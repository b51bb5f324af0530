#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

namespace fs = std::filesystem;

namespace {

struct RunResult {
  int exit_code = -1;
  std::string output;  // stdout and stderr combined
};

std::string cli() {
  const char* p = std::getenv("BWSPDC_CLI");
  REQUIRE_MESSAGE(p != nullptr, "BWSPDC_CLI must point at the binary");
  return p;
}

const std::string root = BWSPDC_SOURCE_ROOT;
const std::string config = root + "/configs/default.json";

RunResult run(const std::string& args) {
  static int counter = 0;
  fs::path log = fs::temp_directory_path() /
                 ("bwspdc_cli_" + std::to_string(++counter) + ".log");
  std::string cmd = cli() + " " + args + " > " + log.string() + " 2>&1";
  int status = std::system(cmd.c_str());
  RunResult r;
  r.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  std::ifstream in(log);
  std::stringstream ss;
  ss << in.rdbuf();
  r.output = ss.str();
  fs::remove(log);
  return r;
}

fs::path fresh_dir(const std::string& tag) {
  fs::path d = fs::temp_directory_path() / ("bwspdc_out_" + tag);
  fs::remove_all(d);
  return d;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

TEST_CASE("design prints the headline numbers") {
  auto r = run("design --config " + config);
  CHECK(r.exit_code == 0);
  CHECK(r.output.find("0.871752") != std::string::npos);
  CHECK(r.output.find("38.42") != std::string::npos);
  CHECK(r.output.find("single-mode") != std::string::npos);
}

TEST_CASE("report writes the full artifact set") {
  auto dir = fresh_dir("report");
  auto r = run("report --config " + config + " --out " + dir.string());
  CHECK(r.exit_code == 0);
  for (const char* name :
       {"report.txt", "spectrum.csv", "g2.csv", "report.svg"})
    CHECK_MESSAGE(fs::exists(dir / name), name);
  auto spectrum = slurp(dir / "spectrum.csv");
  CHECK(spectrum.rfind("# config ", 0) == 0);
  CHECK(spectrum.find("omega_rad_s,detuning_rad_s,S") != std::string::npos);
  auto svg = slurp(dir / "report.svg");
  CHECK(svg.find("<svg") != std::string::npos);
  fs::remove_all(dir);
}

TEST_CASE("verification pass is reachable from the cli") {
  auto r = run("oracle --config " + config);
  CHECK(r.exit_code == 0);
  CHECK(r.output.find("verify: cavity transfer") != std::string::npos);
  CHECK(r.output.find("FAILED") == std::string::npos);
}

TEST_CASE("event streams are reproducible byte for byte") {
  auto d1 = fresh_dir("ev1"), d2 = fresh_dir("ev2");
  std::string args = "events --config " + config +
                     " --duration 0.5 --rate 300 --out ";
  CHECK(run(args + d1.string()).exit_code == 0);
  CHECK(run(args + d2.string()).exit_code == 0);
  CHECK(slurp(d1 / "events.csv") == slurp(d2 / "events.csv"));
  CHECK(slurp(d1 / "histogram.csv") == slurp(d2 / "histogram.csv"));
  CHECK_FALSE(slurp(d1 / "events.csv").empty());
  fs::remove_all(d1);
  fs::remove_all(d2);
}

TEST_CASE("overrides reach the calculation") {
  auto base = run("cavity --config " + config);
  auto halved = run("cavity --config " + config +
                    " --override cavity.r_signal=0.998");
  CHECK(base.exit_code == 0);
  CHECK(halved.exit_code == 0);
  CHECK(base.output != halved.output);
  // r = 0.999 gives finesse 1000; r = 0.998 halves it
  CHECK(base.output.find("1000") != std::string::npos);
  CHECK(halved.output.find("500") != std::string::npos);
}

TEST_CASE("exit codes by failure class") {
  // unreadable config file
  CHECK(run("design --config /nonexistent.json").exit_code == 4);
  // config semantics
  CHECK(run("design --config " + config +
            " --override crystal.bogus=1").exit_code == 2);
  // missing calibration surfaces as a usage error
  CHECK(run("biphoton --config " + config +
            " --override calibration.pair_rate_per_watt=null").exit_code == 2);
  // no subcommand
  CHECK(run("").exit_code == 2);
}

TEST_CASE("invalid json is reported as a config error") {
  fs::path bad = fs::temp_directory_path() / "bwspdc_bad.json";
  std::ofstream(bad) << "{ nope";
  auto r = run("design --config " + bad.string());
  CHECK(r.exit_code == 2);
  CHECK(r.output.find("category=ConfigError") != std::string::npos);
  fs::remove(bad);
}

TEST_CASE("dispersion table and free-space reference run standalone") {
  auto dir = fresh_dir("disp");
  auto r = run("dispersion --config " + config + " --out " + dir.string());
  CHECK(r.exit_code == 0);
  CHECK(r.output.find("1.745468") != std::string::npos);
  CHECK(fs::exists(dir / "dispersion.csv"));
  fs::remove_all(dir);

  auto f = run("freespace --config " + config + " --out " +
               fresh_dir("fs").string());
  CHECK(f.exit_code == 0);
  CHECK(f.output.find("kappa") != std::string::npos);
}

TEST_CASE("g2 subcommand honours the accidental toggle") {
  auto with = run("g2 --config " + config + " --out " +
                  fresh_dir("g2a").string());
  auto without = run("g2 --no-accidentals --config " + config + " --out " +
                     fresh_dir("g2b").string());
  CHECK(with.exit_code == 0);
  CHECK(without.exit_code == 0);
  CHECK(with.output.find("accidental level") != std::string::npos);
}
