#include "catch_amalgamated.hpp"

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <string>

namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / ("ruin_lab_cli_" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

int run_cli(const std::string& args) {
  const std::string cmd = std::string(RUIN_LAB_EXE) + " " + args + " 2>/dev/null";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

void write(const fs::path& p, const std::string& text) { std::ofstream(p) << text; }

const char* kValid = R"({
  "schema_version": 1,
  "model": {"premium_rate": 2.0, "claim": {"kind": "exponential", "mean": 1.0},
            "mixing": {"atoms": [{"location": 1.0, "mass": 1.0}]}},
  "rule": {"rule": "threshold", "d": 1.0},
  "u_grid": [1, 5],
  "n": 20000,
  "seed": 4
})";

}  // namespace

TEST_CASE("Successful run writes the report files", "[cli]") {
  const fs::path dir = scratch("ok");
  write(dir / "c.json", kValid);
  CHECK(run_cli("compare --config " + (dir / "c.json").string() + " --out " + (dir / "out").string()) == 0);
  CHECK(fs::exists(dir / "out" / "compare.csv"));
  CHECK(fs::exists(dir / "out" / "compare_ratio.csv"));
  CHECK(fs::exists(dir / "out" / "compare.json"));
}

TEST_CASE("Malformed config exits with 2 and writes nothing", "[cli]") {
  const fs::path dir = scratch("bad");
  std::string bad = kValid;
  bad.replace(bad.find("\"premium_rate\": 2.0"), 19, "\"premium_rate\": -2.0");
  write(dir / "c.json", bad);
  CHECK(run_cli("compare --config " + (dir / "c.json").string() + " --out " + (dir / "out").string()) == 2);
  CHECK_FALSE(fs::exists(dir / "out"));

  write(dir / "broken.json", "{ not json");
  CHECK(run_cli("simulate --config " + (dir / "broken.json").string() + " --out " + (dir / "out").string()) == 2);
  CHECK(run_cli("table --config " + (dir / "missing.json").string() + " --out " + (dir / "out").string()) == 2);
  CHECK(run_cli("compare --config " + (dir / "c.json").string() + " --out " + (dir / "out").string() +
                " --override model.premium_rate=2 --override n=0") == 2);
  CHECK_FALSE(fs::exists(dir / "out"));
}

TEST_CASE("Hypothesis violations exit with 3 and leave a report", "[cli]") {
  const fs::path dir = scratch("hyp");
  write(dir / "c.json", kValid);
  CHECK(run_cli("compare --config " + (dir / "c.json").string() + " --out " + (dir / "out").string() +
                " --override theorem=light_sharp") == 3);
  CHECK(fs::exists(dir / "out" / "hypothesis_report.json"));
  CHECK_FALSE(fs::exists(dir / "out" / "compare.csv"));
  // Net-profit violation.
  CHECK(run_cli("compare --config " + (dir / "c.json").string() + " --out " + (dir / "out2").string() +
                " --override model.premium_rate=0.9") == 3);
}

TEST_CASE("Numeric failures exit with 4", "[cli]") {
  const fs::path dir = scratch("num");
  write(dir / "c.json", kValid);
  const std::string gamma =
      " --override model.claim={\\\"kind\\\":\\\"gamma\\\",\\\"shape\\\":2,\\\"scale\\\":0.5}"
      " --override model.premium_rate=1 --override model.mixing.atoms=[{\\\"location\\\":0.975,\\\"mass\\\":1}]"
      " --override method=tilted_is";
  CHECK(run_cli("compare --config " + (dir / "c.json").string() + " --out " + (dir / "out").string() + gamma) == 4);
  CHECK_FALSE(fs::exists(dir / "out"));
}

TEST_CASE("Seed and worker flags", "[cli]") {
  const fs::path dir = scratch("flags");
  write(dir / "c.json", kValid);
  const std::string base = "compare --config " + (dir / "c.json").string();
  REQUIRE(run_cli(base + " --out " + (dir / "a").string() + " --workers 1") == 0);
  REQUIRE(run_cli(base + " --out " + (dir / "b").string() + " --workers 4") == 0);
  REQUIRE(run_cli(base + " --out " + (dir / "c").string() + " --seed 5") == 0);
  const auto slurp = [](const fs::path& p) {
    std::ifstream in(p);
    return std::string(std::istreambuf_iterator<char>(in), {});
  };
  CHECK(slurp(dir / "a" / "compare.csv") == slurp(dir / "b" / "compare.csv"));
  CHECK(slurp(dir / "a" / "compare.json") == slurp(dir / "b" / "compare.json"));
  CHECK(slurp(dir / "a" / "compare.csv") != slurp(dir / "c" / "compare.csv"));
}
