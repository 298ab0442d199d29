// Command-line front end: ruin_lab {simulate|asymptotics|compare|table}
//   --config PATH --out DIR [--seed N] [--workers K] [--override key=value]...
// Exit codes: 0 success, 2 config error, 3 hypothesis violation, 4 numeric failure.

#include <cstdlib>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <spdlog/sinks/stdout_color_sinks.h>
#include <spdlog/spdlog.h>

#include "ruinlab/config.hpp"
#include "ruinlab/errors.hpp"
#include "ruinlab/harness.hpp"

namespace {

enum ExitCode { kOk = 0, kUsage = 1, kConfig = 2, kHypothesis = 3, kNumeric = 4 };

void setup_logging() {
  auto logger = spdlog::stderr_color_mt("ruin_lab");
  spdlog::set_default_logger(logger);
  spdlog::set_pattern("[%l] %v");
  spdlog::set_level(spdlog::level::warn);
  if (const char* level = std::getenv("RUIN_LAB_LOG")) {
    const std::string s(level);
    if (s == "error") {
      spdlog::set_level(spdlog::level::err);
    } else if (s == "info") {
      spdlog::set_level(spdlog::level::info);
    } else if (s == "debug") {
      spdlog::set_level(spdlog::level::debug);
    } else {
      spdlog::warn("ignoring RUIN_LAB_LOG={} (expected error, info or debug)", s);
    }
  }
}

}  // namespace

int main(int argc, char** argv) {
  setup_logging();

  CLI::App app{"Classical and modified ruin under mixed Poisson claim arrivals"};
  app.require_subcommand(1, 1);
  std::string config_path;
  std::string out_dir;
  std::optional<std::uint64_t> seed;
  std::optional<unsigned> workers;
  std::vector<std::string> overrides;
  for (const char* name : {"simulate", "asymptotics", "compare", "table"}) {
    CLI::App* sub = app.add_subcommand(name);
    sub->add_option("--config", config_path, "experiment config (JSON)")->required();
    sub->add_option("--out", out_dir, "output directory")->required();
    sub->add_option("--seed", seed, "64-bit seed, overrides the config");
    sub->add_option("--workers", workers, "worker threads, overrides the config");
    sub->add_option("--override", overrides, "dotted key=value applied to the config");
  }
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? kOk : kUsage;
  }
  const std::string mode = app.get_subcommands().front()->get_name();

  try {
    nlohmann::json doc = ruinlab::load_json_file(config_path);
    for (const std::string& o : overrides) ruinlab::apply_override(doc, o);
    if (seed) doc["seed"] = *seed;
    if (workers) doc["workers"] = *workers;
    doc["mode"] = mode;
    const ruinlab::ExperimentConfig config = ruinlab::parse_config(doc);
    ruinlab::run(config, out_dir);
    return kOk;
  } catch (const ruinlab::ConfigError& e) {
    spdlog::error("config error: {}", e.what());
    return kConfig;
  } catch (const ruinlab::DomainError& e) {
    spdlog::error("config error: {}", e.what());
    return kConfig;
  } catch (const ruinlab::HypothesisViolation& e) {
    spdlog::error("hypothesis violation: {}", e.what());
    return kHypothesis;
  } catch (const ruinlab::NetProfitViolation& e) {
    spdlog::error("hypothesis violation: {}", e.what());
    return kHypothesis;
  } catch (const ruinlab::NumericFailure& e) {
    spdlog::error("numeric failure: {}", e.what());
    return kNumeric;
  } catch (const std::exception& e) {
    spdlog::error("{}", e.what());
    return kNumeric;
  }
}
