// gaussdev: run a verification suite and emit its report.
//
//   gaussdev verify --config deviation.json --out report.json
//   gaussdev smallball --seed 7 --workers 4 --format csv --out out/smallball
//   gaussdev params --print-config > params.json
//
// Exit status: 0 all verdicts PASS, 2 some FAIL, 3 refused or bad config.

#include <CLI11.hpp>

#include <cstdlib>
#include <iostream>
#include <map>

#include "gaussdev/cli.hpp"
#include "gaussdev/error.hpp"

namespace cli = gaussdev::cli;

int main(int argc, char** argv) {
  CLI::App app{"Monte Carlo certification of small-deviation and small-ball inequalities"};
  app.require_subcommand(1);

  std::string config_path, out, format;
  std::optional<std::uint64_t> seed;
  std::optional<unsigned> workers;
  std::optional<std::size_t> samples;
  bool print_config = false;

  const std::map<std::string, std::string> commands{
      {"verify", ""},           {"params", "params"}, {"smallball", "smallball"}, {"negmoments", "negmoments"},
      {"gp", "gp"},             {"jl", "jl"},         {"calibrate", "calibration"},
  };
  std::map<std::string, CLI::App*> subs;
  for (const auto& [name, suite] : commands) {
    auto* sub = app.add_subcommand(name, name == "verify" ? "run the suite named in --config (default: deviation)"
                                                          : "run the " + suite + " suite");
    sub->add_option("--config", config_path, "JSON experiment config");
    sub->add_option("--seed", seed, "master seed");
    sub->add_option("--workers", workers, "worker threads (env GAUSSDEV_WORKERS)");
    sub->add_option("--samples", samples, "Monte Carlo sample count");
    sub->add_option("--out", out, "output file (json) or file stem (csv); default stdout");
    sub->add_option("--format", format, "json or csv")->check(CLI::IsMember({"json", "csv"}));
    sub->add_flag("--print-config", print_config, "print the effective config and exit");
    subs[name] = sub;
  }
  CLI11_PARSE(app, argc, argv);

  std::string command;
  for (const auto& [name, sub] : subs)
    if (sub->parsed()) command = name;

  try {
    cli::ExperimentConfig cfg;
    if (!config_path.empty()) {
      cfg = cli::load_config(config_path);
      const auto& wanted = commands.at(command);
      if (!wanted.empty() && cfg.suite != wanted)
        throw cli::ConfigError("config suite '" + cfg.suite + "' does not match subcommand '" + command + "'");
    } else {
      cfg = cli::default_config(command == "verify" ? "deviation" : commands.at(command));
    }
    // Precedence: command line > environment > config file.
    if (const char* env = std::getenv("GAUSSDEV_WORKERS"); env && *env) {
      try {
        cfg.workers = static_cast<unsigned>(std::stoul(env));
      } catch (const std::exception&) {
        throw cli::ConfigError(std::string("GAUSSDEV_WORKERS is not a number: '") + env + "'");
      }
    }
    if (workers) cfg.workers = *workers;
    if (seed) cfg.seed = *seed;
    if (samples) cfg.samples = *samples;
    if (!out.empty()) cfg.output = out;
    if (!format.empty()) cfg.format = format;

    if (print_config) {
      std::cout << cli::to_json(cfg).dump(2) << "\n";
      return 0;
    }
    const auto report = cli::run(cfg);
    cli::emit(report, cfg.format, cfg.output);
    if (report.status == 3) std::cerr << "refused: " << report.payload["refusal"].get<std::string>() << "\n";
    return report.status;
  } catch (const cli::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 3;
  } catch (const gaussdev::Refusal& e) {
    std::cerr << "refused: " << e.what() << "\n";
    return 3;
  } catch (const std::invalid_argument& e) {
    std::cerr << "invalid input: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
