// forgetting-lab: run forgetting simulations, emit figure data, verify bounds.

#include "forgetting/checks.hpp"
#include "forgetting/errors.hpp"
#include "forgetting/experiment.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <sstream>

namespace {

enum ExitCode : int {
  kOk = 0,
  kConfig = 2,
  kValidation = 3,
  kInfeasible = 4,
  kCheckFailure = 5,
};

// Writes through `write` to `path`, or to stdout when path is empty.
template <class Fn>
void emit(const std::filesystem::path& path, Fn&& write) {
  if (path.empty()) {
    write(std::cout);
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw forgetting::ConfigError("cannot write " + path.string());
  write(out);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Catastrophic forgetting simulations for sequential linear regression"};
  app.require_subcommand(1);

  std::string config_path;
  std::string out_path;
  auto* simulate = app.add_subcommand("simulate", "run one experiment config, write CSV");
  simulate->add_option("config", config_path, "experiment config (JSON)")->required();
  simulate->add_option("--out", out_path, "CSV path (overrides output_path)");

  std::string figure_name;
  auto* figure = app.add_subcommand("figure", "write figure data as CSV");
  figure->add_option("name", figure_name, "fig3a, fig3b or fig5")->required();
  figure->add_option("--out", out_path, "CSV path (stdout when omitted)");

  std::string suite = "all";
  auto* check = app.add_subcommand("check", "verify the analytic bounds by simulation");
  check->add_option("--suite", suite, "quick or all")->check(CLI::IsMember({"quick", "all"}));
  double time_scale = 1.0;
  check->add_option("--time-scale", time_scale, "multiplier on every check's time limit")
      ->check(CLI::NonNegativeNumber);

  auto* sweep = app.add_subcommand("sweep", "run a config over a grid of parameter values");
  sweep->add_option("config", config_path, "config with a \"sweep\" object")->required();
  sweep->add_option("--out", out_path, "CSV path (overrides output_path)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kConfig;
  }

  try {
    if (*simulate) {
      const auto config = forgetting::load_config(config_path);
      const auto result = forgetting::simulate(config);
      emit(out_path.empty() ? config.output_path : std::filesystem::path(out_path),
           [&](std::ostream& os) { forgetting::write_csv(os, result); });
    } else if (*figure) {
      std::ostringstream buffer;
      forgetting::write_figure(figure_name, buffer);
      emit(out_path, [&](std::ostream& os) { os << buffer.str(); });
    } else if (*check) {
      auto selected = forgetting::checks(suite == "quick" ? forgetting::CheckSuite::quick
                                                          : forgetting::CheckSuite::all);
      for (auto& c : selected) c.time_limit *= time_scale;
      const auto results = forgetting::run_checks(selected);
      return forgetting::print_report(std::cout, results) ? kOk : kCheckFailure;
    } else if (*sweep) {
      std::ifstream in(config_path);
      if (!in) throw forgetting::ConfigError("cannot open config " + config_path);
      nlohmann::ordered_json doc;
      try {
        doc = nlohmann::ordered_json::parse(in);
      } catch (const nlohmann::json::exception& e) {
        throw forgetting::ConfigError(config_path + ": " + e.what());
      }
      std::filesystem::path target = out_path;
      if (target.empty() && doc.contains("output_path")) {
        target = doc.at("output_path").get<std::string>();
      }
      std::ostringstream buffer;
      forgetting::run_sweep(doc, std::filesystem::path(config_path).parent_path(), buffer);
      emit(target, [&](std::ostream& os) { os << buffer.str(); });
    }
  } catch (const forgetting::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kConfig;
  } catch (const forgetting::InvalidInput& e) {
    std::cerr << "invalid input: " << e.what() << "\n";
    return kConfig;
  } catch (const forgetting::ValidationFailure& e) {
    std::cerr << "validation failed: " << e.what() << "\n";
    return kValidation;
  } catch (const forgetting::Infeasible& e) {
    std::cerr << "infeasible: " << e.what() << " (max residual " << e.max_residual() << ")\n";
    return kInfeasible;
  }
  return kOk;
}
