// locomp <subcommand> --config <path> [--out <dir>] [--threads <k>]

#include <omp.h>

#include <CLI11.hpp>
#include <filesystem>
#include <iostream>
#include <string>

#include "locomp/errors.hpp"
#include "locomp/experiment.hpp"

namespace {

int report_error(const std::string& kind, const std::string& message, int code, const std::filesystem::path& out) {
  const locomp::Json err{{"error", {{"type", kind}, {"message", message}, {"exit_code", code}}}};
  std::cerr << err.dump() << "\n";
  if (!out.empty()) {
    std::error_code ec;
    std::filesystem::create_directories(out, ec);
    if (!ec) {
      try {
        locomp::write_json(out / "error.json", err);
      } catch (...) {
      }
    }
  }
  return code;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Localization and compactness experiments on Bergman and Fock spaces"};
  app.require_subcommand(1, 1);

  std::string config_path;
  std::string out_dir;
  int threads = 0;
  for (const std::string& name : locomp::experiment_subcommands()) {
    CLI::App* sub = app.add_subcommand(name);
    sub->add_option("--config", config_path, "experiment config (JSON)")->required();
    sub->add_option("--out", out_dir, "output directory (overrides config.output)");
    sub->add_option("--threads", threads, "worker threads")->check(CLI::PositiveNumber);
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    if (rc == 0) return 0;
    return report_error("usage", e.what(), 2, {});
  }

  const std::string subcommand = app.get_subcommands().front()->get_name();
  std::filesystem::path out = out_dir;
  try {
    if (threads > 0) omp_set_num_threads(threads);
    const locomp::ExperimentConfig config = locomp::ExperimentConfig::load(config_path);
    if (out.empty()) out = config.output;
    locomp::run_experiment(subcommand, config, out);
  } catch (const locomp::NumericalError& e) {
    return report_error("numerical", e.what(), 3, out);
  } catch (const locomp::ValidationError& e) {
    return report_error("validation", e.what(), 2, out);
  } catch (const locomp::DomainError& e) {
    return report_error("domain", e.what(), 2, out);
  } catch (const std::exception& e) {
    return report_error("internal", e.what(), 3, out);
  }
  return 0;
}
