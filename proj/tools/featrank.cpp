// featrank: rank features, run the cross-validated comparison, render reports.

#include "config.hpp"
#include "experiment.hpp"

#include "CLI11.hpp"

#include <iostream>
#include <optional>

namespace {

using namespace featrank;
using namespace featrank::app;

constexpr int kOk = 0;
constexpr int kRuntimeFailure = 1;
constexpr int kUsageError = 2;

struct Overrides {
  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::string out;
};

ExperimentConfig effective_config(const Overrides& o) {
  ExperimentConfig c = o.config_path.empty() ? ExperimentConfig{} : load_config(o.config_path);
  if (o.seed) c.seed = *o.seed;
  if (!o.out.empty()) c.output_dir = o.out;
  c.validate();
  return c;
}

std::string method_list() {
  std::string s;
  for (Method m : kAllMethods) s += (s.empty() ? "" : ", ") + std::string(to_string(m));
  return s;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Feature ranking benchmark: five rankers under repeated stratified cross-validation"};
  app.require_subcommand(1);
  app.fallthrough();

  Overrides o;
  std::uint64_t seed = 0;
  app.add_option("--config", o.config_path, "configuration file (defaults are built in)");
  auto* seed_opt = app.add_option("--seed", seed, "override protocol.seed");
  app.add_option("--out", o.out, "output directory (overrides output.dir; results directory for 'report')");

  std::string task_name = "binary", variant_name = "combined", method_name;
  auto* rank = app.add_subcommand("rank", "rank the features of one (task, variant) on the whole dataset");
  rank->add_option("--task", task_name, "binary or multiclass");
  rank->add_option("--variant", variant_name, "current, speed or combined");
  rank->add_option("--method", method_name, "one of: " + method_list())->required();

  auto* evaluate = app.add_subcommand("evaluate", "run every configured cell and write result files");
  auto* report = app.add_subcommand("report", "render tables and figure data from evaluate output");
  auto* print = app.add_subcommand("print-config", "print the effective configuration");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kUsageError;
  }
  if (*seed_opt) o.seed = seed;

  ExperimentConfig cfg;
  try {
    cfg = effective_config(o);
  } catch (const ConfigError& e) {
    std::cerr << "featrank: config error: " << e.what() << "\n";
    return kUsageError;
  }

  try {
    if (print->parsed()) {
      std::cout << to_text(cfg);
    } else if (rank->parsed()) {
      const auto task = parse_task(task_name);
      const auto variant = parse_variant(variant_name);
      const auto method = parse_method(method_name);
      if (!task) {
        std::cerr << "featrank: unknown task '" << task_name << "' (valid: binary, multiclass)\n";
        return kUsageError;
      }
      if (!variant) {
        std::cerr << "featrank: unknown variant '" << variant_name << "' (valid: current, speed, combined)\n";
        return kUsageError;
      }
      if (!method) {
        std::cerr << "featrank: unknown method '" << method_name << "' (valid: " << method_list() << ")\n";
        return kUsageError;
      }
      std::cout << write_ranking(cfg, *task, *variant, *method).string() << "\n";
    } else if (evaluate->parsed()) {
      const auto run = run_evaluation(cfg, true);
      write_evaluation(cfg, run);
      std::cout << (cfg.output_dir / kSummaryFile).string() << "\n";
    } else if (report->parsed()) {
      write_report(cfg.output_dir);
      std::cout << (cfg.output_dir / kReportFile).string() << "\n";
    }
  } catch (const std::exception& e) {
    std::cerr << "featrank: " << e.what() << "\n";
    return kRuntimeFailure;
  }
  return kOk;
}
