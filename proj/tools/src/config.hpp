#pragma once

#include "featrank/dataset.hpp"
#include "featrank/eval.hpp"
#include "featrank/rankers.hpp"
#include "featrank/types.hpp"

#include <cstdint>
#include <filesystem>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

namespace featrank::app {

/// Bad configuration text or values. Maps to exit code 2.
class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

struct ExperimentConfig {
  std::filesystem::path data_path = "data/benchmark.csv";
  std::string label_column = "class";
  std::string healthy_class = "Healthy";
  /// Empty means sorted class names.
  std::vector<std::string> class_order;
  GroupPrefixes group_prefixes = default_group_prefixes();

  std::vector<Task> tasks{std::begin(kAllTasks), std::end(kAllTasks)};
  std::vector<Variant> variants{std::begin(kAllVariants), std::end(kAllVariants)};
  std::vector<Method> methods{std::begin(kAllMethods), std::end(kAllMethods)};
  int folds = 5;
  int repeats = 10;
  std::uint64_t seed = 20240917;
  int threads = 1;
  std::map<Variant, std::vector<int>> k_grids{
      {Variant::Current, default_k_grid(Variant::Current)},
      {Variant::Speed, default_k_grid(Variant::Speed)},
      {Variant::Combined, default_k_grid(Variant::Combined)}};

  RankerSettings rankers{};
  double classifier_ridge = 1.0;
  glm::SolverOptions classifier_solver{};

  std::filesystem::path output_dir = "results";

  /// Throws ConfigError on out-of-range values.
  void validate() const;
  PipelineConfig pipeline(Variant v) const;
};

/// Parses the sectioned key = value format written by to_text. Unknown
/// sections or keys are errors; omitted keys keep their defaults.
ExperimentConfig parse_config(const std::string& text, const std::string& source = "<config>");
ExperimentConfig load_config(const std::filesystem::path& path);

/// Every setting, defaults included. parse_config(to_text(c)) == c.
std::string to_text(const ExperimentConfig& c);

}  // namespace featrank::app
