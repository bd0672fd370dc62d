#pragma once

#include "featrank/dataset.hpp"
#include "featrank/glm.hpp"
#include "featrank/rankers.hpp"
#include "featrank/types.hpp"

#include <cstdint>
#include <span>
#include <variant>
#include <vector>

namespace featrank {

struct ResultRecord {
  Method method = Method::ReliefF;
  Task task = Task::Binary;
  Variant variant = Variant::Combined;
  int k = 0;
  int repeat_id = 0;
  int fold_id = 0;
  double balanced_accuracy = 0.0;
  IndexList selected_features;
  double runtime_ms = 0.0;
};

/// True when every field except runtime_ms matches.
bool same_result(const ResultRecord& a, const ResultRecord& b);

struct BestResult {
  Method method = Method::ReliefF;
  Task task = Task::Binary;
  Variant variant = Variant::Combined;
  double best_balanced_accuracy = 0.0;
  int best_k = 0;
  double stability = 0.0;
  /// Mean balanced accuracy for every k of the grid, in grid order.
  std::vector<std::pair<int, double>> mean_by_k;
};

struct PipelineConfig {
  std::vector<int> k_grid;
  int folds = 5;
  int repeats = 10;
  std::uint64_t seed = 0;
  RankerSettings rankers{};
  double classifier_ridge = 1.0;
  glm::SolverOptions classifier_solver{};
  /// Worker threads for split-level parallelism; results do not depend on it.
  int threads = 1;
};

/// Subset sizes searched per variant: {3,5,7,10,13} for single-domain
/// variants and {3,5,7,10,13,16,20,26} for the combined set.
std::vector<int> default_k_grid(Variant v);

double balanced_accuracy(std::span<const int> y_true, std::span<const int> y_pred);

/// |a ∩ b| / |a ∪ b|; 1 when both are empty. Duplicates are ignored.
double jaccard(std::span<const int> a, std::span<const int> b);

/// Mean Jaccard index over all unordered pairs of subsets.
double stability(const std::vector<IndexList>& subsets);

using DownstreamModel = std::variant<glm::Coefficients, glm::OvrModel>;

/// Everything computed for a single split, exposed for leakage checks.
struct SplitOutcome {
  Split split;
  Ranking ranking;
  Standardizer standardizer;
  std::vector<IndexList> selected;  // per k_grid entry
  std::vector<DownstreamModel> models;
  std::vector<double> balanced_accuracy;
  std::vector<double> runtime_ms;
};

/// Train-only standardization, ranking on the training rows, then for each
/// k a downstream ridge logistic (one-vs-rest for multiclass) on the top-k
/// training columns, scored on the test rows.
SplitOutcome evaluate_split(const Dataset& d, const Split& split, Method method,
                            const PipelineConfig& cfg);

/// Runs evaluate_split over every split of repeated stratified K-fold.
/// Records are ordered by (repeat, fold, k grid position).
std::vector<ResultRecord> run_pipeline(const Dataset& d, Method method, const PipelineConfig& cfg);

/// Per-k mean balanced accuracy over splits; best k is the argmax with ties
/// to the smaller k. Stability is the mean pairwise Jaccard of the top-k
/// subsets of all splits at the best k.
BestResult best_over_k(std::span<const ResultRecord> records, std::span<const int> k_grid);

/// Seed handed to the ranker for one split.
std::uint64_t split_seed(std::uint64_t seed, int repeat_id, int fold_id);

}  // namespace featrank
