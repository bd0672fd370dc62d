#pragma once

#include "featrank/glm.hpp"
#include "featrank/types.hpp"

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace featrank {

/// Full feature ranking: `order` lists feature indices best first, `scores`
/// is aligned to feature index. For score-based methods the order is the
/// descending score sort with ties to the lower index; for mRMR it is the
/// greedy selection order and scores hold the criterion value at each
/// feature's selection step.
struct Ranking {
  Method method = Method::ReliefF;
  IndexList order;
  std::vector<double> scores;
  std::map<std::string, std::string> meta;

  /// First k entries of `order`.
  IndexList top(int k) const;
};

/// Builds a Ranking by sorting scores descending, ties by ascending index.
Ranking ranking_from_scores(Method method, std::vector<double> scores,
                            std::map<std::string, std::string> meta = {});

struct ReliefFSettings {
  int neighbors = 10;
};

struct MrmrSettings {
  int bins = 8;
};

struct LassoSettings {
  int grid_size = 20;
  int inner_folds = 3;
  /// Smallest grid lambda as a fraction of lambda_max.
  double min_ratio = 1e-3;
  glm::SolverOptions solver{};
};

struct ArdRankSettings {
  double epsilon = 0.1;
  glm::ArdSettings fit{};
};

struct RankerSettings {
  ReliefFSettings relieff{};
  MrmrSettings mrmr{};
  LassoSettings lasso{};
  glm::SpikeSlabSettings spike_slab{};
  ArdRankSettings ard{};
};

/// Multiclass ReliefF over all n instances. For each instance the
/// `neighbors` nearest hits and, for every other class C, the `neighbors`
/// nearest misses are found by Euclidean distance on range-normalized
/// features; miss terms are weighted by P(C) / (1 - P(class of instance)).
/// Every class needs more than `neighbors` members.
Ranking rank_relieff(const Matrix& X, std::span<const int> y, int neighbors,
                     std::optional<std::vector<double>> class_priors = std::nullopt);

/// Greedy mRMR (difference form) on equal-frequency discretized features.
Ranking rank_mrmr(const Matrix& X, std::span<const int> y, int bins);

/// L1-logistic ranking by |beta_j|, lambda chosen by inner stratified CV on
/// held-out deviance. Multiclass labels are handled one-vs-rest with the
/// mean of |beta_j| over classes.
Ranking rank_lasso(const Matrix& X, std::span<const int> y, const LassoSettings& settings,
                   std::uint64_t seed);

/// Posterior inclusion probabilities; one-vs-rest averaged for multiclass.
Ranking rank_spike_slab(const Matrix& X, std::span<const int> y,
                        const glm::SpikeSlabSettings& settings);

/// Posterior exceedance probabilities Pr(|beta_j| > epsilon) from the ARD
/// fit; one-vs-rest averaged for multiclass.
Ranking rank_ard(const Matrix& X, std::span<const int> y, double epsilon,
                 const glm::ArdSettings& settings);

/// Elementwise mean of per-class score vectors.
std::vector<double> aggregate_ovr_scores(const std::vector<std::vector<double>>& per_class);

/// Dispatches to the method. ReliefF neighbors are clamped to
/// (smallest class size - 1); the value used is recorded in meta.
Ranking rank_features(Method method, const Matrix& X, std::span<const int> y,
                      const RankerSettings& settings, std::uint64_t seed);

/// Shortest round-trip decimal form, used for meta values.
std::string format_number(double v);

}  // namespace featrank
