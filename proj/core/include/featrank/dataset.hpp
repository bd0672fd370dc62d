#pragma once

#include "featrank/types.hpp"

#include <cstdint>
#include <filesystem>
#include <map>
#include <span>
#include <string>
#include <vector>

namespace featrank {

/// Feature matrix with named columns and contiguous integer class codes.
///
/// Invariants (checked by validate()): rows(X) == y.size(), unique feature
/// names matching cols(X), class codes in [0, class_names.size()) with every
/// code present.
struct Dataset {
  std::vector<std::string> feature_names;
  Matrix X;
  Labels y;
  std::vector<std::string> class_names;
  Task task = Task::Multiclass;
  Variant variant = Variant::Combined;

  int samples() const { return static_cast<int>(X.rows()); }
  int features() const { return static_cast<int>(X.cols()); }
  int classes() const { return static_cast<int>(class_names.size()); }

  void validate() const;
};

/// Variant -> list of column-name prefixes.
using GroupPrefixes = std::map<Variant, std::vector<std::string>>;

GroupPrefixes default_group_prefixes();

/// Reads a header-first CSV. Non-label columns become features; the label
/// column is mapped to class codes in `class_order` order when given, else by
/// sorted class name.
Dataset load_csv(const std::filesystem::path& path,
                 const std::string& label_column = "class",
                 const std::vector<std::string>& class_order = {});

/// Same as load_csv but on in-memory text; `source` names the origin in
/// error messages.
Dataset parse_csv_dataset(const std::string& text, const std::string& label_column,
                          const std::vector<std::string>& class_order = {},
                          const std::string& source = "<memory>");

Dataset select_variant(const Dataset& d, Variant variant,
                       const GroupPrefixes& prefixes = default_group_prefixes());

/// Healthy class becomes code 0, everything else code 1.
Dataset encode_binary(const Dataset& d, const std::string& healthy_class);

/// Per-column affine map fitted on a training partition.
struct Standardizer {
  Vector means;
  Vector scales;
};

Standardizer fit_standardizer(const Matrix& X_train);
Matrix apply_standardizer(const Standardizer& s, const Matrix& X);

/// One train/test partition from repeated stratified K-fold.
struct Split {
  int repeat_id = 0;
  int fold_id = 0;
  IndexList train_indices;
  IndexList test_indices;
};

/// Repeated stratified K-fold. Each class's indices are shuffled with a
/// generator keyed on (seed, repeat, class) and dealt round-robin into folds.
/// Splits are ordered by (repeat, fold); index lists are ascending.
std::vector<Split> stratified_kfold(std::span<const int> y, int folds,
                                    int repeat_count, std::uint64_t seed);

/// Row subset of X.
Matrix take_rows(const Matrix& X, std::span<const int> rows);
/// Column subset of X, in the given order.
Matrix take_cols(const Matrix& X, std::span<const int> cols);
Labels take(std::span<const int> y, std::span<const int> rows);

}  // namespace featrank
