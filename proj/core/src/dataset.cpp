#include "featrank/dataset.hpp"

#include "featrank/csv.hpp"
#include "featrank/rng.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>
#include <unordered_map>

namespace featrank {

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t')) s.remove_suffix(1);
  return s;
}

bool parse_real(std::string_view s, double& out) {
  s = trim(s);
  if (s.empty()) return false;
  if (s.front() == '+') s.remove_prefix(1);
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
  return ec == std::errc() && ptr == s.data() + s.size() && std::isfinite(out);
}

}  // namespace

std::string_view to_string(Task t) {
  return t == Task::Binary ? "binary" : "multiclass";
}

std::string_view to_string(Variant v) {
  switch (v) {
    case Variant::Current: return "current";
    case Variant::Speed: return "speed";
    case Variant::Combined: return "combined";
  }
  return "?";
}

std::string_view to_string(Method m) {
  switch (m) {
    case Method::ReliefF: return "relieff";
    case Method::MRMR: return "mrmr";
    case Method::Lasso: return "lasso";
    case Method::SpikeSlab: return "spike_slab";
    case Method::ArdLogistic: return "ard";
  }
  return "?";
}

std::string_view display_name(Method m) {
  switch (m) {
    case Method::ReliefF: return "Rel";
    case Method::MRMR: return "mRMR";
    case Method::Lasso: return "LAS";
    case Method::SpikeSlab: return "SS";
    case Method::ArdLogistic: return "ARD";
  }
  return "?";
}

std::optional<Task> parse_task(std::string_view s) {
  for (auto t : kAllTasks)
    if (to_string(t) == s) return t;
  return std::nullopt;
}

std::optional<Variant> parse_variant(std::string_view s) {
  for (auto v : kAllVariants)
    if (to_string(v) == s) return v;
  return std::nullopt;
}

std::optional<Method> parse_method(std::string_view s) {
  for (auto m : kAllMethods)
    if (to_string(m) == s) return m;
  return std::nullopt;
}

void Dataset::validate() const {
  if (X.rows() != static_cast<Eigen::Index>(y.size())) {
    throw InputError("dataset: row count does not match label count");
  }
  if (X.cols() != static_cast<Eigen::Index>(feature_names.size())) {
    throw InputError("dataset: feature name count does not match column count");
  }
  std::set<std::string> seen;
  for (const auto& name : feature_names) {
    if (!seen.insert(name).second) {
      throw InputError("dataset: duplicate feature name '" + name + "'");
    }
  }
  const int k = classes();
  std::vector<int> counts(static_cast<std::size_t>(k), 0);
  for (int code : y) {
    if (code < 0 || code >= k) throw InputError("dataset: class code out of range");
    ++counts[static_cast<std::size_t>(code)];
  }
  for (int c = 0; c < k; ++c) {
    if (counts[static_cast<std::size_t>(c)] == 0) {
      throw InputError("dataset: class '" + class_names[static_cast<std::size_t>(c)] +
                       "' has no samples");
    }
  }
  if (task == Task::Binary && k != 2) {
    throw InputError("dataset: binary task requires exactly 2 classes");
  }
}

GroupPrefixes default_group_prefixes() {
  return {{Variant::Current, {"CURRENT"}}, {Variant::Speed, {"ROTO"}}};
}

Dataset parse_csv_dataset(const std::string& text, const std::string& label_column,
                          const std::vector<std::string>& class_order,
                          const std::string& source) {
  const auto rows = csv::parse(text);
  if (rows.empty()) throw InputError(source + ": missing header row");
  const auto& header = rows.front();

  int label_idx = -1;
  std::vector<std::string> names;
  std::vector<int> feature_cols;
  for (std::size_t c = 0; c < header.size(); ++c) {
    const std::string name(trim(header[c]));
    if (name == label_column) {
      label_idx = static_cast<int>(c);
    } else {
      names.push_back(name);
      feature_cols.push_back(static_cast<int>(c));
    }
  }
  if (label_idx < 0) {
    throw InputError(source + ": label column '" + label_column + "' not found in header");
  }
  if (rows.size() < 2) throw InputError(source + ": dataset has no rows");

  const auto n = static_cast<Eigen::Index>(rows.size() - 1);
  Dataset d;
  d.feature_names = names;
  d.X.resize(n, static_cast<Eigen::Index>(names.size()));
  std::vector<std::string> raw_labels;
  raw_labels.reserve(static_cast<std::size_t>(n));

  for (Eigen::Index i = 0; i < n; ++i) {
    const auto& row = rows[static_cast<std::size_t>(i) + 1];
    const auto line = std::to_string(i + 2);
    if (row.size() != header.size()) {
      throw InputError(source + ": line " + line + " has " + std::to_string(row.size()) +
                       " fields, header has " + std::to_string(header.size()));
    }
    raw_labels.emplace_back(trim(row[static_cast<std::size_t>(label_idx)]));
    for (std::size_t j = 0; j < feature_cols.size(); ++j) {
      const auto& cell = row[static_cast<std::size_t>(feature_cols[j])];
      double v = 0.0;
      if (!parse_real(cell, v)) {
        throw InputError(source + ": non-numeric value '" + cell + "' at line " + line +
                         ", column '" + names[j] + "'");
      }
      d.X(i, static_cast<Eigen::Index>(j)) = v;
    }
  }

  if (class_order.empty()) {
    std::set<std::string> uniq(raw_labels.begin(), raw_labels.end());
    d.class_names.assign(uniq.begin(), uniq.end());
  } else {
    d.class_names = class_order;
  }
  std::unordered_map<std::string, int> code_of;
  for (std::size_t c = 0; c < d.class_names.size(); ++c) {
    if (!code_of.emplace(d.class_names[c], static_cast<int>(c)).second) {
      throw InputError(source + ": duplicate class '" + d.class_names[c] + "' in class order");
    }
  }
  d.y.reserve(raw_labels.size());
  for (std::size_t i = 0; i < raw_labels.size(); ++i) {
    auto it = code_of.find(raw_labels[i]);
    if (it == code_of.end()) {
      throw InputError(source + ": label '" + raw_labels[i] + "' at line " +
                       std::to_string(i + 2) + " is not in the class order");
    }
    d.y.push_back(it->second);
  }
  d.task = Task::Multiclass;
  d.variant = Variant::Combined;
  d.validate();
  return d;
}

Dataset load_csv(const std::filesystem::path& path, const std::string& label_column,
                 const std::vector<std::string>& class_order) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open data file '" + path.string() + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_csv_dataset(buf.str(), label_column, class_order, path.string());
}

Dataset select_variant(const Dataset& d, Variant variant, const GroupPrefixes& prefixes) {
  if (variant == Variant::Combined) {
    Dataset out = d;
    out.variant = Variant::Combined;
    return out;
  }
  const auto it = prefixes.find(variant);
  if (it == prefixes.end() || it->second.empty()) {
    throw InputError("no column prefixes configured for variant '" +
                     std::string(to_string(variant)) + "'");
  }
  IndexList cols;
  for (int j = 0; j < d.features(); ++j) {
    const auto& name = d.feature_names[static_cast<std::size_t>(j)];
    for (const auto& prefix : it->second) {
      if (name.starts_with(prefix)) {
        cols.push_back(j);
        break;
      }
    }
  }
  if (cols.empty()) {
    throw InputError("variant '" + std::string(to_string(variant)) +
                     "' matches no feature columns");
  }
  Dataset out;
  out.X = take_cols(d.X, cols);
  for (int j : cols) out.feature_names.push_back(d.feature_names[static_cast<std::size_t>(j)]);
  out.y = d.y;
  out.class_names = d.class_names;
  out.task = d.task;
  out.variant = variant;
  return out;
}

Dataset encode_binary(const Dataset& d, const std::string& healthy_class) {
  const auto it = std::find(d.class_names.begin(), d.class_names.end(), healthy_class);
  if (it == d.class_names.end()) {
    throw InputError("healthy class '" + healthy_class + "' is not among the dataset classes");
  }
  const int healthy = static_cast<int>(it - d.class_names.begin());
  Dataset out;
  out.feature_names = d.feature_names;
  out.X = d.X;
  out.y.reserve(d.y.size());
  for (int code : d.y) out.y.push_back(code == healthy ? 0 : 1);
  if (std::find(out.y.begin(), out.y.end(), 1) == out.y.end()) {
    throw InputError("binary encoding leaves a single class: every sample is '" +
                     healthy_class + "'");
  }
  out.class_names = {healthy_class, "Damaged"};
  out.task = Task::Binary;
  out.variant = d.variant;
  return out;
}

Standardizer fit_standardizer(const Matrix& X_train) {
  if (X_train.rows() < 2) throw InputError("standardizer needs at least 2 rows");
  Standardizer s;
  s.means = X_train.colwise().mean().transpose();
  s.scales.resize(X_train.cols());
  const double denom = static_cast<double>(X_train.rows() - 1);
  for (Eigen::Index j = 0; j < X_train.cols(); ++j) {
    const double ss = (X_train.col(j).array() - s.means(j)).square().sum();
    const double sd = std::sqrt(ss / denom);
    s.scales(j) = sd > 0.0 ? sd : 1.0;
  }
  return s;
}

Matrix apply_standardizer(const Standardizer& s, const Matrix& X) {
  if (X.cols() != s.means.size()) {
    throw InputError("standardizer fitted on " + std::to_string(s.means.size()) +
                     " columns, applied to " + std::to_string(X.cols()));
  }
  Matrix out = X;
  for (Eigen::Index j = 0; j < X.cols(); ++j) {
    out.col(j) = (X.col(j).array() - s.means(j)) / s.scales(j);
  }
  return out;
}

std::vector<Split> stratified_kfold(std::span<const int> y, int folds, int repeat_count,
                                    std::uint64_t seed) {
  if (folds < 2) throw InputError("stratified_kfold: K must be at least 2");
  if (repeat_count < 1) throw InputError("stratified_kfold: repeat count must be at least 1");
  if (y.empty()) throw InputError("stratified_kfold: empty label sequence");

  const int max_code = *std::max_element(y.begin(), y.end());
  std::vector<IndexList> members(static_cast<std::size_t>(max_code) + 1);
  for (std::size_t i = 0; i < y.size(); ++i) {
    if (y[i] < 0) throw InputError("stratified_kfold: negative class code");
    members[static_cast<std::size_t>(y[i])].push_back(static_cast<int>(i));
  }
  for (std::size_t c = 0; c < members.size(); ++c) {
    const auto count = members[c].size();
    if (count > 0 && count < static_cast<std::size_t>(folds)) {
      throw InputError("stratified_kfold: class " + std::to_string(c) + " has " +
                       std::to_string(count) + " members, fewer than K=" +
                       std::to_string(folds));
    }
  }

  std::vector<Split> out;
  out.reserve(static_cast<std::size_t>(repeat_count * folds));
  std::vector<int> fold_of(y.size());
  for (int r = 0; r < repeat_count; ++r) {
    // Continue the round-robin deal across classes so fold sizes stay within
    // one of each other overall too.
    int next_fold = 0;
    for (std::size_t c = 0; c < members.size(); ++c) {
      IndexList idx = members[c];
      auto rng = CounterRng::keyed({seed, static_cast<std::uint64_t>(r), c});
      rng.shuffle(idx);
      for (int i : idx) {
        fold_of[static_cast<std::size_t>(i)] = next_fold;
        next_fold = (next_fold + 1) % folds;
      }
    }
    for (int f = 0; f < folds; ++f) {
      Split s;
      s.repeat_id = r;
      s.fold_id = f;
      for (std::size_t i = 0; i < y.size(); ++i) {
        (fold_of[i] == f ? s.test_indices : s.train_indices).push_back(static_cast<int>(i));
      }
      out.push_back(std::move(s));
    }
  }
  return out;
}

Matrix take_rows(const Matrix& X, std::span<const int> rows) {
  Matrix out(static_cast<Eigen::Index>(rows.size()), X.cols());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    out.row(static_cast<Eigen::Index>(i)) = X.row(rows[i]);
  }
  return out;
}

Matrix take_cols(const Matrix& X, std::span<const int> cols) {
  Matrix out(X.rows(), static_cast<Eigen::Index>(cols.size()));
  for (std::size_t j = 0; j < cols.size(); ++j) {
    out.col(static_cast<Eigen::Index>(j)) = X.col(cols[j]);
  }
  return out;
}

Labels take(std::span<const int> y, std::span<const int> rows) {
  Labels out;
  out.reserve(rows.size());
  for (int i : rows) out.push_back(y[static_cast<std::size_t>(i)]);
  return out;
}

}  // namespace featrank
