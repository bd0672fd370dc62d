#include "featrank/eval.hpp"

#include "featrank/rng.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <exception>
#include <map>
#include <set>
#include <thread>
#include <tuple>

namespace featrank {

bool same_result(const ResultRecord& a, const ResultRecord& b) {
  return a.method == b.method && a.task == b.task && a.variant == b.variant && a.k == b.k &&
         a.repeat_id == b.repeat_id && a.fold_id == b.fold_id &&
         a.balanced_accuracy == b.balanced_accuracy && a.selected_features == b.selected_features;
}

std::vector<int> default_k_grid(Variant v) {
  if (v == Variant::Combined) return {3, 5, 7, 10, 13, 16, 20, 26};
  return {3, 5, 7, 10, 13};
}

double balanced_accuracy(std::span<const int> y_true, std::span<const int> y_pred) {
  if (y_true.size() != y_pred.size()) throw InputError("balanced_accuracy: length mismatch");
  if (y_true.empty()) throw InputError("balanced_accuracy: empty input");
  std::map<int, std::pair<int, int>> per_class;  // class -> (correct, total)
  for (std::size_t i = 0; i < y_true.size(); ++i) {
    auto& [correct, total] = per_class[y_true[i]];
    ++total;
    if (y_pred[i] == y_true[i]) ++correct;
  }
  double acc = 0.0;
  for (const auto& [cls, ct] : per_class) {
    acc += static_cast<double>(ct.first) / static_cast<double>(ct.second);
  }
  return acc / static_cast<double>(per_class.size());
}

double jaccard(std::span<const int> a, std::span<const int> b) {
  const std::set<int> sa(a.begin(), a.end());
  const std::set<int> sb(b.begin(), b.end());
  if (sa.empty() && sb.empty()) return 1.0;
  std::size_t inter = 0;
  for (int v : sa) inter += sb.count(v);
  const std::size_t uni = sa.size() + sb.size() - inter;
  return static_cast<double>(inter) / static_cast<double>(uni);
}

double stability(const std::vector<IndexList>& subsets) {
  if (subsets.size() < 2) throw InputError("stability: need at least 2 subsets");
  double acc = 0.0;
  std::size_t pairs = 0;
  for (std::size_t a = 0; a < subsets.size(); ++a) {
    for (std::size_t b = a + 1; b < subsets.size(); ++b) {
      acc += jaccard(subsets[a], subsets[b]);
      ++pairs;
    }
  }
  return acc / static_cast<double>(pairs);
}

std::uint64_t split_seed(std::uint64_t seed, int repeat_id, int fold_id) {
  return CounterRng::keyed({seed, static_cast<std::uint64_t>(repeat_id),
                            static_cast<std::uint64_t>(fold_id), 0x1a550ULL})
      .next();
}

SplitOutcome evaluate_split(const Dataset& d, const Split& split, Method method,
                            const PipelineConfig& cfg) {
  using clock = std::chrono::steady_clock;
  for (int k : cfg.k_grid) {
    if (k < 1 || k > d.features()) {
      throw InputError("subset size k=" + std::to_string(k) + " outside [1, " +
                       std::to_string(d.features()) + "]");
    }
  }
  SplitOutcome out;
  out.split = split;

  const auto t0 = clock::now();
  const Matrix X_train_raw = take_rows(d.X, split.train_indices);
  const Matrix X_test_raw = take_rows(d.X, split.test_indices);
  const Labels y_train = take(d.y, split.train_indices);
  const Labels y_test = take(d.y, split.test_indices);

  out.standardizer = fit_standardizer(X_train_raw);
  const Matrix X_train = apply_standardizer(out.standardizer, X_train_raw);
  const Matrix X_test = apply_standardizer(out.standardizer, X_test_raw);

  out.ranking = rank_features(method, X_train, y_train, cfg.rankers,
                              split_seed(cfg.seed, split.repeat_id, split.fold_id));
  const double rank_ms = std::chrono::duration<double, std::milli>(clock::now() - t0).count();

  const bool binary = d.task == Task::Binary || d.classes() == 2;
  for (int k : cfg.k_grid) {
    const auto t1 = clock::now();
    IndexList cols = out.ranking.top(k);
    const Matrix Xtr = take_cols(X_train, cols);
    const Matrix Xte = take_cols(X_test, cols);
    std::vector<int> pred;
    if (binary) {
      auto model = glm::fit_ridge_logistic(Xtr, y_train, cfg.classifier_ridge, cfg.classifier_solver);
      pred = glm::predict_binary(model, Xte);
      out.models.emplace_back(std::move(model));
    } else {
      auto model = glm::fit_ovr_classifier(Xtr, y_train, cfg.classifier_ridge,
                                           cfg.classifier_solver, d.classes());
      pred = glm::predict_ovr(model, Xte);
      out.models.emplace_back(std::move(model));
    }
    out.balanced_accuracy.push_back(balanced_accuracy(y_test, pred));
    out.selected.push_back(std::move(cols));
    out.runtime_ms.push_back(rank_ms +
                             std::chrono::duration<double, std::milli>(clock::now() - t1).count());
  }
  return out;
}

std::vector<ResultRecord> run_pipeline(const Dataset& d, Method method, const PipelineConfig& cfg) {
  if (cfg.k_grid.empty()) throw InputError("run_pipeline: empty k grid");
  for (int k : cfg.k_grid) {
    if (k < 1 || k > d.features()) {
      throw InputError("run_pipeline: k=" + std::to_string(k) + " exceeds the " +
                       std::to_string(d.features()) + " available features");
    }
  }
  if (cfg.repeats < 1) throw InputError("run_pipeline: repeats must be >= 1");
  const auto splits = stratified_kfold(d.y, cfg.folds, cfg.repeats, cfg.seed);

  std::vector<std::vector<ResultRecord>> per_split(splits.size());
  std::vector<std::exception_ptr> errors(splits.size());

  auto work = [&](std::size_t s) {
    try {
      const auto& sp = splits[s];
      const auto outcome = evaluate_split(d, sp, method, cfg);
      auto& recs = per_split[s];
      for (std::size_t g = 0; g < cfg.k_grid.size(); ++g) {
        ResultRecord r;
        r.method = method;
        r.task = d.task;
        r.variant = d.variant;
        r.k = cfg.k_grid[g];
        r.repeat_id = sp.repeat_id;
        r.fold_id = sp.fold_id;
        r.balanced_accuracy = outcome.balanced_accuracy[g];
        r.selected_features = outcome.selected[g];
        r.runtime_ms = outcome.runtime_ms[g];
        recs.push_back(std::move(r));
      }
    } catch (...) {
      errors[s] = std::current_exception();
    }
  };

  const int threads = std::max(1, cfg.threads);
  if (threads == 1) {
    for (std::size_t s = 0; s < splits.size(); ++s) work(s);
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::jthread> pool;
    for (int t = 0; t < threads; ++t) {
      pool.emplace_back([&] {
        for (std::size_t s = next++; s < splits.size(); s = next++) work(s);
      });
    }
  }

  for (std::size_t s = 0; s < splits.size(); ++s) {
    if (!errors[s]) continue;
    const std::string where = std::string(to_string(method)) + " repeat=" +
                              std::to_string(splits[s].repeat_id) +
                              " fold=" + std::to_string(splits[s].fold_id);
    try {
      std::rethrow_exception(errors[s]);
    } catch (const std::exception& e) {
      throw ComputeError("split " + where + ": " + e.what());
    }
  }

  std::vector<ResultRecord> all;
  all.reserve(splits.size() * cfg.k_grid.size());
  for (auto& recs : per_split) {
    for (auto& r : recs) all.push_back(std::move(r));
  }
  return all;
}

BestResult best_over_k(std::span<const ResultRecord> records, std::span<const int> k_grid) {
  if (records.empty()) throw InputError("best_over_k: no records");
  if (k_grid.empty()) throw InputError("best_over_k: empty k grid");
  BestResult best;
  best.method = records.front().method;
  best.task = records.front().task;
  best.variant = records.front().variant;

  std::map<int, std::vector<const ResultRecord*>> by_k;
  std::set<std::pair<int, int>> split_ids;
  for (const auto& r : records) {
    if (r.method != best.method || r.task != best.task || r.variant != best.variant) {
      throw InputError("best_over_k: records mix several (method, task, variant) cells");
    }
    by_k[r.k].push_back(&r);
    split_ids.emplace(r.repeat_id, r.fold_id);
  }
  std::vector<int> grid(k_grid.begin(), k_grid.end());
  std::sort(grid.begin(), grid.end());
  grid.erase(std::unique(grid.begin(), grid.end()), grid.end());

  for (int k : grid) {
    const auto it = by_k.find(k);
    if (it == by_k.end() || it->second.size() != split_ids.size()) {
      throw InputError("best_over_k: incomplete records for k=" + std::to_string(k));
    }
    auto recs = it->second;
    std::sort(recs.begin(), recs.end(), [](const ResultRecord* a, const ResultRecord* b) {
      return std::tie(a->repeat_id, a->fold_id) < std::tie(b->repeat_id, b->fold_id);
    });
    for (std::size_t i = 1; i < recs.size(); ++i) {
      if (recs[i]->repeat_id == recs[i - 1]->repeat_id && recs[i]->fold_id == recs[i - 1]->fold_id) {
        throw InputError("best_over_k: duplicate record for k=" + std::to_string(k));
      }
    }
    double acc = 0.0;
    for (const auto* r : recs) acc += r->balanced_accuracy;
    const double mean = acc / static_cast<double>(recs.size());
    best.mean_by_k.emplace_back(k, mean);
    if (best.mean_by_k.size() == 1 || mean > best.best_balanced_accuracy) {
      best.best_balanced_accuracy = mean;
      best.best_k = k;
    }
  }

  auto recs = by_k.at(best.best_k);
  std::sort(recs.begin(), recs.end(), [](const ResultRecord* a, const ResultRecord* b) {
    return std::tie(a->repeat_id, a->fold_id) < std::tie(b->repeat_id, b->fold_id);
  });
  std::vector<IndexList> subsets;
  subsets.reserve(recs.size());
  for (const auto* r : recs) subsets.push_back(r->selected_features);
  best.stability = stability(subsets);
  return best;
}

}  // namespace featrank
