#include "experiment.hpp"

#include "featrank/csv.hpp"
#include "featrank/rankers.hpp"

#include "json.hpp"

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <tuple>

#ifndef FEATRANK_VERSION
#define FEATRANK_VERSION "0.0.0"
#endif

namespace featrank::app {

namespace {

using json = nlohmann::ordered_json;
using clock_type = std::chrono::steady_clock;

double ms_since(clock_type::time_point t0) {
  return std::chrono::duration<double, std::milli>(clock_type::now() - t0).count();
}

std::string read_file(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  if (!in) throw InputError("cannot read " + p.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::filesystem::path& p, const std::string& text) {
  std::ofstream out(p, std::ios::binary | std::ios::trunc);
  if (!out) throw ComputeError("cannot write " + p.string());
  out << text;
  if (!out.flush()) throw ComputeError("write failed for " + p.string());
}

std::string join_indices(const IndexList& xs) {
  std::string s;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    if (i) s += ';';
    s += std::to_string(xs[i]);
  }
  return s;
}

std::string cell_key(Task t, Variant v) { return std::string(to_string(t)) + "/" + std::string(to_string(v)); }

json config_json(const ExperimentConfig& c) {
  json j;
  j["data_path"] = c.data_path.string();
  j["label_column"] = c.label_column;
  j["healthy_class"] = c.healthy_class;
  j["class_order"] = c.class_order;
  json prefixes = json::object();
  for (const auto& [v, list] : c.group_prefixes) prefixes[std::string(to_string(v))] = list;
  j["group_prefixes"] = prefixes;
  j["tasks"] = json::array();
  for (Task t : c.tasks) j["tasks"].push_back(to_string(t));
  j["variants"] = json::array();
  for (Variant v : c.variants) j["variants"].push_back(to_string(v));
  j["methods"] = json::array();
  for (Method m : c.methods) j["methods"].push_back(to_string(m));
  j["folds"] = c.folds;
  j["repeats"] = c.repeats;
  j["seed"] = c.seed;
  json grids = json::object();
  for (const auto& [v, g] : c.k_grids) grids[std::string(to_string(v))] = g;
  j["k_grids"] = grids;
  const auto& r = c.rankers;
  j["relieff"] = {{"neighbors", r.relieff.neighbors}};
  j["mrmr"] = {{"bins", r.mrmr.bins}};
  j["lasso"] = {{"grid_size", r.lasso.grid_size}, {"inner_folds", r.lasso.inner_folds},
                {"min_ratio", r.lasso.min_ratio}};
  j["spike_slab"] = {{"tau0_sq", r.spike_slab.tau0_sq}, {"tau1_sq", r.spike_slab.tau1_sq},
                     {"pi", r.spike_slab.pi},
                     {"intercept_prior_variance", r.spike_slab.intercept_prior_variance}};
  j["ard"] = {{"epsilon", r.ard.epsilon}, {"alpha_init", r.ard.fit.alpha_init},
              {"alpha_min", r.ard.fit.alpha_min}, {"alpha_max", r.ard.fit.alpha_max},
              {"update_precision", r.ard.fit.update_precision},
              {"intercept_prior_variance", r.ard.fit.intercept_prior_variance}};
  j["solver"] = {{"max_iter", r.lasso.solver.max_iter}, {"tol", r.lasso.solver.tol}};
  j["classifier"] = {{"ridge", c.classifier_ridge}, {"max_iter", c.classifier_solver.max_iter},
                     {"tol", c.classifier_solver.tol}};
  return j;
}

/// CSV body under a header that must match exactly.
struct Table {
  std::vector<std::string> header;
  std::vector<csv::Row> rows;
};

Table read_table(const std::filesystem::path& p, const std::vector<std::string>& expected) {
  auto rows = csv::parse(read_file(p));
  if (rows.empty()) throw InputError(p.string() + ": empty file");
  Table t;
  t.header = rows.front();
  if (t.header != expected) throw InputError(p.string() + ": unexpected header");
  t.rows.assign(rows.begin() + 1, rows.end());
  for (std::size_t i = 0; i < t.rows.size(); ++i) {
    if (t.rows[i].size() != t.header.size()) {
      throw InputError(p.string() + ": row " + std::to_string(i + 2) + " has " +
                       std::to_string(t.rows[i].size()) + " fields");
    }
  }
  return t;
}

template <class T>
T parse_field(const std::string& s, const std::string& what) {
  T out{};
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
  if (ec != std::errc() || ptr != s.data() + s.size()) throw InputError("bad " + what + " value '" + s + "'");
  return out;
}

template <class E, class Parse>
E parse_enum(const std::string& s, Parse parse, const std::string& what) {
  const auto e = parse(s);
  if (!e) throw InputError("bad " + what + " '" + s + "'");
  return *e;
}

const std::vector<std::string> kRecordsHeader{"method", "task", "variant", "k", "repeat_id", "fold_id",
                                              "balanced_accuracy", "selected_features", "runtime_ms"};
const std::vector<std::string> kSummaryHeader{"task", "variant", "method", "best_balanced_accuracy",
                                              "best_k", "stability", "n_features", "cell"};

}  // namespace

std::string fixed6(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6f", v);
  std::string s(buf);
  if (s == "-0.000000") s.erase(0, 1);
  return s;
}

std::string table_cell(const BestResult& b) {
  char buf[96];
  std::snprintf(buf, sizeof buf, "%.3f/k=%d/J=%.3f", b.best_balanced_accuracy, b.best_k, b.stability);
  return buf;
}

Dataset prepare_dataset(const Dataset& raw, const ExperimentConfig& c, Task task, Variant variant) {
  if (task == Task::Binary) return select_variant(encode_binary(raw, c.healthy_class), variant, c.group_prefixes);
  Dataset d = select_variant(raw, variant, c.group_prefixes);
  d.task = Task::Multiclass;
  return d;
}

EvaluationRun run_evaluation(const ExperimentConfig& c, bool progress) {
  c.validate();
  const auto t0 = clock_type::now();
  const Dataset raw = load_csv(c.data_path, c.label_column, c.class_order);
  EvaluationRun run;
  const std::size_t total = c.tasks.size() * c.variants.size() * c.methods.size();
  for (Task task : c.tasks) {
    for (Variant variant : c.variants) {
      const Dataset d = prepare_dataset(raw, c, task, variant);
      const PipelineConfig pc = c.pipeline(variant);
      for (Method method : c.methods) {
        const auto t1 = clock_type::now();
        CellResult cell;
        try {
          cell.records = run_pipeline(d, method, pc);
          cell.best = best_over_k(cell.records, pc.k_grid);
        } catch (const std::exception& e) {
          throw ComputeError("cell " + cell_key(task, variant) + "/" + std::string(to_string(method)) + ": " +
                             e.what());
        }
        cell.feature_names = d.feature_names;
        cell.wall_ms = ms_since(t1);
        run.cells.push_back(std::move(cell));
        if (progress) {
          std::cerr << "[" << run.cells.size() << "/" << total << "] " << to_string(task) << " "
                    << to_string(variant) << " " << to_string(method) << ": "
                    << table_cell(run.cells.back().best) << " (" << fixed6(run.cells.back().wall_ms / 1000.0)
                    << " s)\n";
        }
      }
    }
  }
  run.wall_ms = ms_since(t0);
  return run;
}

void write_evaluation(const ExperimentConfig& c, const EvaluationRun& run) {
  std::filesystem::create_directories(c.output_dir);

  std::string records = csv::join(kRecordsHeader) + "\n";
  for (const auto& cell : run.cells) {
    for (const auto& r : cell.records) {
      records += csv::join({std::string(to_string(r.method)), std::string(to_string(r.task)),
                            std::string(to_string(r.variant)), std::to_string(r.k),
                            std::to_string(r.repeat_id), std::to_string(r.fold_id),
                            fixed6(r.balanced_accuracy), join_indices(r.selected_features),
                            fixed6(r.runtime_ms)}) +
                 "\n";
    }
  }
  write_file(c.output_dir / kRecordsFile, records);

  std::string summary = csv::join(kSummaryHeader) + "\n";
  for (const auto& cell : run.cells) {
    const auto& b = cell.best;
    summary += csv::join({std::string(to_string(b.task)), std::string(to_string(b.variant)),
                          std::string(to_string(b.method)), fixed6(b.best_balanced_accuracy),
                          std::to_string(b.best_k), fixed6(b.stability),
                          std::to_string(cell.feature_names.size()), table_cell(b)}) +
               "\n";
  }
  write_file(c.output_dir / kSummaryFile, summary);

  json m;
  m["tool"] = "featrank";
  m["version"] = FEATRANK_VERSION;
  m["config"] = config_json(c);
  m["config_text"] = to_text(c);
  m["stability_definition"] = "mean pairwise Jaccard index over all splits at best k";
  json names = json::object();
  for (const auto& cell : run.cells) names[cell_key(cell.best.task, cell.best.variant)] = cell.feature_names;
  m["feature_names"] = names;
  m["cells"] = json::array();
  for (const auto& cell : run.cells) {
    const auto& b = cell.best;
    json mk = json::array();
    for (const auto& [k, mean] : b.mean_by_k) mk.push_back({{"k", k}, {"mean_balanced_accuracy", mean}});
    m["cells"].push_back({{"task", to_string(b.task)},
                          {"variant", to_string(b.variant)},
                          {"method", to_string(b.method)},
                          {"best_balanced_accuracy", b.best_balanced_accuracy},
                          {"best_k", b.best_k},
                          {"stability", b.stability},
                          {"mean_by_k", mk},
                          {"wall_ms", cell.wall_ms}});
  }
  m["records"] = json::array();
  for (const auto& cell : run.cells) {
    for (const auto& r : cell.records) {
      m["records"].push_back({{"method", to_string(r.method)},
                              {"task", to_string(r.task)},
                              {"variant", to_string(r.variant)},
                              {"k", r.k},
                              {"repeat_id", r.repeat_id},
                              {"fold_id", r.fold_id},
                              {"balanced_accuracy", r.balanced_accuracy},
                              {"selected_features", r.selected_features},
                              {"runtime_ms", r.runtime_ms}});
    }
  }
  m["timings"] = {{"total_ms", run.wall_ms}};
  write_file(c.output_dir / kManifestFile, m.dump(2) + "\n");
}

void write_report(const std::filesystem::path& dir) {
  std::vector<std::string> missing;
  for (const char* f : {kRecordsFile, kSummaryFile, kManifestFile}) {
    if (!std::filesystem::is_regular_file(dir / f)) missing.push_back(f);
  }
  if (!missing.empty()) {
    std::string list;
    for (const auto& f : missing) list += (list.empty() ? "" : ", ") + f;
    throw InputError("results directory " + dir.string() + " lacks " + list +
                     " (expected records.csv, summary.csv, manifest.json from 'evaluate')");
  }

  json manifest;
  try {
    manifest = json::parse(read_file(dir / kManifestFile));
  } catch (const json::exception& e) {
    throw InputError(std::string("manifest.json is corrupt: ") + e.what());
  }
  if (!manifest.contains("feature_names") || !manifest["feature_names"].is_object()) {
    throw InputError("manifest.json has no feature_names");
  }
  const Table summary = read_table(dir / kSummaryFile, kSummaryHeader);
  const Table records = read_table(dir / kRecordsFile, kRecordsHeader);

  struct Cell {
    Task task;
    Variant variant;
    Method method;
    BestResult best;
    int n_features = 0;
    std::vector<int> counts;
    int splits = 0;
  };
  std::vector<Cell> cells;
  std::map<std::tuple<Task, Variant, Method>, std::size_t> index;
  for (const auto& row : summary.rows) {
    Cell c;
    c.task = parse_enum<Task>(row[0], parse_task, "task");
    c.variant = parse_enum<Variant>(row[1], parse_variant, "variant");
    c.method = parse_enum<Method>(row[2], parse_method, "method");
    c.best.task = c.task;
    c.best.variant = c.variant;
    c.best.method = c.method;
    c.best.best_balanced_accuracy = parse_field<double>(row[3], "best_balanced_accuracy");
    c.best.best_k = parse_field<int>(row[4], "best_k");
    c.best.stability = parse_field<double>(row[5], "stability");
    c.n_features = parse_field<int>(row[6], "n_features");
    c.counts.assign(static_cast<std::size_t>(c.n_features), 0);
    if (!index.emplace(std::tuple{c.task, c.variant, c.method}, cells.size()).second) {
      throw InputError("summary.csv lists a cell twice");
    }
    cells.push_back(std::move(c));
  }
  if (cells.empty()) throw InputError("summary.csv has no cells");

  for (const auto& row : records.rows) {
    const auto key = std::tuple{parse_enum<Task>(row[1], parse_task, "task"),
                                parse_enum<Variant>(row[2], parse_variant, "variant"),
                                parse_enum<Method>(row[0], parse_method, "method")};
    const auto it = index.find(key);
    if (it == index.end()) throw InputError("records.csv has a record for a cell missing from summary.csv");
    auto& cell = cells[it->second];
    if (parse_field<int>(row[3], "k") != cell.best.best_k) continue;
    ++cell.splits;
    std::stringstream ss(row[7]);
    std::string item;
    while (std::getline(ss, item, ';')) {
      const int j = parse_field<int>(item, "feature index");
      if (j < 0 || j >= cell.n_features) throw InputError("records.csv: feature index out of range");
      ++cell.counts[static_cast<std::size_t>(j)];
    }
  }

  std::string fig1 = "task,variant,method,best_balanced_accuracy,best_k,stability\n";
  for (const auto& c : cells) {
    fig1 += csv::join({std::string(to_string(c.task)), std::string(to_string(c.variant)),
                       std::string(to_string(c.method)), fixed6(c.best.best_balanced_accuracy),
                       std::to_string(c.best.best_k), fixed6(c.best.stability)}) +
            "\n";
  }
  write_file(dir / kFig1File, fig1);

  std::string fig2 = "task,variant,method,feature_index,feature,best_k,selection_frequency\n";
  std::map<std::pair<Task, Variant>, std::vector<const Cell*>> groups;
  std::vector<std::pair<Task, Variant>> group_order;
  for (const auto& c : cells) {
    auto& g = groups[{c.task, c.variant}];
    if (g.empty()) group_order.emplace_back(c.task, c.variant);
    g.push_back(&c);
  }
  // Top features per group by pooled frequency, used in the markdown rendering.
  std::map<std::pair<Task, Variant>, std::vector<std::pair<std::string, double>>> pooled_top;
  for (const auto& key : group_order) {
    const auto& group = groups.at(key);
    const std::string names_key = cell_key(key.first, key.second);
    if (!manifest["feature_names"].contains(names_key)) {
      throw InputError("manifest.json lacks feature names for " + names_key);
    }
    const auto names = manifest["feature_names"][names_key].get<std::vector<std::string>>();
    std::vector<int> pooled(names.size(), 0);
    int pooled_splits = 0;
    for (const Cell* c : group) {
      if (static_cast<std::size_t>(c->n_features) != names.size()) {
        throw InputError("summary.csv and manifest.json disagree on the feature count of " + names_key);
      }
      if (c->splits == 0) throw InputError("records.csv has no records at best k for a cell of " + names_key);
      for (std::size_t j = 0; j < names.size(); ++j) {
        fig2 += csv::join({std::string(to_string(c->task)), std::string(to_string(c->variant)),
                           std::string(to_string(c->method)), std::to_string(j), names[j],
                           std::to_string(c->best.best_k),
                           fixed6(static_cast<double>(c->counts[j]) / c->splits)}) +
                "\n";
        pooled[j] += c->counts[j];
      }
      pooled_splits += c->splits;
    }
    std::vector<std::pair<std::string, double>> freq;
    for (std::size_t j = 0; j < names.size(); ++j) {
      const double f = static_cast<double>(pooled[j]) / pooled_splits;
      fig2 += csv::join({std::string(to_string(key.first)), std::string(to_string(key.second)), "all",
                         std::to_string(j), names[j], "", fixed6(f)}) +
              "\n";
      freq.emplace_back(names[j], f);
    }
    std::stable_sort(freq.begin(), freq.end(), [](const auto& a, const auto& b) { return a.second > b.second; });
    freq.resize(std::min<std::size_t>(freq.size(), 5));
    pooled_top[key] = std::move(freq);
  }
  write_file(dir / kFig2File, fig2);

  std::ostringstream md;
  md << "# Feature ranking results\n\n"
     << "Cells read best balanced accuracy / subset size k / Jaccard stability J "
     << "(mean pairwise Jaccard over all splits at the best k).\n";
  std::vector<Task> tasks;
  std::vector<Method> methods;
  for (const auto& c : cells) {
    if (std::find(tasks.begin(), tasks.end(), c.task) == tasks.end()) tasks.push_back(c.task);
    if (std::find(methods.begin(), methods.end(), c.method) == methods.end()) methods.push_back(c.method);
  }
  for (Task t : tasks) {
    md << "\n## " << (t == Task::Binary ? "Binary" : "Multiclass") << " task\n\n| Variant |";
    for (Method m : methods) md << " " << display_name(m) << " |";
    md << "\n|---|";
    for (std::size_t i = 0; i < methods.size(); ++i) md << "---|";
    md << "\n";
    for (const auto& [gt, gv] : group_order) {
      if (gt != t) continue;
      md << "| " << to_string(gv) << " |";
      for (Method m : methods) {
        const auto it = index.find({gt, gv, m});
        md << " " << (it == index.end() ? std::string("-") : table_cell(cells[it->second].best)) << " |";
      }
      md << "\n";
    }
  }
  md << "\n## Most frequently selected features (all methods pooled)\n\n";
  for (const auto& key : group_order) {
    md << "- " << cell_key(key.first, key.second) << ":";
    for (const auto& [name, f] : pooled_top.at(key)) md << " " << name << " (" << fixed6(f).substr(0, 5) << ")";
    md << "\n";
  }
  write_file(dir / kReportFile, md.str());
}

std::filesystem::path write_ranking(const ExperimentConfig& c, Task task, Variant variant, Method method) {
  c.validate();
  const Dataset raw = load_csv(c.data_path, c.label_column, c.class_order);
  const Dataset d = prepare_dataset(raw, c, task, variant);
  const Matrix Z = apply_standardizer(fit_standardizer(d.X), d.X);
  const Ranking r = rank_features(method, Z, d.y, c.rankers, c.seed);

  std::ostringstream o;
  o << "# method: " << to_string(method) << "\n"
    << "# task: " << to_string(task) << "\n"
    << "# variant: " << to_string(variant) << "\n"
    << "# data: " << c.data_path.string() << "\n"
    << "# samples: " << d.samples() << "\n"
    << "# features: " << d.features() << "\n"
    << "# seed: " << c.seed << "\n"
    << "# standardization: full dataset, sample std\n";
  for (const auto& [k, v] : r.meta) o << "# " << k << ": " << v << "\n";
  o << "rank,feature,score\n";
  for (std::size_t i = 0; i < r.order.size(); ++i) {
    const int j = r.order[i];
    o << csv::join({std::to_string(i + 1), d.feature_names[static_cast<std::size_t>(j)],
                    fixed6(r.scores[static_cast<std::size_t>(j)])})
      << "\n";
  }
  std::filesystem::create_directories(c.output_dir);
  const auto path = c.output_dir / ("ranking_" + std::string(to_string(task)) + "_" +
                                    std::string(to_string(variant)) + "_" + std::string(to_string(method)) +
                                    ".csv");
  write_file(path, o.str());
  return path;
}

}  // namespace featrank::app
