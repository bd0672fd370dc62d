#include "config.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <functional>
#include <set>
#include <sstream>

namespace featrank::app {

namespace {

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

std::vector<std::string> split_list(const std::string& v) {
  std::vector<std::string> out;
  std::stringstream ss(v);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

template <class T>
std::string join_list(const std::vector<T>& xs, const std::function<std::string(const T&)>& f) {
  std::string out;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    if (i) out += ", ";
    out += f(xs[i]);
  }
  return out;
}

template <class T>
T parse_number(const std::string& key, const std::string& v) {
  T out{};
  const auto* end = v.data() + v.size();
  const auto [ptr, ec] = std::from_chars(v.data(), end, out);
  if (ec != std::errc() || ptr != end) throw ConfigError(key + ": cannot parse '" + v + "' as a number");
  return out;
}

template <class T, class Parse>
std::vector<T> parse_enum_list(const std::string& key, const std::string& v, Parse parse,
                               const std::string& valid) {
  std::vector<T> out;
  for (const auto& item : split_list(v)) {
    const auto e = parse(item);
    if (!e) throw ConfigError(key + ": unknown value '" + item + "' (valid: " + valid + ")");
    if (std::find(out.begin(), out.end(), *e) != out.end()) {
      throw ConfigError(key + ": '" + item + "' listed twice");
    }
    out.push_back(*e);
  }
  return out;
}

std::string valid_methods() {
  std::string s;
  for (Method m : kAllMethods) {
    if (!s.empty()) s += ", ";
    s += to_string(m);
  }
  return s;
}

bool parse_bool(const std::string& key, const std::string& v) {
  if (v == "true") return true;
  if (v == "false") return false;
  throw ConfigError(key + ": expected true or false, got '" + v + "'");
}

// Section -> key -> setter.
using Setter = std::function<void(ExperimentConfig&, const std::string&, const std::string&)>;

const std::map<std::string, std::map<std::string, Setter>>& setters() {
  static const std::map<std::string, std::map<std::string, Setter>> table = [] {
    std::map<std::string, std::map<std::string, Setter>> t;
    auto num = [](auto member) {
      return [member](ExperimentConfig& c, const std::string& k, const std::string& v) {
        auto& field = member(c);
        field = parse_number<std::decay_t<decltype(field)>>(k, v);
      };
    };
    t["data"]["path"] = [](auto& c, auto&, auto& v) { c.data_path = v; };
    t["data"]["label_column"] = [](auto& c, auto&, auto& v) { c.label_column = v; };
    t["data"]["healthy_class"] = [](auto& c, auto&, auto& v) { c.healthy_class = v; };
    t["data"]["class_order"] = [](auto& c, auto&, auto& v) { c.class_order = split_list(v); };
    t["data"]["prefixes.current"] = [](auto& c, auto&, auto& v) {
      c.group_prefixes[Variant::Current] = split_list(v);
    };
    t["data"]["prefixes.speed"] = [](auto& c, auto&, auto& v) {
      c.group_prefixes[Variant::Speed] = split_list(v);
    };

    t["protocol"]["tasks"] = [](auto& c, auto& k, auto& v) {
      c.tasks = parse_enum_list<Task>(k, v, parse_task, "binary, multiclass");
    };
    t["protocol"]["variants"] = [](auto& c, auto& k, auto& v) {
      c.variants = parse_enum_list<Variant>(k, v, parse_variant, "current, speed, combined");
    };
    t["protocol"]["methods"] = [](auto& c, auto& k, auto& v) {
      c.methods = parse_enum_list<Method>(k, v, parse_method, valid_methods());
    };
    t["protocol"]["folds"] = num([](ExperimentConfig& c) -> auto& { return c.folds; });
    t["protocol"]["repeats"] = num([](ExperimentConfig& c) -> auto& { return c.repeats; });
    t["protocol"]["seed"] = num([](ExperimentConfig& c) -> auto& { return c.seed; });
    t["protocol"]["threads"] = num([](ExperimentConfig& c) -> auto& { return c.threads; });
    for (Variant var : kAllVariants) {
      t["protocol"]["k_grid." + std::string(to_string(var))] = [var](auto& c, auto& k, auto& v) {
        auto& grid = c.k_grids[var];
        grid.clear();
        for (const auto& item : split_list(v)) grid.push_back(parse_number<int>(k, item));
      };
    }

    t["relieff"]["neighbors"] = num([](ExperimentConfig& c) -> auto& { return c.rankers.relieff.neighbors; });
    t["mrmr"]["bins"] = num([](ExperimentConfig& c) -> auto& { return c.rankers.mrmr.bins; });
    t["lasso"]["grid_size"] = num([](ExperimentConfig& c) -> auto& { return c.rankers.lasso.grid_size; });
    t["lasso"]["inner_folds"] = num([](ExperimentConfig& c) -> auto& { return c.rankers.lasso.inner_folds; });
    t["lasso"]["min_ratio"] = num([](ExperimentConfig& c) -> auto& { return c.rankers.lasso.min_ratio; });
    t["spike_slab"]["tau0_sq"] = num([](ExperimentConfig& c) -> auto& { return c.rankers.spike_slab.tau0_sq; });
    t["spike_slab"]["tau1_sq"] = num([](ExperimentConfig& c) -> auto& { return c.rankers.spike_slab.tau1_sq; });
    t["spike_slab"]["pi"] = num([](ExperimentConfig& c) -> auto& { return c.rankers.spike_slab.pi; });
    t["spike_slab"]["intercept_prior_variance"] =
        num([](ExperimentConfig& c) -> auto& { return c.rankers.spike_slab.intercept_prior_variance; });
    t["ard"]["epsilon"] = num([](ExperimentConfig& c) -> auto& { return c.rankers.ard.epsilon; });
    t["ard"]["alpha_init"] = num([](ExperimentConfig& c) -> auto& { return c.rankers.ard.fit.alpha_init; });
    t["ard"]["alpha_min"] = num([](ExperimentConfig& c) -> auto& { return c.rankers.ard.fit.alpha_min; });
    t["ard"]["alpha_max"] = num([](ExperimentConfig& c) -> auto& { return c.rankers.ard.fit.alpha_max; });
    t["ard"]["update_precision"] = [](auto& c, auto& k, auto& v) {
      c.rankers.ard.fit.update_precision = parse_bool(k, v);
    };
    t["ard"]["intercept_prior_variance"] =
        num([](ExperimentConfig& c) -> auto& { return c.rankers.ard.fit.intercept_prior_variance; });
    // One solver budget shared by the LASSO, spike-and-slab and ARD fits.
    t["solver"]["max_iter"] = [](auto& c, auto& k, auto& v) {
      const int n = parse_number<int>(k, v);
      c.rankers.lasso.solver.max_iter = c.rankers.spike_slab.solver.max_iter = c.rankers.ard.fit.solver.max_iter = n;
    };
    t["solver"]["tol"] = [](auto& c, auto& k, auto& v) {
      const double x = parse_number<double>(k, v);
      c.rankers.lasso.solver.tol = c.rankers.spike_slab.solver.tol = c.rankers.ard.fit.solver.tol = x;
    };
    t["classifier"]["ridge"] = num([](ExperimentConfig& c) -> auto& { return c.classifier_ridge; });
    t["classifier"]["max_iter"] = num([](ExperimentConfig& c) -> auto& { return c.classifier_solver.max_iter; });
    t["classifier"]["tol"] = num([](ExperimentConfig& c) -> auto& { return c.classifier_solver.tol; });
    t["output"]["dir"] = [](auto& c, auto&, auto& v) { c.output_dir = v; };
    return t;
  }();
  return table;
}

}  // namespace

void ExperimentConfig::validate() const {
  if (label_column.empty()) throw ConfigError("data.label_column is empty");
  if (tasks.empty()) throw ConfigError("protocol.tasks is empty");
  if (variants.empty()) throw ConfigError("protocol.variants is empty");
  if (methods.empty()) throw ConfigError("protocol.methods is empty");
  if (folds < 2) throw ConfigError("protocol.folds must be >= 2");
  if (repeats < 1) throw ConfigError("protocol.repeats must be >= 1");
  if (threads < 1) throw ConfigError("protocol.threads must be >= 1");
  for (Variant v : variants) {
    const auto it = k_grids.find(v);
    if (it == k_grids.end() || it->second.empty()) {
      throw ConfigError("protocol.k_grid." + std::string(to_string(v)) + " is empty");
    }
    for (int k : it->second) {
      if (k < 1) throw ConfigError("protocol.k_grid." + std::string(to_string(v)) + " has k < 1");
    }
    if (v != Variant::Combined) {
      const auto p = group_prefixes.find(v);
      if (p == group_prefixes.end() || p->second.empty()) {
        throw ConfigError("data.prefixes." + std::string(to_string(v)) + " is empty");
      }
    }
  }
  if (rankers.relieff.neighbors < 1) throw ConfigError("relieff.neighbors must be >= 1");
  if (rankers.mrmr.bins < 1) throw ConfigError("mrmr.bins must be >= 1");
  if (rankers.lasso.grid_size < 1) throw ConfigError("lasso.grid_size must be >= 1");
  if (rankers.lasso.inner_folds < 2) throw ConfigError("lasso.inner_folds must be >= 2");
  if (!(rankers.lasso.min_ratio > 0.0 && rankers.lasso.min_ratio <= 1.0)) {
    throw ConfigError("lasso.min_ratio must lie in (0, 1]");
  }
  const auto& ss = rankers.spike_slab;
  if (!(ss.tau0_sq > 0.0 && ss.tau0_sq < ss.tau1_sq)) throw ConfigError("spike_slab: need 0 < tau0_sq < tau1_sq");
  if (!(ss.pi > 0.0 && ss.pi < 1.0)) throw ConfigError("spike_slab.pi must lie in (0, 1)");
  if (!(ss.intercept_prior_variance > 0.0)) throw ConfigError("spike_slab.intercept_prior_variance must be > 0");
  const auto& ard = rankers.ard;
  if (!(ard.epsilon > 0.0)) throw ConfigError("ard.epsilon must be > 0");
  if (!(ard.fit.alpha_min > 0.0 && ard.fit.alpha_min <= ard.fit.alpha_max)) {
    throw ConfigError("ard: need 0 < alpha_min <= alpha_max");
  }
  if (!(ard.fit.alpha_init > 0.0)) throw ConfigError("ard.alpha_init must be > 0");
  if (!(ard.fit.intercept_prior_variance > 0.0)) throw ConfigError("ard.intercept_prior_variance must be > 0");
  if (rankers.lasso.solver.max_iter < 1 || !(rankers.lasso.solver.tol > 0.0)) {
    throw ConfigError("solver: need max_iter >= 1 and tol > 0");
  }
  if (!(classifier_ridge >= 0.0)) throw ConfigError("classifier.ridge must be >= 0");
  if (classifier_solver.max_iter < 1 || !(classifier_solver.tol > 0.0)) {
    throw ConfigError("classifier: need max_iter >= 1 and tol > 0");
  }
}

PipelineConfig ExperimentConfig::pipeline(Variant v) const {
  PipelineConfig p;
  p.k_grid = k_grids.at(v);
  p.folds = folds;
  p.repeats = repeats;
  p.seed = seed;
  p.rankers = rankers;
  p.classifier_ridge = classifier_ridge;
  p.classifier_solver = classifier_solver;
  p.threads = threads;
  return p;
}

ExperimentConfig parse_config(const std::string& text, const std::string& source) {
  ExperimentConfig c;
  const auto& table = setters();
  std::string section;
  std::set<std::string> seen;
  std::istringstream in(text);
  std::string raw;
  int line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    const std::string where = source + ":" + std::to_string(line_no) + ": ";
    const auto hash = raw.find('#');
    const std::string line = trim(hash == std::string::npos ? raw : raw.substr(0, hash));
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']') throw ConfigError(where + "malformed section header");
      section = trim(line.substr(1, line.size() - 2));
      if (!table.count(section)) throw ConfigError(where + "unknown section [" + section + "]");
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw ConfigError(where + "expected key = value");
    if (section.empty()) throw ConfigError(where + "key outside of any section");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    const auto& keys = table.at(section);
    const auto it = keys.find(key);
    if (it == keys.end()) throw ConfigError(where + "unknown key '" + key + "' in [" + section + "]");
    const std::string full = section + "." + key;
    if (!seen.insert(full).second) throw ConfigError(where + full + " set twice");
    try {
      it->second(c, full, value);
    } catch (const ConfigError& e) {
      throw ConfigError(where + e.what());
    }
  }
  c.validate();
  return c;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open config file " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str(), path.string());
}

std::string to_text(const ExperimentConfig& c) {
  auto ints = [](const std::vector<int>& v) {
    return join_list<int>(v, [](const int& k) { return std::to_string(k); });
  };
  auto strs = [](const std::vector<std::string>& v) {
    return join_list<std::string>(v, [](const std::string& s) { return s; });
  };
  auto prefixes = [&](Variant v) {
    const auto it = c.group_prefixes.find(v);
    return it == c.group_prefixes.end() ? std::string() : strs(it->second);
  };
  const auto& r = c.rankers;
  std::ostringstream o;
  o << "[data]\n"
    << "path = " << c.data_path.string() << "\n"
    << "label_column = " << c.label_column << "\n"
    << "healthy_class = " << c.healthy_class << "\n"
    << "class_order = " << strs(c.class_order) << "\n"
    << "prefixes.current = " << prefixes(Variant::Current) << "\n"
    << "prefixes.speed = " << prefixes(Variant::Speed) << "\n\n";
  o << "[protocol]\n"
    << "tasks = " << join_list<Task>(c.tasks, [](const Task& t) { return std::string(to_string(t)); }) << "\n"
    << "variants = " << join_list<Variant>(c.variants, [](const Variant& v) { return std::string(to_string(v)); }) << "\n"
    << "methods = " << join_list<Method>(c.methods, [](const Method& m) { return std::string(to_string(m)); }) << "\n"
    << "folds = " << c.folds << "\n"
    << "repeats = " << c.repeats << "\n"
    << "seed = " << c.seed << "\n"
    << "threads = " << c.threads << "\n";
  for (Variant v : kAllVariants) {
    const auto it = c.k_grids.find(v);
    o << "k_grid." << to_string(v) << " = " << (it == c.k_grids.end() ? "" : ints(it->second)) << "\n";
  }
  o << "\n[relieff]\nneighbors = " << r.relieff.neighbors << "\n\n";
  o << "[mrmr]\nbins = " << r.mrmr.bins << "\n\n";
  o << "[lasso]\n"
    << "grid_size = " << r.lasso.grid_size << "\n"
    << "inner_folds = " << r.lasso.inner_folds << "\n"
    << "min_ratio = " << format_number(r.lasso.min_ratio) << "\n\n";
  o << "[spike_slab]\n"
    << "tau0_sq = " << format_number(r.spike_slab.tau0_sq) << "\n"
    << "tau1_sq = " << format_number(r.spike_slab.tau1_sq) << "\n"
    << "pi = " << format_number(r.spike_slab.pi) << "\n"
    << "intercept_prior_variance = " << format_number(r.spike_slab.intercept_prior_variance) << "\n\n";
  o << "[ard]\n"
    << "epsilon = " << format_number(r.ard.epsilon) << "\n"
    << "alpha_init = " << format_number(r.ard.fit.alpha_init) << "\n"
    << "alpha_min = " << format_number(r.ard.fit.alpha_min) << "\n"
    << "alpha_max = " << format_number(r.ard.fit.alpha_max) << "\n"
    << "update_precision = " << (r.ard.fit.update_precision ? "true" : "false") << "\n"
    << "intercept_prior_variance = " << format_number(r.ard.fit.intercept_prior_variance) << "\n\n";
  o << "[solver]\n"
    << "max_iter = " << r.lasso.solver.max_iter << "\n"
    << "tol = " << format_number(r.lasso.solver.tol) << "\n\n";
  o << "[classifier]\n"
    << "ridge = " << format_number(c.classifier_ridge) << "\n"
    << "max_iter = " << c.classifier_solver.max_iter << "\n"
    << "tol = " << format_number(c.classifier_solver.tol) << "\n\n";
  o << "[output]\ndir = " << c.output_dir.string() << "\n";
  return o.str();
}

}  // namespace featrank::app
