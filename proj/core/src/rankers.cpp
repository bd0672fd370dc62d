#include "featrank/rankers.hpp"

#include "featrank/dataset.hpp"
#include "featrank/mi.hpp"
#include "featrank/rng.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <limits>
#include <numeric>

namespace featrank {

namespace {

int class_count_of(std::span<const int> y) {
  if (y.empty()) throw InputError("ranker: empty label sequence");
  int hi = 0;
  for (int v : y) {
    if (v < 0) throw InputError("ranker: negative class code");
    hi = std::max(hi, v);
  }
  return hi + 1;
}

std::vector<int> class_counts(std::span<const int> y, int k) {
  std::vector<int> counts(static_cast<std::size_t>(k), 0);
  for (int v : y) ++counts[static_cast<std::size_t>(v)];
  return counts;
}

void check_inputs(const Matrix& X, std::span<const int> y, const char* who) {
  if (X.rows() != static_cast<Eigen::Index>(y.size())) {
    throw InputError(std::string(who) + ": X rows and label count differ");
  }
  if (X.cols() == 0) throw InputError(std::string(who) + ": no features");
}

std::vector<int> one_vs_rest(std::span<const int> y, int positive) {
  std::vector<int> out(y.size());
  for (std::size_t i = 0; i < y.size(); ++i) out[i] = y[i] == positive ? 1 : 0;
  return out;
}

std::vector<double> to_std(const Vector& v) { return {v.data(), v.data() + v.size()}; }

}  // namespace

std::string format_number(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

IndexList Ranking::top(int k) const {
  if (k < 0 || k > static_cast<int>(order.size())) {
    throw InputError("top-k: k=" + std::to_string(k) + " outside [0, " +
                     std::to_string(order.size()) + "]");
  }
  return IndexList(order.begin(), order.begin() + k);
}

Ranking ranking_from_scores(Method method, std::vector<double> scores,
                            std::map<std::string, std::string> meta) {
  Ranking r;
  r.method = method;
  r.order.resize(scores.size());
  std::iota(r.order.begin(), r.order.end(), 0);
  std::stable_sort(r.order.begin(), r.order.end(), [&](int a, int b) {
    return scores[static_cast<std::size_t>(a)] > scores[static_cast<std::size_t>(b)];
  });
  r.scores = std::move(scores);
  r.meta = std::move(meta);
  return r;
}

std::vector<double> aggregate_ovr_scores(const std::vector<std::vector<double>>& per_class) {
  if (per_class.empty()) throw InputError("aggregate_ovr_scores: no class scores");
  const std::size_t p = per_class.front().size();
  std::vector<double> out(p, 0.0);
  for (const auto& s : per_class) {
    if (s.size() != p) throw InputError("aggregate_ovr_scores: score vectors differ in length");
    for (std::size_t j = 0; j < p; ++j) out[j] += s[j];
  }
  const double k = static_cast<double>(per_class.size());
  for (auto& v : out) v /= k;
  return out;
}

// ---------------------------------------------------------------------------
// ReliefF

Ranking rank_relieff(const Matrix& X, std::span<const int> y, int neighbors,
                     std::optional<std::vector<double>> class_priors) {
  check_inputs(X, y, "rank_relieff");
  if (neighbors < 1) throw InputError("rank_relieff: neighbors must be >= 1");
  const int k = class_count_of(y);
  const auto counts = class_counts(y, k);
  for (int c = 0; c < k; ++c) {
    if (counts[static_cast<std::size_t>(c)] <= neighbors) {
      throw InputError("rank_relieff: class " + std::to_string(c) + " has " +
                       std::to_string(counts[static_cast<std::size_t>(c)]) +
                       " members, needs more than neighbors=" + std::to_string(neighbors));
    }
  }
  const Eigen::Index n = X.rows();
  const Eigen::Index p = X.cols();

  std::vector<double> prior(static_cast<std::size_t>(k));
  if (class_priors) {
    if (class_priors->size() != static_cast<std::size_t>(k)) {
      throw InputError("rank_relieff: class prior count does not match classes");
    }
    prior = *class_priors;
  } else {
    for (int c = 0; c < k; ++c) {
      prior[static_cast<std::size_t>(c)] =
          counts[static_cast<std::size_t>(c)] / static_cast<double>(n);
    }
  }

  // Range-normalized copy: diff_j(a, b) = |Z(a, j) - Z(b, j)|, constant
  // features map to zero.
  Matrix Z(n, p);
  for (Eigen::Index j = 0; j < p; ++j) {
    const double lo = X.col(j).minCoeff();
    const double range = X.col(j).maxCoeff() - lo;
    if (range > 0.0) {
      Z.col(j) = (X.col(j).array() - lo) / range;
    } else {
      Z.col(j).setZero();
    }
  }

  std::vector<IndexList> members(static_cast<std::size_t>(k));
  for (Eigen::Index i = 0; i < n; ++i) members[static_cast<std::size_t>(y[static_cast<std::size_t>(i)])].push_back(static_cast<int>(i));

  Vector w = Vector::Zero(p);
  const double scale = 1.0 / (static_cast<double>(n) * neighbors);
  std::vector<double> dist(static_cast<std::size_t>(n));
  std::vector<int> cand;
  Vector hit_sum(p);
  Vector miss_sum(p);

  for (Eigen::Index i = 0; i < n; ++i) {
    const auto zi = Z.row(i);
    for (Eigen::Index l = 0; l < n; ++l) {
      dist[static_cast<std::size_t>(l)] = (Z.row(l) - zi).squaredNorm();
    }
    auto nearest = [&](const IndexList& pool) {
      cand.clear();
      for (int l : pool) {
        if (l != i) cand.push_back(l);
      }
      auto closer = [&](int a, int b) {
        const double da = dist[static_cast<std::size_t>(a)];
        const double db = dist[static_cast<std::size_t>(b)];
        return da < db || (da == db && a < b);
      };
      std::partial_sort(cand.begin(), cand.begin() + neighbors, cand.end(), closer);
      cand.resize(static_cast<std::size_t>(neighbors));
    };

    const int ci = y[static_cast<std::size_t>(i)];
    nearest(members[static_cast<std::size_t>(ci)]);
    hit_sum.setZero();
    for (int h : cand) hit_sum += (Z.row(h) - zi).cwiseAbs().transpose();

    miss_sum.setZero();
    const double other_mass = 1.0 - prior[static_cast<std::size_t>(ci)];
    for (int c = 0; c < k; ++c) {
      if (c == ci) continue;
      nearest(members[static_cast<std::size_t>(c)]);
      const double weight = other_mass > 0.0 ? prior[static_cast<std::size_t>(c)] / other_mass : 0.0;
      for (int m : cand) miss_sum += weight * (Z.row(m) - zi).cwiseAbs().transpose();
    }
    w += scale * (miss_sum - hit_sum);
  }

  return ranking_from_scores(Method::ReliefF, to_std(w),
                             {{"relieff.neighbors", std::to_string(neighbors)},
                              {"relieff.instances", std::to_string(n)}});
}

// ---------------------------------------------------------------------------
// mRMR

Ranking rank_mrmr(const Matrix& X, std::span<const int> y, int bins) {
  check_inputs(X, y, "rank_mrmr");
  if (X.rows() < 2) throw InputError("rank_mrmr: need at least 2 samples");
  const Eigen::Index p = X.cols();
  std::vector<mi::DiscreteColumn> cols;
  cols.reserve(static_cast<std::size_t>(p));
  for (Eigen::Index j = 0; j < p; ++j) {
    const Vector col = X.col(j);
    cols.push_back(mi::discretize_equal_frequency(col, bins));
  }
  const auto cls = mi::from_codes(y);

  std::vector<double> relevance(static_cast<std::size_t>(p));
  for (Eigen::Index j = 0; j < p; ++j) {
    relevance[static_cast<std::size_t>(j)] = mi::mutual_information(cols[static_cast<std::size_t>(j)], cls);
  }

  Ranking r;
  r.method = Method::MRMR;
  r.scores.assign(static_cast<std::size_t>(p), 0.0);
  std::vector<bool> chosen(static_cast<std::size_t>(p), false);
  std::vector<double> redundancy(static_cast<std::size_t>(p), 0.0);

  for (Eigen::Index step = 0; step < p; ++step) {
    if (step > 0) {
      const auto& last = cols[static_cast<std::size_t>(r.order.back())];
      for (Eigen::Index j = 0; j < p; ++j) {
        if (!chosen[static_cast<std::size_t>(j)]) {
          redundancy[static_cast<std::size_t>(j)] += mi::mutual_information(cols[static_cast<std::size_t>(j)], last);
        }
      }
    }
    int best = -1;
    double best_score = -std::numeric_limits<double>::infinity();
    for (Eigen::Index j = 0; j < p; ++j) {
      if (chosen[static_cast<std::size_t>(j)]) continue;
      const double score = step == 0 ? relevance[static_cast<std::size_t>(j)]
                                     : relevance[static_cast<std::size_t>(j)] -
                                           redundancy[static_cast<std::size_t>(j)] / static_cast<double>(step);
      if (best < 0 || score > best_score) {
        best = static_cast<int>(j);
        best_score = score;
      }
    }
    chosen[static_cast<std::size_t>(best)] = true;
    r.order.push_back(best);
    r.scores[static_cast<std::size_t>(best)] = best_score;
  }
  r.meta = {{"mrmr.bins", std::to_string(bins)},
            {"mrmr.criterion", "difference"},
            {"mrmr.units", "nats"}};
  return r;
}

// ---------------------------------------------------------------------------
// LASSO

namespace {

struct LassoFit {
  Vector beta;
  double lambda = 0.0;
  double lambda_max = 0.0;
};

double heldout_deviance(const glm::Coefficients& c, const Matrix& X, std::span<const int> y) {
  const Vector eta = glm::linear_score(c, X);
  double acc = 0.0;
  for (Eigen::Index i = 0; i < eta.size(); ++i) {
    acc -= y[static_cast<std::size_t>(i)] ? glm::log_sigmoid(eta(i)) : glm::log_sigmoid(-eta(i));
  }
  return acc;
}

LassoFit lasso_binary(const Matrix& X, std::span<const int> y, const LassoSettings& s,
                      std::uint64_t seed) {
  LassoFit fit;
  fit.lambda_max = glm::lambda_max(X, y);
  if (!(fit.lambda_max > 0.0)) {
    fit.beta = Vector::Zero(X.cols());
    return fit;
  }
  const int g_count = std::max(s.grid_size, 1);
  std::vector<double> grid(static_cast<std::size_t>(g_count));
  for (int g = 0; g < g_count; ++g) {
    const double frac = g_count == 1 ? 0.0 : static_cast<double>(g) / (g_count - 1);
    grid[static_cast<std::size_t>(g)] = fit.lambda_max * std::pow(s.min_ratio, frac);
  }

  // Inner CV. lambda multiplies a sum-over-samples loss, so it is rescaled by
  // the inner training share to keep the per-sample penalty on the grid.
  std::vector<double> deviance(grid.size(), 0.0);
  const auto folds = stratified_kfold(y, s.inner_folds, 1, seed);
  const double n = static_cast<double>(X.rows());
  for (const auto& f : folds) {
    const Matrix Xtr = take_rows(X, f.train_indices);
    const Labels ytr = take(y, f.train_indices);
    const Matrix Xte = take_rows(X, f.test_indices);
    const Labels yte = take(y, f.test_indices);
    const double share = static_cast<double>(f.train_indices.size()) / n;
    glm::Coefficients warm;
    bool have_warm = false;
    for (std::size_t g = 0; g < grid.size(); ++g) {
      warm = glm::fit_l1_logistic(Xtr, ytr, grid[g] * share, s.solver, have_warm ? &warm : nullptr);
      have_warm = true;
      deviance[g] += heldout_deviance(warm, Xte, yte);
    }
  }
  std::size_t best = 0;
  for (std::size_t g = 1; g < grid.size(); ++g) {
    if (deviance[g] < deviance[best]) best = g;
  }
  fit.lambda = grid[best];

  glm::Coefficients warm;
  bool have_warm = false;
  for (std::size_t g = 0; g <= best; ++g) {
    warm = glm::fit_l1_logistic(X, y, grid[g], s.solver, have_warm ? &warm : nullptr);
    have_warm = true;
  }
  fit.beta = warm.beta;
  return fit;
}

}  // namespace

Ranking rank_lasso(const Matrix& X, std::span<const int> y, const LassoSettings& s,
                   std::uint64_t seed) {
  check_inputs(X, y, "rank_lasso");
  const int k = class_count_of(y);
  if (k < 2) throw InputError("rank_lasso: y contains a single class");
  std::map<std::string, std::string> meta{
      {"lasso.grid_size", std::to_string(s.grid_size)},
      {"lasso.inner_folds", std::to_string(s.inner_folds)},
      {"lasso.min_ratio", format_number(s.min_ratio)},
      {"lasso.selection", "inner_cv_deviance"}};

  if (k == 2) {
    const auto fit = lasso_binary(X, y, s, seed);
    meta["lasso.lambda"] = format_number(fit.lambda);
    meta["lasso.lambda_max"] = format_number(fit.lambda_max);
    return ranking_from_scores(Method::Lasso, to_std(fit.beta.cwiseAbs()), std::move(meta));
  }

  std::vector<std::vector<double>> per_class;
  for (int c = 0; c < k; ++c) {
    const auto target = one_vs_rest(y, c);
    const auto seed_c = CounterRng::keyed({seed, static_cast<std::uint64_t>(c)}).next();
    const auto fit = lasso_binary(X, target, s, seed_c);
    meta["lasso.lambda.class" + std::to_string(c)] = format_number(fit.lambda);
    per_class.push_back(to_std(fit.beta.cwiseAbs()));
  }
  meta["lasso.multiclass"] = "one_vs_rest_mean_abs";
  return ranking_from_scores(Method::Lasso, aggregate_ovr_scores(per_class), std::move(meta));
}

// ---------------------------------------------------------------------------
// Bayesian rankers

namespace {

template <typename BinaryScores>
std::vector<double> ovr_scores(std::span<const int> y, BinaryScores&& score_binary) {
  const int k = class_count_of(y);
  if (k < 2) throw InputError("ranker: y contains a single class");
  if (k == 2) return score_binary(y);
  std::vector<std::vector<double>> per_class;
  for (int c = 0; c < k; ++c) {
    const auto target = one_vs_rest(y, c);
    per_class.push_back(score_binary(std::span<const int>(target)));
  }
  return aggregate_ovr_scores(per_class);
}

}  // namespace

Ranking rank_spike_slab(const Matrix& X, std::span<const int> y,
                        const glm::SpikeSlabSettings& settings) {
  check_inputs(X, y, "rank_spike_slab");
  auto scores = ovr_scores(y, [&](std::span<const int> target) {
    return to_std(glm::fit_vb_spike_slab(X, target, settings).inclusion_prob);
  });
  return ranking_from_scores(
      Method::SpikeSlab, std::move(scores),
      {{"spike_slab.tau0_sq", format_number(settings.tau0_sq)},
       {"spike_slab.tau1_sq", format_number(settings.tau1_sq)},
       {"spike_slab.pi", format_number(settings.pi)},
       {"spike_slab.likelihood", "logistic_jaakkola_jordan_bound"},
       {"spike_slab.intercept_prior_variance", format_number(settings.intercept_prior_variance)},
       {"multiclass", "one_vs_rest_mean"}});
}

Ranking rank_ard(const Matrix& X, std::span<const int> y, double epsilon,
                 const glm::ArdSettings& settings) {
  check_inputs(X, y, "rank_ard");
  if (!(epsilon > 0.0)) throw InputError("rank_ard: epsilon must be > 0");
  auto scores = ovr_scores(y, [&](std::span<const int> target) {
    const auto post = glm::fit_vb_ard(X, target, settings);
    std::vector<double> r(static_cast<std::size_t>(post.mean.size()));
    for (Eigen::Index j = 0; j < post.mean.size(); ++j) {
      r[static_cast<std::size_t>(j)] =
          glm::exceedance_probability(post.mean(j), std::sqrt(post.variance(j)), epsilon);
    }
    return r;
  });
  return ranking_from_scores(
      Method::ArdLogistic, std::move(scores),
      {{"ard.epsilon", format_number(epsilon)},
       {"ard.alpha_init", format_number(settings.alpha_init)},
       {"ard.alpha_min", format_number(settings.alpha_min)},
       {"ard.alpha_max", format_number(settings.alpha_max)},
       {"ard.intercept_prior_variance", format_number(settings.intercept_prior_variance)},
       {"multiclass", "one_vs_rest_mean"}});
}

Ranking rank_features(Method method, const Matrix& X, std::span<const int> y,
                      const RankerSettings& settings, std::uint64_t seed) {
  switch (method) {
    case Method::ReliefF: {
      const int k = class_count_of(y);
      const auto counts = class_counts(y, k);
      const int smallest = *std::min_element(counts.begin(), counts.end());
      const int neighbors = std::min(settings.relieff.neighbors, smallest - 1);
      if (neighbors < 1) throw InputError("rank_relieff: a class has fewer than 2 members");
      return rank_relieff(X, y, neighbors);
    }
    case Method::MRMR:
      return rank_mrmr(X, y, settings.mrmr.bins);
    case Method::Lasso:
      return rank_lasso(X, y, settings.lasso, seed);
    case Method::SpikeSlab:
      return rank_spike_slab(X, y, settings.spike_slab);
    case Method::ArdLogistic:
      return rank_ard(X, y, settings.ard.epsilon, settings.ard.fit);
  }
  throw InputError("unknown ranking method");
}

}  // namespace featrank
