#pragma once

// Test-only reference computations. Nothing here calls into the solvers it
// is used to check.

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <random>
#include <set>
#include <vector>

namespace featrank::testing {

using Mat = Eigen::MatrixXd;
using Vec = Eigen::VectorXd;

struct Problem {
  Mat X;
  std::vector<int> y;
  std::vector<int> planted;
  Vec true_beta;
};

inline double ref_sigmoid(double z) { return 1.0 / (1.0 + std::exp(-z)); }

inline double ref_log1pexp(double z) {
  return z > 0 ? z + std::log1p(std::exp(-z)) : std::log1p(std::exp(z));
}

/// Logistic data with `planted` nonzero coefficients of magnitude in
/// [min_mag, min_mag + 1] and random sign; remaining features are noise.
inline Problem planted_logistic(int n, int p, int planted, std::uint64_t seed,
                                double min_mag = 2.0, double intercept = 0.0) {
  std::mt19937_64 gen(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  Problem pr;
  pr.X.resize(n, p);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < p; ++j) pr.X(i, j) = normal(gen);
  std::vector<int> idx(static_cast<std::size_t>(p));
  for (int j = 0; j < p; ++j) idx[static_cast<std::size_t>(j)] = j;
  std::shuffle(idx.begin(), idx.end(), gen);
  pr.planted.assign(idx.begin(), idx.begin() + planted);
  std::sort(pr.planted.begin(), pr.planted.end());
  pr.true_beta = Vec::Zero(p);
  for (int j : pr.planted) {
    const double mag = min_mag + unif(gen);
    pr.true_beta(j) = unif(gen) < 0.5 ? -mag : mag;
  }
  pr.y.resize(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    const double eta = intercept + pr.X.row(i).dot(pr.true_beta);
    pr.y[static_cast<std::size_t>(i)] = unif(gen) < ref_sigmoid(eta) ? 1 : 0;
  }
  return pr;
}

inline Mat random_normal(int n, int p, std::uint64_t seed) {
  std::mt19937_64 gen(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  Mat X(n, p);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < p; ++j) X(i, j) = normal(gen);
  return X;
}

inline std::vector<int> random_labels(int n, int classes, std::uint64_t seed) {
  std::mt19937_64 gen(seed);
  std::uniform_int_distribution<int> d(0, classes - 1);
  std::vector<int> y(static_cast<std::size_t>(n));
  for (auto& v : y) v = d(gen);
  return y;
}

/// Penalized log posterior: sum loglik - 0.5 sum prior_precision_k * w_k^2
/// over w = (intercept, beta). Maximized by plain Newton with step halving.
struct MapFit {
  Vec w;
  Mat neg_hessian;
  double log_joint = 0.0;  // loglik + log prior density at w
};

inline MapFit newton_map(const Mat& X, const std::vector<int>& y, const Vec& prior_precision,
                         double tol = 1e-10, int max_iter = 200) {
  const int n = static_cast<int>(X.rows());
  const int d = static_cast<int>(X.cols()) + 1;
  Mat A(n, d);
  A.col(0).setOnes();
  A.rightCols(d - 1) = X;
  Vec yv(n);
  for (int i = 0; i < n; ++i) yv(i) = y[static_cast<std::size_t>(i)];

  auto objective = [&](const Vec& w) {
    const Vec eta = A * w;
    double ll = 0.0;
    for (int i = 0; i < n; ++i) ll += yv(i) * eta(i) - ref_log1pexp(eta(i));
    return ll - 0.5 * (prior_precision.array() * w.array().square()).sum();
  };

  Vec w = Vec::Zero(d);
  double f = objective(w);
  for (int it = 0; it < max_iter; ++it) {
    const Vec eta = A * w;
    Vec mu(n), wt(n);
    for (int i = 0; i < n; ++i) {
      mu(i) = ref_sigmoid(eta(i));
      wt(i) = mu(i) * (1.0 - mu(i));
    }
    const Vec g = A.transpose() * (yv - mu) - prior_precision.cwiseProduct(w);
    Mat H = A.transpose() * wt.asDiagonal() * A;
    H.diagonal() += prior_precision;
    const Vec step = H.llt().solve(g);
    double t = 1.0;
    Vec cand = w + step;
    double fc = objective(cand);
    while (fc < f && t > 1e-12) {
      t *= 0.5;
      cand = w + t * step;
      fc = objective(cand);
    }
    const double change = (cand - w).cwiseAbs().maxCoeff();
    w = cand;
    f = fc;
    if (change < tol) break;
  }
  MapFit out;
  out.w = w;
  const Vec eta = A * w;
  Vec wt(n);
  for (int i = 0; i < n; ++i) {
    const double m = ref_sigmoid(eta(i));
    wt(i) = m * (1.0 - m);
  }
  out.neg_hessian = A.transpose() * wt.asDiagonal() * A;
  out.neg_hessian.diagonal() += prior_precision;
  double log_prior_norm = 0.0;
  for (int k = 0; k < d; ++k) log_prior_norm += 0.5 * std::log(prior_precision(k) / (2.0 * M_PI));
  out.log_joint = f + log_prior_norm;
  return out;
}

/// Exhaustive spike-and-slab oracle: enumerates every inclusion pattern,
/// approximates each marginal likelihood by Laplace's method, and returns
/// posterior inclusion probabilities. Exponential in p; meant for p <= 4.
inline std::vector<double> laplace_inclusion_oracle(const Mat& X, const std::vector<int>& y,
                                                    double tau0_sq, double tau1_sq, double pi,
                                                    double intercept_var) {
  const int p = static_cast<int>(X.cols());
  const int d = p + 1;
  std::vector<double> log_post;
  std::vector<unsigned> masks;
  for (unsigned mask = 0; mask < (1u << p); ++mask) {
    Vec prec(d);
    prec(0) = 1.0 / intercept_var;
    double log_pattern = 0.0;
    for (int j = 0; j < p; ++j) {
      const bool on = (mask >> j) & 1u;
      prec(j + 1) = 1.0 / (on ? tau1_sq : tau0_sq);
      log_pattern += on ? std::log(pi) : std::log(1.0 - pi);
    }
    const auto fit = newton_map(X, y, prec);
    const double logdet = 2.0 * fit.neg_hessian.llt().matrixL().toDenseMatrix().diagonal().array().log().sum();
    const double log_evidence = fit.log_joint + 0.5 * d * std::log(2.0 * M_PI) - 0.5 * logdet;
    log_post.push_back(log_pattern + log_evidence);
    masks.push_back(mask);
  }
  const double hi = *std::max_element(log_post.begin(), log_post.end());
  double z = 0.0;
  for (double& v : log_post) {
    v = std::exp(v - hi);
    z += v;
  }
  std::vector<double> incl(static_cast<std::size_t>(p), 0.0);
  for (std::size_t m = 0; m < masks.size(); ++m) {
    for (int j = 0; j < p; ++j) {
      if ((masks[m] >> j) & 1u) incl[static_cast<std::size_t>(j)] += log_post[m] / z;
    }
  }
  return incl;
}

/// Mean-field Gaussian fixed point under the Jaakkola-Jordan bound with a
/// fixed prior; element 0 of the result is the intercept. Written as a plain
/// dense sweep so it shares no code with the library fit.
struct MeanFieldFit {
  Vec mean;
  Vec variance;
};

inline MeanFieldFit jj_mean_field_oracle(const Mat& X, const std::vector<int>& y, const Vec& prior_precision,
                                         int sweeps = 20000) {
  const int n = static_cast<int>(X.rows());
  const int d = static_cast<int>(X.cols()) + 1;
  Mat A(n, d);
  A.col(0).setOnes();
  A.rightCols(d - 1) = X;
  Vec r(n);
  for (int i = 0; i < n; ++i) r(i) = y[static_cast<std::size_t>(i)] - 0.5;
  Vec m = Vec::Zero(d);
  Vec v = prior_precision.cwiseInverse();
  for (int it = 0; it < sweeps; ++it) {
    const Vec xi = ((A * m).array().square() + (A.array().square().matrix() * v).array()).sqrt();
    Vec lam(n);
    for (int i = 0; i < n; ++i) lam(i) = xi(i) < 1e-8 ? 0.125 : std::tanh(xi(i) / 2.0) / (4.0 * xi(i));
    Mat P = 2.0 * A.transpose() * lam.asDiagonal() * A;
    P.diagonal() += prior_precision;
    const Vec before = m;
    for (int j = 0; j < d; ++j) {
      v(j) = 1.0 / P(j, j);
      m(j) = v(j) * (A.col(j).dot(r) - (P.row(j).dot(m) - P(j, j) * m(j)));
    }
    if ((m - before).cwiseAbs().maxCoeff() < 1e-14) break;
  }
  return {m, v};
}

/// Balanced accuracy from an explicit confusion matrix.
inline double confusion_balanced_accuracy(const std::vector<int>& t, const std::vector<int>& p) {
  int k = 0;
  for (std::size_t i = 0; i < t.size(); ++i) k = std::max({k, t[i] + 1, p[i] + 1});
  std::vector<std::vector<long>> cm(static_cast<std::size_t>(k), std::vector<long>(static_cast<std::size_t>(k), 0));
  for (std::size_t i = 0; i < t.size(); ++i) ++cm[static_cast<std::size_t>(t[i])][static_cast<std::size_t>(p[i])];
  double acc = 0.0;
  int present = 0;
  for (int c = 0; c < k; ++c) {
    long row = 0;
    for (long v : cm[static_cast<std::size_t>(c)]) row += v;
    if (row == 0) continue;
    acc += static_cast<double>(cm[static_cast<std::size_t>(c)][static_cast<std::size_t>(c)]) / static_cast<double>(row);
    ++present;
  }
  return acc / present;
}

/// Jaccard by enumerating the universe [0, universe) as membership flags.
inline double enumerate_jaccard(const std::vector<int>& a, const std::vector<int>& b, int universe) {
  int inter = 0;
  int uni = 0;
  for (int v = 0; v < universe; ++v) {
    const bool in_a = std::find(a.begin(), a.end(), v) != a.end();
    const bool in_b = std::find(b.begin(), b.end(), v) != b.end();
    inter += in_a && in_b;
    uni += in_a || in_b;
  }
  return uni == 0 ? 1.0 : static_cast<double>(inter) / uni;
}

/// Golden-section maximization of a unimodal function on [lo, hi].
inline double golden_max(const std::function<double(double)>& f, double lo, double hi,
                         double tol = 1e-12) {
  const double g = (std::sqrt(5.0) - 1.0) / 2.0;
  double a = lo, b = hi;
  double c = b - g * (b - a), d = a + g * (b - a);
  double fc = f(c), fd = f(d);
  while (b - a > tol) {
    if (fc > fd) {
      b = d; d = c; fd = fc;
      c = b - g * (b - a); fc = f(c);
    } else {
      a = c; c = d; fc = fd;
      d = a + g * (b - a); fd = f(d);
    }
  }
  return 0.5 * (a + b);
}

/// Root of a continuous function with a sign change on [lo, hi].
inline double bisect_root(const std::function<double(double)>& f, double lo, double hi) {
  double flo = f(lo);
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    const double fm = f(mid);
    if ((fm < 0) == (flo < 0)) {
      lo = mid;
      flo = fm;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

inline double ref_normal_cdf(double x) { return 0.5 * std::erfc(-x / std::sqrt(2.0)); }

}  // namespace featrank::testing
