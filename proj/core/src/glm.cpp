#include "featrank/glm.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

namespace featrank::glm {

namespace {

constexpr double kLog2Pi = 1.8378770664093454835606594728112;

void check_design(const Matrix& X, std::span<const int> y, const char* who) {
  if (X.rows() != static_cast<Eigen::Index>(y.size())) {
    throw InputError(std::string(who) + ": X has " + std::to_string(X.rows()) +
                     " rows but y has " + std::to_string(y.size()) + " labels");
  }
  if (!X.allFinite()) throw InputError(std::string(who) + ": non-finite value in X");
}

void check_binary(const Matrix& X, std::span<const int> y, const char* who) {
  check_design(X, y, who);
  bool has0 = false;
  bool has1 = false;
  for (int v : y) {
    if (v == 0) {
      has0 = true;
    } else if (v == 1) {
      has1 = true;
    } else {
      throw InputError(std::string(who) + ": labels must be 0 or 1");
    }
  }
  if (!has0 || !has1) throw InputError(std::string(who) + ": y contains a single class");
}

Vector labels_as_vector(std::span<const int> y) {
  Vector v(static_cast<Eigen::Index>(y.size()));
  for (std::size_t i = 0; i < y.size(); ++i) v(static_cast<Eigen::Index>(i)) = y[i];
  return v;
}

Vector sigmoid_of(const Vector& eta) {
  return eta.unaryExpr([](double z) { return sigmoid(z); });
}

double neg_loglik_from_eta(const Vector& eta, std::span<const int> y) {
  double acc = 0.0;
  for (Eigen::Index i = 0; i < eta.size(); ++i) {
    acc -= y[static_cast<std::size_t>(i)] ? log_sigmoid(eta(i)) : log_sigmoid(-eta(i));
  }
  return acc;
}

double entropy_term(double q) { return q > 0.0 ? -q * std::log(q) : 0.0; }

}  // namespace

double sigmoid(double z) {
  if (z >= 0.0) return 1.0 / (1.0 + std::exp(-z));
  const double e = std::exp(z);
  return e / (1.0 + e);
}

double log_sigmoid(double z) {
  if (z >= 0.0) return -std::log1p(std::exp(-z));
  return z - std::log1p(std::exp(z));
}

double log_likelihood(const Matrix& X, std::span<const int> y, double intercept,
                      const Vector& beta) {
  check_design(X, y, "log_likelihood");
  const Vector eta = (X * beta).array() + intercept;
  return -neg_loglik_from_eta(eta, y);
}

Vector log_likelihood_gradient(const Matrix& X, std::span<const int> y, double intercept,
                               const Vector& beta) {
  check_design(X, y, "log_likelihood_gradient");
  const Vector eta = (X * beta).array() + intercept;
  const Vector resid = labels_as_vector(y) - sigmoid_of(eta);
  Vector g(X.cols() + 1);
  g(0) = resid.sum();
  g.tail(X.cols()) = X.transpose() * resid;
  return g;
}

// ---------------------------------------------------------------------------
// Ridge IRLS

Coefficients fit_ridge_logistic(const Matrix& X, std::span<const int> y, double ridge,
                                const SolverOptions& opt, std::vector<double>* objective_trace) {
  check_binary(X, y, "fit_ridge_logistic");
  if (!(ridge >= 0.0) || !std::isfinite(ridge)) {
    throw InputError("fit_ridge_logistic: ridge must be finite and >= 0");
  }
  const Eigen::Index n = X.rows();
  const Eigen::Index p = X.cols();
  Matrix design(n, p + 1);
  design.col(0).setOnes();
  design.rightCols(p) = X;
  const Vector yv = labels_as_vector(y);

  Vector b = Vector::Zero(p + 1);
  Vector penalty = Vector::Constant(p + 1, ridge);
  penalty(0) = 0.0;

  auto objective = [&](const Vector& coef) {
    const Vector eta = design * coef;
    return neg_loglik_from_eta(eta, y) +
           0.5 * (penalty.array() * coef.array().square()).sum();
  };

  double obj = objective(b);
  for (int iter = 0; iter < opt.max_iter; ++iter) {
    const Vector eta = design * b;
    const Vector mu = sigmoid_of(eta);
    const Vector w = (mu.array() * (1.0 - mu.array())).max(1e-12);
    const Vector grad = design.transpose() * (mu - yv) + penalty.cwiseProduct(b);
    Matrix H = design.transpose() * w.asDiagonal() * design;
    H.diagonal() += penalty;
    H.diagonal().array() += 1e-10;
    const Vector step = H.ldlt().solve(-grad);
    if (!step.allFinite()) throw ComputeError("fit_ridge_logistic: singular Newton system");

    // Backtracking keeps the objective monotone when the pure Newton step
    // overshoots (near-separable data).
    const double slope = grad.dot(step);
    double t = 1.0;
    double trial = objective(b + step);
    while (trial > obj + 1e-4 * t * slope && t > 1e-10) {
      t *= 0.5;
      trial = objective(b + t * step);
    }
    if (trial > obj) {
      // No descent available at machine precision: we are at the optimum.
      if (objective_trace) objective_trace->push_back(obj);
      break;
    }
    b += t * step;
    obj = trial;
    if (objective_trace) objective_trace->push_back(obj);
    if ((t * step).cwiseAbs().maxCoeff() < opt.tol) break;
  }
  return Coefficients{b(0), b.tail(p)};
}

Vector linear_score(const Coefficients& c, const Matrix& X) {
  if (X.cols() != c.beta.size()) {
    throw InputError("model has " + std::to_string(c.beta.size()) +
                     " coefficients, X has " + std::to_string(X.cols()) + " columns");
  }
  return (X * c.beta).array() + c.intercept;
}

std::vector<int> predict_binary(const Coefficients& c, const Matrix& X) {
  const Vector s = linear_score(c, X);
  std::vector<int> out(static_cast<std::size_t>(s.size()));
  for (Eigen::Index i = 0; i < s.size(); ++i) {
    out[static_cast<std::size_t>(i)] = sigmoid(s(i)) >= 0.5 ? 1 : 0;
  }
  return out;
}

OvrModel fit_ovr_classifier(const Matrix& X, std::span<const int> y, double ridge,
                            const SolverOptions& opt, std::optional<int> class_count) {
  check_design(X, y, "fit_ovr_classifier");
  if (y.empty()) throw InputError("fit_ovr_classifier: empty training set");
  const int k = class_count.value_or(*std::max_element(y.begin(), y.end()) + 1);
  if (k < 2) throw InputError("fit_ovr_classifier: need at least 2 classes");
  std::vector<int> counts(static_cast<std::size_t>(k), 0);
  for (int v : y) {
    if (v < 0 || v >= k) throw InputError("fit_ovr_classifier: class code out of range");
    ++counts[static_cast<std::size_t>(v)];
  }
  OvrModel m;
  m.per_class.reserve(static_cast<std::size_t>(k));
  std::vector<int> target(y.size());
  for (int c = 0; c < k; ++c) {
    if (counts[static_cast<std::size_t>(c)] == 0) {
      throw InputError("fit_ovr_classifier: class " + std::to_string(c) +
                       " absent from training data");
    }
    for (std::size_t i = 0; i < y.size(); ++i) target[i] = y[i] == c ? 1 : 0;
    m.per_class.push_back(fit_ridge_logistic(X, target, ridge, opt));
  }
  return m;
}

std::vector<int> predict_ovr(const OvrModel& m, const Matrix& X) {
  if (m.per_class.empty()) throw InputError("predict_ovr: empty model");
  std::vector<Vector> scores;
  scores.reserve(m.per_class.size());
  for (const auto& c : m.per_class) scores.push_back(linear_score(c, X));
  std::vector<int> out(static_cast<std::size_t>(X.rows()), 0);
  for (Eigen::Index i = 0; i < X.rows(); ++i) {
    int best = 0;
    for (int c = 1; c < m.class_count(); ++c) {
      if (scores[static_cast<std::size_t>(c)](i) > scores[static_cast<std::size_t>(best)](i)) {
        best = c;
      }
    }
    out[static_cast<std::size_t>(i)] = best;
  }
  return out;
}

// ---------------------------------------------------------------------------
// L1 logistic

double soft_threshold(double z, double t) {
  if (z > t) return z - t;
  if (z < -t) return z + t;
  return 0.0;
}

namespace {

double null_intercept(std::span<const int> y) {
  double pos = 0.0;
  for (int v : y) pos += v;
  const double rate = pos / static_cast<double>(y.size());
  return std::log(rate / (1.0 - rate));
}

// Gradient of -loglik, intercept first.
Vector loss_gradient(const Matrix& X, const Vector& yv, const Vector& eta) {
  const Vector resid = sigmoid_of(eta) - yv;
  Vector g(X.cols() + 1);
  g(0) = resid.sum();
  g.tail(X.cols()) = X.transpose() * resid;
  return g;
}

double kkt_from_gradient(const Vector& g, const Vector& beta, double lambda) {
  double worst = std::abs(g(0));
  for (Eigen::Index j = 0; j < beta.size(); ++j) {
    const double gj = g(j + 1);
    const double v = beta(j) == 0.0 ? std::max(0.0, std::abs(gj) - lambda)
                                    : std::abs(gj + (beta(j) > 0.0 ? lambda : -lambda));
    worst = std::max(worst, v);
  }
  return worst;
}

}  // namespace

double lambda_max(const Matrix& X, std::span<const int> y) {
  check_binary(X, y, "lambda_max");
  const Vector eta = Vector::Constant(X.rows(), null_intercept(y));
  const Vector g = loss_gradient(X, labels_as_vector(y), eta);
  return X.cols() == 0 ? 0.0 : g.tail(X.cols()).cwiseAbs().maxCoeff();
}

double l1_objective(const Matrix& X, std::span<const int> y, const Coefficients& c,
                    double lambda) {
  return -log_likelihood(X, y, c.intercept, c.beta) + lambda * c.beta.lpNorm<1>();
}

double l1_kkt_residual(const Matrix& X, std::span<const int> y, const Coefficients& c,
                       double lambda) {
  check_design(X, y, "l1_kkt_residual");
  const Vector eta = linear_score(c, X);
  return kkt_from_gradient(loss_gradient(X, labels_as_vector(y), eta), c.beta, lambda);
}

Coefficients fit_l1_logistic(const Matrix& X, std::span<const int> y, double lambda,
                             const SolverOptions& opt, const Coefficients* warm_start) {
  check_binary(X, y, "fit_l1_logistic");
  if (!(lambda > 0.0) || !std::isfinite(lambda)) {
    throw InputError("fit_l1_logistic: lambda must be > 0");
  }
  const Eigen::Index n = X.rows();
  const Eigen::Index p = X.cols();
  const Vector yv = labels_as_vector(y);

  Coefficients c;
  if (warm_start && warm_start->beta.size() == p) {
    c = *warm_start;
  } else {
    c.intercept = null_intercept(y);
    c.beta = Vector::Zero(p);
    // Null model already optimal: return it exactly rather than iterating.
    const Vector g = loss_gradient(X, yv, Vector::Constant(n, c.intercept));
    if (p == 0 || g.tail(p).cwiseAbs().maxCoeff() <= lambda) return c;
  }

  auto objective = [&](double b0, const Vector& beta) {
    const Vector eta = (X * beta).array() + b0;
    return neg_loglik_from_eta(eta, y) + lambda * beta.lpNorm<1>();
  };

  Vector eta = (X * c.beta).array() + c.intercept;
  double obj = objective(c.intercept, c.beta);
  Vector r(n);
  Vector w(n);
  Vector col_weight(p);

  for (int outer = 0; outer < opt.max_iter; ++outer) {
    const Vector grad = loss_gradient(X, yv, eta);
    if (kkt_from_gradient(grad, c.beta, lambda) <= opt.tol) break;

    const Vector mu = sigmoid_of(eta);
    for (Eigen::Index i = 0; i < n; ++i) {
      w(i) = std::max(mu(i) * (1.0 - mu(i)), 1e-10);
      r(i) = (yv(i) - mu(i)) / w(i);
    }
    for (Eigen::Index j = 0; j < p; ++j) col_weight(j) = w.dot(X.col(j).cwiseAbs2());
    const double w_sum = w.sum();

    // Coordinate descent on the weighted least-squares surrogate; r holds the
    // working residual z - eta' for the candidate (b0, beta).
    double b0 = c.intercept;
    Vector beta = c.beta;
    const double inner_tol = 0.1 * opt.tol;
    for (int sweep = 0; sweep < 10000; ++sweep) {
      double max_change = 0.0;
      const double db0 = w.dot(r) / w_sum;
      if (db0 != 0.0) {
        b0 += db0;
        r.array() -= db0;
        max_change = std::max(max_change, std::abs(db0) * w_sum);
      }
      for (Eigen::Index j = 0; j < p; ++j) {
        if (col_weight(j) <= 0.0) continue;
        const double u = (w.array() * X.col(j).array() * r.array()).sum() + col_weight(j) * beta(j);
        const double next = soft_threshold(u, lambda) / col_weight(j);
        const double delta = next - beta(j);
        if (delta != 0.0) {
          r -= delta * X.col(j);
          beta(j) = next;
          max_change = std::max(max_change, std::abs(delta) * col_weight(j));
        }
      }
      if (max_change < inner_tol) break;
    }

    // Backtrack along the surrogate direction on the true objective.
    const double d0 = b0 - c.intercept;
    const Vector dbeta = beta - c.beta;
    if (d0 == 0.0 && dbeta.isZero(0.0)) break;
    const double decrease = grad(0) * d0 + grad.tail(p).dot(dbeta) +
                            lambda * (beta.lpNorm<1>() - c.beta.lpNorm<1>());
    double t = 1.0;
    double trial = objective(c.intercept + d0, c.beta + dbeta);
    while (trial > obj + 1e-4 * t * std::min(decrease, 0.0) && t > 1e-12) {
      t *= 0.5;
      trial = objective(c.intercept + t * d0, c.beta + t * dbeta);
    }
    if (trial > obj) break;
    c.intercept += t * d0;
    c.beta += t * dbeta;
    obj = trial;
    eta = (X * c.beta).array() + c.intercept;
  }
  return c;
}

// ---------------------------------------------------------------------------
// Variational Bayes with the Jaakkola-Jordan quadratic bound
//
//   log sigmoid(s) >= log sigmoid(xi) + (s - xi)/2 - lambda(xi) (s^2 - xi^2)
//
// applied to s = (2y - 1) x'w. Taking expectations under a factorized q gives
// a Gaussian-quadratic surrogate in w; coordinate updates are exact maxima of
// the resulting ELBO, and xi_i^2 = E[(x_i'w)^2] maximizes it over xi.

double jj_lambda(double xi) {
  const double a = std::abs(xi);
  if (a < 1e-6) return 0.125 - a * a / 96.0;
  return std::tanh(0.5 * a) / (4.0 * a);
}

namespace {

struct BoundState {
  Vector xi;
  Vector lam;

  void refresh(const Vector& second_moment) {
    xi = second_moment.cwiseMax(0.0).cwiseSqrt();
    lam = xi.unaryExpr([](double v) { return jj_lambda(v); });
  }

  // Sum over observations of the bound when xi^2 equals the second moment.
  double value(const Vector& mean_eta, const Vector& centered_label) const {
    double acc = 0.0;
    for (Eigen::Index i = 0; i < xi.size(); ++i) {
      acc += log_sigmoid(xi(i)) + centered_label(i) * mean_eta(i) - 0.5 * xi(i);
    }
    return acc;
  }
};

Vector centered_labels(std::span<const int> y) {
  return labels_as_vector(y).array() - 0.5;
}

double gaussian_prior_term(double mean, double var, double prior_var) {
  return -0.5 * (kLog2Pi + std::log(prior_var)) - 0.5 * (mean * mean + var) / prior_var;
}

double gaussian_entropy(double var) { return 0.5 * (kLog2Pi + 1.0 + std::log(var)); }

}  // namespace

GaussianPosterior fit_vb_ard(const Matrix& X, std::span<const int> y, const ArdSettings& s) {
  check_binary(X, y, "fit_vb_ard");
  if (!(s.alpha_init > 0.0) || !(s.alpha_min > 0.0) || !(s.alpha_max >= s.alpha_min)) {
    throw InputError("fit_vb_ard: precisions must be positive with alpha_min <= alpha_max");
  }
  if (!(s.intercept_prior_variance > 0.0)) {
    throw InputError("fit_vb_ard: intercept prior variance must be positive");
  }
  const Eigen::Index n = X.rows();
  const Eigen::Index p = X.cols();
  const Vector t = centered_labels(y);
  const Matrix X2 = X.cwiseAbs2();
  const Vector tx = X.transpose() * t;

  GaussianPosterior post;
  post.mean = Vector::Zero(p);
  post.precision = Vector::Constant(p, std::clamp(s.alpha_init, s.alpha_min, s.alpha_max));
  post.variance = post.precision.cwiseInverse();
  post.intercept_mean = 0.0;
  post.intercept_variance = 1.0;

  Vector eta = Vector::Zero(n);
  BoundState bound;
  bound.refresh((eta.array().square() + post.intercept_variance).matrix() + X2 * post.variance);

  double prev = 0.0;
  for (int iter = 0; iter < s.solver.max_iter; ++iter) {
    // (i) coordinate updates of q(intercept), q(beta_j)
    {
      const double prec = 1.0 / s.intercept_prior_variance + 2.0 * bound.lam.sum();
      const double b = t.sum() - 2.0 * bound.lam.dot((eta.array() - post.intercept_mean).matrix());
      const double m = b / prec;
      eta.array() += m - post.intercept_mean;
      post.intercept_mean = m;
      post.intercept_variance = 1.0 / prec;
    }
    for (Eigen::Index j = 0; j < p; ++j) {
      const auto xj = X.col(j);
      const double prec = post.precision(j) + 2.0 * bound.lam.dot(X2.col(j));
      const double b = tx(j) - 2.0 * (bound.lam.array() * xj.array() *
                                      (eta - post.mean(j) * xj).array()).sum();
      const double m = b / prec;
      eta += (m - post.mean(j)) * xj;
      post.mean(j) = m;
      post.variance(j) = 1.0 / prec;
    }
    // (ii) bound parameters
    const Vector second = (eta.array().square() + post.intercept_variance).matrix() +
                          X2 * post.variance;
    bound.refresh(second);
    // (iii) precisions
    if (s.update_precision) {
      for (Eigen::Index j = 0; j < p; ++j) {
        const double m2 = post.mean(j) * post.mean(j) + post.variance(j);
        post.precision(j) = std::clamp(1.0 / m2, s.alpha_min, s.alpha_max);
      }
    }

    double elbo = bound.value(eta, t);
    elbo += gaussian_prior_term(post.intercept_mean, post.intercept_variance,
                                s.intercept_prior_variance) +
            gaussian_entropy(post.intercept_variance);
    for (Eigen::Index j = 0; j < p; ++j) {
      elbo += gaussian_prior_term(post.mean(j), post.variance(j), 1.0 / post.precision(j)) +
              gaussian_entropy(post.variance(j));
    }
    post.elbo_trace.push_back(elbo);
    post.iterations = iter + 1;
    if (!std::isfinite(elbo)) throw ComputeError("fit_vb_ard: ELBO became non-finite");
    if (iter > 0 && std::abs(elbo - prev) <= s.solver.tol * std::abs(elbo)) {
      post.converged = true;
      break;
    }
    prev = elbo;
  }
  return post;
}

Vector SpikeSlabPosterior::posterior_mean() const {
  return inclusion_prob.cwiseProduct(slab_mean) +
         (1.0 - inclusion_prob.array()).matrix().cwiseProduct(spike_mean);
}

SpikeSlabPosterior fit_vb_spike_slab(const Matrix& X, std::span<const int> y,
                                     const SpikeSlabSettings& s) {
  check_binary(X, y, "fit_vb_spike_slab");
  if (!(s.tau0_sq > 0.0) || !(s.tau0_sq < s.tau1_sq)) {
    throw InputError("fit_vb_spike_slab: require 0 < tau0_sq < tau1_sq");
  }
  if (!(s.pi > 0.0 && s.pi < 1.0)) throw InputError("fit_vb_spike_slab: pi must lie in (0, 1)");
  if (!(s.intercept_prior_variance > 0.0)) {
    throw InputError("fit_vb_spike_slab: intercept prior variance must be positive");
  }
  const Eigen::Index n = X.rows();
  const Eigen::Index p = X.cols();
  const Vector t = centered_labels(y);
  const Matrix X2 = X.cwiseAbs2();
  const Vector tx = X.transpose() * t;
  const double prior_logit = std::log(s.pi / (1.0 - s.pi));
  const double log_pi = std::log(s.pi);
  const double log_1mpi = std::log1p(-s.pi);

  SpikeSlabPosterior post;
  post.inclusion_prob = Vector::Constant(p, s.pi);
  post.slab_mean = Vector::Zero(p);
  post.spike_mean = Vector::Zero(p);
  post.slab_variance = Vector::Constant(p, s.tau1_sq);
  post.spike_variance = Vector::Constant(p, s.tau0_sq);
  post.intercept_mean = 0.0;
  post.intercept_variance = 1.0;

  Vector mean = Vector::Zero(p);
  Vector var(p);
  auto moments = [&](Eigen::Index j) {
    const double q = post.inclusion_prob(j);
    const double m1 = post.slab_mean(j);
    const double m0 = post.spike_mean(j);
    const double e = q * m1 + (1.0 - q) * m0;
    const double e2 = q * (m1 * m1 + post.slab_variance(j)) +
                      (1.0 - q) * (m0 * m0 + post.spike_variance(j));
    mean(j) = e;
    var(j) = std::max(e2 - e * e, 0.0);
  };
  for (Eigen::Index j = 0; j < p; ++j) moments(j);

  Vector eta = Vector::Zero(n);
  BoundState bound;
  bound.refresh((eta.array().square() + post.intercept_variance).matrix() + X2 * var);

  double prev = 0.0;
  for (int iter = 0; iter < s.solver.max_iter; ++iter) {
    {
      const double prec = 1.0 / s.intercept_prior_variance + 2.0 * bound.lam.sum();
      const double b = t.sum() - 2.0 * bound.lam.dot((eta.array() - post.intercept_mean).matrix());
      const double m = b / prec;
      eta.array() += m - post.intercept_mean;
      post.intercept_mean = m;
      post.intercept_variance = 1.0 / prec;
    }
    for (Eigen::Index j = 0; j < p; ++j) {
      const auto xj = X.col(j);
      const double a = 2.0 * bound.lam.dot(X2.col(j));
      const double b = tx(j) - 2.0 * (bound.lam.array() * xj.array() *
                                      (eta - mean(j) * xj).array()).sum();
      const double v1 = 1.0 / (a + 1.0 / s.tau1_sq);
      const double v0 = 1.0 / (a + 1.0 / s.tau0_sq);
      const double m1 = v1 * b;
      const double m0 = v0 * b;
      const double logit = prior_logit + 0.5 * std::log(s.tau0_sq * v1 / (s.tau1_sq * v0)) +
                           0.5 * (m1 * m1 / v1 - m0 * m0 / v0);
      post.slab_mean(j) = m1;
      post.slab_variance(j) = v1;
      post.spike_mean(j) = m0;
      post.spike_variance(j) = v0;
      post.inclusion_prob(j) = sigmoid(logit);
      const double old = mean(j);
      moments(j);
      eta += (mean(j) - old) * xj;
    }
    bound.refresh((eta.array().square() + post.intercept_variance).matrix() + X2 * var);

    double elbo = bound.value(eta, t);
    elbo += gaussian_prior_term(post.intercept_mean, post.intercept_variance,
                                s.intercept_prior_variance) +
            gaussian_entropy(post.intercept_variance);
    for (Eigen::Index j = 0; j < p; ++j) {
      const double q = post.inclusion_prob(j);
      double term = 0.0;
      if (q > 0.0) {
        term += q * (gaussian_prior_term(post.slab_mean(j), post.slab_variance(j), s.tau1_sq) +
                     gaussian_entropy(post.slab_variance(j)) + log_pi);
      }
      if (q < 1.0) {
        term += (1.0 - q) *
                (gaussian_prior_term(post.spike_mean(j), post.spike_variance(j), s.tau0_sq) +
                 gaussian_entropy(post.spike_variance(j)) + log_1mpi);
      }
      elbo += term + entropy_term(q) + entropy_term(1.0 - q);
    }
    post.elbo_trace.push_back(elbo);
    post.iterations = iter + 1;
    if (!std::isfinite(elbo)) throw ComputeError("fit_vb_spike_slab: ELBO became non-finite");
    if (iter > 0 && std::abs(elbo - prev) <= s.solver.tol * std::abs(elbo)) {
      post.converged = true;
      break;
    }
    prev = elbo;
  }
  return post;
}

// ---------------------------------------------------------------------------

double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::numbers::sqrt2); }

double exceedance_probability(double mu, double sigma, double epsilon) {
  if (!(sigma > 0.0)) throw InputError("exceedance_probability: sigma must be > 0");
  if (!(epsilon > 0.0)) throw InputError("exceedance_probability: epsilon must be > 0");
  // Pr(beta < -eps) + Pr(beta > eps); the upper tail as Phi((mu - eps)/sigma)
  // avoids cancellation in 1 - Phi(.).
  return normal_cdf((-epsilon - mu) / sigma) + normal_cdf((mu - epsilon) / sigma);
}

}  // namespace featrank::glm
