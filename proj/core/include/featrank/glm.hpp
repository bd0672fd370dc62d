#pragma once

#include "featrank/types.hpp"

#include <optional>
#include <span>
#include <vector>

// Logistic-regression solvers. Inputs are a design matrix X (n x p, no
// intercept column) and 0/1 labels; every model carries an unpenalized
// intercept. Log-likelihoods are sums over observations, not means.

namespace featrank::glm {

struct SolverOptions {
  int max_iter = 500;
  double tol = 1e-6;
};

struct Coefficients {
  double intercept = 0.0;
  Vector beta;
};

/// Variational Gaussian posterior under an ARD prior.
struct GaussianPosterior {
  Vector mean;
  Vector variance;
  double intercept_mean = 0.0;
  double intercept_variance = 0.0;
  /// Final prior precisions alpha_j.
  Vector precision;
  std::vector<double> elbo_trace;
  int iterations = 0;
  bool converged = false;
};

/// Mean-field posterior over (gamma_j, beta_j) under the spike-and-slab prior.
struct SpikeSlabPosterior {
  Vector inclusion_prob;
  Vector slab_mean;
  Vector slab_variance;
  Vector spike_mean;
  Vector spike_variance;
  double intercept_mean = 0.0;
  double intercept_variance = 0.0;
  std::vector<double> elbo_trace;
  int iterations = 0;
  bool converged = false;

  /// E[beta_j] under q.
  Vector posterior_mean() const;
};

struct OvrModel {
  std::vector<Coefficients> per_class;
  int class_count() const { return static_cast<int>(per_class.size()); }
};

struct ArdSettings {
  double alpha_init = 1.0;
  double alpha_min = 1e-4;
  double alpha_max = 1e6;
  /// When false the precisions stay at alpha_init (plain Gaussian prior).
  bool update_precision = true;
  double intercept_prior_variance = 100.0;
  SolverOptions solver{};
};

struct SpikeSlabSettings {
  double tau0_sq = 1e-3;
  double tau1_sq = 1.0;
  double pi = 0.5;
  double intercept_prior_variance = 100.0;
  SolverOptions solver{};
};

double sigmoid(double z);
/// log(sigmoid(z)) without overflow or cancellation.
double log_sigmoid(double z);

/// Sum of Bernoulli log-likelihoods at linear predictor intercept + X beta.
double log_likelihood(const Matrix& X, std::span<const int> y, double intercept,
                      const Vector& beta);
/// Gradient of log_likelihood; element 0 is the intercept.
Vector log_likelihood_gradient(const Matrix& X, std::span<const int> y, double intercept,
                               const Vector& beta);

/// Maximizes loglik - ridge/2 ||beta||^2 by IRLS (damped Newton). Stops when
/// the largest coefficient change drops below opt.tol. The penalized negative
/// objective after each step is appended to `objective_trace` when given.
Coefficients fit_ridge_logistic(const Matrix& X, std::span<const int> y, double ridge,
                                const SolverOptions& opt = {},
                                std::vector<double>* objective_trace = nullptr);

std::vector<int> predict_binary(const Coefficients& c, const Matrix& X);
Vector linear_score(const Coefficients& c, const Matrix& X);

/// One ridge-logistic model per class (class vs rest). class_count defaults
/// to max(y) + 1; every class must be present.
OvrModel fit_ovr_classifier(const Matrix& X, std::span<const int> y, double ridge,
                            const SolverOptions& opt = {},
                            std::optional<int> class_count = std::nullopt);

/// argmax_c of intercept_c + x.beta_c, ties to the lower class code.
std::vector<int> predict_ovr(const OvrModel& m, const Matrix& X);

double soft_threshold(double z, double t);

/// Smallest lambda at which the L1 fit has beta == 0: the largest absolute
/// loglik gradient at the intercept-only model.
double lambda_max(const Matrix& X, std::span<const int> y);

/// Objective -loglik + lambda ||beta||_1.
double l1_objective(const Matrix& X, std::span<const int> y, const Coefficients& c,
                    double lambda);

/// Largest violation of the L1 optimality conditions (intercept included).
double l1_kkt_residual(const Matrix& X, std::span<const int> y, const Coefficients& c,
                       double lambda);

/// Minimizes -loglik + lambda ||beta||_1 by proximal Newton: each outer step
/// builds the IRLS quadratic surrogate, solves it by cyclic coordinate descent
/// with soft-thresholding (ascending feature order), then backtracks on the
/// true objective. Stops once the KKT residual is below opt.tol.
Coefficients fit_l1_logistic(const Matrix& X, std::span<const int> y, double lambda,
                             const SolverOptions& opt = {},
                             const Coefficients* warm_start = nullptr);

/// Jaakkola-Jordan bound coefficient tanh(xi/2) / (4 xi), 1/8 at xi = 0.
double jj_lambda(double xi);

GaussianPosterior fit_vb_ard(const Matrix& X, std::span<const int> y,
                             const ArdSettings& settings = {});

SpikeSlabPosterior fit_vb_spike_slab(const Matrix& X, std::span<const int> y,
                                     const SpikeSlabSettings& settings = {});

/// Pr(|beta| > epsilon) for beta ~ N(mu, sigma^2).
double exceedance_probability(double mu, double sigma, double epsilon);

/// Standard normal CDF.
double normal_cdf(double x);

}  // namespace featrank::glm
