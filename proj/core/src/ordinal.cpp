/*
 * ordqual - calibrated one-dimensional quality measures from ordinal
 * classifier probabilities.
 *
 * Copyright 2026 the ordqual authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 * http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */
#include "ordqual/ordinal.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <numbers>

#include "ordqual/rng.hpp"

namespace ordqual {

namespace {

double softplus(double t) {
  return std::max(t, 0.0) + std::log1p(std::exp(-std::abs(t)));
}

double log_sigmoid(double t) { return -softplus(-t); }

double sigmoid(double t) {
  if (t >= 0.0) return 1.0 / (1.0 + std::exp(-t));
  const double e = std::exp(t);
  return e / (1.0 + e);
}

// log(1 - exp(-delta)) for delta > 0.
double log1mexp(double delta) {
  if (delta <= 0.6931471805599453) return std::log(-std::expm1(-delta));
  return std::log1p(-std::exp(-delta));
}

// Per-instance log-likelihood and the ratios the derivatives are built from.
// For class c: z_hi = alpha_{c+1} - phi (absent for FA), z_lo = alpha_c - phi
// (absent for Stub); P = sigmoid(z_hi) - sigmoid(z_lo); a = pdf(z_hi)/P and
// b = pdf(z_lo)/P, all evaluated through logs so extreme z stay accurate.
struct LikTerms {
  double loglik = 0.0;
  double a = 0.0;
  double b = 0.0;
  double s_hi = 1.0;
  double s_lo = 0.0;
};

LikTerms likelihood_terms(int c, double phi, const Vector5& alpha) {
  LikTerms t;
  if (c == 0) {
    const double z_hi = alpha(0) - phi;
    t.loglik = log_sigmoid(z_hi);
    t.a = sigmoid(-z_hi);
    t.s_hi = sigmoid(z_hi);
  } else if (c == kNumClasses - 1) {
    const double z_lo = alpha(4) - phi;
    t.loglik = log_sigmoid(-z_lo);
    t.b = sigmoid(z_lo);
    t.s_lo = t.b;
    t.s_hi = 1.0;
  } else {
    const double z_hi = alpha(c) - phi;
    const double z_lo = alpha(c - 1) - phi;
    const double lm = log1mexp(z_hi - z_lo);
    t.loglik = log_sigmoid(z_hi) + log_sigmoid(-z_lo) + lm;
    t.a = std::exp(log_sigmoid(-z_hi) - log_sigmoid(-z_lo) - lm);
    t.b = std::exp(log_sigmoid(z_lo) - log_sigmoid(z_hi) - lm);
    t.s_hi = sigmoid(z_hi);
    t.s_lo = sigmoid(z_lo);
  }
  return t;
}

// Student-t(nu=3, scale=2.5) negative log density, with derivatives.
constexpr double kPenaltyNu = 3.0;
constexpr double kPenaltyScale = 2.5;

double student_t_constant() {
  static const double c = -std::lgamma((kPenaltyNu + 1.0) / 2.0) +
                          std::lgamma(kPenaltyNu / 2.0) +
                          0.5 * std::log(kPenaltyNu * std::numbers::pi) +
                          std::log(kPenaltyScale);
  return c;
}

double penalty_term(double t, double* grad, double* hess) {
  const double nu_s2 = kPenaltyNu * kPenaltyScale * kPenaltyScale;
  const double denom = nu_s2 + t * t;
  if (grad) *grad = (kPenaltyNu + 1.0) * t / denom;
  if (hess) *hess = (kPenaltyNu + 1.0) * (nu_s2 - t * t) / (denom * denom);
  return student_t_constant() + 0.5 * (kPenaltyNu + 1.0) * std::log1p(t * t / nu_s2);
}

// Jacobian d(alpha)/d(theta): column 0 is all ones, column m >= 1 is
// exp(theta_m) for rows >= m.
Eigen::Matrix<double, 5, 5> threshold_jacobian(const Vector5& theta) {
  Eigen::Matrix<double, 5, 5> jac = Eigen::Matrix<double, 5, 5>::Zero();
  for (int k = 0; k < 5; ++k) {
    jac(k, 0) = 1.0;
    for (int m = 1; m <= k; ++m) jac(k, m) = std::exp(theta(m));
  }
  return jac;
}

void check_rows(std::span<const FeatureRow> rows) {
  if (rows.empty()) raise(Errc::DegenerateData, "no instances");
  std::array<double, kNumClasses> class_weight{};
  for (const auto& row : rows) {
    if (!(row.weight > 0.0) || !std::isfinite(row.weight)) {
      raise(Errc::NonFiniteInput, "weights must be positive and finite");
    }
    if (!row.x.allFinite()) {
      raise(Errc::NonFiniteInput, "non-finite feature vector");
    }
    class_weight[static_cast<std::size_t>(code_of(row.label))] += row.weight;
  }
  int represented = 0;
  for (double w : class_weight) {
    if (w > 0.0) ++represented;
  }
  if (represented < 2) {
    raise(Errc::DegenerateData, "fewer than 2 classes with positive weight");
  }
}

struct Evaluation {
  double value = 0.0;        // penalized weighted NLL
  double penalty = 0.0;      // penalty part of value
  Vector10 gradient = Vector10::Zero();
  Matrix10 hessian = Matrix10::Zero();
};

// Accumulates the data term in (alpha, B) coordinates, maps to (theta, B),
// then adds the penalty. With want_derivatives false only the value is
// computed. score_outer, when given, receives sum_i (w_i psi_i)(w_i psi_i)^T
// over per-instance data-score vectors psi_i (for the sandwich covariance).
Evaluation evaluate_objective(std::span<const FeatureRow> rows, const Vector10& params,
                              PenaltyKind penalty, bool want_derivatives,
                              Matrix10* score_outer = nullptr) {
  const Vector5 theta = params.head<5>();
  const Vector5 beta = params.tail<5>();
  const Vector5 alpha = alpha_from_theta(theta);

  Evaluation ev;
  Vector10 grad_a = Vector10::Zero();
  Matrix10 hess_a = Matrix10::Zero();
  if (score_outer) score_outer->setZero();

  for (const auto& row : rows) {
    const int c = code_of(row.label);
    const double phi = beta.dot(row.x);
    const LikTerms t = likelihood_terms(c, phi, alpha);
    const double w = row.weight;
    ev.value -= w * t.loglik;
    if (!want_derivatives && !score_outer) continue;

    // Derivatives of the per-instance log-likelihood.
    const double g_hi = t.a;
    const double g_lo = -t.b;
    const double g_phi = t.b - t.a;
    Vector10 inst_grad = Vector10::Zero();  // NLL gradient of this instance
    if (c <= 4) inst_grad(c) = -g_hi;
    if (c >= 1) inst_grad(c - 1) = -g_lo;
    for (int j = 0; j < 5; ++j) inst_grad(5 + j) = -g_phi * row.x(j);

    grad_a += w * inst_grad;
    if (score_outer) {
      const Vector10 weighted = w * inst_grad;
      score_outer->noalias() += weighted * weighted.transpose();
    }
    if (!want_derivatives) continue;

    const double h_hihi = t.a * (1.0 - 2.0 * t.s_hi) - t.a * t.a;
    const double h_lolo = -t.b * (1.0 - 2.0 * t.s_lo) - t.b * t.b;
    const double h_hilo = t.a * t.b;
    const double h_phph = h_hihi + 2.0 * h_hilo + h_lolo;
    const double h_phhi = -(h_hihi + h_hilo);
    const double h_phlo = -(h_lolo + h_hilo);

    if (c <= 4) hess_a(c, c) -= w * h_hihi;
    if (c >= 1) hess_a(c - 1, c - 1) -= w * h_lolo;
    if (c >= 1 && c <= 4) {
      hess_a(c, c - 1) -= w * h_hilo;
      hess_a(c - 1, c) -= w * h_hilo;
    }
    for (int j = 0; j < 5; ++j) {
      const double xj = row.x(j);
      for (int l = 0; l < 5; ++l) {
        hess_a(5 + j, 5 + l) -= w * h_phph * xj * row.x(l);
      }
      if (c <= 4) {
        hess_a(c, 5 + j) -= w * h_phhi * xj;
        hess_a(5 + j, c) -= w * h_phhi * xj;
      }
      if (c >= 1) {
        hess_a(c - 1, 5 + j) -= w * h_phlo * xj;
        hess_a(5 + j, c - 1) -= w * h_phlo * xj;
      }
    }
  }

  // Map from (alpha, B) to (theta, B).
  Matrix10 chain = Matrix10::Identity();
  chain.topLeftCorner<5, 5>() = threshold_jacobian(theta);
  if (want_derivatives || score_outer) {
    if (score_outer) *score_outer = chain.transpose() * (*score_outer) * chain;
  }
  if (want_derivatives) {
    ev.gradient = chain.transpose() * grad_a;
    ev.hessian = chain.transpose() * hess_a * chain;
    // Second-derivative correction: alpha_k depends on theta_m (m >= 1)
    // through exp(theta_m), which also curves the composition.
    for (int m = 1; m < 5; ++m) {
      double tail = 0.0;
      for (int k = m; k < 5; ++k) tail += grad_a(k);
      ev.hessian(m, m) += std::exp(theta(m)) * tail;
    }
  }

  if (penalty == PenaltyKind::StudentT) {
    for (int j = 0; j < 10; ++j) {
      double g = 0.0;
      double h = 0.0;
      ev.penalty += penalty_term(params(j), want_derivatives ? &g : nullptr,
                                 want_derivatives ? &h : nullptr);
      if (want_derivatives) {
        ev.gradient(j) += g;
        ev.hessian(j, j) += h;
      }
    }
    ev.value += ev.penalty;
  }
  return ev;
}

double objective_value(std::span<const FeatureRow> rows, const Vector10& params,
                       PenaltyKind penalty) {
  return evaluate_objective(rows, params, penalty, false).value;
}

Vector10 starting_point(std::span<const FeatureRow> rows) {
  std::array<double, kNumClasses> class_weight{};
  double total = 0.0;
  for (const auto& row : rows) {
    class_weight[static_cast<std::size_t>(code_of(row.label))] += row.weight;
    total += row.weight;
  }
  // Small smoothing keeps the cumulative frequencies strictly increasing when
  // some classes are absent.
  const double smooth = 1e-3 * total / kNumClasses;
  double smoothed_total = 0.0;
  for (auto& w : class_weight) {
    w += smooth;
    smoothed_total += w;
  }
  Vector5 alpha;
  double cum = 0.0;
  for (int k = 0; k < 5; ++k) {
    cum += class_weight[static_cast<std::size_t>(k)];
    const double p = cum / smoothed_total;
    alpha(k) = std::log(p / (1.0 - p));
  }
  Vector10 params = Vector10::Zero();
  params.head<5>() = theta_from_alpha(alpha);
  return params;
}

Vector5 weighted_feature_sd(std::span<const FeatureRow> rows) {
  double total = 0.0;
  Vector5 mean = Vector5::Zero();
  for (const auto& row : rows) {
    total += row.weight;
    mean += row.weight * row.x;
  }
  mean /= total;
  Vector5 var = Vector5::Zero();
  for (const auto& row : rows) {
    const Vector5 d = row.x - mean;
    var += row.weight * d.cwiseProduct(d);
  }
  var /= total;
  return var.cwiseMax(0.0).cwiseSqrt();
}

}  // namespace

Vector5 alpha_from_theta(const Vector5& theta) {
  Vector5 alpha;
  alpha(0) = theta(0);
  for (int k = 1; k < 5; ++k) alpha(k) = alpha(k - 1) + std::exp(theta(k));
  return alpha;
}

Vector5 theta_from_alpha(const Vector5& alpha) {
  Vector5 theta;
  theta(0) = alpha(0);
  for (int k = 1; k < 5; ++k) {
    const double gap = alpha(k) - alpha(k - 1);
    if (!(gap > 0.0)) {
      raise(Errc::NonFiniteInput, "thresholds must be strictly increasing");
    }
    theta(k) = std::log(gap);
  }
  return theta;
}

std::array<double, kNumClasses> class_probabilities(const FeatureVector& x,
                                                    const FittedOrdinalModel& model) {
  if (!x.allFinite() || !model.thresholds.allFinite() ||
      !model.coefficients.allFinite()) {
    raise(Errc::NonFiniteInput, "non-finite inputs to class_probabilities");
  }
  const double phi = model.coefficients.dot(x);
  std::array<double, kNumClasses> probs{};
  for (int c = 0; c < kNumClasses; ++c) {
    const LikTerms t = likelihood_terms(c, phi, model.thresholds);
    probs[static_cast<std::size_t>(c)] = std::exp(t.loglik);
  }
  return probs;
}

NllResult nll_weighted(std::span<const FeatureRow> rows, const Vector10& params,
                       PenaltyKind penalty) {
  check_rows(rows);
  if (!params.allFinite()) {
    raise(Errc::NonFiniteInput, "non-finite parameters");
  }
  const Evaluation ev = evaluate_objective(rows, params, penalty, true);
  if (!std::isfinite(ev.value)) {
    raise(Errc::NonFiniteLikelihood, "objective overflowed despite log-space evaluation");
  }
  return NllResult{ev.value, ev.gradient, ev.hessian};
}

double penalty_value(const Vector10& params, PenaltyKind penalty) {
  if (penalty == PenaltyKind::None) return 0.0;
  double total = 0.0;
  for (int j = 0; j < 10; ++j) total += penalty_term(params(j), nullptr, nullptr);
  return total;
}

FittedOrdinalModel fit_on_features(std::span<const FeatureRow> rows,
                                   const FitOptions& options,
                                   FitDiagnostics* diagnostics) {
  check_rows(rows);
  const Vector5 feature_sd = weighted_feature_sd(rows);

  Vector10 params = starting_point(rows);
  Evaluation ev = evaluate_objective(rows, params, options.penalty, true);
  if (!std::isfinite(ev.value)) {
    raise(Errc::NonFiniteLikelihood, "objective not finite at the starting point");
  }
  if (diagnostics) {
    diagnostics->objective_trace.clear();
    diagnostics->objective_trace.push_back(ev.value);
  }

  bool converged = false;
  int iter = 0;
  int stagnant_floor_steps = 0;
  for (; iter < options.max_iterations; ++iter) {
    const double grad_norm = ev.gradient.cwiseAbs().maxCoeff();
    if (grad_norm < options.gradient_tolerance) {
      converged = true;
      break;
    }

    // Newton direction with Levenberg damping: grow lambda until the system
    // solves to a finite descent direction. Large lambda degrades gracefully
    // toward a scaled gradient step.
    Vector10 step = Vector10::Zero();
    double lambda = 0.0;
    const double lambda0 = 1e-8 * (1.0 + ev.hessian.diagonal().cwiseAbs().maxCoeff());
    bool have_direction = false;
    for (int attempt = 0; attempt < 60; ++attempt) {
      Matrix10 damped = ev.hessian;
      damped.diagonal().array() += lambda;
      Eigen::LDLT<Matrix10> ldlt(damped);
      if (ldlt.info() == Eigen::Success) {
        step = ldlt.solve(-ev.gradient);
        if (step.allFinite() && ev.gradient.dot(step) < 0.0) {
          have_direction = true;
          break;
        }
      }
      lambda = lambda == 0.0 ? lambda0 : lambda * 10.0;
    }
    if (!have_direction) break;

    const double slope = ev.gradient.dot(step);
    const double value_resolution =
        16.0 * std::numeric_limits<double>::epsilon() * (1.0 + std::abs(ev.value));
    bool accepted = false;
    if (-slope < value_resolution && step.norm() <= 1.0) {
      // The predicted decrease is below what the objective value can resolve;
      // the analytic gradient is still accurate at this scale, so take the
      // full Newton step and let the gradient tolerance decide convergence.
      params += step;
      accepted = true;
      ++stagnant_floor_steps;
    } else {
      // Armijo backtracking keeps the objective non-increasing.
      stagnant_floor_steps = 0;
      double step_size = 1.0;
      for (int half = 0; half < 60; ++half) {
        const Vector10 trial = params + step_size * step;
        const double trial_value = objective_value(rows, trial, options.penalty);
        if (std::isfinite(trial_value) &&
            trial_value <= ev.value + 1e-4 * step_size * slope) {
          params = trial;
          accepted = true;
          break;
        }
        step_size *= 0.5;
      }
    }
    if (!accepted) break;

    ev = evaluate_objective(rows, params, options.penalty, true);
    if (diagnostics) diagnostics->objective_trace.push_back(ev.value);

    for (int j = 0; j < 5; ++j) {
      if (std::abs(params(5 + j)) * feature_sd(j) > 50.0) {
        raise(Errc::SeparationDetected,
              "coefficient " + std::to_string(j) + " exceeds 50 standardized units");
      }
    }
    if (stagnant_floor_steps > 8) break;  // gradient cannot shrink further
  }
  if (diagnostics) diagnostics->iterations = iter;
  if (!converged && ev.gradient.cwiseAbs().maxCoeff() < options.gradient_tolerance) {
    converged = true;
  }

  FittedOrdinalModel model;
  model.thresholds = alpha_from_theta(params.head<5>());
  model.coefficients = params.tail<5>();
  model.converged = converged;
  model.grad_norm = ev.gradient.cwiseAbs().maxCoeff();
  model.loglik = -(ev.value - ev.penalty);

  double weight_sum = 0.0;
  double weight_sq_sum = 0.0;
  for (const auto& row : rows) {
    weight_sum += row.weight;
    weight_sq_sum += row.weight * row.weight;
  }
  model.n_effective = weight_sum * weight_sum / weight_sq_sum;

  // Sandwich covariance H^-1 J H^-1 with J the weighted score outer product;
  // plain inverse-Hessian is wrong under inverse-probability weights.
  Matrix10 score_outer;
  ev = evaluate_objective(rows, params, options.penalty, true, &score_outer);
  Eigen::LDLT<Matrix10> ldlt(ev.hessian);
  if (ldlt.info() != Eigen::Success) {
    raise(Errc::DegenerateData, "Hessian not factorizable at the optimum");
  }
  const Matrix10 hinv_j = ldlt.solve(score_outer);
  Matrix10 cov = ldlt.solve(hinv_j.transpose()).transpose();
  cov = 0.5 * (cov + cov.transpose()).eval();
  if (!cov.allFinite()) {
    raise(Errc::DegenerateData, "covariance not finite at the optimum");
  }
  model.covariance = cov;
  return model;
}

FittedOrdinalModel fit(const Dataset& dataset, const PcaTransform& pca,
                       const FitOptions& options, FitDiagnostics* diagnostics) {
  std::vector<FeatureRow> rows;
  rows.reserve(dataset.size());
  for (const auto& inst : dataset.instances) {
    rows.push_back(FeatureRow{transform(inst.probs, pca), inst.label, inst.weight});
  }
  return fit_on_features(rows, options, diagnostics);
}

std::vector<ParameterDraw> sample_parameters(const FittedOrdinalModel& model, int count,
                                             std::uint64_t seed) {
  Matrix10 cov = 0.5 * (model.covariance + model.covariance.transpose());
  Eigen::SelfAdjointEigenSolver<Matrix10> solver(cov);
  if (solver.info() != Eigen::Success) {
    raise(Errc::CovarianceNotPSD, "eigendecomposition of the covariance failed");
  }
  if (solver.eigenvalues().minCoeff() < -1e-8) {
    raise(Errc::CovarianceNotPSD, "covariance has a significantly negative eigenvalue");
  }
  const Matrix10 root = solver.eigenvectors() *
                        solver.eigenvalues().cwiseMax(0.0).cwiseSqrt().asDiagonal() *
                        solver.eigenvectors().transpose();

  Vector10 center;
  center.head<5>() = theta_from_alpha(model.thresholds);
  center.tail<5>() = model.coefficients;

  Rng rng(seed);
  std::vector<ParameterDraw> draws;
  draws.reserve(static_cast<std::size_t>(std::max(count, 0)));
  for (int d = 0; d < count; ++d) {
    Vector10 z;
    for (int j = 0; j < 10; ++j) z(j) = rng.normal();
    const Vector10 p = center + root * z;
    draws.push_back(ParameterDraw{alpha_from_theta(p.head<5>()), p.tail<5>()});
  }
  return draws;
}

}  // namespace ordqual
