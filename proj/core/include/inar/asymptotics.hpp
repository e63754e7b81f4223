#pragma once

#include <optional>

#include "inar/distributions.hpp"
#include "inar/model.hpp"

namespace inar {

/// theta_c = sup_x F(x).
struct CriticalTilt {
  double value = 0.0;  // may be +inf
  /// True when a finite maximizer exists.
  bool attained = false;
  std::optional<double> maximizer;
};

struct TheorySummary {
  double mu = 0.0;
  double sigma2 = 0.0;
  CriticalTilt theta_c;
  double offspring_mean_l1 = 0.0;
  double offspring_var_l1 = 0.0;
};

/// E[eps] / (1 - ||E[xi]||_1). Requires (a) and (c).
double lln_mu(const InarModel& m);

/// (E[eps] ||Var[xi]||_1 + Var[eps] (1 - ||E[xi]||_1)) / (1 - ||E[xi]||_1)^3.
double clt_sigma2(const InarModel& m);

/// x^2 / (2 sigma^2). Throws DegenerateModel when sigma^2 = 0.
double mdp_rate_J(const InarModel& m, double x);

/// F(x) = x - sum_k log E[exp(x xi_k)]; -inf where a term diverges.
double big_F(const InarModel& m, double x);
/// F'(x) = 1 - sum_k (tilted mean of xi_k at x); -inf off the domain.
double big_F_derivative(const InarModel& m, double x);

/// Bisection on the decreasing F' for the maximizer when one exists.
CriticalTilt theta_c(const InarModel& m);

/// The smaller root of F(x) = theta. Throws NoSolution for theta > theta_c,
/// and for theta = theta_c when the supremum is not attained.
double f_infinity(const InarModel& m, double theta);

/// log E[exp(f_infinity(theta) eps)]; +inf beyond the critical tilt.
double gamma(const InarModel& m, double theta);
/// d Gamma / d theta = (tilted mean of eps at f) / F'(f), f = f_infinity(theta).
double gamma_derivative(const InarModel& m, double theta);

/// sup_{theta <= theta_c} (theta x - Gamma(theta)), by bisection on Gamma'(theta) = x.
double ldp_rate_I(const InarModel& m, double x);

/// sup_psi (x (psi - log E[exp(psi xi_1)]) - log E[exp(psi eps)]), by bisection
/// on the derivative of the concave objective.
double inar1_rate_I(const CountDistribution& eps, const CountDistribution& xi1, double x);

TheorySummary summarize(const InarModel& m);

}  // namespace inar
