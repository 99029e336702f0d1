#include "rovctl/control.hpp"

#include <cmath>
#include <string>

#include "rovctl/errors.hpp"

namespace rovctl {

Eigen::VectorXd binomial_coefficients(int n, double lambda) {
  if (n < 1) throw InvalidParameter("controller order must be >= 1, got " + std::to_string(n));
  if (!(lambda > 0.0) || !std::isfinite(lambda))
    throw InvalidParameter("lambda must be positive and finite");

  const int m = n - 1;
  Eigen::VectorXd c(n);
  // binom(m, j) built incrementally; exact in double for any practical order.
  double binom = 1.0;
  for (int j = 0; j <= m; ++j) {
    if (j > 0) binom = binom * static_cast<double>(m - j + 1) / static_cast<double>(j);
    c[j] = binom * std::pow(lambda, m - j);
  }
  c[m] = 1.0;
  return c;
}

GainSet::GainSet(int n, double lambda, double kappa)
    : n_(n), lambda_(lambda), kappa_(kappa), c_(binomial_coefficients(n, lambda)) {
  if (!(kappa > 0.0) || !std::isfinite(kappa))
    throw InvalidParameter("kappa must be positive and finite");
}

double GainSet::shifted_dot(const ErrorVector& e) const {
  if (e.size() != n_) throw InvalidParameter("error vector length does not match controller order");
  double acc = 0.0;
  for (int j = 1; j < n_; ++j) acc += c_[j - 1] * e[j];
  return acc;
}

double combined_error(const ErrorVector& e, const GainSet& g) {
  if (e.size() != g.order())
    throw InvalidParameter("error vector has length " + std::to_string(e.size()) +
                           ", controller order is " + std::to_string(g.order()));
  return g.c().dot(e);
}

double generic_control(double f, double b, double d, double xd_n, const ErrorVector& e,
                       const GainSet& g) {
  if (b == 0.0) throw SingularGain("input gain b is zero");
  const double eps = combined_error(e, g);
  return (-f - d + xd_n - g.shifted_dot(e) - g.kappa() * eps) / b;
}

void DofPlantBelief::validate() const {
  if (!(m_bar > 0.0)) throw InvalidParameter("belief inertia m_bar must be positive");
  if (!(h_bar_coeff >= 0.0)) throw InvalidParameter("belief damping coefficient must be >= 0");
}

double dof_control(const DofPlantBelief& belief, double d_hat, double xdd_d,
                   const ErrorVector& e, double v_meas, const GainSet& g, GainForm form) {
  if (g.order() != 2 || e.size() != 2)
    throw InvalidParameter("per-DOF law is second order");
  const double lambda = g.lambda();
  const double eps = e[1] + lambda * e[0];
  const double h_bar = belief.h_bar_coeff * v_meas * std::abs(v_meas);
  const double feedback =
      form == GainForm::inertia_normalized ? belief.m_bar * g.kappa() * eps : g.kappa() * eps;
  return belief.k_bar + h_bar + d_hat + belief.m_bar * (xdd_d - lambda * e[1]) - feedback;
}

}  // namespace rovctl
