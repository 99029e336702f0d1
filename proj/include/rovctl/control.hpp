#pragma once

// Combined tracking-error measure and the Lyapunov-based tracking laws.
//
// For an n-th order system x^(n) = f(x) + b(x) u + d, the error vector is
// xtilde = [x~, x~', ..., x~^(n-1)] and the combined measure is
// eps = c^T xtilde, with c built from binomial coefficients so that the
// associated polynomial is (s + lambda)^(n-1).

#include <Eigen/Dense>

namespace rovctl {

/// Components [x~, x~', ..., x~^(n-1)] of the tracking error.
using ErrorVector = Eigen::VectorXd;

/// Returns [C(n-1,n-1) lambda^(n-1), ..., C(n-1,1) lambda, 1].
/// Entry j multiplies the j-th derivative of the tracking error.
Eigen::VectorXd binomial_coefficients(int n, double lambda);

class GainSet {
 public:
  /// Throws InvalidParameter unless n >= 1, lambda > 0, kappa > 0.
  GainSet(int n, double lambda, double kappa);

  int order() const noexcept { return n_; }
  double lambda() const noexcept { return lambda_; }
  double kappa() const noexcept { return kappa_; }

  /// Weights of eps = c^T xtilde; the last entry is exactly 1.
  const Eigen::VectorXd& c() const noexcept { return c_; }

  /// c^T shifted by one derivative: c_bar^T xtilde = sum_{j>=1} c[j-1] x~^(j),
  /// so that eps' = x~^(n) + c_bar^T xtilde.
  double shifted_dot(const ErrorVector& e) const;

 private:
  int n_;
  double lambda_;
  double kappa_;
  Eigen::VectorXd c_;
};

/// eps = c^T xtilde. Throws InvalidParameter on a length mismatch.
double combined_error(const ErrorVector& e, const GainSet& g);

/// u = (1/b)(-f - d + xd^(n) - c_bar^T xtilde - kappa eps).
/// Throws SingularGain when b == 0.
double generic_control(double f, double b, double d, double xd_n,
                       const ErrorVector& e, const GainSet& g);

/// Controller's per-DOF model of the plant in the inertial frame.
struct DofPlantBelief {
  double m_bar = 1.0;        // inertia incl. added mass
  double k_bar = 0.0;        // Coriolis/centrifugal force
  double h_bar_coeff = 0.0;  // quadratic damping, force = coeff * v|v|

  /// Throws InvalidParameter unless m_bar > 0 and h_bar_coeff >= 0.
  void validate() const;
};

/// How kappa enters the per-DOF law.
///  as_printed:          -kappa eps          (closed loop eps' = -(kappa/m) eps)
///  inertia_normalized:  -m_bar kappa eps    (closed loop eps' = -kappa eps)
enum class GainForm { as_printed, inertia_normalized };

/// tau = k_bar + h_bar(v) + d_hat + m_bar (xdd_d - lambda x~') - kappa eps,
/// with eps = x~' + lambda x~ recomputed from `e` on every call.
/// Requires g.order() == 2 and e.size() == 2.
double dof_control(const DofPlantBelief& belief, double d_hat, double xdd_d,
                   const ErrorVector& e, double v_meas, const GainSet& g,
                   GainForm form = GainForm::as_printed);

}  // namespace rovctl
