#include "rovctl/vehicle.hpp"

#include <cmath>
#include <numbers>

#include "rovctl/errors.hpp"

namespace rovctl {

void PlantParams::validate() const {
  if (!(mass_rb > 0.0)) throw InvalidParameter("plant mass must be positive");
  if (!(inertia_z > 0.0)) throw InvalidParameter("plant yaw inertia must be positive");
  if (!(rho > 0.0)) throw InvalidParameter("fluid density must be positive");
  if (!(volume > 0.0)) throw InvalidParameter("displaced volume must be positive");
  if (!cd.allFinite() || (cd.array() < 0.0).any())
    throw InvalidParameter("drag coefficients must be finite and >= 0");
  if (!cm.allFinite()) throw InvalidParameter("added-mass coefficients must be finite");
  const Vec4 total = inertia().diagonal();
  if ((total.array() <= 0.0).any())
    throw InvalidParameter("total per-axis inertia must be positive");
}

Mat4 PlantParams::rigid_body_inertia() const {
  return Vec4(mass_rb, mass_rb, mass_rb, inertia_z).asDiagonal();
}

Mat4 PlantParams::inertia() const { return rigid_body_inertia() + added_inertia(*this); }

double wrap_angle(double a) {
  double r = std::remainder(a, 2.0 * std::numbers::pi);
  if (r <= -std::numbers::pi) r += 2.0 * std::numbers::pi;
  return r;
}

Vec4 quadratic_damping(const BodyState& body, const PlantParams& p) {
  return p.cd.cwiseProduct(body.nu.cwiseProduct(body.nu.cwiseAbs()));
}

Mat4 added_inertia(const PlantParams& p) { return (p.cm * (p.rho * p.volume)).asDiagonal(); }

Mat4 jacobian(double gamma) {
  const double c = std::cos(gamma);
  const double s = std::sin(gamma);
  Mat4 j = Mat4::Identity();
  j(0, 0) = c;
  j(0, 1) = -s;
  j(1, 0) = s;
  j(1, 1) = c;
  return j;
}

Mat4 jacobian_inverse_rate(double gamma, double gamma_dot) {
  // J^-1 = J^T; d/dt [[c, s], [-s, c]] = gamma_dot [[-s, c], [-c, -s]]
  const double c = std::cos(gamma);
  const double s = std::sin(gamma);
  Mat4 r = Mat4::Zero();
  r(0, 0) = -s * gamma_dot;
  r(0, 1) = c * gamma_dot;
  r(1, 0) = -c * gamma_dot;
  r(1, 1) = -s * gamma_dot;
  return r;
}

BodyState body_velocity(const InertialPose& pose) {
  return {jacobian(pose.x[kYaw]).transpose() * pose.xdot};
}

double kinetic_energy(const InertialPose& pose, const PlantParams& p) {
  const Vec4 nu = body_velocity(pose).nu;
  return 0.5 * nu.dot(p.inertia() * nu);
}

Vec4 body_to_inertial_dynamics(const InertialPose& pose, const Vec4& tau, const Vec4& d,
                               const PlantParams& p, ForceFrame frame) {
  const double gamma = pose.x[kYaw];
  const Mat4 j = jacobian(gamma);
  const Mat4 j_inv_t = j;  // J orthogonal: J^-T = J
  const Mat4 m = p.inertia();
  const BodyState body{j.transpose() * pose.xdot};

  const Mat4 m_bar = j_inv_t * m * j.transpose();
  const Vec4 k_bar = j_inv_t * m * jacobian_inverse_rate(gamma, pose.xdot[kYaw]) * pose.xdot;
  const Vec4 h_bar = j_inv_t * quadratic_damping(body, p);
  const Vec4 d_bar = j_inv_t * d;
  const Vec4 tau_bar = frame == ForceFrame::inertial ? tau : Vec4(j_inv_t * tau);

  const Vec4 acc = m_bar.ldlt().solve(tau_bar - k_bar - h_bar - d_bar);
  if (!acc.allFinite()) throw NumericalFault("inertial dynamics produced a non-finite acceleration");
  return acc;
}

double single_axis_acceleration(Axis axis, double v, double tau, double d, const PlantParams& p) {
  return (tau - p.cd[axis] * v * std::abs(v) - d) / p.total_inertia(axis);
}

void DisturbanceSpec::validate() const {
  if (!amplitude.allFinite()) throw InvalidParameter("disturbance amplitude must be finite");
  if (kind == DisturbanceKind::sinusoid && !std::isfinite(frequency))
    throw InvalidParameter("disturbance frequency must be finite");
  if (kind == DisturbanceKind::filtered_noise && !(corner_freq > 0.0))
    throw InvalidParameter("filtered-noise corner frequency must be positive");
}

TetherDisturbance::TetherDisturbance(DisturbanceSpec spec, double dt)
    : spec_(spec), rng_(spec.seed) {
  spec_.validate();
  if (!(dt > 0.0)) throw InvalidParameter("disturbance step must be positive");
  if (spec_.kind == DisturbanceKind::filtered_noise) decay_ = std::exp(-spec_.corner_freq * dt);
}

Vec4 TetherDisturbance::next(double t) {
  switch (spec_.kind) {
    case DisturbanceKind::none:
      return Vec4::Zero();
    case DisturbanceKind::constant:
      return spec_.amplitude;
    case DisturbanceKind::sinusoid:
      return spec_.amplitude * std::sin(spec_.frequency * t);
    case DisturbanceKind::filtered_noise: {
      Vec4 n;
      for (int i = 0; i < 4; ++i) n[i] = normal_(rng_);
      if (!started_) {
        state_ = spec_.amplitude.cwiseProduct(n);
        started_ = true;
      } else {
        const double gain = std::sqrt(1.0 - decay_ * decay_);
        state_ = decay_ * state_ + gain * spec_.amplitude.cwiseProduct(n);
      }
      return state_;
    }
  }
  return Vec4::Zero();
}

}  // namespace rovctl
