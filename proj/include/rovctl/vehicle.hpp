#pragma once

// Reduced 4-DOF ROV model in surge/sway/heave/yaw.
//
// Body frame:  M nu' + k(nu) + h(nu) + d = tau
// Inertial:    M_bar x'' + k_bar + h_bar + d_bar = tau_bar
// with M_bar = J^-T M J^-1, k_bar = J^-T k + J^-T M (J^-1)' x', h_bar = J^-T h,
// d_bar = J^-T d. Roll and pitch are self-stabilizing and are not modeled;
// restoring forces are assumed passively compensated (neutral buoyancy).

#include <cstdint>
#include <random>

#include <Eigen/Dense>

namespace rovctl {

using Vec4 = Eigen::Vector4d;
using Mat4 = Eigen::Matrix4d;

enum Axis : int { kSurge = 0, kSway = 1, kHeave = 2, kYaw = 3 };

struct PlantParams {
  double mass_rb = 40.0;    // kg
  double inertia_z = 2.0;   // kg m^2
  Vec4 cm{0.5, 0.5, 0.25, 0.025};       // added-mass coefficients C_M
  Vec4 cd{150.0, 200.0, 250.0, 20.0};   // lumped drag, force = cd * v|v|
  double rho = 1000.0;      // kg/m^3
  double volume = 0.04;     // m^3, displaced

  /// Throws InvalidParameter on a non-physical parameter set.
  void validate() const;

  Mat4 rigid_body_inertia() const;
  /// Rigid body plus added inertia.
  Mat4 inertia() const;
  double total_inertia(Axis axis) const { return inertia()(axis, axis); }
};

struct BodyState {
  Vec4 nu = Vec4::Zero();  // [u, v, w, r]
};

struct InertialPose {
  Vec4 x = Vec4::Zero();     // [x, y, z, gamma]; gamma kept unwrapped
  Vec4 xdot = Vec4::Zero();
};

/// Wraps an angle to (-pi, pi].
double wrap_angle(double a);

/// h_i = cd_i nu_i |nu_i|.
Vec4 quadratic_damping(const BodyState& body, const PlantParams& p);

/// diag(C_M rho vol) per axis.
Mat4 added_inertia(const PlantParams& p);

/// Yaw rotation for surge/sway, identity for heave and yaw.
Mat4 jacobian(double gamma);
/// d/dt of J^-1(gamma) for yaw rate gamma_dot.
Mat4 jacobian_inverse_rate(double gamma, double gamma_dot);

BodyState body_velocity(const InertialPose& pose);

/// 1/2 nu^T M nu.
double kinetic_energy(const InertialPose& pose, const PlantParams& p);

/// Frame in which the commanded force/moment vector is expressed.
enum class ForceFrame { inertial, body };

/// Inertial-frame accelerations x''. `d` is the body-frame disturbance.
/// Coriolis k(nu) is zero in the reduced model; the convective J^-1' term
/// is kept and vanishes whenever the yaw rate is zero.
Vec4 body_to_inertial_dynamics(const InertialPose& pose, const Vec4& tau, const Vec4& d,
                               const PlantParams& p, ForceFrame frame = ForceFrame::inertial);

/// Scalar single-axis form x'' = (tau - cd v|v| - d) / m for a decoupled axis.
double single_axis_acceleration(Axis axis, double v, double tau, double d, const PlantParams& p);

enum class DisturbanceKind { none, constant, sinusoid, filtered_noise };

struct DisturbanceSpec {
  DisturbanceKind kind = DisturbanceKind::none;
  Vec4 amplitude = Vec4::Zero();  // N or N m; stationary std for filtered noise
  double frequency = 0.0;         // rad/s, sinusoid
  double corner_freq = 1.0;       // rad/s, filtered noise
  std::uint64_t seed = 0;

  void validate() const;
};

/// Tether force generator. Holds the noise filter state for one run.
///
/// Filtered noise is a first-order Gauss-Markov sequence sampled once per
/// step: y_{k+1} = a y_k + amp sqrt(1 - a^2) n_k, a = exp(-corner_freq dt),
/// started from the stationary distribution.
class TetherDisturbance {
 public:
  TetherDisturbance(DisturbanceSpec spec, double dt);

  /// Disturbance at t; advances the noise filter by one step per call.
  Vec4 next(double t);

  const DisturbanceSpec& spec() const noexcept { return spec_; }

 private:
  DisturbanceSpec spec_;
  double decay_ = 0.0;
  std::mt19937_64 rng_;
  std::normal_distribution<double> normal_{0.0, 1.0};
  Vec4 state_ = Vec4::Zero();
  bool started_ = false;
};

}  // namespace rovctl
