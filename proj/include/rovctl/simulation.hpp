#pragma once

// Fixed-step closed-loop simulation of the depth (or yaw) DOF: plant,
// per-DOF tracking law, and the online compensator.

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "rovctl/compensator.hpp"
#include "rovctl/control.hpp"
#include "rovctl/vehicle.hpp"

namespace rovctl {

enum class TrajectoryKind { harmonic, constant };

/// harmonic: x_d = A (1 - cos(w t)); constant: x_d = A.
/// Both are smooth, so every derivative the laws need exists.
struct TrajectorySpec {
  TrajectoryKind kind = TrajectoryKind::harmonic;
  double amplitude = 0.5;
  double omega = 0.1 * 3.14159265358979323846;
};

struct DesiredSample {
  double pos = 0.0;
  double vel = 0.0;
  double acc = 0.0;
};

DesiredSample desired_trajectory(double t, const TrajectorySpec& spec);

/// [x_d, x_d', ..., x_d^(order)].
Eigen::VectorXd desired_derivatives(double t, const TrajectorySpec& spec, int order);

enum class Scenario { sim1, sim2, sim3, custom };

/// stage: the law is re-evaluated at every RK4 stage (d_hat and the
///        disturbance are held over the step).
/// zoh:   the force computed at the start of a step is held for the step.
enum class ControlHold { stage, zoh };

enum class UncertaintyMode { fixed, random };

struct UncertaintySpec {
  UncertaintyMode mode = UncertaintyMode::fixed;
  double mass = 0.10;      // relative error on m_bar (fixed mode)
  double damping = -0.10;  // relative error on the damping coefficient (fixed mode)
  double bound = 0.10;     // half-range for random mode
  double limit = 0.5;      // guard rail on |delta|
};

struct SimConfig {
  Scenario scenario = Scenario::sim2;
  double dt = 0.001;
  double duration = 40.0;
  std::uint64_t seed = 1;

  TrajectorySpec trajectory;
  double lambda = 3.5;
  double kappa = 3.5;
  GainForm gain_form = GainForm::as_printed;
  ControlHold hold = ControlHold::stage;
  Axis dof = kHeave;

  PlantParams plant;
  UncertaintySpec uncertainty;

  bool ann_enabled = true;
  NetworkConfig ann;
  Eigen::Vector3d input_scale{1.0, 1.0, 1.0};  // theta = [x~/s0, x~'/s1, eps/s2]
  int snapshot_every = 1000;                    // steps between weight snapshots, 0 = off

  DisturbanceSpec disturbance;  // deterministic tether component
  DisturbanceSpec noise;        // optional filtered-noise component

  Eigen::Vector2d initial_error{0.1, 0.0};
  double tail_window = 20.0;
  double divergence_limit = 1e10;

  /// Throws InvalidParameter naming the offending field.
  void validate() const;
  std::int64_t steps() const;
};

/// Scenario presets; everything not scenario-specific keeps its default.
SimConfig scenario_preset(Scenario s);

/// Controller's belief about `dof`, each parameter scaled by (1 + delta).
DofPlantBelief perturb_beliefs(const PlantParams& truth, Axis dof, const UncertaintySpec& u,
                               std::uint64_t seed);

struct SimRow {
  double t, xd, xd_dot, xd_ddot, x, x_dot, e, e_dot, eps, tau, d_hat, d_true;
};

struct Metrics {
  double rms_error = 0.0;
  double max_abs_error = 0.0;
  double velocity_overshoot = 0.0;
  double limit_cycle_amplitude = 0.0;
};

struct WeightSnapshot {
  double t = 0.0;
  std::vector<double> values;  // NetworkWeights::flatten order
};

struct SimRecord {
  std::vector<SimRow> rows;
  Metrics metrics;
  std::vector<WeightSnapshot> weights;
  int ann_input_dim = 0;
  int ann_hidden_dim = 0;
  std::uint64_t ann_faults = 0;
};

/// Throws InvalidParameter on a bad config, NumericalFault on divergence.
SimRecord run_scenario(const SimConfig& cfg);

/// rms and max of x~ over the run, max |x~'|, peak-to-peak x~ over the last
/// `tail_window` seconds.
Metrics compute_metrics(const SimRecord& rec, double tail_window);

/// Plant x^(n) = f(x) + b(x) u + d(t) driven by the generic law with exact
/// knowledge of f, b and d.
struct GenericPlant {
  std::function<double(const Eigen::VectorXd&)> f;
  std::function<double(const Eigen::VectorXd&)> b;
  std::function<double(double)> d;
};

struct GenericRun {
  std::vector<double> t;
  std::vector<Eigen::VectorXd> error;
  std::vector<double> eps;
};

GenericRun simulate_generic(const GenericPlant& plant, const GainSet& gains,
                            const TrajectorySpec& trajectory, const ErrorVector& initial_error,
                            double dt, double duration);

}  // namespace rovctl
