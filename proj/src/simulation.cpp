#include "rovctl/simulation.hpp"

#include <algorithm>
#include <cmath>
#include <optional>
#include <random>

#include "rovctl/errors.hpp"
#include "rovctl/integrator.hpp"

namespace rovctl {

namespace {

using PlantState = Eigen::Matrix<double, 8, 1>;  // [x(4); xdot(4)]

InertialPose pose_of(const PlantState& y) { return {y.head<4>(), y.tail<4>()}; }

void require(bool ok, const std::string& what) {
  if (!ok) throw InvalidParameter(what);
}

}  // namespace

DesiredSample desired_trajectory(double t, const TrajectorySpec& spec) {
  const Eigen::VectorXd d = desired_derivatives(t, spec, 2);
  return {d[0], d[1], d[2]};
}

Eigen::VectorXd desired_derivatives(double t, const TrajectorySpec& spec, int order) {
  require(order >= 0, "derivative order must be >= 0");
  Eigen::VectorXd out = Eigen::VectorXd::Zero(order + 1);
  if (spec.kind == TrajectoryKind::constant) {
    out[0] = spec.amplitude;
    return out;
  }
  const double a = spec.amplitude;
  const double w = spec.omega;
  const double c = std::cos(w * t);
  const double s = std::sin(w * t);
  out[0] = a * (1.0 - c);
  double scale = a;
  // d^k/dt^k of -A cos(wt) cycles through sin, cos, -sin, -cos.
  for (int k = 1; k <= order; ++k) {
    scale *= w;
    switch (k % 4) {
      case 1: out[k] = scale * s; break;
      case 2: out[k] = scale * c; break;
      case 3: out[k] = -scale * s; break;
      default: out[k] = -scale * c; break;
    }
  }
  return out;
}

namespace {

DisturbanceSpec default_tether() {
  DisturbanceSpec d;
  d.kind = DisturbanceKind::sinusoid;
  d.amplitude = Vec4(0.0, 0.0, 10.0, 0.0);
  d.frequency = 0.2;
  return d;
}

}  // namespace

SimConfig scenario_preset(Scenario s) {
  SimConfig cfg;
  cfg.scenario = s;
  cfg.disturbance = default_tether();
  cfg.noise.kind = DisturbanceKind::none;
  cfg.noise.corner_freq = 1.0;
  switch (s) {
    case Scenario::sim1:
      cfg.initial_error = {0.0, 0.0};
      cfg.ann.start_time = 0.0;
      break;
    case Scenario::sim2:
    case Scenario::custom:
      cfg.initial_error = {0.1, 0.0};
      cfg.ann.start_time = 0.0;
      break;
    case Scenario::sim3:
      cfg.initial_error = {0.1, 0.0};
      cfg.ann.start_time = 2.0;
      break;
  }
  return cfg;
}

void SimConfig::validate() const {
  require(dt > 0.0 && std::isfinite(dt), "dt must be positive");
  require(duration >= dt && std::isfinite(duration), "duration must be >= dt");
  require(dof == kHeave || dof == kYaw, "control.dof must be a decoupled axis (z or yaw)");
  require(lambda > 0.0, "control.lambda must be positive");
  require(kappa > 0.0, "control.kappa must be positive");
  require(tail_window > 0.0 && tail_window <= duration, "metrics.tail_window must be in (0, duration]");
  require(divergence_limit > 0.0, "divergence limit must be positive");
  require(initial_error.allFinite(), "initial_error must be finite");
  require(uncertainty.limit >= 0.0 && uncertainty.limit <= 1.0, "uncertainty.limit must be in [0, 1]");
  auto within = [&](double v) { return std::abs(v) <= uncertainty.limit; };
  if (uncertainty.mode == UncertaintyMode::fixed) {
    require(within(uncertainty.mass), "uncertainty.mass exceeds uncertainty.limit");
    require(within(uncertainty.damping), "uncertainty.damping exceeds uncertainty.limit");
  } else {
    require(uncertainty.bound >= 0.0 && within(uncertainty.bound),
            "uncertainty.bound exceeds uncertainty.limit");
  }
  require(snapshot_every >= 0, "ann.snapshot_every must be >= 0");
  require((input_scale.array() > 0.0).all(), "ann.input_scale entries must be positive");
  require(ann.input_dim == 3, "ann.input_dim must be 3 (x~, x~', eps)");
  require(plant.mass_rb > 0.0, "plant.mass must be positive");
  require(plant.inertia_z > 0.0, "plant.inertia_z must be positive");
  require(plant.rho > 0.0, "plant.rho must be positive");
  require(plant.volume > 0.0, "plant.volume must be positive");
  require(plant.cd.allFinite() && (plant.cd.array() >= 0.0).all(), "plant.cd entries must be >= 0");
  require(ann.hidden_dim >= 1, "ann.hidden must be >= 1");
  require(ann.learning_rate > 0.0 && std::isfinite(ann.learning_rate),
          "ann.learning_rate must be positive");
  require(ann.start_time >= 0.0, "ann.start_time must be >= 0");
  require(ann.init_scale >= 0.0, "ann.init_scale must be >= 0");
  require(disturbance.kind != DisturbanceKind::filtered_noise || disturbance.corner_freq > 0.0,
          "disturbance.corner_freq must be positive");
  require(noise.kind != DisturbanceKind::filtered_noise || noise.corner_freq > 0.0,
          "noise.corner_freq must be positive");
  require(disturbance.amplitude.allFinite(), "disturbance.amplitude must be finite");
  require(noise.amplitude.allFinite(), "noise.amplitude must be finite");
  plant.validate();
  ann.validate();
  disturbance.validate();
  noise.validate();
}

std::int64_t SimConfig::steps() const { return std::llround(duration / dt); }

DofPlantBelief perturb_beliefs(const PlantParams& truth, Axis dof, const UncertaintySpec& u,
                               std::uint64_t seed) {
  double dm = u.mass;
  double dh = u.damping;
  if (u.mode == UncertaintyMode::random) {
    std::mt19937_64 rng(seed);
    auto draw = [&] {
      const double unit = static_cast<double>(rng() >> 11) * 0x1.0p-53;
      return u.bound * (2.0 * unit - 1.0);
    };
    dm = draw();
    dh = draw();
  }
  DofPlantBelief b;
  b.m_bar = truth.total_inertia(dof) * (1.0 + dm);
  b.h_bar_coeff = truth.cd[dof] * (1.0 + dh);
  b.k_bar = 0.0;
  if (!(b.m_bar > 0.0)) throw InvalidParameter("perturbed belief inertia is not positive");
  b.validate();
  return b;
}

SimRecord run_scenario(const SimConfig& cfg) {
  cfg.validate();
  const GainSet gains(2, cfg.lambda, cfg.kappa);
  const DofPlantBelief belief = perturb_beliefs(cfg.plant, cfg.dof, cfg.uncertainty, cfg.seed);
  const int axis = cfg.dof;
  const std::int64_t n_steps = cfg.steps();
  const double dt = cfg.dt;

  TetherDisturbance tether(cfg.disturbance, dt);
  TetherDisturbance noise(cfg.noise, dt);
  std::optional<Compensator> ann;
  if (cfg.ann_enabled) ann.emplace(cfg.ann);

  SimRecord rec;
  rec.rows.reserve(static_cast<std::size_t>(n_steps + 1));
  if (ann) {
    rec.ann_input_dim = cfg.ann.input_dim;
    rec.ann_hidden_dim = cfg.ann.hidden_dim;
  }

  PlantState y = PlantState::Zero();
  const DesiredSample d0 = desired_trajectory(0.0, cfg.trajectory);
  y[axis] = d0.pos + cfg.initial_error[0];
  y[4 + axis] = d0.vel + cfg.initial_error[1];

  auto law = [&](double t, const PlantState& s, double d_hat) {
    const DesiredSample des = desired_trajectory(t, cfg.trajectory);
    ErrorVector e(2);
    e << s[axis] - des.pos, s[4 + axis] - des.vel;
    return dof_control(belief, d_hat, des.acc, e, s[4 + axis], gains, cfg.gain_form);
  };

  for (std::int64_t k = 0; k <= n_steps; ++k) {
    const double t = static_cast<double>(k) * dt;
    const DesiredSample des = desired_trajectory(t, cfg.trajectory);
    ErrorVector e(2);
    e << y[axis] - des.pos, y[4 + axis] - des.vel;
    if (!e.allFinite() || e.cwiseAbs().maxCoeff() > cfg.divergence_limit)
      throw NumericalFault("tracking error diverged at t=" + std::to_string(t));
    const double eps = combined_error(e, gains);

    Eigen::VectorXd theta(3);
    theta << e[0] / cfg.input_scale[0], e[1] / cfg.input_scale[1], eps / cfg.input_scale[2];
    const double d_hat = ann ? ann->estimate(t, theta) : 0.0;
    const double tau = dof_control(belief, d_hat, des.acc, e, y[4 + axis], gains, cfg.gain_form);
    const Vec4 d_true = tether.next(t) + noise.next(t);

    const double x_report = axis == kYaw ? wrap_angle(y[axis]) : y[axis];
    rec.rows.push_back({t, des.pos, des.vel, des.acc, x_report, y[4 + axis], e[0], e[1], eps, tau,
                        d_hat, d_true[axis]});
    if (ann && cfg.snapshot_every > 0 && k % cfg.snapshot_every == 0)
      rec.weights.push_back({t, ann->weights().flatten()});

    if (k == n_steps) break;

    auto deriv = [&](double s, const PlantState& state) {
      Vec4 tau_vec = Vec4::Zero();
      tau_vec[axis] = cfg.hold == ControlHold::stage ? law(s, state, d_hat) : tau;
      PlantState out;
      out.head<4>() = state.tail<4>();
      out.tail<4>() = body_to_inertial_dynamics(pose_of(state), tau_vec, d_true, cfg.plant);
      return out;
    };
    y = rk4_step(y, t, dt, deriv);

    // Output error for the network: the closed loop obeys
    // m eps' = -kappa eps + (d_hat - d), so -eps tracks the sign of d - d_hat.
    if (ann) ann->train(t, theta, -eps);
  }

  if (ann) rec.ann_faults = ann->fault_count();
  rec.metrics = compute_metrics(rec, cfg.tail_window);
  return rec;
}

Metrics compute_metrics(const SimRecord& rec, double tail_window) {
  if (rec.rows.empty()) throw InvalidParameter("cannot compute metrics of an empty record");
  const double t0 = rec.rows.front().t;
  const double t_end = rec.rows.back().t;
  if (!(tail_window >= 0.0) || tail_window > t_end - t0 + 1e-12)
    throw InvalidParameter("tail_window must lie within the record duration");

  Metrics m;
  double sum_sq = 0.0;
  for (const SimRow& r : rec.rows) {
    sum_sq += r.e * r.e;
    m.max_abs_error = std::max(m.max_abs_error, std::abs(r.e));
    m.velocity_overshoot = std::max(m.velocity_overshoot, std::abs(r.e_dot));
  }
  m.rms_error = std::sqrt(sum_sq / static_cast<double>(rec.rows.size()));

  const double tail_start = t_end - tail_window - 1e-9;
  double lo = 0.0, hi = 0.0;
  bool first = true;
  for (const SimRow& r : rec.rows) {
    if (r.t < tail_start) continue;
    if (first) {
      lo = hi = r.e;
      first = false;
    }
    lo = std::min(lo, r.e);
    hi = std::max(hi, r.e);
  }
  m.limit_cycle_amplitude = hi - lo;
  return m;
}

GenericRun simulate_generic(const GenericPlant& plant, const GainSet& gains,
                            const TrajectorySpec& trajectory, const ErrorVector& initial_error,
                            double dt, double duration) {
  const int n = gains.order();
  require(initial_error.size() == n, "initial error length must equal controller order");
  require(dt > 0.0 && duration >= dt, "dt must be positive and duration >= dt");
  require(static_cast<bool>(plant.f) && static_cast<bool>(plant.b) && static_cast<bool>(plant.d),
          "generic plant needs f, b and d");

  auto error_at = [&](double t, const Eigen::VectorXd& x) -> ErrorVector {
    return x - desired_derivatives(t, trajectory, n - 1);
  };

  Eigen::VectorXd x = desired_derivatives(0.0, trajectory, n - 1) + initial_error;
  const std::int64_t n_steps = std::llround(duration / dt);

  GenericRun run;
  run.t.reserve(static_cast<std::size_t>(n_steps + 1));
  auto deriv = [&](double s, const Eigen::VectorXd& state) {
    const Eigen::VectorXd xd = desired_derivatives(s, trajectory, n);
    const ErrorVector e = state - xd.head(n);
    const double f = plant.f(state);
    const double b = plant.b(state);
    const double d = plant.d(s);
    const double u = generic_control(f, b, d, xd[n], e, gains);
    Eigen::VectorXd out(n);
    out.head(n - 1) = state.tail(n - 1);
    out[n - 1] = f + b * u + d;
    return out;
  };

  for (std::int64_t k = 0; k <= n_steps; ++k) {
    const double t = static_cast<double>(k) * dt;
    const ErrorVector e = error_at(t, x);
    run.t.push_back(t);
    run.error.push_back(e);
    run.eps.push_back(combined_error(e, gains));
    if (k == n_steps) break;
    x = rk4_step(x, t, dt, deriv);
  }
  return run;
}

}  // namespace rovctl
