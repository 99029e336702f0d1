#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "rovctl/errors.hpp"
#include "rovctl/integrator.hpp"
#include "rovctl/vehicle.hpp"

using namespace rovctl;
using doctest::Approx;

TEST_CASE("quadratic damping") {
  PlantParams p;
  CHECK(quadratic_damping({Vec4::Zero()}, p) == Vec4::Zero());
  p.cd[kHeave] = 250.0;
  CHECK(quadratic_damping({Vec4(0, 0, 1, 0)}, p)[kHeave] == 250.0);
  CHECK(quadratic_damping({Vec4(0, 0, -1, 0)}, p)[kHeave] == -250.0);
}

TEST_CASE("dissipativity nu^T h(nu) >= 0") {
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> u(-3.0, 3.0);
  std::uniform_real_distribution<double> c(0.0, 500.0);
  for (int i = 0; i < 10000; ++i) {
    PlantParams p;
    p.cd = Vec4(c(rng), c(rng), c(rng), c(rng));
    const Vec4 nu(u(rng), u(rng), u(rng), u(rng));
    CHECK(nu.dot(quadratic_damping({nu}, p)) >= 0.0);
  }
}

TEST_CASE("added inertia") {
  PlantParams p;
  p.cm = Vec4::Zero();
  CHECK(added_inertia(p) == Mat4::Zero());
  p.cm = Vec4::Ones();
  p.rho = 1000.0;
  p.volume = 0.05;
  CHECK(added_inertia(p) == Mat4(Vec4::Constant(50.0).asDiagonal()));
  SUBCASE("default depth inertia is 50 kg") {
    const PlantParams d;
    CHECK(d.total_inertia(kHeave) == Approx(50.0).epsilon(1e-15));
  }
}

TEST_CASE("jacobian") {
  CHECK(jacobian(0.0) == Mat4::Identity());
  const Mat4 j = jacobian(std::numbers::pi / 2);
  Mat4 expected;
  expected << 0, -1, 0, 0, 1, 0, 0, 0, 0, 0, 1, 0, 0, 0, 0, 1;
  CHECK((j - expected).cwiseAbs().maxCoeff() < 1e-15);

  std::mt19937_64 rng(2);
  std::uniform_real_distribution<double> u(-10.0, 10.0);
  for (int i = 0; i < 1000; ++i) {
    const double g = u(rng);
    const Mat4 jj = jacobian(g);
    CHECK((jj * jj.transpose() - Mat4::Identity()).cwiseAbs().maxCoeff() < 1e-12);
    CHECK((jj.inverse() * jj - Mat4::Identity()).cwiseAbs().maxCoeff() < 1e-12);
  }
}

TEST_CASE("jacobian inverse rate matches a finite difference") {
  const double g = 0.7, rate = 1.3, h = 1e-6;
  const Mat4 fd = (jacobian(g + rate * h).transpose() - jacobian(g - rate * h).transpose()) / (2 * h);
  CHECK((jacobian_inverse_rate(g, rate) - fd).cwiseAbs().maxCoeff() < 1e-8);
}

TEST_CASE("angle wrapping") {
  CHECK(wrap_angle(0.0) == 0.0);
  CHECK(wrap_angle(std::numbers::pi) == Approx(std::numbers::pi));
  CHECK(wrap_angle(-std::numbers::pi) == Approx(std::numbers::pi));
  CHECK(wrap_angle(3 * std::numbers::pi / 2) == Approx(-std::numbers::pi / 2));
}

TEST_CASE("inertial dynamics") {
  PlantParams p;
  SUBCASE("all zero") {
    CHECK(body_to_inertial_dynamics({}, Vec4::Zero(), Vec4::Zero(), p) == Vec4::Zero());
  }
  SUBCASE("heave terminal velocity") {
    InertialPose pose;
    pose.xdot[kHeave] = 1.0;
    Vec4 tau = Vec4::Zero();
    tau[kHeave] = 250.0;
    const Vec4 acc = body_to_inertial_dynamics(pose, tau, Vec4::Zero(), p);
    CHECK(acc[kHeave] == Approx(0.0).scale(1.0));
    CHECK(std::abs(acc[kHeave]) < 1e-12);
  }
  SUBCASE("gamma = 0 reduces to the scalar per-axis model") {
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> u(-2.0, 2.0);
    for (int i = 0; i < 500; ++i) {
      for (Axis axis : {kSurge, kSway, kHeave, kYaw}) {
        InertialPose pose;
        pose.x = Vec4(u(rng), u(rng), u(rng), 0.0);
        pose.xdot[axis] = u(rng);
        Vec4 tau = Vec4::Zero(), d = Vec4::Zero();
        tau[axis] = 100 * u(rng);
        d[axis] = 10 * u(rng);
        const Vec4 acc = body_to_inertial_dynamics(pose, tau, d, p);
        const double scalar = single_axis_acceleration(axis, pose.xdot[axis], tau[axis], d[axis], p);
        CHECK(std::abs(acc[axis] - scalar) < 1e-12);
      }
    }
  }
  SUBCASE("body and inertial force frames agree after rotation") {
    InertialPose pose;
    pose.x[kYaw] = 0.8;
    pose.xdot = Vec4(0.3, -0.2, 0.1, 0.05);
    const Vec4 tau_body(10, -5, 3, 1);
    const Vec4 a = body_to_inertial_dynamics(pose, tau_body, Vec4::Zero(), p, ForceFrame::body);
    const Vec4 b = body_to_inertial_dynamics(pose, jacobian(0.8) * tau_body, Vec4::Zero(), p);
    CHECK((a - b).cwiseAbs().maxCoeff() < 1e-12);
  }
  SUBCASE("matches x'' = J nu' + J' nu computed in the body frame") {
    InertialPose pose;
    pose.x[kYaw] = -1.1;
    pose.xdot = Vec4(0.4, 0.1, -0.3, 0.6);
    const Vec4 tau(20, 15, -4, 2), d(1, -2, 3, 0.5);
    const Mat4 j = jacobian(pose.x[kYaw]);
    const Vec4 nu = j.transpose() * pose.xdot;
    const Vec4 nu_dot = p.inertia().inverse() * (j.transpose() * tau - quadratic_damping({nu}, p) - d);
    Mat4 j_dot = Mat4::Zero();
    const double c = std::cos(pose.x[kYaw]), s = std::sin(pose.x[kYaw]), r = pose.xdot[kYaw];
    j_dot(0, 0) = -s * r;
    j_dot(0, 1) = -c * r;
    j_dot(1, 0) = c * r;
    j_dot(1, 1) = -s * r;
    const Vec4 expected = j * nu_dot + j_dot * nu;
    const Vec4 acc = body_to_inertial_dynamics(pose, tau, d, p);
    CHECK((acc - expected).cwiseAbs().maxCoeff() < 1e-12);
  }
}

TEST_CASE("unforced kinetic energy never increases") {
  PlantParams p;
  using S = Eigen::Matrix<double, 8, 1>;
  S y;
  y << 0, 0, 0, 0.3, 0.8, -0.5, 0.4, 0.9;
  auto deriv = [&](double, const S& s) {
    S out;
    out.head<4>() = s.tail<4>();
    out.tail<4>() = body_to_inertial_dynamics({s.head<4>(), s.tail<4>()}, Vec4::Zero(),
                                              Vec4::Zero(), p);
    return out;
  };
  double prev = kinetic_energy({y.head<4>(), y.tail<4>()}, p);
  for (int k = 0; k < 10000; ++k) {
    y = rk4_step(y, k * 0.001, 0.001, deriv);
    const double e = kinetic_energy({y.head<4>(), y.tail<4>()}, p);
    CHECK(e <= prev);
    prev = e;
  }
}

TEST_CASE("tether disturbance") {
  DisturbanceSpec s;
  SUBCASE("none") {
    TetherDisturbance d(s, 0.001);
    CHECK(d.next(3.0) == Vec4::Zero());
  }
  SUBCASE("constant") {
    s.kind = DisturbanceKind::constant;
    s.amplitude = Vec4(0, 0, 10, 0);
    TetherDisturbance d(s, 0.001);
    CHECK(d.next(0.0) == Vec4(0, 0, 10, 0));
    CHECK(d.next(17.0) == Vec4(0, 0, 10, 0));
  }
  SUBCASE("sinusoid") {
    s.kind = DisturbanceKind::sinusoid;
    s.amplitude = Vec4(0, 0, 10, 0);
    s.frequency = 0.2;
    TetherDisturbance d(s, 0.001);
    CHECK(d.next(0.0)[kHeave] == 0.0);
    CHECK(d.next(2.5 * std::numbers::pi)[kHeave] == Approx(10.0));
  }
  SUBCASE("filtered noise is reproducible and has the requested spread") {
    s.kind = DisturbanceKind::filtered_noise;
    s.amplitude = Vec4(0, 0, 4, 1);
    s.corner_freq = 5.0;
    s.seed = 17;
    TetherDisturbance a(s, 0.01), b(s, 0.01);
    double sum = 0, sum_sq = 0;
    const int n = 200000;
    for (int k = 0; k < n; ++k) {
      const Vec4 va = a.next(k * 0.01);
      CHECK_EQ(va, b.next(k * 0.01));
      CHECK(va[kSurge] == 0.0);
      sum += va[kHeave];
      sum_sq += va[kHeave] * va[kHeave];
    }
    const double mean = sum / n;
    const double sd = std::sqrt(sum_sq / n - mean * mean);
    // correlation time 0.2 s over 2000 s: ~10^4 effective samples
    CHECK(sd == Approx(4.0).epsilon(0.05));
    CHECK(std::abs(mean) < 0.2);

    s.seed = 18;
    TetherDisturbance c(s, 0.01);
    TetherDisturbance a2(DisturbanceSpec{s.kind, s.amplitude, 0.0, 5.0, 17}, 0.01);
    CHECK(c.next(0.0) != a2.next(0.0));
  }
  SUBCASE("invalid corner frequency") {
    s.kind = DisturbanceKind::filtered_noise;
    s.corner_freq = 0.0;
    CHECK_THROWS_AS(TetherDisturbance(s, 0.001), InvalidParameter);
  }
}

TEST_CASE("plant invariants") {
  PlantParams p;
  CHECK_NOTHROW(p.validate());
  p.mass_rb = 0.0;
  CHECK_THROWS_AS(p.validate(), InvalidParameter);
  p = PlantParams{};
  p.cd[1] = -1.0;
  CHECK_THROWS_AS(p.validate(), InvalidParameter);
  p = PlantParams{};
  p.cm[kHeave] = -2.0;  // added mass would cancel the rigid body
  CHECK_THROWS_AS(p.validate(), InvalidParameter);
}
