#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>
#include <vector>

#include "rovctl/control.hpp"
#include "rovctl/errors.hpp"

using namespace rovctl;
using doctest::Approx;

namespace {

ErrorVector vec(std::initializer_list<double> v) {
  ErrorVector e(static_cast<Eigen::Index>(v.size()));
  Eigen::Index i = 0;
  for (double x : v) e[i++] = x;
  return e;
}

// Coefficients of (s + lambda)^m by repeated polynomial multiplication,
// ordered from s^0 upward.
std::vector<double> expand_power(double lambda, int m) {
  std::vector<double> p{1.0};
  for (int k = 0; k < m; ++k) {
    std::vector<double> q(p.size() + 1, 0.0);
    for (std::size_t i = 0; i < p.size(); ++i) {
      q[i] += lambda * p[i];
      q[i + 1] += p[i];
    }
    p = q;
  }
  return p;
}

// Divides an ascending-power polynomial by (s - root); returns the
// quotient and stores the remainder.
std::vector<double> deflate(const std::vector<double>& asc, double root, double& remainder) {
  const int deg = static_cast<int>(asc.size()) - 1;
  std::vector<double> q(deg, 0.0);
  double carry = asc[deg];
  for (int i = deg - 1; i >= 0; --i) {
    q[i] = carry;
    carry = asc[i] + root * carry;
  }
  remainder = carry;
  return q;
}

}  // namespace

TEST_CASE("binomial coefficients") {
  SUBCASE("order one is the single unit weight") {
    const auto c = binomial_coefficients(1, 3.5);
    REQUIRE(c.size() == 1);
    CHECK(c[0] == 1.0);
  }
  SUBCASE("order two") {
    const auto c = binomial_coefficients(2, 3.5);
    REQUIRE(c.size() == 2);
    CHECK(c[0] == 3.5);
    CHECK(c[1] == 1.0);
  }
  SUBCASE("order three, lambda 2") {
    const auto c = binomial_coefficients(3, 2.0);
    REQUIRE(c.size() == 3);
    CHECK(c[0] == 4.0);
    CHECK(c[1] == 4.0);
    CHECK(c[2] == 1.0);
  }
  SUBCASE("matches the expansion of (s + lambda)^(n-1)") {
    for (int n = 1; n <= 7; ++n) {
      const double lambda = 1.7;
      const auto c = binomial_coefficients(n, lambda);
      const auto p = expand_power(lambda, n - 1);
      for (int j = 0; j < n; ++j) CHECK(c[j] == Approx(p[j]).epsilon(1e-14));
    }
  }
  SUBCASE("invalid parameters") {
    CHECK_THROWS_AS(binomial_coefficients(0, 1.0), InvalidParameter);
    CHECK_THROWS_AS(binomial_coefficients(2, 0.0), InvalidParameter);
    CHECK_THROWS_AS(binomial_coefficients(2, -1.0), InvalidParameter);
    CHECK_THROWS_AS(GainSet(2, 1.0, 0.0), InvalidParameter);
  }
}

TEST_CASE("Hurwitz property: all roots at -lambda") {
  for (int n = 2; n <= 4; ++n) {
    const double lambda = 3.5;
    const auto c = binomial_coefficients(n, lambda);
    std::vector<double> asc(c.data(), c.data() + c.size());
    // -lambda must be a root of multiplicity n-1
    std::vector<double> p = asc;
    for (int k = 0; k < n - 1; ++k) {
      double rem = 0.0;
      p = deflate(p, -lambda, rem);
      CHECK(std::abs(rem) < 1e-9);
    }
    REQUIRE(p.size() == 1);
    CHECK(p[0] == Approx(1.0).epsilon(1e-12));
    // the polynomial is exactly (s + lambda)^(n-1): evaluate at a few points
    for (double s : {-5.0, -1.0, 0.0, 0.5, 2.0}) {
      double poly = 0.0;
      for (int j = n - 1; j >= 0; --j) poly = poly * s + c[j];
      CHECK(poly == Approx(std::pow(s + lambda, n - 1)).epsilon(1e-12));
    }
  }
}

TEST_CASE("combined error") {
  const GainSet g(2, 3.5, 3.5);
  CHECK(combined_error(vec({0.0, 0.0}), g) == 0.0);
  CHECK(combined_error(vec({0.1, 0.0}), g) == Approx(0.35).epsilon(1e-15));
  CHECK(combined_error(vec({0.1, -0.35}), g) == Approx(0.0).epsilon(1e-15));
  CHECK_THROWS_AS(combined_error(vec({0.1}), g), InvalidParameter);
}

TEST_CASE("combined error is linear") {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(-2.0, 2.0);
  for (int trial = 0; trial < 200; ++trial) {
    const int n = 1 + trial % 5;
    const GainSet g(n, 0.5 + std::abs(u(rng)), 1.0);
    ErrorVector a(n), b(n);
    for (int i = 0; i < n; ++i) {
      a[i] = u(rng);
      b[i] = u(rng);
    }
    const double k = u(rng);
    CHECK(combined_error(a + b, g) ==
          Approx(combined_error(a, g) + combined_error(b, g)).epsilon(1e-12));
    CHECK(combined_error(k * a, g) == Approx(k * combined_error(a, g)).epsilon(1e-12));
  }
}

TEST_CASE("generic control law") {
  const GainSet g(2, 3.5, 3.5);
  CHECK(generic_control(0, 1, 0, 0, vec({0, 0}), g) == 0.0);
  CHECK(generic_control(0, 1, 0, 0, vec({0.1, 0.0}), g) == Approx(-1.225).epsilon(1e-14));
  CHECK(generic_control(2, 2, 1, 0, vec({0, 0}), g) == Approx(-1.5).epsilon(1e-15));
  CHECK_THROWS_AS(generic_control(0, 0, 0, 0, vec({0, 0}), g), SingularGain);
}

TEST_CASE("generic law cancels the plant: eps' = -kappa eps") {
  // x^(n) = f + b u + d under the law; eps' = x~^(n) + c_bar^T x~.
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int n = 1; n <= 4; ++n) {
    const GainSet g(n, 2.0, 1.3);
    for (int trial = 0; trial < 50; ++trial) {
      ErrorVector e(n);
      for (int i = 0; i < n; ++i) e[i] = u(rng);
      const double f = u(rng), b = 0.5 + std::abs(u(rng)), d = u(rng), xd_n = u(rng);
      const double x_n = f + b * generic_control(f, b, d, xd_n, e, g) + d;
      const double eps_dot = (x_n - xd_n) + g.shifted_dot(e);
      CHECK(eps_dot == Approx(-g.kappa() * combined_error(e, g)).epsilon(1e-12));
    }
  }
}

TEST_CASE("per-DOF control law") {
  const GainSet g(2, 3.5, 3.5);
  SUBCASE("all-zero inputs") {
    DofPlantBelief b{1.0, 0.0, 0.0};
    CHECK(dof_control(b, 0, 0, vec({0, 0}), 0, g) == 0.0);
  }
  SUBCASE("inertia times desired acceleration") {
    DofPlantBelief b{50.0, 0.0, 0.0};
    const double xdd = 0.5 * std::pow(0.1 * std::numbers::pi, 2);
    CHECK(dof_control(b, 0, xdd, vec({0, 0}), 0, g) == Approx(2.4674011).epsilon(1e-7));
  }
  SUBCASE("damping evaluated at the measured velocity") {
    DofPlantBelief b{50.0, 0.0, 250.0};
    CHECK(dof_control(b, 0, 0, vec({0, 0}), 1.0, g) == 250.0);
    CHECK(dof_control(b, 0, 0, vec({0, 0}), -1.0, g) == -250.0);
  }
  SUBCASE("eps is recomputed from the error vector") {
    DofPlantBelief b{50.0, 0.0, 0.0};
    // x~ = [0.1, 0]: eps = 0.35, tau = -kappa eps
    CHECK(dof_control(b, 0, 0, vec({0.1, 0.0}), 0, g) == Approx(-1.225).epsilon(1e-14));
    // x~ = [0, 0.2]: tau = -m lambda 0.2 - kappa 0.2
    CHECK(dof_control(b, 0, 0, vec({0.0, 0.2}), 0, g) == Approx(-35.0 - 0.7).epsilon(1e-14));
  }
  SUBCASE("normalized gain multiplies kappa by the inertia") {
    DofPlantBelief b{50.0, 0.0, 0.0};
    CHECK(dof_control(b, 0, 0, vec({0.1, 0.0}), 0, g, GainForm::inertia_normalized) ==
          Approx(-50.0 * 1.225).epsilon(1e-14));
  }
  SUBCASE("exact belief gives m eps' = -kappa eps") {
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    const double m = 50.0, c = 250.0;
    for (int trial = 0; trial < 100; ++trial) {
      const ErrorVector e = vec({u(rng), u(rng)});
      const double v = u(rng), xdd = u(rng), d = 10.0 * u(rng);
      const double tau = dof_control({m, 0.0, c}, d, xdd, e, v, g);
      const double acc = (tau - c * v * std::abs(v) - d) / m;
      const double eps_dot = (acc - xdd) + g.lambda() * e[1];
      const double eps = e[1] + g.lambda() * e[0];
      CHECK(m * eps_dot == Approx(-g.kappa() * eps).epsilon(1e-10));
    }
  }
  SUBCASE("wrong order is rejected") {
    const GainSet g3(3, 1.0, 1.0);
    CHECK_THROWS_AS(dof_control({1, 0, 0}, 0, 0, vec({0, 0, 0}), 0, g3), InvalidParameter);
  }
  SUBCASE("belief invariants") {
    CHECK_THROWS_AS((DofPlantBelief{0.0, 0.0, 1.0}.validate()), InvalidParameter);
    CHECK_THROWS_AS((DofPlantBelief{1.0, 0.0, -1.0}.validate()), InvalidParameter);
  }
}
