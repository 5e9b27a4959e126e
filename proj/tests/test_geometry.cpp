#include "bistatic/geometry.hpp"

#include <doctest.h>

#include <cmath>

#include "bistatic/clutter.hpp"
#include "bistatic/errors.hpp"
#include "bistatic/rng.hpp"
#include "support.hpp"

using namespace bistatic;
using geometry::BistaticGeometry;
using geometry::build_geometry;
using geometry::cos_half_bistatic_angle;
using geometry::doppler_shift;
using geometry::dxi_dd;

namespace {
KinematicState at(double x, double y, double vx = 0, double vy = 0) {
  return {{x, y}, {vx, vy}};
}
}  // namespace

TEST_CASE("equilateral-adjacent triangle") {
  const auto g = build_geometry(at(2500.0, 2500.0 * std::sqrt(3.0)), at(0, 0),
                                at(5000, 0));
  CHECK(g.R_T == doctest::Approx(5000.0).epsilon(1e-12));
  CHECK(g.R_R == doctest::Approx(5000.0).epsilon(1e-12));
  // law-of-cosines oracle on the coordinates
  const double beta_oracle = std::acos(
      (g.R_T * g.R_T + g.R_R * g.R_R - g.L * g.L) / (2.0 * g.R_T * g.R_R));
  CHECK(g.beta == doctest::Approx(beta_oracle).epsilon(1e-12));
  CHECK(g.beta == doctest::Approx(kPi / 3.0).epsilon(1e-12));
  CHECK(g.d == doctest::Approx(g.R_T + g.R_R).epsilon(1e-12));
}

TEST_CASE("far target on perpendicular bisector has vanishing bistatic angle") {
  const auto g = build_geometry(at(2500.0, 1e8), at(0, 0), at(5000, 0));
  CHECK(g.beta < 1e-3);
}

TEST_CASE("target on the open baseline segment") {
  const auto g = build_geometry(at(2500.0, 0.0), at(0, 0), at(5000, 0));
  CHECK(g.beta == doctest::Approx(kPi));
  CHECK(g.d == doctest::Approx(g.L).epsilon(1e-12));
  CHECK(g.collinear());
}

TEST_CASE("collocated target is rejected") {
  CHECK_THROWS_AS(build_geometry(at(0, 0), at(0, 0), at(5000, 0)), CollocatedError);
  CHECK_THROWS_AS(build_geometry(at(5000, 0), at(0, 0), at(5000, 0)), CollocatedError);
}

TEST_CASE("triangle invariants over random scenes") {
  RngStream rng(42);
  for (int i = 0; i < 200; ++i) {
    const auto tx = at(rng.uniform(-1e4, 1e4), rng.uniform(-1e4, 1e4));
    const auto rx = at(rng.uniform(-1e4, 1e4), rng.uniform(-1e4, 1e4));
    const auto target = at(rng.uniform(-1e4, 1e4), rng.uniform(-1e4, 1e4),
                           rng.uniform(-100, 100), rng.uniform(-100, 100));
    const auto g = build_geometry(target, tx, rx);
    CHECK(g.d == doctest::Approx(g.R_T + g.R_R).epsilon(1e-9));
    CHECK(std::abs(g.R_T - g.R_R) <= g.L + 1e-6);
    CHECK(g.L <= g.d + 1e-6);
    CHECK(g.beta >= 0.0);
    CHECK(g.beta <= kPi);
    const double chb = cos_half_bistatic_angle(g.d, g.L, g.theta, g.theta_TR);
    CHECK(chb >= 0.0);
    CHECK(chb <= 1.0);
    // formula value consistent with the coordinate-level bistatic angle
    if (!g.collinear()) {
      CHECK(chb == doctest::Approx(std::cos(g.beta / 2.0)).epsilon(1e-6));
    }
  }
}

TEST_CASE("cos_half_bistatic_angle branches") {
  // collinear: d = L with theta along the baseline
  CHECK(cos_half_bistatic_angle(5000.0, 5000.0, kPi, 0.0) == 0.0);
  // monostatic
  CHECK(cos_half_bistatic_angle(8000.0, 0.0, 1.234, 4.321) == 1.0);
  CHECK_THROWS_AS(cos_half_bistatic_angle(4000.0, 5000.0, 0.0, 0.0), DomainError);
}

TEST_CASE("cos_half_bistatic_angle matches coordinate recovery") {
  // d = 10 km, L = 5 km, theta - theta_TR = 60 deg; recover ranges first.
  const double d = 10000.0, L = 5000.0, theta = kPi / 3.0, theta_tr = 0.0;
  const double r_r = (d * d - L * L) / (2.0 * (d + L * std::cos(theta - theta_tr)));
  const auto rx = at(0, 0);
  const auto tx = at(-L, 0);  // tx->rx LOS along +x, so theta_TR = 0
  const auto target = at(r_r * std::cos(theta), r_r * std::sin(theta));
  const auto g = build_geometry(target, tx, rx);
  REQUIRE(g.d == doctest::Approx(d).epsilon(1e-9));
  CHECK(cos_half_bistatic_angle(d, L, theta, theta_tr) ==
        doctest::Approx(std::cos(g.beta / 2.0)).epsilon(1e-9));
}

TEST_CASE("doppler shift basics") {
  SUBCASE("all static") {
    const auto g = build_geometry(at(2500, 4000), at(0, 0), at(5000, 0));
    CHECK(doppler_shift(g, 0, 0, 0, 63.1e6) == 0.0);
  }
  SUBCASE("monostatic two-way doppler") {
    // collocated sites; target moving radially away (delta = 0)
    const auto g = build_geometry(at(3000, 4000, 30, 40), at(0, 0), at(0, 0));
    CHECK(g.delta == doctest::Approx(0.0));
    const double f_c = 63.1e6;
    CHECK(doppler_shift(g, 50, 0, 0, f_c) ==
          doctest::Approx(2.0 * f_c * 50.0 / kSpeedOfLight).epsilon(1e-12));
  }
  SUBCASE("45-degree bistatic angle") {
    // isoceles triangle with beta = 45 deg, target moving along the bisector
    const double L = 5000.0;
    const double h = (L / 2.0) / std::tan(kPi / 8.0);
    const auto g = build_geometry(at(L / 2.0, h, 0, 50), at(0, 0), at(L, 0));
    REQUIRE(g.beta == doctest::Approx(kPi / 4.0).epsilon(1e-12));
    REQUIRE(g.delta == doctest::Approx(0.0));
    // frozen: (2 * 63.1e6 / c) * 50 * cos(22.5 deg)
    CHECK(doppler_shift(g, 50, 0, 0, 63.1e6) ==
          doctest::Approx(19.4457188450892).epsilon(1e-12));
  }
}

TEST_CASE("doppler equals wavelength-normalized bistatic range rate") {
  // Cross-module consistency: xi must equal (f_c / c) * h^v for the same
  // scene, moving sites included.
  RngStream rng(7);
  const double f_c = 63.1e6;
  for (int i = 0; i < 200; ++i) {
    const auto tx = at(rng.uniform(-1e4, 1e4), rng.uniform(-1e4, 1e4),
                       rng.uniform(-50, 50), rng.uniform(-50, 50));
    const auto rx = at(rng.uniform(-1e4, 1e4), rng.uniform(-1e4, 1e4),
                       rng.uniform(-50, 50), rng.uniform(-50, 50));
    const auto target = at(rng.uniform(-1e4, 1e4), rng.uniform(-1e4, 1e4),
                           rng.uniform(-100, 100), rng.uniform(-100, 100));
    const auto g = build_geometry(target, tx, rx);
    if (g.collinear()) continue;
    const double xi = doppler_shift(g, target.speed(), tx.speed(), rx.speed(), f_c);
    const double hv = clutter::measurement_function(target, tx, rx)(1);
    CHECK(xi == doctest::Approx(f_c / kSpeedOfLight * hv).epsilon(1e-9));
  }
}

TEST_CASE("dxi_dd branches") {
  CHECK(dxi_dd(10000.0, 5000.0, 0.5, 0.5, 50.0, 0.0, 63.1e6) == 0.0);  // sin = 0
  CHECK(dxi_dd(5000.0, 5000.0, kPi, 0.0, 50.0, 0.0, 63.1e6) == 0.0);   // beta = pi
  CHECK_THROWS_AS(dxi_dd(4000.0, 5000.0, 0.0, 0.0, 50.0, 0.0, 63.1e6), DomainError);
}

TEST_CASE("dxi_dd agrees with finite differences of the doppler shift") {
  // Fixed L, theta, theta_TR: differentiate the doppler shift in d.
  RngStream rng(11);
  const double f_c = 63.1e6;
  int checked = 0;
  for (int i = 0; i < 300; ++i) {
    const auto tx = at(rng.uniform(-8e3, 8e3), rng.uniform(-8e3, 8e3));
    const auto rx = at(rng.uniform(-8e3, 8e3), rng.uniform(-8e3, 8e3));
    const auto target = at(rng.uniform(-8e3, 8e3), rng.uniform(-8e3, 8e3),
                           rng.uniform(-100, 100), rng.uniform(-100, 100));
    auto g = build_geometry(target, tx, rx);
    if (g.collinear() || g.beta > 0.9 * kPi) continue;  // away from the branch
    const double analytic = dxi_dd(g, target.speed(), g.delta, f_c);
    const double h = 1e-3 * g.d;
    const double fd = oracle::central_diff(
        [&](double d) {
          BistaticGeometry gg = g;
          gg.d = d;
          return doppler_shift(gg, target.speed(), tx.speed(), rx.speed(), f_c);
        },
        g.d, h);
    if (std::abs(fd) < 1e-12) continue;
    CHECK(analytic == doctest::Approx(fd).epsilon(1e-4));
    ++checked;
  }
  CHECK(checked > 100);
}

TEST_CASE("validation-sweep derivative stays small away from 180 degrees") {
  // L = 5 km, receiver-to-transmitter angle pi, |v| = 50 m/s, R_R = 7 km.
  const auto rx = at(0, 0);
  const auto tx = at(-5000, 0);
  for (int deg = 0; deg <= 360; deg += 10) {
    if (deg > 170 && deg < 190) continue;
    const double theta = deg * kPi / 180.0;
    const auto target = at(7000.0 * std::cos(theta), 7000.0 * std::sin(theta));
    const auto g = build_geometry(target, tx, rx);
    CHECK(std::abs(dxi_dd(g, 50.0, 0.0, 63.1e6)) < 1e-3);
  }
}

TEST_CASE("rotation equivariance") {
  RngStream rng(5);
  for (int i = 0; i < 100; ++i) {
    const auto tx = at(rng.uniform(-1e4, 1e4), rng.uniform(-1e4, 1e4),
                       rng.uniform(-50, 50), rng.uniform(-50, 50));
    const auto rx = at(rng.uniform(-1e4, 1e4), rng.uniform(-1e4, 1e4),
                       rng.uniform(-50, 50), rng.uniform(-50, 50));
    const auto target = at(rng.uniform(-1e4, 1e4), rng.uniform(-1e4, 1e4),
                           rng.uniform(-100, 100), rng.uniform(-100, 100));
    const double ang = rng.uniform(0, kTwoPi);
    Eigen::Rotation2D<double> rot(ang);
    auto spin = [&](const KinematicState& s) {
      return KinematicState{rot * s.pos, rot * s.vel};
    };
    const auto g0 = build_geometry(target, tx, rx);
    const auto g1 = build_geometry(spin(target), spin(tx), spin(rx));
    CHECK(g1.d == doctest::Approx(g0.d).epsilon(1e-9));
    CHECK(g1.L == doctest::Approx(g0.L).epsilon(1e-9));
    CHECK(g1.R_T == doctest::Approx(g0.R_T).epsilon(1e-9));
    CHECK(g1.R_R == doctest::Approx(g0.R_R).epsilon(1e-9));
    CHECK(g1.beta == doctest::Approx(g0.beta).epsilon(1e-9));
    if (!g0.collinear()) {
      CHECK(std::cos(g1.delta) == doctest::Approx(std::cos(g0.delta)).epsilon(1e-9));
      const double f_c = 63.1e6;
      CHECK(doppler_shift(g1, target.speed(), tx.speed(), rx.speed(), f_c) ==
            doctest::Approx(
                doppler_shift(g0, target.speed(), tx.speed(), rx.speed(), f_c))
                .epsilon(1e-9));
    }
  }
}
