#include "bistatic/tracker.hpp"

#include <doctest.h>

#include <cmath>

#include "bistatic/errors.hpp"
#include "bistatic/rng.hpp"
#include "support.hpp"

using namespace bistatic;
using namespace bistatic::tracker;

namespace {
KinematicState at(double x, double y, double vx = 0, double vy = 0) {
  return {{x, y}, {vx, vy}};
}
}  // namespace

TEST_CASE("prediction") {
  SUBCASE("identity dynamics leave the track unchanged") {
    TrackEstimate t;
    t.mean = Vec4(1, 2, 3, 4);
    t.cov = Vec4(4, 3, 2, 1).asDiagonal();
    MotionModel m;
    const auto p = predict(t, m);
    CHECK(p.mean == t.mean);
    CHECK((p.cov - t.cov).cwiseAbs().maxCoeff() == 0.0);
  }
  SUBCASE("constant velocity moves the position") {
    TrackEstimate t;
    t.mean = Vec4(0, 0, 1, 2);
    const auto p = predict(t, MotionModel::ncv(1.0, 0.0));
    CHECK(p.mean(0) == doctest::Approx(1.0));
    CHECK(p.mean(1) == doctest::Approx(2.0));
  }
  SUBCASE("covariance trace never decreases under PSD process noise") {
    RngStream rng(9);
    const auto model = MotionModel::ncv(1.0, 0.5);
    for (int i = 0; i < 50; ++i) {
      Mat4 a;
      for (int r = 0; r < 4; ++r)
        for (int c = 0; c < 4; ++c) a(r, c) = rng.normal();
      TrackEstimate t;
      t.cov = a * a.transpose() + 0.01 * Mat4::Identity();
      MotionModel identity_f = model;
      identity_f.F = Mat4::Identity();
      CHECK(predict(t, identity_f).cov.trace() >= t.cov.trace());
    }
  }
}

TEST_CASE("pda update") {
  const auto tx = at(0, 0), rx = at(5000, 0);
  const tmu::SignalModel sig = tmu::SignalModel::atsc();
  const double psi = 5.0;
  const tmu::MeasCov r = tmu::meas_cov_assumption1(sig, psi);
  const clutter::ClutterModel no_clutter{0.0, 4.0};

  TrackEstimate track;
  track.mean = at(2000, 4000, 30, -20).vec();
  track.cov = Vec4(100 * 100, 100 * 100, 10 * 10, 10 * 10).asDiagonal();

  SUBCASE("measurement at the prediction leaves the mean, shrinks covariance") {
    clutter::MeasurementSet z;
    z.points.push_back(clutter::measurement_function(
        KinematicState::from_vec(track.mean), tx, rx));
    const auto up = pda_update(track, z, r, 1.0, no_clutter, tx, rx);
    CHECK((up.mean - track.mean).cwiseAbs().maxCoeff() < 1e-9);
    CHECK(up.cov.trace() < track.cov.trace());
  }
  SUBCASE("empty gate returns the prediction") {
    clutter::MeasurementSet z;  // nothing at all
    const auto up = pda_update(track, z, r, 0.9, no_clutter, tx, rx);
    CHECK(up.mean == track.mean);
    clutter::MeasurementSet far;
    far.points.push_back(clutter::measurement_function(
                             KinematicState::from_vec(track.mean), tx, rx) +
                         Vec3(1e6, 1e4, 3.0));
    const auto up2 = pda_update(track, far, r, 0.9, no_clutter, tx, rx);
    CHECK(up2.mean == track.mean);
  }
  SUBCASE("clutter-free single measurement equals the EKF update") {
    const Vec3 z_hat = clutter::measurement_function(
        KinematicState::from_vec(track.mean), tx, rx);
    clutter::MeasurementSet z;
    z.points.push_back(z_hat + Vec3(40.0, -6.0, 0.02));
    const auto up = pda_update(track, z, r, 1.0, no_clutter, tx, rx);

    // EKF oracle
    const Mat34 h = clutter::measurement_jacobian(
        KinematicState::from_vec(track.mean), tx, rx);
    const Mat3 s = h * track.cov * h.transpose() + r;
    const Eigen::Matrix<double, 4, 3> k = track.cov * h.transpose() * s.inverse();
    const Vec4 mean = track.mean + k * (z.points[0] - z_hat);
    const Mat4 cov = track.cov - k * s * k.transpose();
    CHECK((up.mean - mean).cwiseAbs().maxCoeff() <= 1e-10 * mean.cwiseAbs().maxCoeff());
    CHECK((up.cov - cov).cwiseAbs().maxCoeff() <= 1e-10 * cov.cwiseAbs().maxCoeff());
  }
  SUBCASE("DOA innovation wraps across the branch cut") {
    // prediction just below 2*pi, measurement just above 0
    TrackEstimate t2;
    t2.mean = at(6000, -10, 0, 0).vec();  // DOA slightly under 2*pi from rx
    t2.cov = Vec4(50 * 50, 50 * 50, 5 * 5, 5 * 5).asDiagonal();
    const Vec3 z_hat = clutter::measurement_function(
        KinematicState::from_vec(t2.mean), tx, rx);
    REQUIRE(z_hat(2) > 6.0);
    clutter::MeasurementSet z;
    Vec3 meas = z_hat;
    meas(2) = wrap_two_pi(z_hat(2) + 0.01);  // crosses 0
    REQUIRE(meas(2) < 0.1);
    z.points.push_back(meas);
    const auto up = pda_update(t2, z, r, 1.0, no_clutter, tx, rx);
    CHECK((up.mean - t2.mean).cwiseAbs().maxCoeff() > 0.0);  // gated and used
  }
  SUBCASE("posterior covariance stays symmetric positive definite") {
    RngStream rng(31);
    clutter::ClutterModel clut{1e-4, 4.0};
    const Vec3 z_hat = clutter::measurement_function(
        KinematicState::from_vec(track.mean), tx, rx);
    const Vec3 sigma = r.diagonal().cwiseSqrt();
    for (int i = 0; i < 50; ++i) {
      clutter::MeasurementSet z;
      const int m = 1 + static_cast<int>(rng.below(3));
      for (int j = 0; j < m; ++j) {
        Vec3 p = z_hat;
        for (int axis = 0; axis < 3; ++axis) {
          p(axis) += sigma(axis) * rng.uniform(-3.5, 3.5);
        }
        z.points.push_back(p);
      }
      const auto up = pda_update(track, z, r, 0.8, clut, tx, rx);
      CHECK((up.cov - up.cov.transpose()).cwiseAbs().maxCoeff() == 0.0);
      CHECK(Eigen::LLT<Mat4>(up.cov).info() == Eigen::Success);
    }
  }
}

TEST_CASE("rmse aggregation") {
  SUBCASE("zero errors give zero") {
    RunErrors r;
    r.pos_sq = {0, 0, 0};
    r.vel_sq = {0, 0, 0};
    const auto out = rmse({r, r});
    for (double v : out.pos) CHECK(v == 0.0);
  }
  SUBCASE("single run, single step") {
    RunErrors r;
    r.pos_sq = {25.0};  // error (3, 4)
    r.vel_sq = {0.0};
    const auto out = rmse({r});
    CHECK(out.pos[0] == doctest::Approx(5.0));
  }
  SUBCASE("length mismatch is rejected") {
    RunErrors a, b;
    a.pos_sq = {1, 2};
    a.vel_sq = {1, 2};
    b.pos_sq = {1};
    b.vel_sq = {1};
    CHECK_THROWS_AS(rmse({a, b}), LengthMismatchError);
    CHECK_THROWS_AS(rmse({}), LengthMismatchError);
  }
  SUBCASE("iid Gaussian errors recover sigma * sqrt(2) per block") {
    RngStream rng(71);
    const double sigma = 3.0;
    std::vector<RunErrors> runs(200);
    for (auto& r : runs) {
      for (int k = 0; k < 4; ++k) {
        const double ex = sigma * rng.normal(), ey = sigma * rng.normal();
        const double vx = sigma * rng.normal(), vy = sigma * rng.normal();
        r.pos_sq.push_back(ex * ex + ey * ey);
        r.vel_sq.push_back(vx * vx + vy * vy);
      }
    }
    const auto out = rmse(runs);
    for (size_t k = 0; k < out.pos.size(); ++k) {
      CHECK(out.pos[k] == doctest::Approx(sigma * std::sqrt(2.0)).epsilon(0.10));
      CHECK(out.vel[k] == doctest::Approx(sigma * std::sqrt(2.0)).epsilon(0.10));
    }
  }
  SUBCASE("diverged runs are counted, not dropped") {
    RunErrors ok, bad;
    ok.pos_sq = {1.0};
    ok.vel_sq = {0.0};
    bad.pos_sq = {1e9};
    bad.vel_sq = {0.0};
    bad.diverged = true;
    const auto out = rmse({ok, bad});
    CHECK(out.diverged_runs == 1);
    CHECK(out.pos[0] == doctest::Approx(std::sqrt((1.0 + 1e9) / 2.0)));
  }
}
