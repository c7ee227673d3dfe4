#include <cmath>
#include <sstream>

#include <doctest.h>

#include "heatstab/legendre.hpp"
#include "heatstab/simulator.hpp"
#include "heatstab/system.hpp"

using namespace heatstab;

namespace {

Witness identity_witness(int n, int N) {
  Witness w;
  w.P = Eigen::MatrixXd::Identity(n, n);
  w.Q = Eigen::MatrixXd::Zero(n, N + 1);
  w.T = Eigen::MatrixXd::Identity(N + 1, N + 1);
  w.alpha = 1.0;
  w.beta = 1.0;
  return w;
}

}  // namespace

TEST_CASE("zero initial data stays at the equilibrium") {
  const SystemData sys = paper_example(100.0, 1.0);
  SimConfig cfg;
  cfg.t_final = 0.5;
  cfg.sample_stride = 50;
  const auto traj = simulate(sys, Eigen::VectorXd::Zero(4),
                             [](double) { return 0.0; }, cfg);
  CHECK_FALSE(traj.diverged);
  CHECK(traj.energy.cwiseAbs().maxCoeff() == 0.0);
  const auto rep = decay_check(traj, identity_witness(4, 0), 0);
  CHECK(rep.monotone_fraction == 1.0);
}

TEST_CASE("time step respects the stability bound by construction") {
  const SystemData sys = paper_example(100.0, 0.05);
  SimConfig cfg;
  cfg.safety = 0.9;
  cfg.t_final = 0.1;
  const auto traj =
      simulate(sys, Eigen::VectorXd::Zero(4), [](double) { return 0.0; }, cfg);
  const double dx = 1.0 / cfg.intervals;
  CHECK(traj.dt <= dx * dx / (2.0 * sys.gamma) * (1.0 + 1e-14));
  CHECK(traj.dx == dx);
}

TEST_CASE("incompatible initial data is rejected") {
  const SystemData sys = paper_example(100.0, 1.0);
  Eigen::VectorXd X0(4);
  X0 << 1.0, 0.0, 0.0, 0.0;  // C X0 = 100
  SimConfig cfg;
  // trace mismatch at x = 0
  CHECK_THROWS_AS(simulate(sys, X0, [](double) { return 0.0; }, cfg),
                  std::invalid_argument);
  // slope violation at x = 1
  Eigen::VectorXd X0z = Eigen::VectorXd::Zero(4);
  CHECK_THROWS_AS(simulate(sys, X0z, [](double x) { return x; }, cfg),
                  std::invalid_argument);
  // grid version, wrong point count
  CHECK_THROWS_AS(simulate(sys, X0z, Eigen::VectorXd::Zero(7), cfg),
                  std::invalid_argument);
}

TEST_CASE("benchmark initial profile is compatible for any state") {
  const SystemData sys = paper_example(100.0, 1.0);
  Eigen::VectorXd X0(4);
  X0 << 0.3, -1.0, 2.0, 0.5;
  const auto u0 = benchmark_initial_data(sys, X0);
  CHECK(u0(0.0) == doctest::Approx((sys.C * X0)(0, 0)).epsilon(1e-14));
  SimConfig cfg;
  cfg.t_final = 0.05;
  CHECK_NOTHROW(simulate(sys, X0, u0, cfg));
}

TEST_CASE("discrete maximum principle for the pure heat equation") {
  SystemData sys;
  sys.A = -Eigen::MatrixXd::Identity(2, 2);
  sys.B = Eigen::MatrixXd::Zero(2, 1);
  sys.C = Eigen::MatrixXd::Zero(1, 2);
  sys.gamma = 1.0;
  for (double safety : {0.5, 0.9, 1.0}) {
    SimConfig cfg;
    cfg.safety = safety;
    cfg.t_final = 0.2;
    cfg.sample_stride = 1;
    const auto traj = simulate(sys, Eigen::VectorXd::Zero(2),
                               [](double x) { return std::sin(0.5 * M_PI * x); }, cfg);
    double prev = traj.u_samples.row(0).cwiseAbs().maxCoeff();
    for (Eigen::Index i = 1; i < traj.sample_count(); ++i) {
      const double cur = traj.u_samples.row(i).cwiseAbs().maxCoeff();
      CHECK(cur <= prev * (1.0 + 1e-12));
      prev = cur;
    }
  }
}

TEST_CASE("spatial convergence of the energy is second order") {
  const SystemData sys = paper_example(100.0, 1.0);
  Eigen::VectorXd X0(4);
  X0 << 0.0, 1.0, -1.0, 0.0;
  double e[3];
  int idx = 0;
  for (int M : {20, 40, 80}) {
    SimConfig cfg;
    cfg.intervals = M;
    cfg.safety = 0.9;
    cfg.t_final = 1.0;
    cfg.sample_stride = 1 << 20;  // only initial and final samples needed
    const auto traj = simulate(sys, X0, benchmark_initial_data(sys, X0), cfg);
    REQUIRE_FALSE(traj.diverged);
    e[idx++] = traj.energy(traj.sample_count() - 1);
  }
  const double order = std::log2(std::abs(e[0] - e[1]) / std::abs(e[1] - e[2]));
  CHECK(order >= 1.7);
}

TEST_CASE("divergent benchmark case sets the flag") {
  const SystemData sys = paper_example(100.0, 0.2);
  Eigen::VectorXd X0(4);
  X0 << 0.0, 1.0, -1.0, 0.0;
  SimConfig cfg;
  cfg.t_final = 400.0;
  cfg.sample_stride = 200;
  const auto traj = simulate(sys, X0, benchmark_initial_data(sys, X0), cfg);
  CHECK(traj.diverged);
  CHECK(traj.divergence_time > 0.0);
  CHECK(traj.divergence_time < 400.0);

  const auto rep = decay_check(traj, identity_witness(4, 1), 1);
  CHECK(rep.monotone_fraction < 0.9);
}

TEST_CASE("lyapunov functional value") {
  const int pts = 201;
  Eigen::VectorXd zero_grid = Eigen::VectorXd::Zero(pts);
  Eigen::VectorXd X(2);
  X << 3.0, -4.0;

  Witness w = identity_witness(2, 1);
  w.alpha = 0.0;
  w.beta = 0.0;
  w.T.setZero();
  CHECK(lyapunov_value(w, X, zero_grid, 1) == doctest::Approx(25.0));

  Witness wz;
  wz.P = Eigen::MatrixXd::Zero(2, 2);
  wz.Q = Eigen::MatrixXd::Zero(2, 2);
  wz.T = Eigen::MatrixXd::Zero(2, 2);
  wz.alpha = 1.0;
  wz.beta = 0.0;
  Eigen::VectorXd lin(pts);
  for (int i = 0; i < pts; ++i) lin(i) = 2.0 * (static_cast<double>(i) / (pts - 1)) - 1.0;
  CHECK(lyapunov_value(wz, X, lin, 1) == doctest::Approx(1.0 / 3).epsilon(1e-10));

  CHECK(lyapunov_value(identity_witness(2, 1), Eigen::VectorXd::Zero(2), zero_grid, 1) ==
        0.0);
}

TEST_CASE("interior trace inequality holds along trajectories") {
  const SystemData sys = paper_example(100.0, 1.0);
  Eigen::VectorXd X0(4);
  X0 << 0.0, 1.0, -1.0, 0.0;
  SimConfig cfg;
  cfg.t_final = 2.0;
  cfg.sample_stride = 100;
  const auto traj = simulate(sys, X0, benchmark_initial_data(sys, X0), cfg);
  for (Eigen::Index i = 0; i < traj.sample_count(); ++i) {
    const Eigen::VectorXd u = traj.u_samples.row(i);
    const double norm2 = legendre::integrate(u.cwiseAbs2());
    Eigen::VectorXd g(u.size());
    const double dx = traj.dx;
    g(0) = (-3 * u(0) + 4 * u(1) - u(2)) / (2 * dx);
    for (Eigen::Index j = 1; j + 1 < u.size(); ++j) g(j) = (u(j + 1) - u(j - 1)) / (2 * dx);
    g(u.size() - 1) =
        (3 * u(u.size() - 1) - 4 * u(u.size() - 2) + u(u.size() - 3)) / (2 * dx);
    const double grad2 = legendre::integrate(g.cwiseAbs2());
    const double u1 = traj.u_at_1(i);
    CHECK(norm2 <= 2.0 * u1 * u1 + 2.0 * grad2 + 1e-6);
  }
}

TEST_CASE("boundary trace is imposed at every sample") {
  const SystemData sys = paper_example(100.0, 1.0);
  Eigen::VectorXd X0(4);
  X0 << 0.0, 1.0, -1.0, 0.0;
  SimConfig cfg;
  cfg.t_final = 1.0;
  cfg.sample_stride = 37;
  const auto traj = simulate(sys, X0, benchmark_initial_data(sys, X0), cfg);
  for (Eigen::Index i = 0; i < traj.sample_count(); ++i) {
    const double trace = (sys.C * traj.X_samples.row(i).transpose())(0, 0);
    CHECK(traj.u_samples(i, 0) == doctest::Approx(trace).epsilon(1e-12));
  }
}

TEST_CASE("trajectory CSV layout") {
  const SystemData sys = paper_example(100.0, 1.0);
  Eigen::VectorXd X0(4);
  X0 << 0.0, 1.0, -1.0, 0.0;
  SimConfig cfg;
  cfg.t_final = 0.05;
  cfg.sample_stride = 10;
  const auto traj = simulate(sys, X0, benchmark_initial_data(sys, X0), cfg);

  std::ostringstream os1, os2;
  write_trajectory_csv(traj, os1);
  write_trajectory_csv(traj, os2);
  CHECK(os1.str() == os2.str());
  CHECK(os1.str().rfind("t,X_1,X_2,X_3,X_4,E,V_N,u_at_1,ux_at_0\n", 0) == 0);
  CHECK(os1.str().find(",nan,") != std::string::npos);

  std::ostringstream osf;
  write_field_csv(traj, osf);
  CHECK(osf.str().rfind("t,x,u\n", 0) == 0);
}
