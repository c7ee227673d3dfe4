#include "heatstab/simulator.hpp"

#include <cmath>
#include <cstdio>
#include <stdexcept>

#include "heatstab/legendre.hpp"

namespace heatstab {

namespace {

constexpr double kDivergenceCap = 1e12;

Eigen::VectorXd spatial_derivative(const Eigen::VectorXd& u, double dx) {
  const auto M = u.size() - 1;
  Eigen::VectorXd g(M + 1);
  g(0) = (-3.0 * u(0) + 4.0 * u(1) - u(2)) / (2.0 * dx);
  for (Eigen::Index i = 1; i < M; ++i) g(i) = (u(i + 1) - u(i - 1)) / (2.0 * dx);
  g(M) = (3.0 * u(M) - 4.0 * u(M - 1) + u(M - 2)) / (2.0 * dx);
  return g;
}

double energy_of(const Eigen::VectorXd& X, const Eigen::VectorXd& u, double dx) {
  const Eigen::VectorXd g = spatial_derivative(u, dx);
  return X.squaredNorm() + legendre::integrate(u.cwiseAbs2()) +
         legendre::integrate(g.cwiseAbs2());
}

struct Sampler {
  Trajectory traj;
  std::vector<double> times, e, u1, ux0;
  std::vector<Eigen::VectorXd> xs, us;
  double dx = 0.0;

  void push(double t, const Eigen::VectorXd& X, const Eigen::VectorXd& u) {
    times.push_back(t);
    xs.push_back(X);
    us.push_back(u);
    e.push_back(energy_of(X, u, dx));
    u1.push_back(u(u.size() - 1));
    ux0.push_back((-3.0 * u(0) + 4.0 * u(1) - u(2)) / (2.0 * dx));
  }

  Trajectory finish(double dt) {
    const auto S = static_cast<Eigen::Index>(times.size());
    traj.times = Eigen::Map<Eigen::VectorXd>(times.data(), S);
    traj.energy = Eigen::Map<Eigen::VectorXd>(e.data(), S);
    traj.u_at_1 = Eigen::Map<Eigen::VectorXd>(u1.data(), S);
    traj.ux_at_0 = Eigen::Map<Eigen::VectorXd>(ux0.data(), S);
    traj.X_samples.resize(S, xs.empty() ? 0 : xs[0].size());
    traj.u_samples.resize(S, us.empty() ? 0 : us[0].size());
    for (Eigen::Index i = 0; i < S; ++i) {
      traj.X_samples.row(i) = xs[i].transpose();
      traj.u_samples.row(i) = us[i].transpose();
    }
    traj.dx = dx;
    traj.dt = dt;
    return std::move(traj);
  }
};

Trajectory run(const SystemData& sys, const Eigen::VectorXd& X0,
               const Eigen::VectorXd& u0, const SimConfig& cfg) {
  const int M = cfg.intervals;
  const double dx = 1.0 / M;
  const double dt = cfg.safety * dx * dx / (2.0 * sys.gamma);
  const double r = sys.gamma * dt / (dx * dx);
  const auto steps = static_cast<long>(std::ceil(cfg.t_final / dt));

  Eigen::VectorXd X = X0;
  Eigen::VectorXd u = u0;
  Eigen::VectorXd un(M + 1);

  Sampler sampler;
  sampler.dx = dx;
  sampler.push(0.0, X, u);

  const Eigen::MatrixXd& A = sys.A;
  const Eigen::VectorXd Bv = sys.B.col(0);
  bool diverged = false;
  double t_div = 0.0;

  for (long k = 0; k < steps; ++k) {
    // RK4 on X with the trace u(1,t) frozen over the step.
    const double utip = u(M);
    const Eigen::VectorXd k1 = A * X + Bv * utip;
    const Eigen::VectorXd k2 = A * (X + 0.5 * dt * k1) + Bv * utip;
    const Eigen::VectorXd k3 = A * (X + 0.5 * dt * k2) + Bv * utip;
    const Eigen::VectorXd k4 = A * (X + dt * k3) + Bv * utip;
    const Eigen::VectorXd Xn = X + dt / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);

    // FTCS on u; mirror ghost point at x = 1, Dirichlet from the new X at x = 0.
    for (int i = 1; i < M; ++i) un(i) = u(i) + r * (u(i - 1) - 2.0 * u(i) + u(i + 1));
    un(M) = u(M) + r * (2.0 * u(M - 1) - 2.0 * u(M));
    un(0) = (sys.C * Xn)(0, 0);

    X = Xn;
    u = un;
    const double t_now = (k + 1) * dt;
    if (!X.allFinite() || !u.allFinite() ||
        X.cwiseAbs().maxCoeff() > kDivergenceCap ||
        u.cwiseAbs().maxCoeff() > kDivergenceCap) {
      diverged = true;
      t_div = t_now;
      break;
    }
    if ((k + 1) % cfg.sample_stride == 0 || k + 1 == steps) {
      sampler.push(t_now, X, u);
    }
  }

  Trajectory traj = sampler.finish(dt);
  traj.diverged = diverged;
  traj.divergence_time = t_div;
  return traj;
}

}  // namespace

void SimConfig::validate() const {
  if (intervals < 4) throw std::invalid_argument("SimConfig: need at least 4 intervals");
  if (!(safety > 0.0 && safety <= 1.0)) {
    throw std::invalid_argument("SimConfig: safety must lie in (0,1]");
  }
  if (!(t_final > 0.0)) throw std::invalid_argument("SimConfig: t_final must be positive");
  if (sample_stride < 1) throw std::invalid_argument("SimConfig: sample_stride must be >= 1");
}

Trajectory simulate(const SystemData& sys, const Eigen::VectorXd& X0,
                    const std::function<double(double)>& u0, const SimConfig& cfg) {
  sys.validate();
  cfg.validate();
  if (X0.size() != sys.n()) throw std::invalid_argument("simulate: X0 has wrong dimension");

  const int M = cfg.intervals;
  Eigen::VectorXd grid(M + 1);
  for (int i = 0; i <= M; ++i) grid(i) = u0(static_cast<double>(i) / M);

  const double trace0 = (sys.C * X0)(0, 0);
  if (std::abs(u0(0.0) - trace0) > 1e-9 * std::max(1.0, std::abs(trace0))) {
    throw std::invalid_argument("simulate: incompatible initial data, u0(0) != C X0");
  }
  const double h = 1e-6;
  const double slope1 = (3.0 * u0(1.0) - 4.0 * u0(1.0 - h) + u0(1.0 - 2.0 * h)) / (2.0 * h);
  if (std::abs(slope1) > 1e-6) {
    throw std::invalid_argument("simulate: incompatible initial data, u0 slope at x=1 not zero");
  }
  return run(sys, X0, grid, cfg);
}

Trajectory simulate(const SystemData& sys, const Eigen::VectorXd& X0,
                    const Eigen::VectorXd& u0_grid, const SimConfig& cfg) {
  sys.validate();
  cfg.validate();
  if (X0.size() != sys.n()) throw std::invalid_argument("simulate: X0 has wrong dimension");
  const int M = cfg.intervals;
  if (u0_grid.size() != M + 1) {
    throw std::invalid_argument("simulate: u0 grid must have intervals + 1 points");
  }
  const double trace0 = (sys.C * X0)(0, 0);
  if (std::abs(u0_grid(0) - trace0) > 1e-9 * std::max(1.0, std::abs(trace0))) {
    throw std::invalid_argument("simulate: incompatible initial data, u0(0) != C X0");
  }
  const double dx = 1.0 / M;
  const double slope1 =
      (3.0 * u0_grid(M) - 4.0 * u0_grid(M - 1) + u0_grid(M - 2)) / (2.0 * dx);
  if (std::abs(slope1) > 1e-6) {
    throw std::invalid_argument("simulate: incompatible initial data, u0 slope at x=1 not zero");
  }
  return run(sys, X0, u0_grid, cfg);
}

double lyapunov_value(const Witness& w, const Eigen::VectorXd& X,
                      const Eigen::VectorXd& u_grid, int order) {
  const Eigen::VectorXd U = legendre::project(u_grid, order);
  double v = X.dot(w.P * X) + 2.0 * X.dot(w.Q * U) + U.dot(w.T * U);
  const double dx = 1.0 / static_cast<double>(u_grid.size() - 1);
  if (w.alpha != 0.0) v += w.alpha * legendre::integrate(u_grid.cwiseAbs2());
  if (w.beta != 0.0) {
    const Eigen::VectorXd g = spatial_derivative(u_grid, dx);
    v += w.beta * legendre::integrate(g.cwiseAbs2());
  }
  return v;
}

double fitted_energy_decay_rate(const Trajectory& traj) {
  // Least-squares slope of log E against t over samples with E > 0.
  double st = 0, se = 0, stt = 0, ste = 0;
  int cnt = 0;
  for (Eigen::Index i = 0; i < traj.sample_count(); ++i) {
    if (traj.energy(i) > 0.0) {
      const double t = traj.times(i);
      const double le = std::log(traj.energy(i));
      st += t;
      se += le;
      stt += t * t;
      ste += t * le;
      ++cnt;
    }
  }
  if (cnt < 2) return 0.0;
  const double denom = cnt * stt - st * st;
  if (denom == 0.0) return 0.0;
  return -(cnt * ste - st * se) / denom;
}

DecayReport decay_check(const Trajectory& traj, const Witness& w, int order) {
  DecayReport rep;
  const auto S = traj.sample_count();
  rep.sample_count = static_cast<int>(S);
  rep.lyapunov.reserve(S);
  for (Eigen::Index i = 0; i < S; ++i) {
    rep.lyapunov.push_back(
        lyapunov_value(w, traj.X_samples.row(i), traj.u_samples.row(i), order));
  }
  int ok = 0;
  for (Eigen::Index i = 0; i + 1 < S; ++i) {
    const double v = rep.lyapunov[i];
    const double vn = rep.lyapunov[i + 1];
    if (vn <= v + (1e-6 + 1e-3) * std::abs(v)) ++ok;
  }
  rep.monotone_fraction = (S > 1) ? static_cast<double>(ok) / (S - 1) : 1.0;

  bool first = true;
  for (Eigen::Index i = 0; i < S; ++i) {
    if (traj.energy(i) > 0.0) {
      const double ratio = rep.lyapunov[i] / traj.energy(i);
      if (first) {
        rep.vn_over_e_min = rep.vn_over_e_max = ratio;
        first = false;
      } else {
        rep.vn_over_e_min = std::min(rep.vn_over_e_min, ratio);
        rep.vn_over_e_max = std::max(rep.vn_over_e_max, ratio);
      }
    }
  }
  rep.fitted_decay_rate = fitted_energy_decay_rate(traj);
  return rep;
}

std::function<double(double)> benchmark_initial_data(const SystemData& sys,
                                                 const Eigen::VectorXd& X0) {
  const double trace = (sys.C * X0)(0, 0);
  return [trace](double x) {
    return trace - 20.0 * x * (x - 2.0) + 10.0 * (1.0 - std::cos(8.0 * M_PI * x));
  };
}

void write_trajectory_csv(const Trajectory& traj, std::ostream& os,
                          const std::vector<double>* lyapunov) {
  const auto n = traj.X_samples.cols();
  os << "t";
  for (Eigen::Index j = 0; j < n; ++j) os << ",X_" << (j + 1);
  os << ",E,V_N,u_at_1,ux_at_0\n";
  char buf[64];
  const auto num = [&](double v) {
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    os << buf;
  };
  for (Eigen::Index i = 0; i < traj.sample_count(); ++i) {
    num(traj.times(i));
    for (Eigen::Index j = 0; j < n; ++j) {
      os << ',';
      num(traj.X_samples(i, j));
    }
    os << ',';
    num(traj.energy(i));
    os << ',';
    if (lyapunov && i < static_cast<Eigen::Index>(lyapunov->size())) {
      num((*lyapunov)[i]);
    } else {
      os << "nan";
    }
    os << ',';
    num(traj.u_at_1(i));
    os << ',';
    num(traj.ux_at_0(i));
    os << '\n';
  }
}

void write_field_csv(const Trajectory& traj, std::ostream& os) {
  os << "t,x,u\n";
  char buf[64];
  const auto num = [&](double v) {
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    os << buf;
  };
  const auto pts = traj.u_samples.cols();
  for (Eigen::Index i = 0; i < traj.sample_count(); ++i) {
    for (Eigen::Index j = 0; j < pts; ++j) {
      num(traj.times(i));
      os << ',';
      num(static_cast<double>(j) / static_cast<double>(pts - 1));
      os << ',';
      num(traj.u_samples(i, j));
      os << '\n';
    }
  }
}

}  // namespace heatstab
