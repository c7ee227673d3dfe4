#pragma once

#include <functional>
#include <ostream>
#include <vector>

#include <Eigen/Core>

#include "heatstab/feasibility.hpp"
#include "heatstab/system.hpp"

namespace heatstab {

struct SimConfig {
  int intervals = 20;      // spatial intervals M, dx = 1/M
  double safety = 0.9;     // dt = safety * dx^2 / (2 gamma), safety in (0,1]
  double t_final = 10.0;
  int sample_stride = 1;   // store every k-th step

  void validate() const;  // throws std::invalid_argument
};

struct Trajectory {
  Eigen::VectorXd times;
  Eigen::MatrixXd X_samples;  // sample count x n
  Eigen::MatrixXd u_samples;  // sample count x (M+1)
  Eigen::VectorXd energy;     // |X|^2 + ||u||^2 + ||u_x||^2 per sample
  Eigen::VectorXd u_at_1;
  Eigen::VectorXd ux_at_0;
  bool diverged = false;
  double divergence_time = 0.0;
  double dx = 0.0;
  double dt = 0.0;

  Eigen::Index sample_count() const { return times.size(); }
};

/// Explicit forward-time central-space stepping of the heat equation with the
/// Dirichlet value C X(t) imposed at x = 0 and a mirror ghost point at x = 1,
/// interleaved with classical RK4 on the ODE state; u(1,t) is held constant
/// over each RK4 step. Initial data must satisfy u0(0) = C X0 within 1e-9 and
/// have a boundary slope at x = 1 below 1e-6 in magnitude.
Trajectory simulate(const SystemData& sys, const Eigen::VectorXd& X0,
                    const std::function<double(double)>& u0, const SimConfig& cfg);

/// Same with initial data given by its values on the simulation grid
/// (intervals + 1 points). The Neumann residual is then the one-sided
/// second-order difference on that grid.
Trajectory simulate(const SystemData& sys, const Eigen::VectorXd& X0,
                    const Eigen::VectorXd& u0_grid, const SimConfig& cfg);

/// The Lyapunov functional
///   [X; U_N]' [P Q; Q' T] [X; U_N] + alpha ||u||^2 + beta ||u_x||^2
/// evaluated on one state snapshot. U_N is obtained by Legendre projection of
/// the grid values.
double lyapunov_value(const Witness& w, const Eigen::VectorXd& X,
                      const Eigen::VectorXd& u_grid, int order);

struct DecayReport {
  double monotone_fraction = 1.0;   // pairs with V non-increasing (tolerated)
  double vn_over_e_min = 0.0;
  double vn_over_e_max = 0.0;
  double fitted_decay_rate = 0.0;   // least-squares rate of E(t) decay
  int sample_count = 0;
  std::vector<double> lyapunov;     // V_N at every sample
};

DecayReport decay_check(const Trajectory& traj, const Witness& w, int order);

/// Fitted exponential decay rate of the sampled energy (positive = decay).
double fitted_energy_decay_rate(const Trajectory& traj);

/// Benchmark initial profile C X0 - 20 x (x - 2) + 10 (1 - cos(8 pi x)); it is
/// compatible with both boundary conditions for any X0.
std::function<double(double)> benchmark_initial_data(const SystemData& sys,
                                                 const Eigen::VectorXd& X0);

/// Column layout: t, X_1..X_n, E, V_N, u_at_1, ux_at_0. The V_N column is
/// "nan" unless Lyapunov values are supplied.
void write_trajectory_csv(const Trajectory& traj, std::ostream& os,
                          const std::vector<double>* lyapunov = nullptr);

/// Long-format field values: t, x, u.
void write_field_csv(const Trajectory& traj, std::ostream& os);

}  // namespace heatstab
