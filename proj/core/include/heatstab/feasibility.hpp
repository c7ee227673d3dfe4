#pragma once

#include <optional>
#include <string>

#include <Eigen/Core>

#include "heatstab/lmi.hpp"
#include "heatstab/sdp.hpp"
#include "heatstab/system.hpp"

namespace heatstab {

/// A concrete decision assignment certifying the stability conditions,
/// together with the achieved strict-feasibility margin.
struct Witness {
  Eigen::MatrixXd P;
  Eigen::MatrixXd Q;
  Eigen::MatrixXd T;
  double alpha = 0.0;
  double beta = 0.0;
  double margin = 0.0;
  SolveStatus solver_status = SolveStatus::NumericalTrouble;
};

struct ValidationRecord {
  double lambda_min_phi = 0.0;
  double lambda_max_psi = 0.0;
  double alpha = 0.0;
  double beta = 0.0;
  bool pass = false;
  std::string reason;  // empty when pass
};

struct FeasibilityReport {
  bool feasible = false;
  std::optional<Witness> witness;  // present exactly when feasible
  int order = 0;
  double margin = 0.0;  // achieved margin even when infeasible
  SolveStatus status = SolveStatus::NumericalTrouble;
  double wall_seconds = 0.0;
  int solver_iterations = 0;
};

/// True when A + B C is nonsingular (condition number below 1e12).
bool check_equilibrium(const SystemData& sys);

/// Decides strict feasibility of (Phi > 0, Psi < 0, alpha > 0, beta > 0) at
/// truncation order N by margin maximization. Throws std::invalid_argument
/// when the equilibrium precheck fails or inputs are inconsistent.
FeasibilityReport solve_feasibility(const SystemData& sys, int N,
                                    const SolverOptions& opts = {});

/// Recomputes both eigenvalue margins with a symmetric eigensolver,
/// independent of the conic solver's factorizations. A failed validation is
/// reported in the record, never thrown.
ValidationRecord validate_witness(const SystemData& sys, int N, const Witness& w,
                                  double tol = 1e-6);

}  // namespace heatstab
