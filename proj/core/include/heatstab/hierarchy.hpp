#pragma once

#include <functional>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "heatstab/feasibility.hpp"
#include "heatstab/system.hpp"

namespace heatstab {

struct OrderAttempt {
  int order = 0;
  bool feasible = false;
  double margin = 0.0;
  SolveStatus status = SolveStatus::NumericalTrouble;
  double wall_seconds = 0.0;
};

struct HierarchyResult {
  std::optional<int> min_order;
  std::vector<OrderAttempt> attempts;
};

/// Smallest N in [0, N_max] with a feasible certificate. Numerical trouble at
/// some order is recorded in the attempts and does not abort the scan. With
/// full_scan the search continues past the first feasible order.
HierarchyResult min_feasible_order(const SystemData& sys, int N_max,
                                   const SolverOptions& opts = {},
                                   bool full_scan = false);

using SystemFamily = std::function<SystemData(double K, double gamma)>;

struct CellResult {
  int min_order = -1;  // -1 encodes "no certificate up to N_max"
  bool error = false;
  std::string error_message;
  double wall_ms = 0.0;
  std::vector<OrderAttempt> attempts;
};

struct StabilityMap {
  Eigen::VectorXd K_grid;
  Eigen::VectorXd gamma_grid;
  int N_max = 0;
  std::vector<CellResult> cells;  // row-major, K outer and gamma inner

  const CellResult& at(int ik, int ig) const {
    return cells[static_cast<size_t>(ik) * gamma_grid.size() + ig];
  }
};

struct SweepOptions {
  int N_max = 6;
  int jobs = 1;
  bool full_scan = false;
  SolverOptions solver;
};

Eigen::VectorXd log_spaced(double lo, double hi, int count);

/// Fills the stability map cell by cell; cells are independent and computed
/// in parallel when jobs > 1. Per-cell failures are recorded in the cell and
/// never abort the sweep. Throws std::invalid_argument on empty grids.
StabilityMap sweep(const SystemFamily& family, const Eigen::VectorXd& K_grid,
                   const Eigen::VectorXd& gamma_grid, const SweepOptions& opts);

/// CSV with header K,gamma,min_order,wall_ms, one row per cell in row-major
/// grid order.
void write_csv(const StabilityMap& map, std::ostream& os);

}  // namespace heatstab
