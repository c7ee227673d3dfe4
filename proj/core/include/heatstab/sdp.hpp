#pragma once

#include <vector>

#include <Eigen/Core>

#include "heatstab/lmi.hpp"

namespace heatstab {

enum class SolveStatus { Optimal, Infeasible, NumericalTrouble };

const char* to_string(SolveStatus status);

struct SolverOptions {
  int max_iterations = 500;        // Newton iteration cap per solve
  double margin_threshold = 1e-7;  // strict-feasibility decision level
  double norm_box = 1e6;           // sup-norm bound R on the decision vector
  int verbosity = 0;
  double gap_tolerance = 1e-10;    // absolute duality-gap target, box-normalized
  double relative_gap = 1e-6;      // relative gap target once clearly feasible
  double mu_initial = 1.0;
  double mu_factor = 8.0;
};

struct MarginResult {
  Eigen::VectorXd w;         // maximizer, in user units
  double margin = 0.0;       // achieved margin t, in user units
  double gap_bound = 0.0;    // upper bound on t_opt - margin, in user units
  int newton_iterations = 0;
  bool converged = false;
};

/// Interior-point solve of the strict-feasibility margin problem
///
///   maximize t  subject to  expr(w) - t I >= 0   for each block,
///                           w[i] - t >= 0        for i in lower_bounded,
///                           |w|_inf <= norm_box.
///
/// Every block must be affine with zero constant term; the problem is then
/// positively homogeneous and is solved in box-normalized variables.
/// The returned iterate is strictly feasible whenever margin > 0, so the
/// achieved margin is a certificate regardless of convergence status.
MarginResult maximize_margin(const std::vector<AffineMatrixExpression>& blocks,
                             const std::vector<int>& lower_bounded, int dim,
                             const SolverOptions& opts = {});

}  // namespace heatstab
