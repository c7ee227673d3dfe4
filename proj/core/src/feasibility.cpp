#include "heatstab/feasibility.hpp"

#include <chrono>
#include <stdexcept>

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

namespace heatstab {

bool check_equilibrium(const SystemData& sys) {
  sys.validate();
  const Eigen::MatrixXd M = sys.A + sys.B * sys.C;
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(M);
  const auto& sv = svd.singularValues();
  const double smax = sv(0);
  const double smin = sv(sv.size() - 1);
  if (smax == 0.0) return false;
  return smin > 0.0 && smax / smin < 1e12;
}

FeasibilityReport solve_feasibility(const SystemData& sys, int N,
                                    const SolverOptions& opts) {
  sys.validate();
  if (N < 0) throw std::invalid_argument("solve_feasibility: N must be >= 0");
  if (!check_equilibrium(sys)) {
    throw std::invalid_argument("solve_feasibility: equilibrium precheck failed (A + B C singular)");
  }
  const auto start = std::chrono::steady_clock::now();

  const auto layout = DecisionLayout::make(sys.n(), N);
  std::vector<AffineMatrixExpression> blocks;
  blocks.push_back(build_phi(sys.n(), N));
  blocks.push_back(negate(assemble_psi(sys, N)));
  const std::vector<int> positive_vars = {layout.alpha_index, layout.beta_index};

  const MarginResult res = maximize_margin(blocks, positive_vars, layout.total_dim, opts);

  FeasibilityReport report;
  report.order = N;
  report.margin = res.margin;
  report.solver_iterations = res.newton_iterations;
  if (!res.converged) {
    report.status = SolveStatus::NumericalTrouble;
    report.feasible = false;
  } else if (res.margin > opts.margin_threshold) {
    report.status = SolveStatus::Optimal;
    report.feasible = true;
    const DecisionBlocks b = unpack(layout, res.w);
    Witness w;
    w.P = b.P;
    w.Q = b.Q;
    w.T = b.T;
    w.alpha = b.alpha;
    w.beta = b.beta;
    w.margin = res.margin;
    w.solver_status = SolveStatus::Optimal;
    report.witness = std::move(w);
  } else {
    report.status = SolveStatus::Infeasible;
    report.feasible = false;
  }
  report.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return report;
}

ValidationRecord validate_witness(const SystemData& sys, int N, const Witness& w,
                                  double tol) {
  ValidationRecord rec;
  rec.alpha = w.alpha;
  rec.beta = w.beta;

  const auto layout = DecisionLayout::make(sys.n(), N);
  DecisionBlocks b;
  b.P = w.P;
  b.Q = w.Q;
  b.T = w.T;
  b.alpha = w.alpha;
  b.beta = w.beta;
  const Eigen::VectorXd wv = pack(layout, b);

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es_phi(
      build_phi(sys.n(), N).evaluate(wv), Eigen::EigenvaluesOnly);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es_psi(
      assemble_psi(sys, N).evaluate(wv), Eigen::EigenvaluesOnly);
  rec.lambda_min_phi = es_phi.eigenvalues().minCoeff();
  rec.lambda_max_psi = es_psi.eigenvalues().maxCoeff();

  if (!(w.alpha > tol)) {
    rec.reason = "alpha nonpositive";
  } else if (!(w.beta > tol)) {
    rec.reason = "beta nonpositive";
  } else if (!(rec.lambda_min_phi > tol)) {
    rec.reason = "phi not positive definite";
  } else if (!(rec.lambda_max_psi < -tol)) {
    rec.reason = "psi not negative definite";
  }
  rec.pass = rec.reason.empty();
  return rec;
}

}  // namespace heatstab
