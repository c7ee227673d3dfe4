#pragma once

#include <vector>

#include <Eigen/Core>

#include "heatstab/system.hpp"

namespace heatstab {

/// Flat layout of the decision blocks (P, Q, T, alpha, beta) for a system of
/// ODE dimension n and truncation order N. Symmetric blocks store their lower
/// triangle row by row.
struct DecisionLayout {
  int n = 0;
  int order = 0;
  int p_offset = 0;
  int q_offset = 0;
  int t_offset = 0;
  int alpha_index = 0;
  int beta_index = 0;
  int total_dim = 0;

  static DecisionLayout make(int n, int N);
};

struct DecisionBlocks {
  Eigen::MatrixXd P;  // n x n symmetric
  Eigen::MatrixXd Q;  // n x (N+1)
  Eigen::MatrixXd T;  // (N+1) x (N+1) symmetric
  double alpha = 0.0;
  double beta = 0.0;
};

Eigen::VectorXd pack(const DecisionLayout& layout, const DecisionBlocks& blocks);
DecisionBlocks unpack(const DecisionLayout& layout,
                      const Eigen::Ref<const Eigen::VectorXd>& w);

/// A symmetric-matrix-valued function, affine in the flat decision vector:
///   M(w) = constant_term + sum_i w_i * coefficients[i].
struct AffineMatrixExpression {
  int dim = 0;
  Eigen::MatrixXd constant_term;
  std::vector<Eigen::MatrixXd> coefficients;

  /// constant_term + sum_i w_i coefficients[i], symmetrized as (M+M^T)/2.
  /// Throws std::invalid_argument on a length mismatch.
  Eigen::MatrixXd evaluate(const Eigen::Ref<const Eigen::VectorXd>& w) const;
};

/// Expression with every matrix negated; maps M(w) to -M(w).
AffineMatrixExpression negate(AffineMatrixExpression expr);

/// Block matrix [P, Q; Q^T, T] of size (n+N+1) as an affine expression.
AffineMatrixExpression build_phi(int n, int N);

/// The quadratic-form matrix of the Lyapunov derivative over the augmented
/// state [X; u(1); u_x(0); U_N], of size n+N+3. Affine in all five decision
/// blocks with zero constant term.
AffineMatrixExpression build_psi_tilde(const SystemData& sys, int N);

/// Factor G of the gradient-energy bound: the bound matrix is G I G^T with
/// I = diag(1,...,2N+3). G has n+N+3 rows and N+2 columns; the u_x(0) row
/// block is zero.
Eigen::MatrixXd psi2_factor(const SystemData& sys, int N);
Eigen::MatrixXd build_psi2(const SystemData& sys, int N);

/// Factor H of the time-derivative energy bound: the bound matrix is
/// H I H^T with I = diag(1,...,2N+5). H has n+N+3 rows and N+3 columns.
Eigen::MatrixXd psi3_factor(const SystemData& sys, int N);
Eigen::MatrixXd build_psi3(const SystemData& sys, int N);

/// Full stability form: psi_tilde - alpha*gamma*Psi2 - 2*beta*gamma*Psi3,
/// still affine in the decision vector.
AffineMatrixExpression assemble_psi(const SystemData& sys, int N);

}  // namespace heatstab
