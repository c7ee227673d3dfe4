#pragma once

#include <Eigen/Core>

namespace heatstab::legendre {

/// Value of the shifted Legendre polynomial of degree k at x in [0,1],
/// computed by the three-term recurrence. Throws std::domain_error when x
/// lies outside [0,1] by more than 1e-12.
double eval(int k, double x);

/// Squared L2(0,1) norm of the degree-k shifted Legendre polynomial: 1/(2k+1).
double norm_sq(int k);

/// Derivation coefficient: (2j+1)*(1-(-1)^(k+j)) for j <= k-1, zero otherwise.
double ell(int k, int j);

/// Constant matrices and vectors derived from the first N+1 shifted Legendre
/// polynomials. All entries are integers represented exactly in double.
struct Operators {
  int order = 0;          // N
  Eigen::MatrixXd L;      // (N+1)x(N+1), strictly lower triangular
  Eigen::MatrixXd L_sq;   // L*L; last two columns vanish
  Eigen::MatrixXd L1;     // first N columns of L, (N+1)xN
  Eigen::MatrixXd L2;     // first N-1 columns of L_sq, (N+1)x(N-1); empty for N<2
  Eigen::VectorXd ones;       // (1,...,1)
  Eigen::VectorXd alt_ones;   // ((-1)^k)_k
  Eigen::MatrixXd I_diag;     // diag(1,3,...,2N+1)
};

Operators build_operators(int N);

/// Composite Simpson integral of uniformly sampled values over [0,1].
/// An odd interval count is handled with a trailing 3/8 panel.
double integrate(const Eigen::Ref<const Eigen::VectorXd>& samples);

/// Vector of inner products <u, L_k> for k = 0..N, where u is given by its
/// values on a uniform grid over [0,1]. Requires at least 2N+3 grid points;
/// throws std::invalid_argument otherwise.
Eigen::VectorXd project(const Eigen::Ref<const Eigen::VectorXd>& samples, int N);

}  // namespace heatstab::legendre
