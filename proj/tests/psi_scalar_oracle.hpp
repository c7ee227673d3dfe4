#pragma once

#include <Eigen/Core>

// Dense 5x5 stability form for a scalar ODE (n = 1) at truncation order
// N = 1, expanded entry by entry with plain scalar arithmetic. Kept separate
// from the block assembler on purpose: the two must agree to 1e-10.
//
// Decision scalars, in flat layout order:
//   w = [p, q0, q1, t00, t01, t11, alpha, beta]
Eigen::MatrixXd psi_scalar_oracle_n1_order1(double a, double b, double c, double g,
                                            const double w[8]);
