#pragma once

#include <Eigen/Core>

namespace heatstab {

/// Data of a finite dimensional system coupled to a 1-d heat equation:
///   Xdot = A X + B u(1,t),   u_t = gamma u_xx on (0,1),
///   u(0,t) = C X(t),         u_x(1,t) = 0.
struct SystemData {
  Eigen::MatrixXd A;   // n x n
  Eigen::MatrixXd B;   // n x 1
  Eigen::MatrixXd C;   // 1 x n
  double gamma = 1.0;  // thermal diffusivity, > 0

  int n() const { return static_cast<int>(A.rows()); }

  /// Throws std::invalid_argument on inconsistent dimensions or gamma <= 0.
  void validate() const;
};

/// The gain-parameterized four-state benchmark family.
///
/// The reference stability map for this family quotes gamma in
/// half-diffusivity units; the heat-equation coefficient is 2*gamma.
SystemData paper_example(double K, double gamma);

}  // namespace heatstab
