#include "heatstab/legendre.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace heatstab::legendre {

double eval(int k, double x) {
  if (k < 0) throw std::domain_error("legendre::eval: negative degree");
  constexpr double kEdgeTol = 1e-12;
  if (x < -kEdgeTol || x > 1.0 + kEdgeTol) {
    throw std::domain_error("legendre::eval: x outside [0,1]: " + std::to_string(x));
  }
  x = std::min(1.0, std::max(0.0, x));
  if (k == 0) return 1.0;
  const double s = 2.0 * x - 1.0;
  double pm = 1.0;
  double p = s;
  for (int j = 1; j < k; ++j) {
    const double pn = ((2 * j + 1) * s * p - j * pm) / (j + 1);
    pm = p;
    p = pn;
  }
  return p;
}

double norm_sq(int k) { return 1.0 / (2 * k + 1); }

double ell(int k, int j) {
  if (j < 0 || k < 0 || j >= k) return 0.0;
  return (2 * j + 1) * (1.0 - (((k + j) % 2 == 0) ? 1.0 : -1.0));
}

Operators build_operators(int N) {
  if (N < 0) throw std::invalid_argument("legendre::build_operators: N must be >= 0");
  Operators op;
  op.order = N;
  const int d = N + 1;
  op.L.setZero(d, d);
  for (int k = 0; k < d; ++k) {
    for (int j = 0; j < k; ++j) {
      op.L(k, j) = ell(k, j);
    }
  }
  op.L_sq = op.L * op.L;
  op.L1 = op.L.leftCols(N);
  op.L2 = op.L_sq.leftCols(std::max(N - 1, 0));
  op.ones = Eigen::VectorXd::Ones(d);
  op.alt_ones.resize(d);
  for (int k = 0; k < d; ++k) op.alt_ones(k) = (k % 2 == 0) ? 1.0 : -1.0;
  op.I_diag.setZero(d, d);
  for (int k = 0; k < d; ++k) op.I_diag(k, k) = 2.0 * k + 1.0;
  return op;
}

double integrate(const Eigen::Ref<const Eigen::VectorXd>& samples) {
  const auto pts = samples.size();
  if (pts < 2) throw std::invalid_argument("legendre::integrate: need at least 2 samples");
  const double h = 1.0 / static_cast<double>(pts - 1);
  const auto intervals = pts - 1;
  if (intervals == 1) {
    return 0.5 * h * (samples(0) + samples(1));
  }
  // Simpson over the even-length head, 3/8 panel over a trailing odd remainder.
  Eigen::Index head = intervals;
  double tail = 0.0;
  if (intervals % 2 != 0) {
    head = intervals - 3;
    const auto b = head;
    tail = 3.0 * h / 8.0 *
           (samples(b) + 3.0 * samples(b + 1) + 3.0 * samples(b + 2) + samples(b + 3));
  }
  double sum = 0.0;
  if (head > 0) {
    sum = samples(0) + samples(head);
    for (Eigen::Index i = 1; i < head; i += 2) sum += 4.0 * samples(i);
    for (Eigen::Index i = 2; i < head; i += 2) sum += 2.0 * samples(i);
    sum *= h / 3.0;
  }
  return sum + tail;
}

Eigen::VectorXd project(const Eigen::Ref<const Eigen::VectorXd>& samples, int N) {
  if (N < 0) throw std::invalid_argument("legendre::project: N must be >= 0");
  const auto pts = samples.size();
  if (pts < 2 * N + 3) {
    throw std::invalid_argument("legendre::project: grid of " + std::to_string(pts) +
                                " points too coarse for order " + std::to_string(N) +
                                " (need >= " + std::to_string(2 * N + 3) + ")");
  }
  // Tabulate L_k on the grid by the recurrence, then integrate u*L_k.
  Eigen::MatrixXd basis(pts, N + 1);
  basis.col(0).setOnes();
  if (N >= 1) {
    const double h = 1.0 / static_cast<double>(pts - 1);
    for (Eigen::Index i = 0; i < pts; ++i) {
      const double s = 2.0 * (i * h) - 1.0;
      basis(i, 1) = s;
      for (int j = 1; j < N; ++j) {
        basis(i, j + 1) = ((2 * j + 1) * s * basis(i, j) - j * basis(i, j - 1)) / (j + 1);
      }
    }
  }
  Eigen::VectorXd out(N + 1);
  for (int k = 0; k <= N; ++k) {
    out(k) = integrate(samples.cwiseProduct(basis.col(k)));
  }
  return out;
}

}  // namespace heatstab::legendre
