#include "heatstab/lmi.hpp"

#include <stdexcept>
#include <utility>

#include "heatstab/legendre.hpp"

namespace heatstab {

DecisionLayout DecisionLayout::make(int n, int N) {
  if (n < 1) throw std::invalid_argument("DecisionLayout: n must be >= 1");
  if (N < 0) throw std::invalid_argument("DecisionLayout: N must be >= 0");
  DecisionLayout lo;
  lo.n = n;
  lo.order = N;
  lo.p_offset = 0;
  lo.q_offset = lo.p_offset + n * (n + 1) / 2;
  lo.t_offset = lo.q_offset + n * (N + 1);
  lo.alpha_index = lo.t_offset + (N + 1) * (N + 2) / 2;
  lo.beta_index = lo.alpha_index + 1;
  lo.total_dim = lo.beta_index + 1;
  return lo;
}

Eigen::VectorXd pack(const DecisionLayout& layout, const DecisionBlocks& blocks) {
  const int n = layout.n;
  const int d = layout.order + 1;
  if (blocks.P.rows() != n || blocks.P.cols() != n || blocks.Q.rows() != n ||
      blocks.Q.cols() != d || blocks.T.rows() != d || blocks.T.cols() != d) {
    throw std::invalid_argument("pack: block dimensions do not match layout");
  }
  Eigen::VectorXd w(layout.total_dim);
  int i = layout.p_offset;
  for (int r = 0; r < n; ++r)
    for (int c = 0; c <= r; ++c) w(i++) = blocks.P(r, c);
  for (int r = 0; r < n; ++r)
    for (int c = 0; c < d; ++c) w(layout.q_offset + r * d + c) = blocks.Q(r, c);
  i = layout.t_offset;
  for (int r = 0; r < d; ++r)
    for (int c = 0; c <= r; ++c) w(i++) = blocks.T(r, c);
  w(layout.alpha_index) = blocks.alpha;
  w(layout.beta_index) = blocks.beta;
  return w;
}

DecisionBlocks unpack(const DecisionLayout& layout,
                      const Eigen::Ref<const Eigen::VectorXd>& w) {
  if (w.size() != layout.total_dim) {
    throw std::invalid_argument("unpack: decision vector length mismatch");
  }
  const int n = layout.n;
  const int d = layout.order + 1;
  DecisionBlocks b;
  b.P.setZero(n, n);
  int i = layout.p_offset;
  for (int r = 0; r < n; ++r) {
    for (int c = 0; c <= r; ++c) {
      b.P(r, c) = b.P(c, r) = w(i++);
    }
  }
  b.Q.resize(n, d);
  for (int r = 0; r < n; ++r)
    for (int c = 0; c < d; ++c) b.Q(r, c) = w(layout.q_offset + r * d + c);
  b.T.setZero(d, d);
  i = layout.t_offset;
  for (int r = 0; r < d; ++r) {
    for (int c = 0; c <= r; ++c) {
      b.T(r, c) = b.T(c, r) = w(i++);
    }
  }
  b.alpha = w(layout.alpha_index);
  b.beta = w(layout.beta_index);
  return b;
}

Eigen::MatrixXd AffineMatrixExpression::evaluate(
    const Eigen::Ref<const Eigen::VectorXd>& w) const {
  if (static_cast<size_t>(w.size()) != coefficients.size()) {
    throw std::invalid_argument("AffineMatrixExpression::evaluate: length mismatch");
  }
  Eigen::MatrixXd m = constant_term;
  for (Eigen::Index i = 0; i < w.size(); ++i) {
    if (w(i) != 0.0) m += w(i) * coefficients[i];
  }
  return 0.5 * (m + m.transpose());
}

AffineMatrixExpression negate(AffineMatrixExpression expr) {
  expr.constant_term = -expr.constant_term;
  for (auto& c : expr.coefficients) c = -c;
  return expr;
}

namespace {

Eigen::MatrixXd phi_dense(int n, int N, const DecisionBlocks& b) {
  const int d = n + N + 1;
  Eigen::MatrixXd m(d, d);
  m.topLeftCorner(n, n) = b.P;
  m.topRightCorner(n, N + 1) = b.Q;
  m.bottomLeftCorner(N + 1, n) = b.Q.transpose();
  m.bottomRightCorner(N + 1, N + 1) = b.T;
  return m;
}

Eigen::MatrixXd psi_tilde_dense(const SystemData& sys, int N, const DecisionBlocks& b) {
  const int n = sys.n();
  const double g = sys.gamma;
  const auto op = legendre::build_operators(N);
  const Eigen::MatrixXd& A = sys.A;
  const Eigen::MatrixXd& B = sys.B;
  const Eigen::MatrixXd& C = sys.C;

  const Eigen::VectorXd L_alt = op.L * op.alt_ones;  // L 1*
  const Eigen::VectorXd L_one = op.L * op.ones;      // L 1

  Eigen::MatrixXd p11 = b.P * A + g * (b.Q * L_alt) * C;
  p11 = p11 + p11.transpose().eval();
  const Eigen::VectorXd p12 = b.P * B - g * (b.Q * L_one);
  const Eigen::VectorXd p13 =
      -g * (b.Q * op.alt_ones) - b.alpha * g * C.transpose() - b.beta * (A.transpose() * C.transpose());
  const Eigen::MatrixXd p14 =
      A.transpose() * b.Q + g * C.transpose() * (L_alt.transpose() * b.T) + g * (b.Q * op.L_sq);
  const double p23 = -b.beta * (C * B)(0, 0);
  const Eigen::RowVectorXd p24 = B.transpose() * b.Q - g * (L_one.transpose() * b.T);
  const Eigen::RowVectorXd p34 = -g * (op.alt_ones.transpose() * b.T);
  Eigen::MatrixXd p44 = g * (op.L_sq.transpose() * b.T);
  p44 = p44 + p44.transpose().eval();

  const int d = n + N + 3;
  const int iu = n;      // u(1) row
  const int ix = n + 1;  // u_x(0) row
  const int iU = n + 2;  // U_N rows
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(d, d);
  m.topLeftCorner(n, n) = p11;
  m.block(0, iu, n, 1) = p12;
  m.block(iu, 0, 1, n) = p12.transpose();
  m.block(0, ix, n, 1) = p13;
  m.block(ix, 0, 1, n) = p13.transpose();
  m.block(0, iU, n, N + 1) = p14;
  m.block(iU, 0, N + 1, n) = p14.transpose();
  m(iu, ix) = p23;
  m(ix, iu) = p23;
  m.block(iu, iU, 1, N + 1) = p24;
  m.block(iU, iu, N + 1, 1) = p24.transpose();
  m.block(ix, iU, 1, N + 1) = p34;
  m.block(iU, ix, N + 1, 1) = p34.transpose();
  m.block(iU, iU, N + 1, N + 1) = p44;
  return m;
}

/// Builds an affine expression by evaluating a dense block formula on every
/// basis decision vector. The formula must be linear with zero constant term.
template <typename DenseFn>
AffineMatrixExpression from_basis(const DecisionLayout& layout, int dim, DenseFn&& fn) {
  AffineMatrixExpression expr;
  expr.dim = dim;
  expr.constant_term = Eigen::MatrixXd::Zero(dim, dim);
  expr.coefficients.reserve(layout.total_dim);
  Eigen::VectorXd w = Eigen::VectorXd::Zero(layout.total_dim);
  for (int i = 0; i < layout.total_dim; ++i) {
    w(i) = 1.0;
    Eigen::MatrixXd c = fn(unpack(layout, w));
    expr.coefficients.push_back(0.5 * (c + c.transpose().eval()));
    w(i) = 0.0;
  }
  return expr;
}

}  // namespace

AffineMatrixExpression build_phi(int n, int N) {
  const auto layout = DecisionLayout::make(n, N);
  return from_basis(layout, n + N + 1,
                    [&](const DecisionBlocks& b) { return phi_dense(n, N, b); });
}

AffineMatrixExpression build_psi_tilde(const SystemData& sys, int N) {
  sys.validate();
  if (N < 0) throw std::invalid_argument("build_psi_tilde: N must be >= 0");
  const auto layout = DecisionLayout::make(sys.n(), N);
  return from_basis(layout, sys.n() + N + 3,
                    [&](const DecisionBlocks& b) { return psi_tilde_dense(sys, N, b); });
}

Eigen::MatrixXd psi2_factor(const SystemData& sys, int N) {
  sys.validate();
  const int n = sys.n();
  const auto op = legendre::build_operators(N + 1);  // order N+1, dimension N+2
  Eigen::MatrixXd G(n + N + 3, N + 2);
  G.topRows(n) = -sys.C.transpose() * op.alt_ones.transpose();
  G.row(n) = op.ones.transpose();
  G.row(n + 1).setZero();
  G.bottomRows(N + 1) = -op.L1.transpose();
  return G;
}

Eigen::MatrixXd build_psi2(const SystemData& sys, int N) {
  const Eigen::MatrixXd G = psi2_factor(sys, N);
  const auto op = legendre::build_operators(N + 1);
  return G * op.I_diag * G.transpose();
}

Eigen::MatrixXd psi3_factor(const SystemData& sys, int N) {
  sys.validate();
  const int n = sys.n();
  const auto op = legendre::build_operators(N + 2);  // order N+2, dimension N+3
  Eigen::MatrixXd H(n + N + 3, N + 3);
  H.topRows(n) = sys.C.transpose() * (op.L * op.alt_ones).transpose();
  H.row(n) = -(op.L * op.ones).transpose();
  H.row(n + 1) = -op.alt_ones.transpose();
  // L_sq at order N+2 has N+1 leading nonzero columns.
  H.bottomRows(N + 1) = op.L_sq.leftCols(N + 1).transpose();
  return H;
}

Eigen::MatrixXd build_psi3(const SystemData& sys, int N) {
  const Eigen::MatrixXd H = psi3_factor(sys, N);
  const auto op = legendre::build_operators(N + 2);
  return H * op.I_diag * H.transpose();
}

AffineMatrixExpression assemble_psi(const SystemData& sys, int N) {
  AffineMatrixExpression expr = build_psi_tilde(sys, N);
  const auto layout = DecisionLayout::make(sys.n(), N);
  const double g = sys.gamma;
  expr.coefficients[layout.alpha_index] -= g * build_psi2(sys, N);
  expr.coefficients[layout.beta_index] -= 2.0 * g * build_psi3(sys, N);
  return expr;
}

}  // namespace heatstab
