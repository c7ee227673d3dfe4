#include "heatstab/sdp.hpp"

#include <cmath>
#include <cstdio>
#include <limits>
#include <stdexcept>

#include <Eigen/Cholesky>

namespace heatstab {

const char* to_string(SolveStatus status) {
  switch (status) {
    case SolveStatus::Optimal: return "Optimal";
    case SolveStatus::Infeasible: return "Infeasible";
    case SolveStatus::NumericalTrouble: return "NumericalTrouble";
  }
  return "Unknown";
}

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

struct BlockWork {
  const AffineMatrixExpression* expr = nullptr;
  std::vector<int> active;             // coefficient indices with nonzero matrices
  Eigen::MatrixXd F;                   // current block value
  Eigen::LLT<Eigen::MatrixXd> llt;
  std::vector<Eigen::MatrixXd> S;      // whitened coefficients, one per active + t
  double scale = 0.0;                  // |F|_max at the last assembly

  void assemble(const Eigen::VectorXd& w, double t) {
    const int d = expr->dim;
    F.setZero(d, d);
    for (int i : active) F += w(i) * expr->coefficients[i];
    F.diagonal().array() -= t;
    scale = F.cwiseAbs().maxCoeff();
  }

  // Returns false when F is not positive definite.
  bool factor() {
    llt.compute(F);
    return llt.info() == Eigen::Success;
  }

  double log_det() const {
    return 2.0 * llt.matrixLLT().diagonal().array().log().sum();
  }
};

}  // namespace

MarginResult maximize_margin(const std::vector<AffineMatrixExpression>& blocks,
                             const std::vector<int>& lower_bounded, int dim,
                             const SolverOptions& opts) {
  if (blocks.empty()) throw std::invalid_argument("maximize_margin: no blocks");
  const int m = dim;
  for (const auto& b : blocks) {
    if (static_cast<int>(b.coefficients.size()) != m) {
      throw std::invalid_argument("maximize_margin: block coefficient count mismatch");
    }
    if (b.constant_term.norm() > 1e-12 * (1.0 + static_cast<double>(b.dim))) {
      throw std::invalid_argument("maximize_margin: blocks must have zero constant term");
    }
  }
  const double R = opts.norm_box;
  if (!(R > 0.0)) throw std::invalid_argument("maximize_margin: norm_box must be positive");

  std::vector<BlockWork> work(blocks.size());
  double nu = 2.0 * m;  // box barrier weight
  for (size_t b = 0; b < blocks.size(); ++b) {
    work[b].expr = &blocks[b];
    for (int i = 0; i < m; ++i) {
      if (blocks[b].coefficients[i].cwiseAbs().maxCoeff() > 0.0) {
        work[b].active.push_back(i);
      }
    }
    work[b].S.resize(work[b].active.size() + 1);
    nu += blocks[b].dim;
  }
  nu += static_cast<double>(lower_bounded.size());

  // Box-normalized iterate: |w| < 1 componentwise, t free.
  Eigen::VectorXd w = Eigen::VectorXd::Zero(m);
  double t = -1.0;

  const auto barrier_value = [&](const Eigen::VectorXd& wv, double tv,
                                 double mu) -> double {
    double f = -mu * tv;
    for (auto& bw : work) {
      bw.assemble(wv, tv);
      if (!bw.factor()) return kInf;
      f -= bw.log_det();
    }
    for (int i : lower_bounded) {
      const double s = wv(i) - tv;
      if (s <= 0.0) return kInf;
      f -= std::log(s);
    }
    for (int i = 0; i < m; ++i) {
      const double lo = 1.0 + wv(i);
      const double hi = 1.0 - wv(i);
      if (lo <= 0.0 || hi <= 0.0) return kInf;
      f -= std::log(lo) + std::log(hi);
    }
    return f;
  };

  MarginResult result;
  result.converged = false;
  int newton_total = 0;
  double mu = opts.mu_initial;
  double mu_last = mu;
  bool trouble = false;

  Eigen::VectorXd grad(m + 1);
  Eigen::MatrixXd hess(m + 1, m + 1);
  Eigen::VectorXd dy(m + 1);

  // Near t = 0 the absolute gap target decides feasibility; once the margin
  // is clearly positive only relative accuracy of its value matters. Slacks
  // below the rounding noise of the block matrices cannot be certified, so
  // the block scale floors the achievable gap.
  const auto gap_target = [&]() {
    double block_scale = 0.0;
    for (const auto& bw : work) block_scale = std::max(block_scale, bw.scale);
    const double noise_floor =
        std::min(1e-3, 50.0 * std::numeric_limits<double>::epsilon() * block_scale);
    return std::max({opts.gap_tolerance, opts.relative_gap * std::max(0.0, t),
                     noise_floor});
  };

  while (nu / mu > gap_target() && !trouble) {
    int inner_used = 0;
    for (int inner = 0; inner < 100; ++inner) {
      ++inner_used;
      if (++newton_total > opts.max_iterations) {
        trouble = true;
        break;
      }
      grad.setZero();
      hess.setZero();
      grad(m) = -mu;

      bool factor_ok = true;
      for (auto& bw : work) {
        bw.assemble(w, t);
        if (!bw.factor()) {
          factor_ok = false;
          break;
        }
        const auto& L = bw.llt.matrixL();
        const int na = static_cast<int>(bw.active.size());
        const int d = bw.expr->dim;
        for (int a = 0; a < na; ++a) {
          Eigen::MatrixXd tmp = L.solve(bw.expr->coefficients[bw.active[a]]);
          bw.S[a] = L.solve(tmp.transpose());
        }
        {  // margin direction, coefficient -I
          Eigen::MatrixXd tmp = L.solve(Eigen::MatrixXd::Identity(d, d));
          bw.S[na] = -(tmp * tmp.transpose());
        }
        for (int a = 0; a <= na; ++a) {
          const int ia = (a < na) ? bw.active[a] : m;
          grad(ia) -= bw.S[a].trace();
          for (int c = a; c <= na; ++c) {
            const int ic = (c < na) ? bw.active[c] : m;
            const double h = bw.S[a].cwiseProduct(bw.S[c]).sum();
            hess(ia, ic) += h;
            if (ia != ic) hess(ic, ia) += h;
          }
        }
      }
      if (!factor_ok) {
        trouble = true;
        break;
      }
      for (int i : lower_bounded) {
        const double s = w(i) - t;
        grad(i) -= 1.0 / s;
        grad(m) += 1.0 / s;
        const double s2 = 1.0 / (s * s);
        hess(i, i) += s2;
        hess(m, m) += s2;
        hess(i, m) -= s2;
        hess(m, i) -= s2;
      }
      for (int i = 0; i < m; ++i) {
        const double lo = 1.0 + w(i);
        const double hi = 1.0 - w(i);
        grad(i) += 1.0 / hi - 1.0 / lo;
        hess(i, i) += 1.0 / (hi * hi) + 1.0 / (lo * lo);
      }

      // Jacobi-equilibrated Newton solve; the raw Hessian mixes coefficient
      // scales spanning many orders of magnitude at high gains.
      const Eigen::VectorXd scale =
          hess.diagonal().cwiseMax(1e-300).cwiseSqrt().cwiseInverse();
      Eigen::MatrixXd hs = scale.asDiagonal() * hess * scale.asDiagonal();
      const Eigen::VectorXd gs = scale.asDiagonal() * grad;
      Eigen::LDLT<Eigen::MatrixXd> ldlt(hs);
      if (ldlt.info() != Eigen::Success) {
        hs.diagonal().array() += 1e-12;
        ldlt.compute(hs);
        if (ldlt.info() != Eigen::Success) {
          trouble = true;
          break;
        }
      }
      dy = scale.asDiagonal() * ldlt.solve(-gs);
      double decrement2 = -grad.dot(dy);
      if (decrement2 < 0.0) decrement2 = 0.0;

      const double f0 = barrier_value(w, t, mu);
      // The barrier value reaches ~mu for large mu, so both the centering
      // test and the descent test must sit above the rounding noise of f.
      const double noise = 1e-13 * (1.0 + std::abs(f0));
      const double centered_tol = std::min(0.03, std::max(1e-10, noise));
      double step = 1.0;
      bool accepted = false;
      while (step > 1e-14) {
        const Eigen::VectorXd wn = w + step * dy.head(m);
        const double tn = t + step * dy(m);
        const double fn = barrier_value(wn, tn, mu);
        if (fn < f0 - 0.25 * step * decrement2 + noise) {
          w = wn;
          t = tn;
          accepted = true;
          break;
        }
        step *= 0.5;
      }
      if (opts.verbosity > 1) {
        std::fprintf(stderr,
                     "[sdp]   inner=%d decr2/2=%.3e step=%.3e f0=%.6e t=%+.6e\n",
                     inner, decrement2 / 2.0, accepted ? step : 0.0, f0, t);
      }
      // A microscopic accepted step moves nothing; the line search is done
      // either way.
      if (!accepted || step < 1e-8) {
        if (decrement2 / 2.0 < 0.04) break;  // approximately centered
        trouble = true;
        break;
      }
      if (decrement2 / 2.0 < centered_tol) break;
    }
    if (opts.verbosity > 0) {
      std::fprintf(stderr, "[sdp] mu=%.3e t=%+.9e newton=%d inner=%d\n", mu, t,
                   newton_total, inner_used);
    }
    mu_last = mu;
    mu *= opts.mu_factor;
  }

  result.w = R * w;
  result.margin = R * t;
  result.gap_bound = 2.0 * R * nu / mu_last;
  result.newton_iterations = newton_total;
  result.converged = !trouble;
  return result;
}

}  // namespace heatstab
