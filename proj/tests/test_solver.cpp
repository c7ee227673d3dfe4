#include <random>

#include <doctest.h>
#include <Eigen/Eigenvalues>

#include "heatstab/feasibility.hpp"
#include "heatstab/hierarchy.hpp"
#include "heatstab/lmi.hpp"
#include "heatstab/system.hpp"

using namespace heatstab;

namespace {

SystemData scalar_system(double a, double b, double c, double g) {
  SystemData sys;
  sys.A.resize(1, 1);
  sys.A << a;
  sys.B.resize(1, 1);
  sys.B << b;
  sys.C.resize(1, 1);
  sys.C << c;
  sys.gamma = g;
  return sys;
}

double lambda_min(const Eigen::MatrixXd& m) {
  return Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(m, Eigen::EigenvaluesOnly)
      .eigenvalues()
      .minCoeff();
}
double lambda_max(const Eigen::MatrixXd& m) {
  return Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(m, Eigen::EigenvaluesOnly)
      .eigenvalues()
      .maxCoeff();
}

Eigen::VectorXd witness_vector(const SystemData& sys, int N, const Witness& w) {
  const auto lo = DecisionLayout::make(sys.n(), N);
  DecisionBlocks b{w.P, w.Q, w.T, w.alpha, w.beta};
  return pack(lo, b);
}

}  // namespace

TEST_CASE("equilibrium precheck") {
  SystemData sys;
  sys.A = -Eigen::MatrixXd::Identity(2, 2);
  sys.B = Eigen::MatrixXd::Zero(2, 1);
  sys.C = Eigen::MatrixXd::Zero(1, 2);
  sys.gamma = 1.0;
  CHECK(check_equilibrium(sys));

  CHECK_FALSE(check_equilibrium(scalar_system(1.0, 1.0, -1.0, 1.0)));
  CHECK(check_equilibrium(paper_example(100.0, 1.0)));
}

TEST_CASE("stable decoupled system is certified at order zero") {
  const SystemData sys = scalar_system(-1.0, 0.0, 0.0, 1.0);
  const auto rep = solve_feasibility(sys, 0);
  CHECK(rep.feasible);
  CHECK(rep.status == SolveStatus::Optimal);
  CHECK(rep.margin > 1e-7);
  REQUIRE(rep.witness.has_value());
  CHECK(validate_witness(sys, 0, *rep.witness).pass);
}

TEST_CASE("benchmark case: gamma = 1 feasible at order 0") {
  const SystemData sys = paper_example(100.0, 1.0);
  const auto rep = solve_feasibility(sys, 0);
  CHECK(rep.feasible);
  CHECK(rep.margin > 1e-7);
  REQUIRE(rep.witness.has_value());
  const auto val = validate_witness(sys, 0, *rep.witness);
  CHECK(val.pass);
  CHECK(val.lambda_min_phi > 0.0);
  CHECK(val.lambda_max_psi < 0.0);
}

TEST_CASE("benchmark case: gamma = 0.05 infeasible at order 4, feasible at 5") {
  const SystemData sys = paper_example(100.0, 0.05);
  const auto rep4 = solve_feasibility(sys, 4);
  CHECK_FALSE(rep4.feasible);
  CHECK(rep4.status == SolveStatus::Infeasible);
  const auto rep5 = solve_feasibility(sys, 5);
  CHECK(rep5.feasible);
  CHECK(rep5.status == SolveStatus::Optimal);
}

TEST_CASE("benchmark case: gamma = 0.2 infeasible at low orders") {
  const SystemData sys = paper_example(100.0, 0.2);
  for (int N : {0, 1, 2, 3}) {
    const auto rep = solve_feasibility(sys, N);
    CHECK_FALSE(rep.feasible);
    CHECK(rep.status == SolveStatus::Infeasible);
  }
}

TEST_CASE("precheck failure throws") {
  const SystemData sys = scalar_system(1.0, 1.0, -1.0, 1.0);
  CHECK_THROWS_AS(solve_feasibility(sys, 0), std::invalid_argument);
  CHECK_THROWS_AS(min_feasible_order(sys, 2), std::invalid_argument);
}

TEST_CASE("iteration cap reports numerical trouble, not infeasible") {
  SolverOptions opts;
  opts.max_iterations = 3;
  const auto rep = solve_feasibility(paper_example(100.0, 1.0), 0, opts);
  CHECK(rep.status == SolveStatus::NumericalTrouble);
  CHECK_FALSE(rep.feasible);
}

TEST_CASE("witness validation catches sign violations") {
  const SystemData sys = paper_example(100.0, 1.0);
  const auto rep = solve_feasibility(sys, 0);
  REQUIRE(rep.witness.has_value());

  Witness bad = *rep.witness;
  bad.alpha = -1.0;
  const auto val = validate_witness(sys, 0, bad);
  CHECK_FALSE(val.pass);
  CHECK(val.reason == "alpha nonpositive");

  Witness zero = *rep.witness;
  zero.P.setZero();
  zero.Q.setZero();
  zero.T.setZero();
  zero.alpha = 0.0;
  zero.beta = 0.0;
  CHECK_FALSE(validate_witness(sys, 0, zero).pass);
}

TEST_CASE("returned witnesses satisfy their stated margins") {
  for (double gamma : {1.0, 0.6}) {
    const SystemData sys = paper_example(100.0, gamma);
    const auto rep = solve_feasibility(sys, 1);
    REQUIRE(rep.feasible);
    const Witness& w = *rep.witness;
    const Eigen::VectorXd wv = witness_vector(sys, 1, w);
    const double tol = 1e-7 * (1.0 + wv.cwiseAbs().maxCoeff());
    CHECK(lambda_min(build_phi(4, 1).evaluate(wv)) >= w.margin - tol);
    CHECK(lambda_max(assemble_psi(sys, 1).evaluate(wv)) <= -w.margin + tol);
    CHECK(w.alpha >= w.margin - tol);
    CHECK(w.beta >= w.margin - tol);
  }
}

TEST_CASE("witnesses scale homogeneously") {
  // 20 feasible instances spread over the benchmark family
  const double Ks[5] = {1.0, 10.0, 50.0, 100.0, 500.0};
  const double gammas[4] = {0.8, 1.0, 2.0, 5.0};
  int checked = 0;
  for (double K : Ks) {
    for (double g : gammas) {
      const SystemData sys = paper_example(K, g);
      const auto hr = min_feasible_order(sys, 4);
      REQUIRE(hr.min_order.has_value());
      const int N = *hr.min_order;
      const auto rep = solve_feasibility(sys, N);
      REQUIRE(rep.feasible);
      const Witness& w = *rep.witness;
      for (double c : {0.5, 2.0, 10.0}) {
        Witness scaled = w;
        scaled.P *= c;
        scaled.Q *= c;
        scaled.T *= c;
        scaled.alpha *= c;
        scaled.beta *= c;
        const Eigen::VectorXd wv = witness_vector(sys, N, scaled);
        CHECK(lambda_min(build_phi(4, N).evaluate(wv)) > 0.0);
        CHECK(lambda_max(assemble_psi(sys, N).evaluate(wv)) < 0.0);
      }
      ++checked;
    }
  }
  CHECK(checked == 20);
}

TEST_CASE("margins scale exactly with the norm box") {
  const SystemData sys = paper_example(100.0, 1.0);
  SolverOptions small;
  small.norm_box = 1.0;
  SolverOptions large;
  large.norm_box = 1e6;
  const auto r1 = solve_feasibility(sys, 0, small);
  const auto r2 = solve_feasibility(sys, 0, large);
  REQUIRE(r1.feasible);
  REQUIRE(r2.feasible);
  CHECK(r2.margin == doctest::Approx(1e6 * r1.margin).epsilon(1e-12));
  CHECK(r1.solver_iterations == r2.solver_iterations);
}

TEST_CASE("margin threshold decides feasibility") {
  const SystemData sys = paper_example(100.0, 1.0);
  const auto rep = solve_feasibility(sys, 0);
  REQUIRE(rep.feasible);
  SolverOptions strict;
  strict.margin_threshold = 10.0 * rep.margin;
  const auto rep2 = solve_feasibility(sys, 0, strict);
  CHECK_FALSE(rep2.feasible);
  CHECK(rep2.status == SolveStatus::Infeasible);
  CHECK(rep2.margin == rep.margin);
}

TEST_CASE("solves are deterministic") {
  const SystemData sys = paper_example(100.0, 1.0);
  const auto r1 = solve_feasibility(sys, 2);
  const auto r2 = solve_feasibility(sys, 2);
  CHECK(r1.feasible == r2.feasible);
  CHECK(r1.margin == r2.margin);
  CHECK(r1.solver_iterations == r2.solver_iterations);
}

TEST_CASE("minimum feasible order for the benchmark cases") {
  const auto ra = min_feasible_order(paper_example(100.0, 1.0), 2);
  REQUIRE(ra.min_order.has_value());
  CHECK(*ra.min_order == 0);
  CHECK(ra.attempts.size() == 1);  // early exit at the first feasible order

  const auto rb = min_feasible_order(paper_example(100.0, 0.2), 3);
  CHECK_FALSE(rb.min_order.has_value());
  CHECK(rb.attempts.size() == 4);
}

TEST_CASE("full scan records every order") {
  const auto r = min_feasible_order(paper_example(100.0, 1.0), 2, {}, true);
  REQUIRE(r.min_order.has_value());
  CHECK(*r.min_order == 0);
  CHECK(r.attempts.size() == 3);
  for (const auto& att : r.attempts) CHECK(att.feasible);
}

TEST_CASE("sweep basics") {
  const SystemFamily family = [](double K, double g) { return paper_example(K, g); };

  SweepOptions opts;
  opts.N_max = 0;
  Eigen::VectorXd k1(1), g1(1);
  k1 << 100.0;
  g1 << 1.0;
  const auto map1 = sweep(family, k1, g1, opts);
  REQUIRE(map1.cells.size() == 1);
  CHECK(map1.at(0, 0).min_order == 0);

  CHECK_THROWS_AS(sweep(family, Eigen::VectorXd(), g1, opts), std::invalid_argument);
}

TEST_CASE("sweep records per-cell errors without aborting") {
  const SystemFamily singular = [](double, double g) {
    return scalar_system(1.0, 1.0, -1.0, g);
  };
  SweepOptions opts;
  opts.N_max = 1;
  Eigen::VectorXd kg = log_spaced(1.0, 10.0, 2);
  Eigen::VectorXd gg = log_spaced(0.5, 2.0, 2);
  const auto map = sweep(singular, kg, gg, opts);
  for (const auto& cell : map.cells) {
    CHECK(cell.error);
    CHECK(cell.min_order == -1);
    CHECK_FALSE(cell.error_message.empty());
  }
}

TEST_CASE("sweep equals the union of single-cell runs") {
  const SystemFamily family = [](double K, double g) { return paper_example(K, g); };
  Eigen::VectorXd kg = log_spaced(50.0, 200.0, 2);
  Eigen::VectorXd gg = log_spaced(0.9, 1.2, 2);
  SweepOptions opts;
  opts.N_max = 1;
  opts.jobs = 2;
  const auto map = sweep(family, kg, gg, opts);
  for (int ik = 0; ik < 2; ++ik) {
    for (int ig = 0; ig < 2; ++ig) {
      const auto single = min_feasible_order(family(kg(ik), gg(ig)), opts.N_max);
      CHECK(map.at(ik, ig).min_order == single.min_order.value_or(-1));
    }
  }
}

TEST_CASE("log grid and CSV layout") {
  const auto g = log_spaced(0.01, 100.0, 5);
  CHECK(g(0) == doctest::Approx(0.01));
  CHECK(g(2) == doctest::Approx(1.0));
  CHECK(g(4) == doctest::Approx(100.0));
  for (int i = 1; i < 5; ++i) CHECK(g(i) > g(i - 1));

  const SystemFamily family = [](double K, double gm) { return paper_example(K, gm); };
  SweepOptions opts;
  opts.N_max = 0;
  Eigen::VectorXd kg(2), gg(2);
  kg << 90.0, 110.0;
  gg << 0.9, 1.1;
  const auto map = sweep(family, kg, gg, opts);
  std::ostringstream os;
  write_csv(map, os);
  const std::string csv = os.str();
  CHECK(csv.rfind("K,gamma,min_order,wall_ms\n", 0) == 0);
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 5);
  // row-major: first two rows carry K = 90
  std::istringstream is(csv);
  std::string line;
  std::getline(is, line);
  std::getline(is, line);
  CHECK(line.rfind("90,0.9", 0) == 0);
  std::getline(is, line);
  CHECK(line.rfind("90,1.1", 0) == 0);
}
