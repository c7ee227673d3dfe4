#include "heatstab/hierarchy.hpp"

#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <stdexcept>
#include <thread>

namespace heatstab {

HierarchyResult min_feasible_order(const SystemData& sys, int N_max,
                                   const SolverOptions& opts, bool full_scan) {
  sys.validate();
  if (N_max < 0) throw std::invalid_argument("min_feasible_order: N_max must be >= 0");
  if (!check_equilibrium(sys)) {
    throw std::invalid_argument("min_feasible_order: equilibrium precheck failed (A + B C singular)");
  }
  HierarchyResult result;
  for (int N = 0; N <= N_max; ++N) {
    const FeasibilityReport rep = solve_feasibility(sys, N, opts);
    result.attempts.push_back(
        {N, rep.feasible, rep.margin, rep.status, rep.wall_seconds});
    if (rep.feasible && !result.min_order) {
      result.min_order = N;
      if (!full_scan) break;
    }
  }
  return result;
}

Eigen::VectorXd log_spaced(double lo, double hi, int count) {
  if (count < 1 || !(lo > 0.0) || !(hi >= lo)) {
    throw std::invalid_argument("log_spaced: need count >= 1 and 0 < lo <= hi");
  }
  Eigen::VectorXd g(count);
  if (count == 1) {
    g(0) = lo;
    return g;
  }
  const double llo = std::log(lo);
  const double lhi = std::log(hi);
  for (int i = 0; i < count; ++i) {
    g(i) = std::exp(llo + (lhi - llo) * i / (count - 1));
  }
  return g;
}

StabilityMap sweep(const SystemFamily& family, const Eigen::VectorXd& K_grid,
                   const Eigen::VectorXd& gamma_grid, const SweepOptions& opts) {
  if (K_grid.size() == 0 || gamma_grid.size() == 0) {
    throw std::invalid_argument("sweep: grids must be nonempty");
  }
  for (Eigen::Index i = 1; i < K_grid.size(); ++i) {
    if (!(K_grid(i) > K_grid(i - 1))) {
      throw std::invalid_argument("sweep: K grid must be strictly increasing");
    }
  }
  for (Eigen::Index i = 1; i < gamma_grid.size(); ++i) {
    if (!(gamma_grid(i) > gamma_grid(i - 1))) {
      throw std::invalid_argument("sweep: gamma grid must be strictly increasing");
    }
  }

  StabilityMap map;
  map.K_grid = K_grid;
  map.gamma_grid = gamma_grid;
  map.N_max = opts.N_max;
  const size_t total = static_cast<size_t>(K_grid.size()) * gamma_grid.size();
  map.cells.resize(total);

  std::atomic<size_t> next{0};
  const auto worker = [&]() {
    while (true) {
      const size_t idx = next.fetch_add(1);
      if (idx >= total) return;
      const auto ik = idx / gamma_grid.size();
      const auto ig = idx % gamma_grid.size();
      CellResult& cell = map.cells[idx];
      const auto start = std::chrono::steady_clock::now();
      try {
        const SystemData sys = family(K_grid(ik), gamma_grid(ig));
        const HierarchyResult hr =
            min_feasible_order(sys, opts.N_max, opts.solver, opts.full_scan);
        cell.min_order = hr.min_order.value_or(-1);
        cell.attempts = hr.attempts;
      } catch (const std::exception& e) {
        cell.error = true;
        cell.error_message = e.what();
        cell.min_order = -1;
      }
      cell.wall_ms = std::chrono::duration<double, std::milli>(
                         std::chrono::steady_clock::now() - start)
                         .count();
    }
  };

  const int jobs = std::max(1, std::min<int>(opts.jobs, static_cast<int>(total)));
  if (jobs == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(jobs);
    for (int j = 0; j < jobs; ++j) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }
  return map;
}

void write_csv(const StabilityMap& map, std::ostream& os) {
  os << "K,gamma,min_order,wall_ms\n";
  char buf[128];
  for (Eigen::Index ik = 0; ik < map.K_grid.size(); ++ik) {
    for (Eigen::Index ig = 0; ig < map.gamma_grid.size(); ++ig) {
      const CellResult& cell = map.at(static_cast<int>(ik), static_cast<int>(ig));
      std::snprintf(buf, sizeof(buf), "%.17g,%.17g,%d,%.3f\n", map.K_grid(ik),
                    map.gamma_grid(ig), cell.min_order, cell.wall_ms);
      os << buf;
    }
  }
}

}  // namespace heatstab
