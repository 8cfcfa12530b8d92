// ising_sweep.hpp - ground-state A-C entanglement of the Ising chain over a
// (delta, lambda) grid

#pragma once

#include <vector>

#include "medent/entanglement.hpp"
#include "medent/sweep.hpp"

namespace medent::qubits {

struct IsingGroundPoint {
    double energy = 0.0;
    double gap = 0.0;
    double concurrence = 0.0;
    bool degenerate = false;
    double purity_ac = 1.0;
};

/// Ground level of build_ising({.delta, .lam}) reduced onto A and C.
IsingGroundPoint ising_ground_point(double delta, double lam);

/// Columns: delta, lambda, ground_energy, gap, concurrence, degenerate, status.
std::vector<sweep::Column> ising_sweep_schema();

/// One row per (delta, lambda), delta slowest. Grids must be non-empty and
/// non-decreasing; failed points are flagged "failed" with NaN numbers.
sweep::SweepResult ising_sweep(const std::vector<double>& deltas, const std::vector<double>& lambdas,
                               unsigned threads = 0);

} // namespace medent::qubits
