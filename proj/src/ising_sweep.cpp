#include "medent/ising_sweep.hpp"

#include <array>
#include <limits>
#include <string>

#include "medent/errors.hpp"
#include "medent/qubits.hpp"

namespace medent::qubits {

namespace {

void require_grid(const std::vector<double>& g, const char* name) {
    if (g.empty()) throw PreconditionError(std::string("ising_sweep: ") + name + " grid is empty");
    for (std::size_t i = 1; i < g.size(); ++i)
        if (g[i] < g[i - 1]) throw PreconditionError(std::string("ising_sweep: ") + name + " grid must be monotone");
}

} // namespace

IsingGroundPoint ising_ground_point(double delta, double lam) {
    static constexpr std::array<std::size_t, 3> dims{2, 2, 2};
    static constexpr std::array<std::size_t, 2> keep{0, 2};
    const GroundState g = ground_state(build_ising({.delta = delta, .lam = lam}), dims, keep);
    IsingGroundPoint p;
    p.energy = g.energy;
    p.gap = g.gap;
    p.degenerate = g.degenerate;
    p.concurrence = ac_concurrence(g).value;
    p.purity_ac = purity(*g.reduced);
    return p;
}

std::vector<sweep::Column> ising_sweep_schema() {
    using sweep::ColumnType;
    return {{"delta", ColumnType::Real},         {"lambda", ColumnType::Real},
            {"ground_energy", ColumnType::Real}, {"gap", ColumnType::Real},
            {"concurrence", ColumnType::Real},   {"degenerate", ColumnType::Boolean},
            {"status", ColumnType::Text}};
}

sweep::SweepResult ising_sweep(const std::vector<double>& deltas, const std::vector<double>& lambdas,
                               unsigned threads) {
    require_grid(deltas, "delta");
    require_grid(lambdas, "lambda");
    const std::size_t nl = lambdas.size();
    auto point = [&](std::size_t i) -> std::vector<sweep::Cell> {
        const double delta = deltas[i / nl];
        const double lam = lambdas[i % nl];
        try {
            const auto p = ising_ground_point(delta, lam);
            return {delta, lam, p.energy, p.gap, p.concurrence, p.degenerate, std::string("ok")};
        } catch (const std::exception&) {
            const double nan = std::numeric_limits<double>::quiet_NaN();
            return {delta, lam, nan, nan, nan, false, std::string("failed")};
        }
    };
    sweep::SweepResult result;
    result.schema = ising_sweep_schema();
    for (auto& row : sweep::parallel_map(deltas.size() * nl, point, threads)) result.append(std::move(row));
    return result;
}

} // namespace medent::qubits
