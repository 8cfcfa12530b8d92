#include "medent/optimize.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

#include "medent/errors.hpp"
#include "medent/random.hpp"

namespace medent::control {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kMaximalConcurrence = 1.0 - 1e-6;

struct BudgetExhausted {};

struct Vertex {
    std::vector<double> x;
    double cost = kInf; // -score; +inf for a failed point
};

class Search {
public:
    Search(const ControlProblem& p, std::size_t search_budget, OptimizationResult& r)
        : problem_(p), budget_(search_budget), result_(r) {}

    double cost(std::vector<double>& x, std::size_t restart) {
        if (result_.evaluations >= budget_) throw BudgetExhausted{};
        clamp(x);
        ++result_.evaluations;
        try {
            const HermitianOperator h = problem_.model(x);
            const ConcurrenceResult c = ground_state_ac_concurrence(h, problem_.dims);
            const double value = problem_.objective.score(c.value);
            if (!std::isfinite(value)) throw NumericalError("non-finite objective");
            if (result_.trace.empty() || value > result_.best_value) {
                result_.best_value = value;
                result_.best_controls = x;
                result_.best_concurrence = c.value;
                result_.best_degenerate = c.degenerate_ground;
            }
            result_.trace.push_back({restart, x, value, c.value, c.degenerate_ground, result_.best_value});
            return -value;
        } catch (const std::exception& e) {
            ++result_.failed_evaluations;
            result_.failures.push_back(e.what());
            return kInf;
        }
    }

    /// One Nelder-Mead run; returns true if the simplex converged.
    bool run(std::size_t restart, std::vector<double> start, const OptimizeOptions& opt) {
        const std::size_t n = problem_.control_dim;
        std::vector<Vertex> s(n + 1);
        s[0].x = std::move(start);
        s[0].cost = cost(s[0].x, restart);
        for (std::size_t i = 0; i < n; ++i) {
            const Bound& b = problem_.bounds[i];
            const double step = opt.initial_step * (b.hi - b.lo);
            s[i + 1].x = s[0].x;
            s[i + 1].x[i] += s[0].x[i] + step <= b.hi ? step : -step;
            s[i + 1].cost = cost(s[i + 1].x, restart);
        }

        for (;;) {
            std::stable_sort(s.begin(), s.end(), [](const Vertex& a, const Vertex& b) { return a.cost < b.cost; });
            if (!std::isfinite(s[0].cost)) return false;
            if (converged(s, opt)) return true;

            std::vector<double> centroid(n, 0.0);
            for (std::size_t i = 0; i < n; ++i)
                for (std::size_t k = 0; k < n; ++k) centroid[k] += s[i].x[k] / static_cast<double>(n);
            const auto along = [&](double t) {
                std::vector<double> x(n);
                for (std::size_t k = 0; k < n; ++k) x[k] = centroid[k] + t * (s[n].x[k] - centroid[k]);
                return x;
            };

            Vertex r{along(-1.0)};
            r.cost = cost(r.x, restart);
            if (r.cost < s[0].cost) {
                Vertex e{along(-2.0)};
                e.cost = cost(e.x, restart);
                s[n] = e.cost < r.cost ? std::move(e) : std::move(r);
                continue;
            }
            if (r.cost < s[n - 1].cost) {
                s[n] = std::move(r);
                continue;
            }
            const bool outside = r.cost < s[n].cost;
            Vertex c{along(outside ? -0.5 : 0.5)};
            c.cost = cost(c.x, restart);
            if (outside ? c.cost <= r.cost : c.cost < s[n].cost) {
                s[n] = std::move(c);
                continue;
            }
            for (std::size_t i = 1; i <= n; ++i) {
                for (std::size_t k = 0; k < n; ++k) s[i].x[k] = s[0].x[k] + 0.5 * (s[i].x[k] - s[0].x[k]);
                s[i].cost = cost(s[i].x, restart);
            }
        }
    }

private:
    void clamp(std::vector<double>& x) const {
        for (std::size_t k = 0; k < x.size(); ++k) x[k] = std::clamp(x[k], problem_.bounds[k].lo, problem_.bounds[k].hi);
    }

    bool converged(const std::vector<Vertex>& s, const OptimizeOptions& opt) const {
        const double best = s.front().cost;
        const double worst = s.back().cost;
        if (std::isfinite(worst) && worst - best <= opt.ftol * (1.0 + std::abs(best))) return true;
        double extent = 0.0;
        for (std::size_t i = 1; i < s.size(); ++i)
            for (std::size_t k = 0; k < s[i].x.size(); ++k) {
                const Bound& b = problem_.bounds[k];
                const double width = b.hi > b.lo ? b.hi - b.lo : 1.0;
                extent = std::max(extent, std::abs(s[i].x[k] - s[0].x[k]) / width);
            }
        return extent <= opt.xtol;
    }

    const ControlProblem& problem_;
    std::size_t budget_;
    OptimizationResult& result_;
};

} // namespace

double Objective::score(double concurrence) const {
    switch (kind) {
    case Kind::MaximizeConcurrence: return concurrence;
    case Kind::TargetConcurrence: return -std::abs(concurrence - target);
    }
    return concurrence;
}

void ControlProblem::validate() const {
    if (!model) throw PreconditionError("control problem has no model");
    if (control_dim == 0) throw PreconditionError("control dimension must be positive");
    if (bounds.size() != control_dim)
        throw PreconditionError("expected " + std::to_string(control_dim) + " bounds, got " +
                                std::to_string(bounds.size()));
    for (const Bound& b : bounds)
        if (!std::isfinite(b.lo) || !std::isfinite(b.hi) || b.lo > b.hi)
            throw PreconditionError("bounds must be finite intervals with lo <= hi");
    if (objective.kind == Objective::Kind::TargetConcurrence && !(objective.target >= 0.0 && objective.target <= 1.0))
        throw PreconditionError("target concurrence must lie in [0, 1]");
}

OptimizationResult optimize(const ControlProblem& problem, std::size_t budget, std::uint64_t seed,
                            const OptimizeOptions& options) {
    problem.validate();
    if (budget < problem.control_dim + 2)
        throw PreconditionError("budget " + std::to_string(budget) + " is below control_dim + 2 = " +
                                std::to_string(problem.control_dim + 2));

    OptimizationResult result;
    // one evaluation is kept back for re-verifying the best point
    Search search(problem, budget - 1, result);
    try {
        for (std::size_t restart = 0;; ++restart) {
            Rng rng = make_rng(seed, restart);
            std::vector<double> start(problem.control_dim);
            for (std::size_t k = 0; k < start.size(); ++k) {
                const Bound& b = problem.bounds[k];
                start[k] = b.lo == b.hi ? b.lo : std::uniform_real_distribution<double>(b.lo, b.hi)(rng);
            }
            ++result.restarts;
            if (search.run(restart, std::move(start), options)) result.converged = true;
        }
    } catch (const BudgetExhausted&) {
    }

    if (result.trace.empty())
        throw NumericalError("all " + std::to_string(result.evaluations) + " objective evaluations failed" +
                             (result.failures.empty() ? "" : ": " + result.failures.back()));

    ++result.evaluations;
    const ConcurrenceResult check = ground_state_ac_concurrence(problem.model(result.best_controls), problem.dims);
    const double value = problem.objective.score(check.value);
    if (std::abs(value - result.best_value) > 1e-12 * (1.0 + std::abs(value)))
        throw NumericalError("re-evaluating the best controls gave " + std::to_string(value) + " instead of " +
                             std::to_string(result.best_value));
    if (check.value > kMaximalConcurrence && !check.degenerate_ground)
        throw NumericalError("maximal A-C concurrence " + std::to_string(check.value) +
                             " with a non-degenerate ground state");
    return result;
}

std::vector<sweep::Column> trace_schema(std::size_t control_dim) {
    using sweep::ColumnType;
    std::vector<sweep::Column> schema{{"evaluation", ColumnType::Integer}, {"restart", ColumnType::Integer}};
    for (std::size_t k = 0; k < control_dim; ++k) schema.push_back({"u" + std::to_string(k), ColumnType::Real});
    schema.push_back({"value", ColumnType::Real});
    schema.push_back({"concurrence", ColumnType::Real});
    schema.push_back({"degenerate", ColumnType::Boolean});
    schema.push_back({"best_so_far", ColumnType::Real});
    return schema;
}

sweep::SweepResult trace_table(const OptimizationResult& result, std::size_t control_dim) {
    sweep::SweepResult t;
    t.schema = trace_schema(control_dim);
    for (std::size_t i = 0; i < result.trace.size(); ++i) {
        const TraceEntry& e = result.trace[i];
        std::vector<sweep::Cell> row{static_cast<std::int64_t>(i), static_cast<std::int64_t>(e.restart)};
        for (double u : e.controls) row.emplace_back(u);
        row.emplace_back(e.value);
        row.emplace_back(e.concurrence);
        row.emplace_back(e.degenerate);
        row.emplace_back(e.best_so_far);
        t.append(std::move(row));
    }
    return t;
}

} // namespace medent::control
