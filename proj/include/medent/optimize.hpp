// optimize.hpp - bounded Nelder-Mead search over local controls on B that
// maximizes (or targets) the A-C ground-state concurrence

#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "medent/entanglement.hpp"
#include "medent/linalg.hpp"
#include "medent/sweep.hpp"

namespace medent::control {

struct Bound {
    double lo = 0.0;
    double hi = 0.0;
};

struct Objective {
    enum class Kind { MaximizeConcurrence, TargetConcurrence };
    Kind kind = Kind::MaximizeConcurrence;
    double target = 0.0;

    static Objective maximize() { return {}; }
    /// Scores -|C - value|, so the optimum is 0.
    static Objective target_concurrence(double value) { return {Kind::TargetConcurrence, value}; }

    double score(double concurrence) const;
};

using ModelFn = std::function<HermitianOperator(std::span<const double>)>;

struct ControlProblem {
    ModelFn model;
    std::size_t control_dim = 0;
    std::vector<Bound> bounds;
    Objective objective;
    TripartiteDims dims;

    /// Throws PreconditionError for a missing model, a bounds/dimension
    /// mismatch, or a non-finite or empty interval.
    void validate() const;
};

struct TraceEntry {
    std::size_t restart = 0;
    std::vector<double> controls;
    double value = 0.0;
    double concurrence = 0.0;
    bool degenerate = false;
    double best_so_far = 0.0;
};

struct OptimizationResult {
    std::vector<double> best_controls;
    double best_value = 0.0;
    double best_concurrence = 0.0;
    bool best_degenerate = false;
    /// Includes failed evaluations and the final re-verification.
    std::size_t evaluations = 0;
    std::size_t failed_evaluations = 0;
    /// One message per failed evaluation.
    std::vector<std::string> failures;
    std::size_t restarts = 0;
    /// Successful search evaluations in order; best_so_far is non-decreasing.
    std::vector<TraceEntry> trace;
    /// Some restart shrank its simplex below the tolerances.
    bool converged = false;
};

struct OptimizeOptions {
    /// Restart converges when the simplex value spread is below
    /// ftol * (1 + |best|) or its extent below xtol times the box size.
    double ftol = 1e-10;
    double xtol = 1e-9;
    /// Initial simplex edge as a fraction of each interval.
    double initial_step = 0.25;
};

/// Multi-start Nelder-Mead (reflection 1, expansion 2, contraction 0.5,
/// shrink 0.5) with clamping to the box. Restart r starts from a uniform
/// point drawn from derive_seed(seed, r). Points whose model or
/// concurrence throws are discarded and count as failed evaluations.
///
/// Throws PreconditionError if budget < control_dim + 2, NumericalError if
/// every evaluation fails, if re-evaluating the best point disagrees, or
/// if the best point is maximally entangled with a non-degenerate ground.
OptimizationResult optimize(const ControlProblem& problem, std::size_t budget, std::uint64_t seed,
                            const OptimizeOptions& options = {});

/// Columns: evaluation, restart, u0..u{n-1}, value, concurrence,
/// degenerate, best_so_far.
std::vector<sweep::Column> trace_schema(std::size_t control_dim);
sweep::SweepResult trace_table(const OptimizationResult& result, std::size_t control_dim);

} // namespace medent::control
