// entanglement.hpp - two-qubit concurrence and ground-state A-C entanglement

#pragma once

#include <array>
#include <optional>
#include <vector>

#include "medent/linalg.hpp"

namespace medent {

/// Subsystem layout A (x) B (x) C, A slowest.
struct TripartiteDims {
    std::size_t a = 2;
    std::size_t b = 2;
    std::size_t c = 2;

    std::size_t total() const noexcept { return a * b * c; }
    std::array<std::size_t, 3> as_array() const noexcept { return {a, b, c}; }
};

struct ConcurrenceResult {
    double value = 0.0;
    /// sqrt of the spin-flip spectrum, non-increasing.
    std::array<double, 4> tilde_lambdas{};
    /// Only meaningful for ground-state queries.
    bool degenerate_ground = false;
};

/// Eigenvalues of rho below this are treated as exact zeros before the
/// spin-flip spectrum is formed; its square roots would otherwise turn
/// round-off into ~1e-8 noise.
inline constexpr double kConcurrenceRankFloor = 1e-14;

/// Wootters concurrence max(0, l1 - l2 - l3 - l4), l_i the non-increasing
/// square roots of the eigenvalues of rho (sy sy) rho* (sy sy).
///
/// Computed as the singular values of tau = W^T (sy sy) W with rho = W W^dagger,
/// which share their squares with the Hermitian partner
/// sqrt(rho) (sy sy) rho* (sy sy) sqrt(rho).
ConcurrenceResult concurrence(const DensityMatrix& rho);

/// Ground level of a Hamiltonian reduced onto a subset of its subsystems.
/// A degenerate level is replaced by the uniform mixture over the level.
struct GroundState {
    double energy = 0.0;
    /// E_1 - E_0 over the two lowest eigenvalues (zero inside a degenerate level).
    double gap = 0.0;
    bool degenerate = false;
    std::size_t multiplicity = 1;
    std::vector<ComplexVector> vectors;
    std::optional<DensityMatrix> reduced;
};

GroundState ground_state(const EigenDecomposition& decomposition, std::span<const std::size_t> dims,
                         std::span<const std::size_t> keep);
GroundState ground_state(const HermitianOperator& h, std::span<const std::size_t> dims,
                         std::span<const std::size_t> keep, const EighOptions& options = {});

/// Concurrence between A and C in the ground state of h on A (x) B (x) C
/// with qubit A and C. Degenerate ground levels use the level-averaged
/// state and set degenerate_ground.
ConcurrenceResult ground_state_ac_concurrence(const HermitianOperator& h, const TripartiteDims& dims,
                                              const EighOptions& options = {});

/// Same, with the ground state already extracted onto AC.
ConcurrenceResult ac_concurrence(const GroundState& ground);

} // namespace medent
