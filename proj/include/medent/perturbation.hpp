// perturbation.hpp - degenerate Rayleigh-Schrodinger perturbation theory to
// second order, and the small-delta Ising ground state built on it

#pragma once

#include <array>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "medent/linalg.hpp"

namespace medent::perturbation {

struct DegeneratePTOptions {
    /// Subspace levels must agree within this fraction of max(1, spectral range of h0).
    double degeneracy_rel_tol = 1e-9;
    /// Outside levels closer than this (same scale) to the subspace are a resonance.
    double resonance_rel_tol = 1e-9;
    EighOptions eigh{};
};

/// Result for an m-fold degenerate level E0 of h0 under h0 + v.
/// Entries are ordered by ascending second-order energy.
struct DegeneratePT {
    double unperturbed_energy = 0.0;
    /// E0 + eigenvalues of the effective Hamiltonian.
    std::vector<double> energies;
    /// W1 + W2 in the subspace basis handed in (m x m).
    ComplexMatrix effective_hamiltonian;
    std::vector<ComplexVector> zeroth_order;
    /// sum_{k outside} |k><k|v|psi0>/(E0 - E_k); no in-subspace part.
    std::vector<ComplexVector> first_order;
};

/// `subspace` holds positions in the ascending spectrum of h0.
/// With `reference` set, each zeroth-order state gets a phase making its
/// overlap with the reference real and positive.
///
/// Throws PreconditionError if the subspace is empty, out of range or not
/// degenerate, DimensionError on mismatched operators, NumericalError on a
/// resonant outside level.
DegeneratePT degenerate_pt2(const HermitianOperator& h0, const HermitianOperator& v,
                            std::span<const std::size_t> subspace, const ComplexVector* reference = nullptr,
                            const DegeneratePTOptions& options = {});

/// Perturbative Ising ground state
///   1/K { g1 + g2 + delta [ |0>(c1 a3 + c2 a4)|1> + |1>(c3 a3 + c4 a4)|0> ] }
/// with the phase of g2 chosen so the zeroth-order state is (g1 + g2)/sqrt(2).
struct PerturbativeGroundState {
    ComplexVector amplitudes;
    std::array<cplx, 4> constants{};
    double normalization = 0.0;
    /// Order of `energy` in delta.
    int order = 2;
    double energy = 0.0;
    ComplexVector g1;
    ComplexVector g2;
    /// delta = 0: amplitudes are the symmetric combination of a degenerate pair.
    bool degenerate = false;
    std::optional<std::string> warning;
};

/// Largest delta treated as small without a warning.
inline constexpr double kPerturbativeDeltaLimit = 0.2;

/// Ising with J = delta0 = lambda0 = 1. Throws PreconditionError for
/// negative or non-finite delta or non-finite lam.
PerturbativeGroundState ising_pt_ground_state(double lam, double delta);

} // namespace medent::perturbation
