// theorem.hpp - numerical checks of the exchange-symmetry factorization
// theorem: for A<->C symmetric Hamiltonians a non-degenerate eigenstate with
// pure rho_B is fully factorized, so pure A-C entanglement needs degeneracy

#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "medent/entanglement.hpp"
#include "medent/linalg.hpp"
#include "medent/sweep.hpp"

namespace medent::theorem {

/// Schmidt coefficients at or above this count towards the rank.
inline constexpr double kSchmidtRankTol = 1e-7;
/// rho_B counts as pure at purity >= 1 - kPureTol.
inline constexpr double kPureTol = 1e-10;
/// Fully factorized needs all single-site purities >= 1 - kFactorizedTol.
inline constexpr double kFactorizedTol = 1e-8;
/// Rayleigh quotients within a degenerate family must agree this closely.
inline constexpr double kFamilyEnergyTol = 1e-9;

/// Permutation matrix exchanging the A and C factors (requires a == c).
ComplexMatrix exchange_ac(const TripartiteDims& dims);

/// ||S H S - H||_F <= rel_tol * ||H||_F. Throws DimensionError if a != c or
/// the dimensions do not match h.
bool is_exchange_symmetric(const HermitianOperator& h, const TripartiteDims& dims, double rel_tol = 1e-10);

struct EigenstateAnalysis {
    std::size_t index = 0;
    double energy = 0.0;
    bool is_degenerate = false;
    double purity_a = 1.0;
    double purity_b = 1.0;
    double purity_c = 1.0;
    double purity_ac = 1.0;
    /// Schmidt rank across A | BC; for pure rho_B this is the A | C rank of omega_AC.
    std::size_t schmidt_rank_ac = 1;
    /// Only when a == c == 2.
    std::optional<double> ac_concurrence;
    bool fully_factorized = false;
    bool pure_b = false;
    /// <psi|S|psi> for the A<->C exchange S (only when a == c).
    std::optional<double> exchange_parity;
};

struct FamilyCheck {
    std::size_t index = 0;
    std::size_t terms = 0;
    /// max |<t|H|t> - E| over the family terms and random combinations.
    double max_deviation = 0.0;
    bool passed = false;
};

struct AnalysisReport {
    bool symmetric = false;
    std::optional<std::string> warning;
    std::vector<EigenstateAnalysis> states;
    /// Indices of non-degenerate, pure-rho_B eigenstates that are not
    /// product across A | BC. Empty unless the theorem fails; never filled
    /// for non-symmetric input.
    std::vector<std::size_t> violations;
    /// One per eigenstate of the form sum_j c_j |u_j>|beta>|v_j> with >= 2 terms.
    std::vector<FamilyCheck> families;
};

EigenstateAnalysis analyze_state(std::span<const cplx> psi, const TripartiteDims& dims);

/// Analyzes every eigenvector of `decomposition`, which may have had its
/// degenerate levels rotated by the caller.
AnalysisReport analyze_eigenstates(const HermitianOperator& h, const EigenDecomposition& decomposition,
                                   const TripartiteDims& dims, std::uint64_t family_seed = 0);
AnalysisReport analyze_eigenstates(const HermitianOperator& h, const TripartiteDims& dims,
                                   std::uint64_t family_seed = 0);

/// d x d generalized Gell-Mann basis, identity first, then symmetric,
/// antisymmetric and diagonal generators; d^2 Hermitian matrices.
std::vector<ComplexMatrix> generalized_gell_mann(std::size_t d);

enum class Family { Gaussian, Commuting, Diagonal };
std::string_view to_string(Family f);

/// Random Hamiltonian on qubit (x) C^dB (x) qubit built as h_AB + mirror(h_AB) + H_B.
///  Gaussian: standard-normal coefficients on Pauli (x) Gell-Mann products.
///  Commuting: B couplings share a random eigenbasis.
///  Diagonal: sigma^3 couplings with diagonal B operators.
/// break_symmetry adds an extra random B-C term, destroying the mirror.
HermitianOperator random_symmetric_hamiltonian(std::size_t d_b, Family family, Rng& rng, bool break_symmetry = false);

struct TrialSummary {
    std::size_t trial = 0;
    Family family = Family::Gaussian;
    bool symmetric = true;
    std::size_t eigenstates = 0;
    std::size_t degenerate_levels = 0;
    /// Non-degenerate eigenstates with pure rho_B (the theorem's hypothesis).
    std::size_t hypothesis_hits = 0;
    std::size_t counterexamples = 0;
    /// Counterexamples odd under A<->C exchange (omega_AC antisymmetric).
    std::size_t antisymmetric_counterexamples = 0;
    std::size_t family_checks = 0;
    std::size_t family_failures = 0;
    double max_family_deviation = 0.0;
};

struct Counterexample {
    std::size_t trial = 0;
    Family family = Family::Gaussian;
    EigenstateAnalysis state;
};

struct FuzzReport {
    std::size_t trials = 0;
    std::size_t d_b = 0;
    std::uint64_t seed = 0;
    bool break_symmetry = false;
    std::vector<TrialSummary> per_trial;
    std::vector<Counterexample> counterexamples;
    std::size_t antisymmetric_counterexamples = 0;
    /// Trials excluded from theorem checking because symmetry failed.
    std::size_t symmetry_violations = 0;
    std::size_t hypothesis_hits = 0;
    std::size_t family_checks = 0;
    std::size_t family_failures = 0;
    double max_family_deviation = 0.0;

    bool clean() const { return counterexamples.empty() && family_failures == 0; }
};

/// Families cycle Gaussian, Commuting, Diagonal by trial index. Degenerate
/// levels are rotated by a seeded Haar unitary before analysis so that
/// entangled members of degenerate families show up. Trials run on
/// `threads` workers; results do not depend on the thread count.
/// Throws PreconditionError if trials == 0 or d_b == 0.
FuzzReport theorem_fuzz(std::size_t trials, std::size_t d_b, std::uint64_t seed, bool break_symmetry = false,
                        unsigned threads = 0);

/// Columns: trial, family, symmetric, eigenstates, degenerate_levels,
/// hypothesis_hits, counterexamples, antisymmetric_counterexamples,
/// family_checks, family_failures, max_family_deviation.
sweep::SweepResult fuzz_table(const FuzzReport& report);

struct CorollaryReport {
    bool symmetric = false;
    double energy = 0.0;
    bool degenerate = false;
    double concurrence = 0.0;
    double purity_ac = 1.0;
    /// Non-degenerate with concurrence > 0.01 requires purity_ac < 1 - 1e-6.
    bool mixed_clause = true;
    /// Concurrence > 1 - 1e-6 requires a degenerate ground level.
    bool maximal_clause = true;

    bool passed() const { return mixed_clause && maximal_clause; }
};

inline constexpr double kEntangledThreshold = 0.01;
inline constexpr double kCorollaryPurityGap = 1e-6;

/// Ground-level corollaries for qubit A and C (dims.a == dims.c == 2).
CorollaryReport corollary_check(const HermitianOperator& h, const TripartiteDims& dims);
/// Same clauses applied to an already computed ground-state summary.
CorollaryReport corollary_check(bool degenerate, double concurrence, double purity_ac);

} // namespace medent::theorem
