// dicke.hpp - two atoms coupled through one truncated field mode:
// Tavis-Cummings (H1), with counter-rotating terms (H2), and with the
// quadratic field term (H3)

#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "medent/entanglement.hpp"
#include "medent/linalg.hpp"
#include "medent/sweep.hpp"

namespace medent::dicke {

enum class Variant { H1, H2, H3 };

std::string_view to_string(Variant v);
/// Accepts "h1"/"H1" etc. Throws PreconditionError otherwise.
Variant parse_variant(std::string_view text);

/// Basis atom1 (x) atom2 (x) field, field index fastest.
/// sigma+ = |0><1|, so |0> is the excited atomic state.
struct DickeConfig {
    double omega_a = 1.0;
    double omega_f = 1.0;
    double kappa = 0.0;
    /// Quadratic coefficient; unset means lam_ratio * kappa^2 / omega_a.
    std::optional<double> lam;
    double lam_ratio = 1.0;
    double lam_tilde = 1.0;
    std::size_t n_max = 40;
    Variant variant = Variant::H1;

    std::size_t dim() const { return 4 * (n_max + 1); }
    double effective_lam() const { return lam.value_or(lam_ratio * kappa * kappa / omega_a); }
    /// Throws PreconditionError on out-of-domain fields.
    void validate() const;
};

struct BosonicOperators {
    ComplexMatrix a;
    ComplexMatrix a_dagger;
    ComplexMatrix number;

    explicit BosonicOperators(std::size_t n_max);
};

HermitianOperator build_dicke(const DickeConfig& cfg);

/// Sum_j sigma^3_j / 2 + a^dagger a.
ComplexMatrix excitation_number(std::size_t n_max);
/// exp(i pi (Sum_j sigma^3_j / 2 + a^dagger a + 1)), diagonal with entries +-1.
ComplexMatrix parity_operator(std::size_t n_max);
/// Exchange of the two atoms.
ComplexMatrix atom_swap(std::size_t n_max);

/// Reorders atom1 (x) atom2 (x) field into atom1 (x) field (x) atom2, the
/// A (x) B (x) C layout with the field as mediator.
ComplexMatrix to_mediator_layout(const ComplexMatrix& h, std::size_t n_max);

struct ConvergenceOptions {
    /// Accept once the concurrence moves by less than this between cutoffs.
    double tolerance = 1e-6;
    /// Largest cutoff tried while doubling from cfg.n_max.
    std::size_t max_n_max = 160;
    /// false: single diagonalization at cfg.n_max, reported as converged.
    bool verify = true;
    /// Throw NumericalError when max_n_max is reached without convergence.
    bool require = true;
};

struct DickeGroundResult {
    ConcurrenceResult concurrence;
    double energy = 0.0;
    double gap = 0.0;
    bool degenerate = false;
    double purity_atoms = 1.0;
    /// Cutoff the reported values come from.
    std::size_t n_max_used = 0;
    bool converged = false;
    /// |C(n_max_used) - C(previous cutoff)|, zero when not verified.
    double change = 0.0;
};

/// Ground-state atom-atom concurrence with the field traced out.
/// Doubles the cutoff until two successive values agree within tolerance.
DickeGroundResult dicke_ground_concurrence(const DickeConfig& cfg, const ConvergenceOptions& convergence = {});

/// Columns: variant, kappa, lam_tilde, nmax_used, ground_energy, gap,
/// concurrence, degenerate, status.
std::vector<sweep::Column> dicke_sweep_schema();

/// One row per (kappa, lam_tilde), kappa slowest. Point failures are
/// recorded in the status column ("ok", "not_converged", "failed") with
/// NaN numbers instead of aborting.
sweep::SweepResult dicke_sweep(const DickeConfig& base, const std::vector<double>& kappas,
                               const std::vector<double>& lam_tildes, const ConvergenceOptions& convergence = {},
                               unsigned threads = 0);

} // namespace medent::dicke
