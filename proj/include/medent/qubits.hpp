// qubits.hpp - three-qubit Hamiltonians A-B-C built from Pauli coefficients,
// the Ising chain instance and its closed-form spectrum at zero local fields

#pragma once

#include <array>
#include <optional>

#include "medent/linalg.hpp"

namespace medent::qubits {

using Real4x4 = std::array<std::array<double, 4>, 4>;

/// H = sum_jk ab[j][k] s^j s^k 1 + sum_jk bc[j][k] 1 s^j s^k + sum_j b[j-1] 1 s^j 1.
/// ab[0][0] and bc[0][0] only shift the spectrum; they are accepted as such.
struct PauliCoefficients {
    Real4x4 ab{};
    Real4x4 bc{};
    std::array<double, 3> b{};

    /// Throws PreconditionError on non-finite entries.
    void validate() const;
};

HermitianOperator build_pauli_hamiltonian(const PauliCoefficients& c);

/// Ising chain A-B-C with transverse local fields; the A and C fields are
/// delta*delta0/2, the B field lam*lambda0/2. delta0 and lambda0 default to
/// the coupling J.
struct IsingParams {
    double j_coupling = 1.0;
    double delta = 0.0;
    double lam = 0.0;
    std::optional<double> delta0;
    std::optional<double> lambda0;

    double delta_scale() const { return delta0.value_or(j_coupling); }
    double lambda_scale() const { return lambda0.value_or(j_coupling); }
};

PauliCoefficients ising_coefficients(const IsingParams& p);
HermitianOperator build_ising(const IsingParams& p);

/// The B-local field h_B = (lam*lambda0/2, 0, 0) of an Ising configuration.
std::array<double, 3> ising_local_field(const IsingParams& p);

/// One closed-form eigenpair |a> (x) |beta> (x) |c>.
struct ProductEigenpair {
    int a = 0;
    int c = 0;
    std::array<cplx, 2> beta{};
    double energy = 0.0;

    ComplexVector state() const;
};

/// Spectrum of s^3 s^3 1 + 1 s^3 s^3 + 1 (h.s) 1 in the order
/// e1..e8: pairs (+,-) for sectors (a,c) = (0,0), (1,0), (0,1), (1,1).
struct AnalyticSpectrum {
    std::array<ProductEigenpair, 8> pairs{};
    std::array<int, 3> v{0, 0, 2};

    std::array<double, 8> eigenvalues() const;
    /// g1 = |0>|alpha_1^->|0>, g2 = |1>|alpha_7^->|1>
    ComplexVector g1() const { return pairs[1].state(); }
    ComplexVector g2() const { return pairs[7].state(); }
};

/// Closed form valid for J = 1 and no A/C local terms.
AnalyticSpectrum analytic_ising_spectrum(const std::array<double, 3>& h_b);

/// Eigenvector of n.sigma for eigenvalue sign*|n| (sign = +1 or -1).
/// For n = 0 returns |0> for + and |1> for -.
std::array<cplx, 2> bloch_eigenvector(const std::array<double, 3>& n, int sign);

} // namespace medent::qubits
