#include "medent/qubits.hpp"

#include <cmath>

#include "medent/errors.hpp"

namespace medent::qubits {

void PauliCoefficients::validate() const {
    auto ok = [](double x) { return std::isfinite(x); };
    for (const auto& row : ab)
        for (double x : row)
            if (!ok(x)) throw PreconditionError("PauliCoefficients: non-finite h_AB entry");
    for (const auto& row : bc)
        for (double x : row)
            if (!ok(x)) throw PreconditionError("PauliCoefficients: non-finite h_BC entry");
    for (double x : b)
        if (!ok(x)) throw PreconditionError("PauliCoefficients: non-finite h_B entry");
}

HermitianOperator build_pauli_hamiltonian(const PauliCoefficients& c) {
    c.validate();
    const ComplexMatrix& id = pauli(0);
    ComplexMatrix h(8, 8);
    for (int j = 0; j < 4; ++j)
        for (int k = 0; k < 4; ++k) {
            if (c.ab[j][k] != 0.0) h += c.ab[j][k] * kron({pauli(j), pauli(k), id});
            if (c.bc[j][k] != 0.0) h += c.bc[j][k] * kron({id, pauli(j), pauli(k)});
        }
    for (int j = 1; j <= 3; ++j)
        if (c.b[j - 1] != 0.0) h += c.b[j - 1] * kron({id, pauli(j), id});
    return HermitianOperator(std::move(h));
}

PauliCoefficients ising_coefficients(const IsingParams& p) {
    PauliCoefficients c;
    c.ab[3][3] = p.j_coupling;
    c.bc[3][3] = p.j_coupling;
    c.ab[1][0] = p.delta * p.delta_scale() / 2.0;
    c.bc[0][1] = p.delta * p.delta_scale() / 2.0;
    c.b = ising_local_field(p);
    return c;
}

std::array<double, 3> ising_local_field(const IsingParams& p) {
    return {p.lam * p.lambda_scale() / 2.0, 0.0, 0.0};
}

HermitianOperator build_ising(const IsingParams& p) { return build_pauli_hamiltonian(ising_coefficients(p)); }

ComplexVector ProductEigenpair::state() const {
    ComplexVector v(8);
    for (int b = 0; b < 2; ++b) v[static_cast<std::size_t>(a * 4 + b * 2 + c)] = beta[static_cast<std::size_t>(b)];
    return v;
}

std::array<double, 8> AnalyticSpectrum::eigenvalues() const {
    std::array<double, 8> e{};
    for (std::size_t i = 0; i < 8; ++i) e[i] = pairs[i].energy;
    return e;
}

std::array<cplx, 2> bloch_eigenvector(const std::array<double, 3>& n, int sign) {
    const double nx = sign * n[0], ny = sign * n[1], nz = sign * n[2];
    const double r = std::sqrt(nx * nx + ny * ny + nz * nz);
    if (r == 0.0) return sign > 0 ? std::array<cplx, 2>{1.0, 0.0} : std::array<cplx, 2>{0.0, 1.0};
    // +|m| eigenvector of m.sigma for m = sign*n, from whichever column of
    // (1 + m.sigma/|m|) is better conditioned.
    std::array<cplx, 2> v;
    if (nz >= 0.0) v = {r + nz, cplx(nx, ny)};
    else v = {cplx(nx, -ny), r - nz};
    const double len = std::sqrt(std::norm(v[0]) + std::norm(v[1]));
    return {v[0] / len, v[1] / len};
}

AnalyticSpectrum analytic_ising_spectrum(const std::array<double, 3>& h_b) {
    AnalyticSpectrum s;
    const std::array<int, 4> sector_a{0, 1, 0, 1};
    const std::array<int, 4> sector_c{0, 0, 1, 1};
    // sector (a,c) leaves B with (h_B + ((-1)^a + (-1)^c) e_z).sigma
    const std::array<double, 4> z_shift{2.0, 0.0, 0.0, -2.0};
    for (std::size_t sector = 0; sector < 4; ++sector) {
        const std::array<double, 3> n{h_b[0], h_b[1], h_b[2] + z_shift[sector]};
        const double r = std::sqrt(n[0] * n[0] + n[1] * n[1] + n[2] * n[2]);
        for (int k = 0; k < 2; ++k) {
            const int sign = k == 0 ? 1 : -1;
            ProductEigenpair& e = s.pairs[sector * 2 + static_cast<std::size_t>(k)];
            e.a = sector_a[sector];
            e.c = sector_c[sector];
            e.beta = bloch_eigenvector(n, sign);
            e.energy = sign * r;
        }
    }
    return s;
}

} // namespace medent::qubits
