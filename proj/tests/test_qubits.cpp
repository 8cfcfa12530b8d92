#include "doctest.h"

#include <algorithm>
#include <cmath>

#include "medent/qubits.hpp"
#include "test_helpers.hpp"

using namespace medent;
using namespace medent::qubits;

namespace {

std::vector<double> sorted(const std::array<double, 8>& e) {
    std::vector<double> v(e.begin(), e.end());
    std::sort(v.begin(), v.end());
    return v;
}

ComplexMatrix swap_ac(const ComplexMatrix& h) {
    const std::vector<std::size_t> dims{2, 2, 2}, order{2, 1, 0};
    return permute_subsystems(h, dims, order);
}

} // namespace

TEST_CASE("zero coefficients give the zero matrix") {
    CHECK(build_pauli_hamiltonian({}).matrix() == ComplexMatrix(8, 8));
}

TEST_CASE("single zz coupling between A and B") {
    PauliCoefficients c;
    c.ab[3][3] = 1.0;
    const std::vector<double> d{1, 1, -1, -1, -1, -1, 1, 1};
    CHECK(build_pauli_hamiltonian(c).matrix() == ComplexMatrix::diagonal(d));
}

TEST_CASE("zz couplings on both bonds") {
    PauliCoefficients c;
    c.ab[3][3] = 1.0;
    c.bc[3][3] = 1.0;
    const std::vector<double> d{2, 0, -2, 0, 0, -2, 0, 2};
    CHECK(build_pauli_hamiltonian(c).matrix() == ComplexMatrix::diagonal(d));
}

TEST_CASE("constant offsets only shift the spectrum") {
    PauliCoefficients c;
    c.ab[3][3] = 1.0;
    c.b = {0.3, -0.2, 0.7};
    PauliCoefficients shifted = c;
    shifted.ab[0][0] = 0.25;
    shifted.bc[0][0] = 0.5;
    const auto e0 = eigh(build_pauli_hamiltonian(c)).eigenvalues;
    const auto e1 = eigh(build_pauli_hamiltonian(shifted)).eigenvalues;
    for (std::size_t i = 0; i < 8; ++i) CHECK(e1[i] - e0[i] == doctest::Approx(0.75));
}

TEST_CASE("non-finite coefficients are rejected") {
    PauliCoefficients c;
    c.b[1] = INFINITY;
    CHECK_THROWS(build_pauli_hamiltonian(c));
}

TEST_CASE("Ising without fields is the zz chain") {
    const std::vector<double> d{2, 0, -2, 0, 0, -2, 0, 2};
    CHECK(build_ising({.j_coupling = 1, .delta = 0, .lam = 0}).matrix() == ComplexMatrix::diagonal(d));
}

TEST_CASE("Ising coefficients follow the delta/lambda rescaling") {
    const auto c = ising_coefficients({.j_coupling = 2.0, .delta = 0.5, .lam = 3.0});
    CHECK(c.ab[3][3] == 2.0);
    CHECK(c.bc[3][3] == 2.0);
    CHECK(c.ab[1][0] == doctest::Approx(0.5));   // delta * J / 2
    CHECK(c.bc[0][1] == doctest::Approx(0.5));
    CHECK(c.b[0] == doctest::Approx(3.0));       // lam * J / 2
    const auto custom = ising_coefficients({.j_coupling = 2.0, .delta = 0.5, .lam = 3.0, .delta0 = 1.0, .lambda0 = 4.0});
    CHECK(custom.ab[1][0] == doctest::Approx(0.25));
    CHECK(custom.b[0] == doctest::Approx(6.0));
}

TEST_CASE("Ising spectrum at delta=0, lambda=1 from the closed form") {
    const auto e = eigh(build_ising({.delta = 0, .lam = 1})).eigenvalues;
    const double r = std::sqrt(4.25);
    const std::vector<double> expected{-r, -r, -0.5, -0.5, 0.5, 0.5, r, r};
    for (std::size_t i = 0; i < 8; ++i) CHECK(e[i] == doctest::Approx(expected[i]).epsilon(1e-13));
}

TEST_CASE("Ising with small fields matches its own residual") {
    const HermitianOperator h = build_ising({.delta = 0.1, .lam = 1});
    const auto d = eigh(h);
    for (std::size_t k = 0; k < 8; ++k) {
        ComplexVector hv = h.matrix().apply(d.vector(k));
        const ComplexVector v = d.vector(k);
        for (std::size_t i = 0; i < 8; ++i) hv[i] -= d.eigenvalues[k] * v[i];
        CHECK(norm(hv) < 1e-12);
    }
}

TEST_CASE("analytic spectrum for h_B = 0") {
    const auto s = analytic_ising_spectrum({0, 0, 0});
    const std::array<double, 8> expected{2, -2, 0, -0.0, 0, -0.0, 2, -2};
    for (std::size_t i = 0; i < 8; ++i) CHECK(s.eigenvalues()[i] == doctest::Approx(expected[i]));
    const auto numeric = eigh(build_ising({})).eigenvalues;
    const auto closed = sorted(s.eigenvalues());
    for (std::size_t i = 0; i < 8; ++i) CHECK(closed[i] == doctest::Approx(numeric[i]));
}

TEST_CASE("analytic spectrum for h_B = (0.5, 0, 0)") {
    const auto e = analytic_ising_spectrum({0.5, 0, 0}).eigenvalues();
    const double r = std::sqrt(4.25);
    CHECK(e[0] == doctest::Approx(r));
    CHECK(e[1] == doctest::Approx(-r));
    CHECK(r == doctest::Approx(2.06155).epsilon(1e-6));
    for (std::size_t i = 2; i < 6; ++i) CHECK(std::abs(e[i]) == doctest::Approx(0.5));
    CHECK(e[6] == doctest::Approx(r));
    CHECK(e[7] == doctest::Approx(-r));
}

TEST_CASE("analytic spectrum agrees with diagonalization for random fields") {
    Rng rng(99);
    std::normal_distribution<double> g(0.0, 1.5);
    for (int trial = 0; trial < 100; ++trial) {
        const std::array<double, 3> hb{g(rng), g(rng), g(rng)};
        PauliCoefficients c;
        c.ab[3][3] = c.bc[3][3] = 1.0;
        c.b = hb;
        const HermitianOperator h = build_pauli_hamiltonian(c);
        const auto numeric = eigh(h).eigenvalues;
        const auto s = analytic_ising_spectrum(hb);
        const auto closed = sorted(s.eigenvalues());
        for (std::size_t i = 0; i < 8; ++i) REQUIRE(std::abs(closed[i] - numeric[i]) <= 1e-9);

        for (const auto& pair : s.pairs) {
            const ComplexVector e = pair.state();
            ComplexVector r = h.matrix().apply(e);
            for (std::size_t i = 0; i < 8; ++i) r[i] -= pair.energy * e[i];
            REQUIRE(norm(r) <= 1e-10);
            // product across A|BC and AB|C
            CHECK(schmidt(e, 2, 4).coefficients.size() == 1);
            CHECK(schmidt(e, 4, 2).coefficients.size() == 1);
        }
    }
}

TEST_CASE("ground pair sits in the extreme sectors with negative energy") {
    const auto s = analytic_ising_spectrum({0.5, 0, 0});
    const ComplexVector g1 = s.g1(), g2 = s.g2();
    CHECK(s.pairs[1].energy < 0);
    CHECK(s.pairs[7].energy < 0);
    CHECK(s.pairs[1].a == 0);
    CHECK(s.pairs[1].c == 0);
    CHECK(s.pairs[7].a == 1);
    CHECK(s.pairs[7].c == 1);
    const HermitianOperator h = build_ising({.delta = 0, .lam = 1});
    CHECK(h.expectation(g1) == doctest::Approx(-std::sqrt(4.25)));
    CHECK(h.expectation(g2) == doctest::Approx(-std::sqrt(4.25)));
    CHECK(std::abs(inner(g1, g2)) == 0.0);
}

TEST_CASE("bloch eigenvectors for fields along -z") {
    const auto up = bloch_eigenvector({0, 0, -1}, 1);
    CHECK(std::abs(up[0]) == doctest::Approx(0.0));
    CHECK(std::abs(up[1]) == doctest::Approx(1.0));
}

TEST_CASE("Ising Hamiltonians are A<->C exchange symmetric") {
    for (double delta : {0.0, 0.3, 2.0})
        for (double lam : {0.0, 1.0, 2.5}) {
            const auto h = build_ising({.delta = delta, .lam = lam}).matrix();
            CHECK(swap_ac(h).max_abs_diff(h) == 0.0);
        }
}
