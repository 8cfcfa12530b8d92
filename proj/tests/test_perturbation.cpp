#include "doctest.h"

#include <cmath>

#include "medent/entanglement.hpp"
#include "medent/errors.hpp"
#include "medent/perturbation.hpp"
#include "medent/qubits.hpp"
#include "test_helpers.hpp"

using namespace medent;
using namespace medent::perturbation;

namespace {

HermitianOperator ising(double delta, double lam) { return qubits::build_ising({.delta = delta, .lam = lam}); }

ComplexVector exact_ground(double delta, double lam) { return eigh(ising(delta, lam)).vector(0); }

double overlap2(double delta, double lam) {
    const auto pt = ising_pt_ground_state(lam, delta);
    return std::norm(inner(pt.amplitudes, exact_ground(delta, lam)));
}

double exact_gap(double delta, double lam) {
    const auto e = eigh(ising(delta, lam)).eigenvalues;
    return e[1] - e[0];
}

double pt_energy_error(double delta, double lam) {
    return std::abs(ising_pt_ground_state(lam, delta).energy - eigh(ising(delta, lam)).eigenvalues[0]);
}

double outside_norm(double delta, double lam) {
    const auto pt = ising_pt_ground_state(lam, delta);
    const double a1 = std::norm(inner(pt.g1, pt.amplitudes));
    const double a2 = std::norm(inner(pt.g2, pt.amplitudes));
    return std::sqrt(std::max(0.0, 1.0 - a1 - a2));
}

double ac_concurrence_of(const ComplexVector& psi) {
    const std::vector<std::size_t> dims{2, 2, 2}, keep{0, 2};
    return concurrence(reduce_pure_state(psi, dims, keep)).value;
}

} // namespace

TEST_CASE("zero perturbation leaves the level untouched") {
    const HermitianOperator h0 = ising(0.0, 1.0);
    const HermitianOperator v(ComplexMatrix(8, 8));
    const std::array<std::size_t, 2> level{0, 1};
    const auto pt = degenerate_pt2(h0, v, level);
    REQUIRE(pt.energies.size() == 2);
    for (double e : pt.energies) CHECK(e == doctest::Approx(-std::sqrt(4.25)).epsilon(1e-14));
    for (const auto& psi1 : pt.first_order) CHECK(norm(psi1) == 0.0);
    CHECK(pt.effective_hamiltonian.frobenius_norm() == 0.0);
}

TEST_CASE("non-degenerate perturbation reproduces textbook second order") {
    // h0 = diag(0, 1, 3), v = eps * (|0><1| + |1><0| + |0><2| + |2><0|)
    const double eps = 1e-3;
    const std::vector<double> d{0, 1, 3};
    ComplexMatrix vm(3, 3);
    vm(0, 1) = vm(1, 0) = eps;
    vm(0, 2) = vm(2, 0) = eps;
    const std::array<std::size_t, 1> level{0};
    const auto pt = degenerate_pt2(HermitianOperator(ComplexMatrix::diagonal(d)), HermitianOperator(vm), level);
    CHECK(pt.energies[0] == doctest::Approx(-eps * eps * (1.0 + 1.0 / 3.0)).epsilon(1e-12));
    CHECK(std::abs(pt.first_order[0][1]) == doctest::Approx(eps));
    CHECK(std::abs(pt.first_order[0][2]) == doctest::Approx(eps / 3.0));
    CHECK(pt.first_order[0][0] == cplx(0.0));
}

TEST_CASE("degenerate pair split at second order") {
    // |0>,|1> degenerate at 0, coupled only through |2> at energy 2
    const std::vector<double> d{0, 0, 2};
    ComplexMatrix vm(3, 3);
    const double g = 0.01;
    vm(0, 2) = vm(2, 0) = g;
    vm(1, 2) = vm(2, 1) = g;
    const std::array<std::size_t, 2> level{0, 1};
    const auto pt = degenerate_pt2(HermitianOperator(ComplexMatrix::diagonal(d)), HermitianOperator(vm), level);
    CHECK(pt.energies[0] == doctest::Approx(-g * g).epsilon(1e-12));
    CHECK(std::abs(pt.energies[1]) < 1e-15);
    // the ground combination is the symmetric one
    CHECK(std::abs(pt.zeroth_order[0][0]) == doctest::Approx(1.0 / std::sqrt(2.0)));
    CHECK(std::abs(pt.zeroth_order[0][0] - pt.zeroth_order[0][1]) < 1e-12);
}

TEST_CASE("degenerate_pt2 rejects bad subspaces") {
    const HermitianOperator h0 = ising(0.0, 1.0);
    const HermitianOperator v = ising(0.1, 1.0);
    const std::array<std::size_t, 2> split{1, 2};
    const std::array<std::size_t, 1> half{0};
    const std::array<std::size_t, 1> far{9};
    const std::array<std::size_t, 0> none{};
    CHECK_THROWS_AS(degenerate_pt2(h0, v, split), PreconditionError);
    CHECK_THROWS_AS(degenerate_pt2(h0, v, far), PreconditionError);
    CHECK_THROWS_AS(degenerate_pt2(h0, v, none), PreconditionError);
    // leaving out half of a degenerate level is a resonance
    CHECK_THROWS_AS(degenerate_pt2(h0, v, half), NumericalError);
    const HermitianOperator small(ComplexMatrix::identity(2));
    const std::array<std::size_t, 1> first{0};
    CHECK_THROWS_AS(degenerate_pt2(h0, small, first), DimensionError);
}

TEST_CASE("Ising PT state has the displayed form") {
    const double delta = 0.05;
    const auto pt = ising_pt_ground_state(1.0, delta);
    CHECK_FALSE(pt.degenerate);
    CHECK_FALSE(pt.warning);
    CHECK(norm(pt.amplitudes) == doctest::Approx(1.0).epsilon(1e-12));
    // equal weights on g1 and g2 with a real positive relative phase
    const cplx a1 = inner(pt.g1, pt.amplitudes), a2 = inner(pt.g2, pt.amplitudes);
    CHECK(std::abs(a1 - a2) < 1e-12);
    CHECK(a1.real() * pt.normalization == doctest::Approx(1.0).epsilon(1e-12));
    // the c-terms reproduce the rest of the state
    ComplexVector rest = pt.amplitudes;
    for (std::size_t x = 0; x < 8; ++x) rest[x] -= a1 * pt.g1[x] + a2 * pt.g2[x];
    double c2 = 0.0;
    for (const cplx& c : pt.constants) c2 += std::norm(c);
    CHECK(norm(rest) == doctest::Approx(delta * std::sqrt(c2) / pt.normalization).epsilon(1e-10));
    CHECK(c2 > 0.0);
}

TEST_CASE("Ising PT ground state at delta = 0 is flagged") {
    const auto pt = ising_pt_ground_state(1.0, 0.0);
    CHECK(pt.degenerate);
    CHECK(pt.order == 0);
    CHECK(pt.normalization == doctest::Approx(std::sqrt(2.0)));
    CHECK(norm(pt.amplitudes) == doctest::Approx(1.0));
    // the symmetric combination carries |<alpha1|alpha7>| = 1/sqrt(17) of A-C concurrence
    CHECK(ac_concurrence_of(pt.amplitudes) == doctest::Approx(1.0 / std::sqrt(17.0)).epsilon(1e-12));
}

TEST_CASE("Ising PT input validation and warning") {
    CHECK_THROWS_AS(ising_pt_ground_state(1.0, -0.1), PreconditionError);
    CHECK_THROWS_AS(ising_pt_ground_state(NAN, 0.1), PreconditionError);
    CHECK(ising_pt_ground_state(1.0, 0.3).warning.has_value());
    CHECK_FALSE(ising_pt_ground_state(1.0, 0.2).warning.has_value());
}

TEST_CASE("PT state overlaps the exact ground state") {
    CHECK(overlap2(0.05, 1.0) >= 0.99);
    CHECK(overlap2(0.2, 0.5) >= 0.95);
    for (double lam : {0.5, 1.0, 2.0})
        for (double delta : {0.01, 0.05, 0.1}) CHECK(overlap2(delta, lam) >= 1.0 - 5.0 * delta * delta);
}

TEST_CASE("PT concurrence tracks the exact concurrence") {
    const double exact = ground_state_ac_concurrence(ising(0.05, 1.0), {}).value;
    const double approx = ac_concurrence_of(ising_pt_ground_state(1.0, 0.05).amplitudes);
    CHECK(std::abs(exact - approx) < 0.05);
}

TEST_CASE("second-order splitting is quadratic in delta") {
    for (double delta : {0.01, 0.02}) {
        const double ratio = exact_gap(2 * delta, 1.0) / exact_gap(delta, 1.0);
        CHECK(ratio >= 3.6);
        CHECK(ratio <= 4.4);
    }
    const auto pt = degenerate_pt2(ising(0.0, 1.0),
                                   HermitianOperator(ising(0.01, 1.0).matrix() - ising(0.0, 1.0).matrix()),
                                   std::array<std::size_t, 2>{0, 1});
    CHECK(pt.energies[1] - pt.energies[0] == doctest::Approx(exact_gap(0.01, 1.0)).epsilon(1e-3));
}

TEST_CASE("energy error falls at least cubically") {
    for (double delta : {0.01, 0.02}) CHECK(pt_energy_error(2 * delta, 1.0) / pt_energy_error(delta, 1.0) >= 6.0);
}

TEST_CASE("weight outside the degenerate pair is linear in delta") {
    for (double delta : {0.01, 0.02}) {
        const double ratio = outside_norm(2 * delta, 1.0) / outside_norm(delta, 1.0);
        CHECK(ratio >= 1.8);
        CHECK(ratio <= 2.2);
    }
}

TEST_CASE("exact gap closes monotonically as delta shrinks") {
    double previous = exact_gap(0.2, 1.0);
    for (double delta : {0.1, 0.05, 0.01}) {
        const double g = exact_gap(delta, 1.0);
        CHECK(g < previous);
        previous = g;
    }
}
