#include "doctest.h"

#include <cmath>

#include "medent/dicke.hpp"
#include "medent/errors.hpp"

using namespace medent;
using namespace medent::dicke;

namespace {

DickeConfig config(Variant v, double kappa, std::size_t n_max = 40) {
    DickeConfig c;
    c.variant = v;
    c.kappa = kappa;
    c.n_max = n_max;
    return c;
}

double commutator_norm(const ComplexMatrix& a, const ComplexMatrix& b) { return commutator(a, b).frobenius_norm(); }

DickeGroundResult single(const DickeConfig& c) { return dicke_ground_concurrence(c, {.verify = false}); }

} // namespace

TEST_CASE("bosonic operators") {
    const BosonicOperators b(5);
    CHECK(b.a.rows() == 6);
    for (std::size_t n = 1; n <= 5; ++n) CHECK(b.a(n - 1, n) == cplx(std::sqrt(static_cast<double>(n))));
    for (std::size_t i = 0; i < 6; ++i) CHECK(b.a(i, 0) == cplx(0.0));
    CHECK(b.number.max_abs_diff(b.a_dagger * b.a) < 1e-14);
    // [a, a^dagger] = 1 except on the top Fock level
    const ComplexMatrix c = commutator(b.a, b.a_dagger);
    for (std::size_t n = 0; n < 5; ++n) CHECK(c(n, n).real() == doctest::Approx(1.0));
    CHECK(c(5, 5).real() == doctest::Approx(-5.0));
}

TEST_CASE("configuration validation") {
    DickeConfig c;
    c.n_max = 0;
    CHECK_THROWS_AS(build_dicke(c), PreconditionError);
    c = DickeConfig{};
    c.omega_a = 0.0;
    CHECK_THROWS_AS(build_dicke(c), PreconditionError);
    c = DickeConfig{};
    c.kappa = -1.0;
    CHECK_THROWS_AS(build_dicke(c), PreconditionError);
    c = DickeConfig{};
    c.n_max = 2000;
    CHECK_THROWS_AS(build_dicke(c), ResourceLimitError);
    CHECK_THROWS_AS(parse_variant("h4"), PreconditionError);
    CHECK(parse_variant("H3") == Variant::H3);
    CHECK(to_string(Variant::H2) == "h2");
}

TEST_CASE("dimension and quadratic default") {
    DickeConfig c = config(Variant::H3, 0.5, 7);
    CHECK(build_dicke(c).dim() == 32);
    CHECK(c.effective_lam() == doctest::Approx(0.25));
    c.lam_ratio = 2.0;
    CHECK(c.effective_lam() == doctest::Approx(0.5));
    c.lam = 0.1;
    CHECK(c.effective_lam() == doctest::Approx(0.1));
}

TEST_CASE("decoupled atoms and field") {
    for (auto v : {Variant::H1, Variant::H2, Variant::H3}) {
        const auto h = build_dicke(config(v, 0.0, 6)).matrix();
        for (std::size_t i = 0; i < h.rows(); ++i)
            for (std::size_t j = 0; j < h.cols(); ++j)
                if (i != j) REQUIRE(h(i, j) == cplx(0.0));
        const auto r = single(config(v, 0.0, 6));
        CHECK(r.energy == doctest::Approx(-1.0));
        CHECK(r.concurrence.value == 0.0);
        CHECK_FALSE(r.degenerate);
    }
}

TEST_CASE("H1 conserves excitations, H2 and H3 do not") {
    const std::size_t n = 12;
    const ComplexMatrix number = excitation_number(n);
    CHECK(commutator_norm(build_dicke(config(Variant::H1, 0.7, n)).matrix(), number) <= 1e-12);
    CHECK(commutator_norm(build_dicke(config(Variant::H2, 0.7, n)).matrix(), number) > 0.1);
    CHECK(commutator_norm(build_dicke(config(Variant::H3, 0.7, n)).matrix(), number) > 0.1);
}

TEST_CASE("parity and atom exchange symmetries") {
    const std::size_t n = 12;
    const ComplexMatrix parity = parity_operator(n);
    const ComplexMatrix swap = atom_swap(n);
    CHECK((swap * swap).max_abs_diff(ComplexMatrix::identity(swap.rows())) == 0.0);
    for (auto v : {Variant::H1, Variant::H2, Variant::H3})
        for (double kappa : {0.3, 1.1}) {
            const auto h = build_dicke(config(v, kappa, n)).matrix();
            CHECK(commutator_norm(h, parity) <= 1e-10);
            CHECK(commutator_norm(h, swap) <= 1e-12);
        }
}

TEST_CASE("mediator layout moves the field into the middle") {
    const std::size_t n = 3;
    const auto h = build_dicke(config(Variant::H2, 0.4, n)).matrix();
    const auto m = to_mediator_layout(h, n);
    // a field-only operator becomes 1 (x) X (x) 1
    const BosonicOperators b(n);
    const ComplexMatrix id2 = ComplexMatrix::identity(2);
    const auto moved = to_mediator_layout(kron({id2, id2, b.number}), n);
    CHECK(moved.max_abs_diff(kron({id2, b.number, id2})) == 0.0);
    CHECK(m.frobenius_norm() == doctest::Approx(h.frobenius_norm()));
}

TEST_CASE("quadratic term raises the ground energy") {
    for (double kappa : {0.2, 0.6, 1.0, 1.2}) {
        const double e2 = single(config(Variant::H2, kappa)).energy;
        const double e3 = single(config(Variant::H3, kappa)).energy;
        CHECK(e3 >= e2);
    }
}

TEST_CASE("ground energies converge in the Fock cutoff") {
    for (auto v : {Variant::H1, Variant::H2, Variant::H3})
        for (double kappa : {0.6, 1.2}) {
            const double e40 = single(config(v, kappa, 40)).energy;
            const double e80 = single(config(v, kappa, 80)).energy;
            CHECK(std::abs(e40 - e80) < 1e-8);
        }
}

TEST_CASE("ground concurrence matches the numpy oracle") {
    // tests/oracles/dicke_oracle.py
    struct Case {
        Variant v;
        double kappa, energy, gap, concurrence, purity;
    };
    const Case cases[] = {
        {Variant::H1, 0.5, -1.0000000000000171, 0.29289321881346675, 0.0, 0.99999999999999911},
        {Variant::H1, 1.2, -1.9393876913398138, 0.14465449913775785, 0.028595479208967933, 0.38888888888888912},
        {Variant::H2, 0.5, -1.3898551872589942, 0.19177015270420172, 0.07246904552183453, 0.6384707670457288},
        {Variant::H2, 1.2, -5.8053711444521889, 6.6118572137341403e-06, 3.4535819077474716e-05, 0.49984517121011107},
        {Variant::H3, 0.5, -0.96937778550977782, 0.53173707582260443, 0.075584358330301582, 0.84821518908766891},
        {Variant::H3, 1.2, -0.60171546486384542, 0.47811458448116551, 0.17283261022127877, 0.77757801101969526},
    };
    for (const auto& c : cases) {
        CAPTURE(c.kappa);
        const auto r = single(config(c.v, c.kappa));
        CHECK(r.energy == doctest::Approx(c.energy).epsilon(1e-11));
        CHECK(std::abs(r.gap - c.gap) < 1e-9);
        CHECK(std::abs(r.concurrence.value - c.concurrence) < 1e-7);
        CHECK(std::abs(r.purity_atoms - c.purity) < 1e-9);
        CHECK_FALSE(r.degenerate);
    }
}

TEST_CASE("quadratic multiplier revives entanglement") {
    DickeConfig c = config(Variant::H3, 1.2);
    c.lam_tilde = 0.0;
    CHECK(std::abs(single(c).concurrence.value - 3.4535819077474716e-05) < 1e-7);
    c.lam_tilde = 0.5;
    CHECK(std::abs(single(c).concurrence.value - 0.14685332423982095) < 1e-7);
    c.lam_tilde = 2.0;
    CHECK(std::abs(single(c).concurrence.value - 0.12903957820323508) < 1e-7);
}

TEST_CASE("cutoff doubling reports convergence") {
    const auto r = dicke_ground_concurrence(config(Variant::H3, 0.8, 20));
    CHECK(r.converged);
    CHECK(r.n_max_used == 40);
    CHECK(r.change < 1e-6);

    // a tiny cutoff that may not double far enough is reported, not hidden
    const ConvergenceOptions strict{.tolerance = 1e-15, .max_n_max = 8};
    CHECK_THROWS_AS(dicke_ground_concurrence(config(Variant::H3, 1.2, 2), strict), NumericalError);
    ConvergenceOptions lenient = strict;
    lenient.require = false;
    const auto flagged = dicke_ground_concurrence(config(Variant::H3, 1.2, 2), lenient);
    CHECK_FALSE(flagged.converged);
    CHECK(flagged.n_max_used == 8);
}

TEST_CASE("sweep rows follow the grid and agree with direct evaluation") {
    const std::vector<double> kappas{0.0, 0.5, 1.0};
    const std::vector<double> tildes{0.5, 1.0};
    DickeConfig base = config(Variant::H3, 0.0, 20);
    const auto s = dicke_sweep(base, kappas, tildes, {}, 3);
    REQUIRE(s.rows.size() == 6);
    CHECK(s.schema == dicke_sweep_schema());
    for (std::size_t i = 0; i < 6; ++i) {
        CHECK(s.real(i, "kappa") == kappas[i / 2]);
        CHECK(s.real(i, "lam_tilde") == tildes[i % 2]);
        CHECK(s.text(i, "status") == "ok");
        CHECK(s.text(i, "variant") == "h3");
    }
    DickeConfig one = base;
    one.kappa = 1.0;
    one.lam_tilde = 0.5;
    const auto direct = dicke_ground_concurrence(one);
    CHECK(s.real(4, "concurrence") == direct.concurrence.value);
    CHECK(s.integer(4, "nmax_used") == static_cast<std::int64_t>(direct.n_max_used));

    const auto serial = dicke_sweep(base, kappas, tildes, {}, 1);
    CHECK(sweep::same_cells(s, serial));
}

TEST_CASE("sweep rejects bad grids and flags failed points") {
    CHECK_THROWS_AS(dicke_sweep({}, {}, {1.0}), PreconditionError);
    CHECK_THROWS_AS(dicke_sweep({}, {1.0, 0.5}, {1.0}), PreconditionError);
    const auto s = dicke_sweep(config(Variant::H1, 0.0, 4), {-1.0, 0.0}, {1.0}, {.verify = false});
    CHECK(s.text(0, "status") == "failed");
    CHECK(std::isnan(s.real(0, "concurrence")));
    CHECK(s.text(1, "status") == "ok");
}
