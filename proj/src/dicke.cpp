#include "medent/dicke.hpp"

#include <cmath>
#include <limits>

#include "medent/errors.hpp"

namespace medent::dicke {

namespace {

const ComplexMatrix& sigma_plus() {
    static const ComplexMatrix m = ComplexMatrix::from_rows({{0.0, 1.0}, {0.0, 0.0}});
    return m;
}

const ComplexMatrix& sigma_minus() {
    static const ComplexMatrix m = sigma_plus().adjoint();
    return m;
}

double sector_sign(std::size_t atoms, std::size_t n) {
    // (-1)^(s + n + 1) with s = (sigma3_1 + sigma3_2)/2 in {1, 0, 0, -1}
    static constexpr int s[4] = {1, 0, 0, -1};
    const long long k = s[atoms] + static_cast<long long>(n) + 1;
    return k % 2 == 0 ? 1.0 : -1.0;
}

struct Evaluation {
    GroundState ground;
    ConcurrenceResult concurrence;
};

Evaluation evaluate(const DickeConfig& cfg) {
    const std::array<std::size_t, 3> dims{2, 2, cfg.n_max + 1};
    const std::array<std::size_t, 2> keep{0, 1};
    Evaluation e;
    e.ground = ground_state(build_dicke(cfg), dims, keep);
    e.concurrence = ac_concurrence(e.ground);
    return e;
}

} // namespace

std::string_view to_string(Variant v) {
    switch (v) {
    case Variant::H1: return "h1";
    case Variant::H2: return "h2";
    case Variant::H3: return "h3";
    }
    return "?";
}

Variant parse_variant(std::string_view text) {
    if (text == "h1" || text == "H1") return Variant::H1;
    if (text == "h2" || text == "H2") return Variant::H2;
    if (text == "h3" || text == "H3") return Variant::H3;
    throw PreconditionError("unknown Dicke variant '" + std::string(text) + "' (expected h1, h2 or h3)");
}

void DickeConfig::validate() const {
    auto finite = [](double x) { return std::isfinite(x); };
    if (!finite(omega_a) || omega_a <= 0.0) throw PreconditionError("DickeConfig: omega_a must be positive");
    if (!finite(omega_f) || omega_f <= 0.0) throw PreconditionError("DickeConfig: omega_f must be positive");
    if (!finite(kappa) || kappa < 0.0) throw PreconditionError("DickeConfig: kappa must be non-negative");
    if (lam && (!finite(*lam) || *lam < 0.0)) throw PreconditionError("DickeConfig: lam must be non-negative");
    if (!finite(lam_ratio) || lam_ratio < 0.0) throw PreconditionError("DickeConfig: lam_ratio must be non-negative");
    if (!finite(lam_tilde) || lam_tilde < 0.0) throw PreconditionError("DickeConfig: lam_tilde must be non-negative");
    if (n_max < 1) throw PreconditionError("DickeConfig: n_max must be at least 1");
    if (dim() > kMaxDimension) throw ResourceLimitError("DickeConfig: Hilbert space exceeds the dimension limit");
}

BosonicOperators::BosonicOperators(std::size_t n_max)
    : a(n_max + 1, n_max + 1), a_dagger(n_max + 1, n_max + 1), number(n_max + 1, n_max + 1) {
    for (std::size_t n = 1; n <= n_max; ++n) a(n - 1, n) = std::sqrt(static_cast<double>(n));
    a_dagger = a.adjoint();
    for (std::size_t n = 0; n <= n_max; ++n) number(n, n) = static_cast<double>(n);
}

HermitianOperator build_dicke(const DickeConfig& cfg) {
    cfg.validate();
    const BosonicOperators b(cfg.n_max);
    const ComplexMatrix id2 = ComplexMatrix::identity(2);
    const ComplexMatrix idf = ComplexMatrix::identity(cfg.n_max + 1);
    const ComplexMatrix& z = pauli(3);

    ComplexMatrix h = (0.5 * cfg.omega_a) * (kron({z, id2, idf}) + kron({id2, z, idf}));
    h += cfg.omega_f * kron({id2, id2, b.number});

    const std::array<ComplexMatrix, 2> plus{kron(sigma_plus(), id2), kron(id2, sigma_plus())};
    const std::array<ComplexMatrix, 2> minus{kron(sigma_minus(), id2), kron(id2, sigma_minus())};
    if (cfg.kappa != 0.0) {
        for (std::size_t j = 0; j < 2; ++j) {
            h += cfg.kappa * (kron(plus[j], b.a) + kron(minus[j], b.a_dagger));
            if (cfg.variant != Variant::H1) h += cfg.kappa * (kron(plus[j], b.a_dagger) + kron(minus[j], b.a));
        }
    }
    if (cfg.variant == Variant::H3) {
        const double q = cfg.lam_tilde * cfg.effective_lam();
        if (q != 0.0) {
            const ComplexMatrix x = b.a + b.a_dagger;
            h += q * kron(ComplexMatrix::identity(4), x * x);
        }
    }
    return HermitianOperator(std::move(h));
}

ComplexMatrix excitation_number(std::size_t n_max) {
    const BosonicOperators b(n_max);
    const ComplexMatrix id2 = ComplexMatrix::identity(2);
    const ComplexMatrix idf = ComplexMatrix::identity(n_max + 1);
    return 0.5 * (kron({pauli(3), id2, idf}) + kron({id2, pauli(3), idf})) + kron({id2, id2, b.number});
}

ComplexMatrix parity_operator(std::size_t n_max) {
    std::vector<double> d;
    d.reserve(4 * (n_max + 1));
    for (std::size_t atoms = 0; atoms < 4; ++atoms)
        for (std::size_t n = 0; n <= n_max; ++n) d.push_back(sector_sign(atoms, n));
    return ComplexMatrix::diagonal(d);
}

ComplexMatrix atom_swap(std::size_t n_max) {
    const std::size_t f = n_max + 1;
    ComplexMatrix s(4 * f, 4 * f);
    for (std::size_t a1 = 0; a1 < 2; ++a1)
        for (std::size_t a2 = 0; a2 < 2; ++a2)
            for (std::size_t n = 0; n < f; ++n) s((a2 * 2 + a1) * f + n, (a1 * 2 + a2) * f + n) = 1.0;
    return s;
}

ComplexMatrix to_mediator_layout(const ComplexMatrix& h, std::size_t n_max) {
    const std::array<std::size_t, 3> dims{2, 2, n_max + 1};
    const std::array<std::size_t, 3> order{0, 2, 1};
    return permute_subsystems(h, dims, order);
}

DickeGroundResult dicke_ground_concurrence(const DickeConfig& cfg, const ConvergenceOptions& convergence) {
    cfg.validate();
    auto fill = [](DickeGroundResult& r, const Evaluation& e, std::size_t n) {
        r.concurrence = e.concurrence;
        r.energy = e.ground.energy;
        r.gap = e.ground.gap;
        r.degenerate = e.ground.degenerate;
        r.purity_atoms = purity(*e.ground.reduced);
        r.n_max_used = n;
    };

    DickeGroundResult result;
    DickeConfig current = cfg;
    Evaluation previous = evaluate(current);
    fill(result, previous, current.n_max);
    if (!convergence.verify) {
        result.converged = true;
        return result;
    }

    while (2 * current.n_max <= convergence.max_n_max) {
        current.n_max *= 2;
        Evaluation next = evaluate(current);
        fill(result, next, current.n_max);
        result.change = std::abs(next.concurrence.value - previous.concurrence.value);
        if (result.change < convergence.tolerance) {
            result.converged = true;
            return result;
        }
        previous = std::move(next);
    }
    if (convergence.require)
        throw NumericalError("dicke_ground_concurrence: concurrence not converged at n_max = " +
                             std::to_string(result.n_max_used) + " (change " + std::to_string(result.change) + ")");
    return result;
}

std::vector<sweep::Column> dicke_sweep_schema() {
    using sweep::ColumnType;
    return {{"variant", ColumnType::Text},       {"kappa", ColumnType::Real},
            {"lam_tilde", ColumnType::Real},     {"nmax_used", ColumnType::Integer},
            {"ground_energy", ColumnType::Real}, {"gap", ColumnType::Real},
            {"concurrence", ColumnType::Real},   {"degenerate", ColumnType::Boolean},
            {"status", ColumnType::Text}};
}

sweep::SweepResult dicke_sweep(const DickeConfig& base, const std::vector<double>& kappas,
                               const std::vector<double>& lam_tildes, const ConvergenceOptions& convergence,
                               unsigned threads) {
    if (kappas.empty() || lam_tildes.empty()) throw PreconditionError("dicke_sweep: grids must be non-empty");
    for (std::size_t i = 1; i < kappas.size(); ++i)
        if (kappas[i] < kappas[i - 1]) throw PreconditionError("dicke_sweep: kappa grid must be monotone");
    for (std::size_t i = 1; i < lam_tildes.size(); ++i)
        if (lam_tildes[i] < lam_tildes[i - 1]) throw PreconditionError("dicke_sweep: lam_tilde grid must be monotone");

    const std::size_t nl = lam_tildes.size();
    const std::string variant(to_string(base.variant));
    auto point = [&](std::size_t i) -> std::vector<sweep::Cell> {
        DickeConfig cfg = base;
        cfg.kappa = kappas[i / nl];
        cfg.lam_tilde = lam_tildes[i % nl];
        const double nan = std::numeric_limits<double>::quiet_NaN();
        ConvergenceOptions relaxed = convergence;
        relaxed.require = false;
        try {
            const auto r = dicke_ground_concurrence(cfg, relaxed);
            return {variant,
                    cfg.kappa,
                    cfg.lam_tilde,
                    static_cast<std::int64_t>(r.n_max_used),
                    r.energy,
                    r.gap,
                    r.concurrence.value,
                    r.degenerate,
                    std::string(r.converged ? "ok" : "not_converged")};
        } catch (const std::exception&) {
            return {variant, cfg.kappa, cfg.lam_tilde, std::int64_t{0}, nan, nan, nan, false, std::string("failed")};
        }
    };

    sweep::SweepResult result;
    result.schema = dicke_sweep_schema();
    for (auto& row : sweep::parallel_map(kappas.size() * nl, point, threads)) result.append(std::move(row));
    return result;
}

} // namespace medent::dicke
