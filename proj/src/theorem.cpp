#include "medent/theorem.hpp"

#include <algorithm>
#include <cmath>

#include "medent/errors.hpp"
#include "medent/random.hpp"

namespace medent::theorem {

namespace {

void check_dims(const TripartiteDims& dims, std::size_t n) {
    if (dims.a != dims.c) throw DimensionError("A and C must have equal dimension");
    if (dims.total() != n) throw DimensionError("dims do not match the Hamiltonian");
}

/// Haar-random unitary by Gram-Schmidt on a complex Gaussian matrix.
ComplexMatrix haar_unitary(std::size_t n, Rng& rng) {
    std::normal_distribution<double> g;
    std::vector<ComplexVector> cols;
    while (cols.size() < n) {
        ComplexVector v(n);
        for (auto& z : v) z = cplx(g(rng), g(rng));
        for (const auto& u : cols) {
            const cplx p = inner(u, v);
            for (std::size_t i = 0; i < n; ++i) v[i] -= p * u[i];
        }
        const double len = norm(v);
        if (len < 1e-8) continue;
        for (auto& z : v) z /= len;
        cols.push_back(std::move(v));
    }
    ComplexMatrix u(n, n);
    for (std::size_t j = 0; j < n; ++j)
        for (std::size_t i = 0; i < n; ++i) u(i, j) = cols[j][i];
    return u;
}

/// Rotates every degenerate level of `d` by its own Haar unitary.
void scramble_degenerate_levels(EigenDecomposition& d, Rng& rng) {
    for (const auto& level : d.degeneracy_groups) {
        const std::size_t m = level.size();
        if (m < 2) continue;
        const ComplexMatrix u = haar_unitary(m, rng);
        ComplexMatrix rotated(d.dim(), m);
        for (std::size_t i = 0; i < d.dim(); ++i)
            for (std::size_t col = 0; col < m; ++col) {
                cplx s = 0.0;
                for (std::size_t k = 0; k < m; ++k) s += d.eigenvectors(i, level.begin + k) * u(k, col);
                rotated(i, col) = s;
            }
        for (std::size_t i = 0; i < d.dim(); ++i)
            for (std::size_t col = 0; col < m; ++col) d.eigenvectors(i, level.begin + col) = rotated(i, col);
    }
}

double rayleigh(const ComplexMatrix& h, std::span<const cplx> v) {
    return inner(v, h.apply(v)).real() / std::norm(norm(v));
}

/// For psi = omega_AC (x) beta_B with Schmidt rank >= 2: checks that every
/// |u_j>|beta>|v_j> and random combinations share the energy of psi.
FamilyCheck check_family(const ComplexMatrix& h, std::span<const cplx> psi, double energy,
                         const TripartiteDims& dims, Rng& rng) {
    const std::size_t da = dims.a, db = dims.b, dc = dims.c;
    const std::array<std::size_t, 3> d3{da, db, dc};
    const std::array<std::size_t, 1> keep_b{1};
    const auto rho_b = reduce_pure_state(psi, d3, keep_b);
    const auto eb = eigh(rho_b.op());
    const ComplexVector beta = eb.vector(db - 1);

    ComplexVector omega(da * dc);
    for (std::size_t a = 0; a < da; ++a)
        for (std::size_t c = 0; c < dc; ++c) {
            cplx s = 0.0;
            for (std::size_t b = 0; b < db; ++b) s += std::conj(beta[b]) * psi[(a * db + b) * dc + c];
            omega[a * dc + c] = s;
        }
    const auto sd = schmidt(normalized(omega), da, dc);

    std::vector<ComplexVector> terms;
    for (std::size_t j = 0; j < sd.coefficients.size(); ++j) {
        if (sd.coefficients[j] < kSchmidtRankTol) continue;
        ComplexVector t(da * db * dc);
        for (std::size_t a = 0; a < da; ++a)
            for (std::size_t b = 0; b < db; ++b)
                for (std::size_t c = 0; c < dc; ++c)
                    t[(a * db + b) * dc + c] = sd.left[j][a] * beta[b] * sd.right[j][c];
        terms.push_back(std::move(t));
    }

    FamilyCheck fc;
    fc.terms = terms.size();
    for (const auto& t : terms) fc.max_deviation = std::max(fc.max_deviation, std::abs(rayleigh(h, t) - energy));
    std::normal_distribution<double> g;
    for (int k = 0; k < 3; ++k) {
        ComplexVector mix(da * db * dc);
        for (const auto& t : terms) {
            const cplx w(g(rng), g(rng));
            for (std::size_t i = 0; i < mix.size(); ++i) mix[i] += w * t[i];
        }
        if (norm(mix) < 1e-12) continue;
        fc.max_deviation = std::max(fc.max_deviation, std::abs(rayleigh(h, mix) - energy));
    }
    fc.passed = fc.max_deviation <= kFamilyEnergyTol;
    return fc;
}

} // namespace

ComplexMatrix exchange_ac(const TripartiteDims& dims) {
    if (dims.a != dims.c) throw DimensionError("exchange_ac: A and C must have equal dimension");
    const std::size_t n = dims.total();
    ComplexMatrix s(n, n);
    for (std::size_t a = 0; a < dims.a; ++a)
        for (std::size_t b = 0; b < dims.b; ++b)
            for (std::size_t c = 0; c < dims.c; ++c)
                s((c * dims.b + b) * dims.c + a, (a * dims.b + b) * dims.c + c) = 1.0;
    return s;
}

bool is_exchange_symmetric(const HermitianOperator& h, const TripartiteDims& dims, double rel_tol) {
    check_dims(dims, h.dim());
    const ComplexMatrix s = exchange_ac(dims);
    const ComplexMatrix diff = s * h.matrix() * s - h.matrix();
    return diff.frobenius_norm() <= rel_tol * h.matrix().frobenius_norm();
}

EigenstateAnalysis analyze_state(std::span<const cplx> psi, const TripartiteDims& dims) {
    const std::array<std::size_t, 3> d3{dims.a, dims.b, dims.c};
    EigenstateAnalysis s;
    s.purity_a = purity(reduce_pure_state(psi, d3, std::array<std::size_t, 1>{0}));
    s.purity_b = purity(reduce_pure_state(psi, d3, std::array<std::size_t, 1>{1}));
    s.purity_c = purity(reduce_pure_state(psi, d3, std::array<std::size_t, 1>{2}));
    const auto rho_ac = reduce_pure_state(psi, d3, std::array<std::size_t, 2>{0, 2});
    s.purity_ac = purity(rho_ac);
    s.schmidt_rank_ac = schmidt(psi, dims.a, dims.b * dims.c).rank(kSchmidtRankTol);
    if (dims.a == 2 && dims.c == 2) s.ac_concurrence = concurrence(rho_ac).value;
    s.pure_b = s.purity_b >= 1.0 - kPureTol;
    if (dims.a == dims.c) {
        const std::array<std::size_t, 3> order{2, 1, 0};
        s.exchange_parity = inner(psi, permute_subsystems(psi, d3, order)).real();
    }
    s.fully_factorized = s.purity_a >= 1.0 - kFactorizedTol && s.purity_b >= 1.0 - kFactorizedTol &&
                         s.purity_c >= 1.0 - kFactorizedTol;
    return s;
}

AnalysisReport analyze_eigenstates(const HermitianOperator& h, const EigenDecomposition& decomposition,
                                   const TripartiteDims& dims, std::uint64_t family_seed) {
    if (dims.total() != h.dim()) throw DimensionError("analyze_eigenstates: dims do not match the Hamiltonian");
    AnalysisReport report;
    report.symmetric = dims.a == dims.c && is_exchange_symmetric(h, dims);
    if (!report.symmetric) report.warning = "Hamiltonian is not A<->C exchange symmetric; theorem checks skipped";

    Rng rng = make_rng(family_seed, 0);
    for (std::size_t k = 0; k < decomposition.dim(); ++k) {
        const ComplexVector psi = decomposition.vector(k);
        EigenstateAnalysis s = analyze_state(psi, dims);
        s.index = k;
        s.energy = decomposition.eigenvalues[k];
        s.is_degenerate = decomposition.is_degenerate(k);
        if (report.symmetric && s.pure_b && s.schmidt_rank_ac >= 2) {
            if (!s.is_degenerate) report.violations.push_back(k);
            FamilyCheck fc = check_family(h.matrix(), psi, s.energy, dims, rng);
            fc.index = k;
            report.families.push_back(fc);
        }
        report.states.push_back(s);
    }
    return report;
}

AnalysisReport analyze_eigenstates(const HermitianOperator& h, const TripartiteDims& dims,
                                   std::uint64_t family_seed) {
    return analyze_eigenstates(h, eigh(h), dims, family_seed);
}

std::vector<ComplexMatrix> generalized_gell_mann(std::size_t d) {
    if (d == 0) throw PreconditionError("generalized_gell_mann: dimension must be positive");
    std::vector<ComplexMatrix> out;
    out.push_back(ComplexMatrix::identity(d));
    for (std::size_t j = 0; j < d; ++j)
        for (std::size_t k = j + 1; k < d; ++k) {
            ComplexMatrix m(d, d);
            m(j, k) = m(k, j) = 1.0;
            out.push_back(std::move(m));
        }
    for (std::size_t j = 0; j < d; ++j)
        for (std::size_t k = j + 1; k < d; ++k) {
            ComplexMatrix m(d, d);
            m(j, k) = cplx(0.0, -1.0);
            m(k, j) = cplx(0.0, 1.0);
            out.push_back(std::move(m));
        }
    for (std::size_t l = 1; l < d; ++l) {
        ComplexMatrix m(d, d);
        const double scale = std::sqrt(2.0 / static_cast<double>(l * (l + 1)));
        for (std::size_t j = 0; j < l; ++j) m(j, j) = scale;
        m(l, l) = -scale * static_cast<double>(l);
        out.push_back(std::move(m));
    }
    return out;
}

std::string_view to_string(Family f) {
    switch (f) {
    case Family::Gaussian: return "gaussian";
    case Family::Commuting: return "commuting";
    case Family::Diagonal: return "diagonal";
    }
    return "?";
}

HermitianOperator random_symmetric_hamiltonian(std::size_t d_b, Family family, Rng& rng, bool break_symmetry) {
    if (d_b == 0) throw PreconditionError("random_symmetric_hamiltonian: d_b must be positive");
    std::normal_distribution<double> g;
    const ComplexMatrix id2 = ComplexMatrix::identity(2);
    const ComplexMatrix idb = ComplexMatrix::identity(d_b);
    const std::size_t n = 4 * d_b;
    ComplexMatrix h(n, n);

    // mirrored A-B / B-C couplings x (x) y (x) 1 + 1 (x) y (x) x
    auto couple = [&](const ComplexMatrix& x, const ComplexMatrix& y) {
        h += kron({x, y, id2});
        h += kron({id2, y, x});
    };

    switch (family) {
    case Family::Gaussian: {
        const auto gm = generalized_gell_mann(d_b);
        for (int j = 0; j < 4; ++j)
            for (std::size_t k = 0; k < gm.size(); ++k) {
                if (j == 0 && k == 0) continue;
                couple(pauli(j), g(rng) * gm[k]);
            }
        ComplexMatrix hb(d_b, d_b);
        for (const auto& m : gm) hb += g(rng) * m;
        h += kron({id2, hb, id2});
        break;
    }
    case Family::Commuting:
    case Family::Diagonal: {
        const ComplexMatrix u = family == Family::Commuting ? haar_unitary(d_b, rng) : idb;
        auto shared_basis = [&] {
            std::vector<double> d(d_b);
            for (auto& x : d) x = g(rng);
            return u * ComplexMatrix::diagonal(d) * u.adjoint();
        };
        const int first = family == Family::Commuting ? 1 : 3;
        for (int j = first; j <= 3; ++j) couple(pauli(j), shared_basis());
        if (family == Family::Commuting) {
            ComplexMatrix ha(2, 2);
            for (int j = 1; j <= 3; ++j) ha += g(rng) * pauli(j);
            couple(ha, idb);
        }
        h += kron({id2, shared_basis(), id2});
        break;
    }
    }

    if (break_symmetry) {
        ComplexMatrix extra(2, 2);
        for (int j = 1; j <= 3; ++j) extra += g(rng) * pauli(j);
        h += kron({id2, idb, extra});
    }
    // exact Hermiticity against round-off in the basis changes
    ComplexMatrix sym = h + h.adjoint();
    sym *= 0.5;
    return HermitianOperator(std::move(sym));
}

FuzzReport theorem_fuzz(std::size_t trials, std::size_t d_b, std::uint64_t seed, bool break_symmetry,
                        unsigned threads) {
    if (trials == 0) throw PreconditionError("theorem_fuzz: trials must be at least 1");
    if (d_b == 0) throw PreconditionError("theorem_fuzz: d_b must be positive");
    const TripartiteDims dims{2, d_b, 2};

    struct Outcome {
        TrialSummary summary;
        std::vector<Counterexample> counterexamples;
    };
    auto run = [&](std::size_t trial) {
        Outcome out;
        TrialSummary& s = out.summary;
        s.trial = trial;
        s.family = static_cast<Family>(trial % 3);
        Rng rng = make_rng(seed, trial);
        const HermitianOperator h = random_symmetric_hamiltonian(d_b, s.family, rng, break_symmetry);
        EigenDecomposition dec = eigh(h);
        scramble_degenerate_levels(dec, rng);
        const AnalysisReport report = analyze_eigenstates(h, dec, dims, derive_seed(seed, trial));

        s.symmetric = report.symmetric;
        s.eigenstates = report.states.size();
        for (const auto& level : dec.degeneracy_groups) s.degenerate_levels += level.size() > 1 ? 1 : 0;
        if (!report.symmetric) return out;
        for (const auto& st : report.states) s.hypothesis_hits += (st.pure_b && !st.is_degenerate) ? 1 : 0;
        for (std::size_t k : report.violations) out.counterexamples.push_back({trial, s.family, report.states[k]});
        s.counterexamples = report.violations.size();
        for (std::size_t k : report.violations)
            s.antisymmetric_counterexamples += report.states[k].exchange_parity.value_or(0.0) < -0.5 ? 1 : 0;
        for (const auto& fc : report.families) {
            ++s.family_checks;
            s.family_failures += fc.passed ? 0 : 1;
            s.max_family_deviation = std::max(s.max_family_deviation, fc.max_deviation);
        }
        return out;
    };

    FuzzReport report;
    report.trials = trials;
    report.d_b = d_b;
    report.seed = seed;
    report.break_symmetry = break_symmetry;
    for (auto& o : sweep::parallel_map(trials, run, threads)) {
        const TrialSummary& s = o.summary;
        if (!s.symmetric) ++report.symmetry_violations;
        report.hypothesis_hits += s.hypothesis_hits;
        report.antisymmetric_counterexamples += s.antisymmetric_counterexamples;
        report.family_checks += s.family_checks;
        report.family_failures += s.family_failures;
        report.max_family_deviation = std::max(report.max_family_deviation, s.max_family_deviation);
        for (auto& c : o.counterexamples) report.counterexamples.push_back(std::move(c));
        report.per_trial.push_back(s);
    }
    return report;
}

sweep::SweepResult fuzz_table(const FuzzReport& report) {
    using sweep::ColumnType;
    sweep::SweepResult t;
    t.schema = {{"trial", ColumnType::Integer},           {"family", ColumnType::Text},
                {"symmetric", ColumnType::Boolean},       {"eigenstates", ColumnType::Integer},
                {"degenerate_levels", ColumnType::Integer}, {"hypothesis_hits", ColumnType::Integer},
                {"counterexamples", ColumnType::Integer}, {"antisymmetric_counterexamples", ColumnType::Integer},
                {"family_checks", ColumnType::Integer},
                {"family_failures", ColumnType::Integer}, {"max_family_deviation", ColumnType::Real}};
    auto i64 = [](std::size_t x) { return static_cast<std::int64_t>(x); };
    for (const auto& s : report.per_trial)
        t.append({i64(s.trial), std::string(to_string(s.family)), s.symmetric, i64(s.eigenstates),
                  i64(s.degenerate_levels), i64(s.hypothesis_hits), i64(s.counterexamples),
                  i64(s.antisymmetric_counterexamples), i64(s.family_checks),
                  i64(s.family_failures), s.max_family_deviation});
    return t;
}

CorollaryReport corollary_check(bool degenerate, double concurrence, double purity_ac) {
    CorollaryReport r;
    r.symmetric = true;
    r.degenerate = degenerate;
    r.concurrence = concurrence;
    r.purity_ac = purity_ac;
    if (!degenerate && concurrence > kEntangledThreshold) r.mixed_clause = purity_ac < 1.0 - kCorollaryPurityGap;
    if (concurrence > 1.0 - kCorollaryPurityGap) r.maximal_clause = degenerate;
    return r;
}

CorollaryReport corollary_check(const HermitianOperator& h, const TripartiteDims& dims) {
    if (dims.a != 2 || dims.c != 2) throw DimensionError("corollary_check: A and C must be qubits");
    check_dims(dims, h.dim());
    const auto d3 = dims.as_array();
    const std::array<std::size_t, 2> keep{0, 2};
    const GroundState g = ground_state(h, d3, keep);
    CorollaryReport r = corollary_check(g.degenerate, ac_concurrence(g).value, purity(*g.reduced));
    r.energy = g.energy;
    r.symmetric = is_exchange_symmetric(h, dims);
    return r;
}

} // namespace medent::theorem
