#include "cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include "medent/dicke.hpp"
#include "medent/errors.hpp"
#include "medent/ising_sweep.hpp"
#include "medent/optimize.hpp"
#include "medent/qubits.hpp"
#include "medent/sweep.hpp"
#include "medent/theorem.hpp"

namespace medent::cli {

namespace {

const std::vector<std::string> kCommands{"spectrum", "sweep", "theorem", "optimize"};

std::string num(double x) {
    if (std::isnan(x)) return "nan";
    if (x == 0.0) x = 0.0; // no "-0"
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, x);
    return std::string(buf, res.ptr);
}

std::string trim(std::string_view s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string_view::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return std::string(s.substr(b, e - b + 1));
}

void write_table(const std::string& path, const sweep::SweepResult& table) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw PreconditionError("cannot open '" + path + "' for writing");
    sweep::write_csv(f, table);
    if (!f) throw PreconditionError("failed writing '" + path + "'");
}

struct ModelOptions {
    std::string model = "ising";
    double j = 1.0;
    double delta = 0.0;
    double lam = 0.0;
    std::string variant = "h3";
    double kappa = 0.0;
    double lam_tilde = 1.0;
    std::optional<double> dicke_lam;
    double lam_ratio = 1.0;
    double omega_a = 1.0;
    double omega_f = 1.0;
    std::size_t nmax = 40;
};

void add_ising_options(CLI::App* app, ModelOptions& m) {
    app->add_option("--j", m.j, "Ising coupling J")->capture_default_str();
}

void add_dicke_options(CLI::App* app, ModelOptions& m, bool variant_all) {
    std::vector<std::string> variants{"h1", "h2", "h3"};
    if (variant_all) variants.push_back("all");
    app->add_option("--variant", m.variant, "Dicke Hamiltonian")->check(CLI::IsMember(variants))->capture_default_str();
    app->add_option("--nmax", m.nmax, "Fock cutoff")->capture_default_str();
    app->add_option("--omega-a", m.omega_a, "atomic frequency")->capture_default_str();
    app->add_option("--omega-f", m.omega_f, "field frequency")->capture_default_str();
    app->add_option("--lam", m.dicke_lam, "quadratic coefficient (default lam-ratio * kappa^2 / omega_a)");
    app->add_option("--lam-ratio", m.lam_ratio, "lam / (kappa^2 / omega_a) when --lam is unset")->capture_default_str();
}

dicke::DickeConfig dicke_config(const ModelOptions& m, dicke::Variant v) {
    dicke::DickeConfig c;
    c.variant = v;
    c.omega_a = m.omega_a;
    c.omega_f = m.omega_f;
    c.kappa = m.kappa;
    c.lam = m.dicke_lam;
    c.lam_ratio = m.lam_ratio;
    c.lam_tilde = m.lam_tilde;
    c.n_max = m.nmax;
    c.validate();
    return c;
}

// ---------------------------------------------------------------- spectrum

struct SpectrumOptions {
    ModelOptions m;
    double tol = 1e-9;
    std::string out;
};

int cmd_spectrum(const SpectrumOptions& o, std::ostream& out) {
    HermitianOperator h = [&] {
        if (o.m.model == "ising") return qubits::build_ising({.j_coupling = o.m.j, .delta = o.m.delta, .lam = o.m.lam});
        return dicke::build_dicke(dicke_config(o.m, dicke::parse_variant(o.m.variant)));
    }();
    const auto dec = eigh(h, {.degeneracy_rel_tol = o.tol});

    if (o.m.model == "ising")
        out << "model ising j=" << num(o.m.j) << " delta=" << num(o.m.delta) << " lambda=" << num(o.m.lam) << '\n';
    else
        out << "model dicke variant=" << o.m.variant << " kappa=" << num(o.m.kappa) << " lam_tilde=" << num(o.m.lam_tilde)
            << " nmax=" << o.m.nmax << '\n';
    out << "dimension " << dec.dim() << '\n';
    out << "eigenvalues\n";
    for (std::size_t k = 0; k < dec.dim(); ++k) out << "  " << k << ' ' << num(dec.eigenvalues[k]) << '\n';
    out << "levels " << dec.degeneracy_groups.size() << '\n';
    for (std::size_t g = 0; g < dec.degeneracy_groups.size(); ++g) {
        const auto& r = dec.degeneracy_groups[g];
        if (r.size() > 1)
            out << "  level " << g << " E=" << num(dec.eigenvalues[r.begin]) << " multiplicity " << r.size() << '\n';
    }

    int code = kExitOk;
    if (o.m.model == "ising" && o.m.delta == 0.0) {
        if (o.m.j != 1.0) {
            out << "analytic spectrum needs j=1; skipped\n";
        } else {
            const qubits::IsingParams p{.delta = 0.0, .lam = o.m.lam};
            auto analytic = qubits::analytic_ising_spectrum(qubits::ising_local_field(p)).eigenvalues();
            std::sort(analytic.begin(), analytic.end());
            double dev = 0.0;
            out << "analytic";
            for (std::size_t k = 0; k < analytic.size(); ++k) {
                out << ' ' << num(analytic[k]);
                dev = std::max(dev, std::abs(analytic[k] - dec.eigenvalues[k]));
            }
            out << "\nmax deviation " << num(dev) << '\n';
            if (dev > 1e-9) code = kExitNumerical;
        }
    }

    if (!o.out.empty()) {
        sweep::SweepResult t;
        t.schema = {{"index", sweep::ColumnType::Integer},
                    {"energy", sweep::ColumnType::Real},
                    {"level", sweep::ColumnType::Integer},
                    {"multiplicity", sweep::ColumnType::Integer}};
        for (std::size_t g = 0; g < dec.degeneracy_groups.size(); ++g) {
            const auto& r = dec.degeneracy_groups[g];
            for (std::size_t k = r.begin; k < r.end; ++k)
                t.append({static_cast<std::int64_t>(k), dec.eigenvalues[k], static_cast<std::int64_t>(g),
                          static_cast<std::int64_t>(r.size())});
        }
        write_table(o.out, t);
    }
    return code;
}

// ---------------------------------------------------------------- sweep

struct SweepOptions {
    ModelOptions m;
    std::string delta_grid = "0.01:2:25";
    std::string lambda_grid = "0:3:31";
    std::string kappa_grid = "0:1.2:25";
    std::string lam_tilde_grid = "1";
    double tol = 1e-6;
    std::size_t max_nmax = 160;
    unsigned threads = 0;
    std::string out;
};

int cmd_sweep(const SweepOptions& o, std::ostream& out) {
    sweep::SweepResult table;
    if (o.m.model == "ising") {
        table = qubits::ising_sweep(sweep::parse_grid(o.delta_grid), sweep::parse_grid(o.lambda_grid), o.threads);
    } else {
        const auto kappas = sweep::parse_grid(o.kappa_grid);
        const auto tildes = sweep::parse_grid(o.lam_tilde_grid);
        const dicke::ConvergenceOptions conv{.tolerance = o.tol, .max_n_max = o.max_nmax};
        std::vector<dicke::Variant> variants;
        if (o.m.variant == "all")
            variants = {dicke::Variant::H1, dicke::Variant::H2, dicke::Variant::H3};
        else
            variants = {dicke::parse_variant(o.m.variant)};
        table.schema = dicke::dicke_sweep_schema();
        for (auto v : variants) {
            ModelOptions m = o.m;
            m.kappa = 0.0;
            for (auto& row : dicke::dicke_sweep(dicke_config(m, v), kappas, tildes, conv, o.threads).rows)
                table.append(std::move(row));
        }
    }

    std::size_t ok = 0;
    for (std::size_t i = 0; i < table.rows.size(); ++i) ok += table.text(i, "status") == "ok";

    if (o.out.empty() || o.out == "-") {
        sweep::write_csv(out, table);
    } else {
        write_table(o.out, table);
        out << "rows " << table.rows.size() << " ok " << ok << " other " << table.rows.size() - ok << '\n';
        if (o.m.model == "dicke") {
            // per-variant grid averages over the successful points
            std::vector<std::string> seen;
            for (std::size_t i = 0; i < table.rows.size(); ++i)
                if (std::find(seen.begin(), seen.end(), table.text(i, "variant")) == seen.end())
                    seen.push_back(table.text(i, "variant"));
            for (const auto& v : seen) {
                double sum = 0.0, best = 0.0;
                std::size_t n = 0;
                for (std::size_t i = 0; i < table.rows.size(); ++i) {
                    if (table.text(i, "variant") != v || table.text(i, "status") != "ok") continue;
                    sum += table.real(i, "concurrence");
                    best = std::max(best, table.real(i, "concurrence"));
                    ++n;
                }
                out << "variant " << v << " mean concurrence " << num(n ? sum / static_cast<double>(n) : 0.0)
                    << " max " << num(best) << '\n';
            }
        }
    }
    return ok > 0 ? kExitOk : kExitNumerical;
}

// ---------------------------------------------------------------- theorem

struct TheoremOptions {
    std::size_t trials = 200;
    std::size_t db = 2;
    std::uint64_t seed = 42;
    bool break_symmetry = false;
    unsigned threads = 0;
    std::size_t show = 10;
    std::string out;
};

int cmd_theorem(const TheoremOptions& o, std::ostream& out) {
    const auto r = theorem::theorem_fuzz(o.trials, o.db, o.seed, o.break_symmetry, o.threads);
    out << "theorem fuzz trials=" << r.trials << " db=" << r.d_b << " seed=" << r.seed
        << (r.break_symmetry ? " break-symmetry" : "") << '\n';
    if (r.symmetry_violations > 0)
        out << "symmetry violation in " << r.symmetry_violations << " of " << r.trials
            << " trials; theorem checks skipped for those trials\n";
    out << "hypothesis hits " << r.hypothesis_hits << '\n';
    out << "counterexamples " << r.counterexamples.size() << " (exchange-antisymmetric "
        << r.antisymmetric_counterexamples << ")\n";
    out << "family checks " << r.family_checks << " failures " << r.family_failures << " max deviation "
        << num(r.max_family_deviation) << '\n';
    const std::size_t shown = std::min(o.show, r.counterexamples.size());
    for (std::size_t i = 0; i < shown; ++i) {
        const auto& c = r.counterexamples[i];
        out << "  trial " << c.trial << " family " << theorem::to_string(c.family) << " state " << c.state.index
            << " E=" << num(c.state.energy) << " purity_b=" << num(c.state.purity_b)
            << " schmidt_rank=" << c.state.schmidt_rank_ac;
        if (c.state.ac_concurrence) out << " C=" << num(*c.state.ac_concurrence);
        if (c.state.exchange_parity) out << " parity=" << num(*c.state.exchange_parity);
        out << '\n';
    }
    if (shown < r.counterexamples.size()) out << "  ... " << r.counterexamples.size() - shown << " more\n";
    if (!o.out.empty()) write_table(o.out, theorem::fuzz_table(r));
    out << (r.clean() ? "result: no counterexample\n" : "result: COUNTEREXAMPLE\n");
    return r.clean() ? kExitOk : kExitCounterexample;
}

// ---------------------------------------------------------------- optimize

struct OptimizeOptions {
    ModelOptions m;
    std::string bounds;
    std::size_t budget = 300;
    std::uint64_t seed = 1;
    std::optional<double> target;
    double tol = 1e-10;
    std::string out;
};

control::Bound parse_bounds(const std::string& spec) {
    const auto colon = spec.find(':');
    if (colon == std::string::npos) throw PreconditionError("bounds: expected lo:hi, got '" + spec + "'");
    const auto value = [&](std::string_view s) {
        double x = 0.0;
        const auto t = trim(s);
        const auto res = std::from_chars(t.data(), t.data() + t.size(), x);
        if (res.ec != std::errc{} || res.ptr != t.data() + t.size() || t.empty())
            throw PreconditionError("bounds: bad number '" + t + "'");
        return x;
    };
    return {value(std::string_view(spec).substr(0, colon)), value(std::string_view(spec).substr(colon + 1))};
}

int cmd_optimize(const OptimizeOptions& o, std::ostream& out) {
    control::ControlProblem p;
    p.control_dim = 1;
    if (o.target) p.objective = control::Objective::target_concurrence(*o.target);
    std::optional<dicke::DickeConfig> base;
    if (o.m.model == "ising") {
        const double j = o.m.j, delta = o.m.delta;
        p.model = [j, delta](std::span<const double> u) {
            return qubits::build_ising({.j_coupling = j, .delta = delta, .lam = u[0]});
        };
        p.bounds = {parse_bounds(o.bounds.empty() ? "0:3" : o.bounds)};
    } else {
        base = dicke_config(o.m, dicke::parse_variant(o.m.variant));
        const dicke::DickeConfig cfg = *base;
        p.dims = {2, cfg.n_max + 1, 2};
        p.model = [cfg](std::span<const double> u) {
            dicke::DickeConfig c = cfg;
            c.kappa = u[0];
            return HermitianOperator(dicke::to_mediator_layout(dicke::build_dicke(c).matrix(), c.n_max));
        };
        p.bounds = {parse_bounds(o.bounds.empty() ? "0:1.2" : o.bounds)};
    }

    const auto r = control::optimize(p, o.budget, o.seed, {.ftol = o.tol});
    const char* control_name = o.m.model == "ising" ? "lambda" : "kappa";
    out << "optimize model=" << o.m.model << " control=" << control_name << " bounds=" << num(p.bounds[0].lo) << ':'
        << num(p.bounds[0].hi) << " budget=" << o.budget << " seed=" << o.seed << '\n';
    out << "best " << control_name << ' ' << num(r.best_controls[0]) << '\n';
    out << "best value " << num(r.best_value) << '\n';
    out << "concurrence " << num(r.best_concurrence) << (r.best_degenerate ? " (degenerate ground)" : "") << '\n';
    out << "evaluations " << r.evaluations << " failed " << r.failed_evaluations << " restarts " << r.restarts
        << " converged " << (r.converged ? "yes" : "no") << '\n';
    if (base) {
        dicke::DickeConfig c = *base;
        c.kappa = r.best_controls[0];
        const auto check = dicke::dicke_ground_concurrence(c);
        out << "cutoff check concurrence " << num(check.concurrence.value) << " at nmax " << check.n_max_used << '\n';
    }
    if (!o.out.empty()) write_table(o.out, control::trace_table(r, p.control_dim));
    return kExitOk;
}

} // namespace

std::vector<std::pair<std::string, std::string>> parse_config(std::istream& in) {
    std::vector<std::pair<std::string, std::string>> entries;
    std::string line;
    for (std::size_t n = 1; std::getline(in, line); ++n) {
        const std::string t = trim(line);
        if (t.empty() || t.front() == '#') continue;
        const auto eq = t.find('=');
        if (eq == std::string::npos)
            throw PreconditionError("config line " + std::to_string(n) + ": expected key=value");
        std::string key = trim(std::string_view(t).substr(0, eq));
        if (key.rfind("--", 0) == 0) key.erase(0, 2);
        if (key.empty()) throw PreconditionError("config line " + std::to_string(n) + ": empty key");
        if (key == "config") throw PreconditionError("config line " + std::to_string(n) + ": nested config");
        entries.emplace_back(std::move(key), trim(std::string_view(t).substr(eq + 1)));
    }
    return entries;
}

std::vector<std::string> merge_config(const std::vector<std::string>& args) {
    std::optional<std::string> path;
    for (std::size_t i = 0; i < args.size(); ++i) {
        if (args[i] == "--config") {
            if (i + 1 >= args.size()) throw PreconditionError("--config needs a file name");
            path = args[i + 1];
        } else if (args[i].rfind("--config=", 0) == 0) {
            path = args[i].substr(9);
        }
    }
    if (!path) return args;
    const auto sub = std::find_first_of(args.begin(), args.end(), kCommands.begin(), kCommands.end());
    if (sub == args.end()) return args;

    std::ifstream f(*path);
    if (!f) throw PreconditionError("cannot read config file '" + *path + "'");
    std::vector<std::string> merged(args.begin(), sub + 1);
    for (const auto& [k, v] : parse_config(f)) merged.push_back("--" + k + "=" + v);
    merged.insert(merged.end(), sub + 1, args.end());
    return merged;
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Mediated entanglement: spectra, sweeps, theorem fuzzing and control optimization", "medent"};
    app.require_subcommand(1);
    app.option_defaults()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
    std::string config_path;

    const auto add_common = [&](CLI::App* sub, std::string& out_path) {
        sub->add_option("--out", out_path, "output CSV file");
        sub->add_option("--config", config_path, "key=value file; flags on the command line override it");
    };
    const auto add_model = [&](CLI::App* sub, ModelOptions& m) {
        sub->add_option("--model", m.model, "ising or dicke")
            ->check(CLI::IsMember({"ising", "dicke"}))
            ->capture_default_str();
    };

    SpectrumOptions so;
    auto* spectrum = app.add_subcommand("spectrum", "eigenvalues and degeneracy groups of one Hamiltonian");
    add_model(spectrum, so.m);
    add_common(spectrum, so.out);
    add_ising_options(spectrum, so.m);
    add_dicke_options(spectrum, so.m, false);
    spectrum->add_option("--delta", so.m.delta, "A and C field strength")->capture_default_str();
    spectrum->add_option("--lambda", so.m.lam, "B field strength")->capture_default_str();
    spectrum->add_option("--kappa", so.m.kappa, "atom-field coupling")->capture_default_str();
    spectrum->add_option("--lam-tilde", so.m.lam_tilde, "quadratic term multiplier")->capture_default_str();
    spectrum->add_option("--tol", so.tol, "relative degeneracy tolerance")->capture_default_str();

    SweepOptions sw;
    auto* sweep_cmd = app.add_subcommand("sweep", "ground-state concurrence over a parameter grid (CSV)");
    add_model(sweep_cmd, sw.m);
    add_common(sweep_cmd, sw.out);
    add_dicke_options(sweep_cmd, sw.m, true);
    sweep_cmd->add_option("--delta", sw.delta_grid, "delta grid start:stop:count or a,b,c")->capture_default_str();
    sweep_cmd->add_option("--lambda", sw.lambda_grid, "lambda grid")->capture_default_str();
    sweep_cmd->add_option("--kappa", sw.kappa_grid, "kappa grid")->capture_default_str();
    sweep_cmd->add_option("--lam-tilde", sw.lam_tilde_grid, "lam_tilde grid")->capture_default_str();
    sweep_cmd->add_option("--tol", sw.tol, "Fock convergence tolerance on the concurrence")->capture_default_str();
    sweep_cmd->add_option("--max-nmax", sw.max_nmax, "largest Fock cutoff tried")->capture_default_str();
    sweep_cmd->add_option("--threads", sw.threads, "worker threads (0 = all cores)")->capture_default_str();

    TheoremOptions th;
    auto* theorem_cmd = app.add_subcommand("theorem", "fuzz the exchange-symmetry factorization theorem");
    add_common(theorem_cmd, th.out);
    theorem_cmd->add_option("--trials", th.trials, "random Hamiltonians")->capture_default_str();
    theorem_cmd->add_option("--db-dim", th.db, "mediator dimension")->capture_default_str();
    theorem_cmd->add_option("--seed", th.seed, "run seed")->capture_default_str();
    theorem_cmd->add_flag("--break-symmetry", th.break_symmetry, "add a non-mirrored B-C term");
    theorem_cmd->add_option("--threads", th.threads, "worker threads (0 = all cores)")->capture_default_str();
    theorem_cmd->add_option("--show", th.show, "counterexamples listed in the report")->capture_default_str();

    OptimizeOptions op;
    op.m.delta = 0.1;
    auto* optimize_cmd = app.add_subcommand("optimize", "maximize A-C concurrence over the B control");
    add_model(optimize_cmd, op.m);
    add_common(optimize_cmd, op.out);
    add_ising_options(optimize_cmd, op.m);
    add_dicke_options(optimize_cmd, op.m, false);
    optimize_cmd->add_option("--delta", op.m.delta, "fixed A and C field (ising)")->capture_default_str();
    optimize_cmd->add_option("--lam-tilde", op.m.lam_tilde, "fixed quadratic multiplier (dicke)")->capture_default_str();
    optimize_cmd->add_option("--bounds", op.bounds, "control interval lo:hi (default 0:3 ising, 0:1.2 dicke)");
    optimize_cmd->add_option("--budget", op.budget, "objective evaluations")->capture_default_str();
    optimize_cmd->add_option("--seed", op.seed, "restart seed")->capture_default_str();
    optimize_cmd->add_option("--target", op.target, "aim for this concurrence instead of maximizing");
    optimize_cmd->add_option("--tol", op.tol, "simplex value-spread tolerance")->capture_default_str();

    try {
        std::vector<std::string> reversed = merge_config(args);
        std::reverse(reversed.begin(), reversed.end());
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        return app.exit(e, out, err) == 0 ? kExitOk : kExitUsage;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return kExitUsage;
    }

    try {
        if (spectrum->parsed()) return cmd_spectrum(so, out);
        if (sweep_cmd->parsed()) return cmd_sweep(sw, out);
        if (theorem_cmd->parsed()) return cmd_theorem(th, out);
        return cmd_optimize(op, out);
    } catch (const NumericalError& e) {
        err << "numerical failure: " << e.what() << '\n';
        return kExitNumerical;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return kExitUsage;
    }
}

} // namespace medent::cli
