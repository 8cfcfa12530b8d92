#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "cli.hpp"
#include "medent/dicke.hpp"
#include "medent/errors.hpp"
#include "medent/ising_sweep.hpp"
#include "medent/sweep.hpp"

using namespace medent;

namespace {

struct Run {
    int code = 0;
    std::string out;
    std::string err;
};

Run run(std::vector<std::string> args) {
    std::ostringstream out, err;
    Run r;
    r.code = cli::run(args, out, err);
    r.out = out.str();
    r.err = err.str();
    return r;
}

std::filesystem::path scratch(const std::string& name) {
    const auto dir = std::filesystem::temp_directory_path() / "medent_cli_test";
    std::filesystem::create_directories(dir);
    return dir / name;
}

std::string slurp(const std::filesystem::path& p) {
    std::ifstream f(p, std::ios::binary);
    std::ostringstream s;
    s << f.rdbuf();
    return s.str();
}

std::vector<double> eigenvalues(const std::string& report) {
    std::istringstream in(report);
    std::string line;
    std::vector<double> v;
    bool inside = false;
    while (std::getline(in, line)) {
        if (line == "eigenvalues") {
            inside = true;
            continue;
        }
        if (inside && line.rfind("  ", 0) != 0) break;
        if (inside) {
            std::istringstream f(line);
            std::size_t k;
            double e;
            f >> k >> e;
            v.push_back(e);
        }
    }
    return v;
}

double field_after(const std::string& report, const std::string& key) {
    const auto pos = report.find(key);
    REQUIRE(pos != std::string::npos);
    return std::stod(report.substr(pos + key.size()));
}

} // namespace

TEST_CASE("spectrum: Ising at delta = 0 agrees with the closed form") {
    const auto r = run({"spectrum", "--model", "ising", "--delta", "0", "--lambda", "1"});
    CHECK(r.code == cli::kExitOk);
    CHECK(eigenvalues(r.out).size() == 8);
    CHECK(field_after(r.out, "max deviation ") < 1e-9);
}

TEST_CASE("spectrum: Ising at delta = lambda = 0") {
    const auto r = run({"spectrum", "--model", "ising", "--delta", "0", "--lambda", "0"});
    CHECK(r.code == cli::kExitOk);
    const auto e = eigenvalues(r.out);
    const std::vector<double> expected{-2, -2, 0, 0, 0, 0, 2, 2};
    REQUIRE(e.size() == 8);
    for (std::size_t k = 0; k < 8; ++k) CHECK(std::abs(e[k] - expected[k]) < 1e-12);
    std::size_t groups = 0;
    for (std::size_t p = r.out.find(" multiplicity "); p != std::string::npos; p = r.out.find(" multiplicity ", p + 1))
        groups += std::stoi(r.out.substr(p + 14)) >= 2;
    CHECK(groups >= 2);
}

TEST_CASE("spectrum: decoupled Dicke ground energy and CSV") {
    const auto path = scratch("spectrum.csv");
    const auto r = run({"spectrum", "--model", "dicke", "--variant", "h1", "--kappa", "0", "--nmax", "10", "--out",
                        path.string()});
    CHECK(r.code == cli::kExitOk);
    const auto e = eigenvalues(r.out);
    REQUIRE(e.size() == 44);
    CHECK(e.front() == doctest::Approx(-1.0));
    const auto t = sweep::parse_csv(slurp(path), {{"index", sweep::ColumnType::Integer},
                                                  {"energy", sweep::ColumnType::Real},
                                                  {"level", sweep::ColumnType::Integer},
                                                  {"multiplicity", sweep::ColumnType::Integer}});
    CHECK(t.rows.size() == 44);
    CHECK(t.real(0, "energy") == doctest::Approx(-1.0));
}

TEST_CASE("sweep: Ising landscape CSV is complete, exact and reproducible") {
    const auto a = scratch("ising_a.csv");
    const auto b = scratch("ising_b.csv");
    const std::vector<std::string> base{"sweep", "--model", "ising", "--delta", "0.01:2:25", "--lambda", "0:3:31"};
    auto args = base;
    args.insert(args.end(), {"--out", a.string(), "--threads", "3"});
    const auto r = run(args);
    CHECK(r.code == cli::kExitOk);
    CHECK(r.out.find("rows 775 ok 775") != std::string::npos);
    args = base;
    args.insert(args.end(), {"--out", b.string(), "--threads", "1"});
    CHECK(run(args).code == cli::kExitOk);
    const std::string text = slurp(a);
    CHECK(text == slurp(b));
    const auto table = sweep::parse_csv(text, qubits::ising_sweep_schema());
    REQUIRE(table.rows.size() == 775);
    CHECK(sweep::to_csv(table) == text);
}

TEST_CASE("sweep: single point equals the direct computation") {
    const auto r = run({"sweep", "--model", "ising", "--delta", "0.5", "--lambda", "1"});
    CHECK(r.code == cli::kExitOk);
    const auto t = sweep::parse_csv(r.out, qubits::ising_sweep_schema());
    REQUIRE(t.rows.size() == 1);
    const auto p = qubits::ising_ground_point(0.5, 1.0);
    CHECK(t.real(0, "concurrence") == p.concurrence);
    CHECK(t.real(0, "ground_energy") == p.energy);
    CHECK(t.real(0, "gap") == p.gap);

    const auto d = run({"sweep", "--model", "dicke", "--variant", "h2", "--kappa", "0.5", "--nmax", "20"});
    CHECK(d.code == cli::kExitOk);
    const auto dt = sweep::parse_csv(d.out, dicke::dicke_sweep_schema());
    REQUIRE(dt.rows.size() == 1);
    dicke::DickeConfig c;
    c.variant = dicke::Variant::H2;
    c.kappa = 0.5;
    c.n_max = 20;
    const auto direct = dicke::dicke_ground_concurrence(c);
    CHECK(dt.real(0, "concurrence") == direct.concurrence.value);
    CHECK(dt.integer(0, "nmax_used") == static_cast<std::int64_t>(direct.n_max_used));
}

TEST_CASE("sweep: all Dicke variants, one block each") {
    const auto r = run({"sweep", "--model", "dicke", "--variant", "all", "--kappa", "0:1:3", "--nmax", "10"});
    CHECK(r.code == cli::kExitOk);
    const auto t = sweep::parse_csv(r.out, dicke::dicke_sweep_schema());
    REQUIRE(t.rows.size() == 9);
    const char* names[] = {"h1", "h2", "h3"};
    for (std::size_t i = 0; i < 9; ++i) {
        CHECK(t.text(i, "variant") == names[i / 3]);
        CHECK(t.real(i, "kappa") == 0.5 * static_cast<double>(i % 3));
    }
}

TEST_CASE("sweep: every point failing is a numerical failure") {
    const auto r = run({"sweep", "--model", "dicke", "--kappa", "-2,-1", "--nmax", "4"});
    CHECK(r.code == cli::kExitNumerical);
    const auto t = sweep::parse_csv(r.out, dicke::dicke_sweep_schema());
    CHECK(t.text(0, "status") == "failed");
}

TEST_CASE("theorem: counterexamples raise exit 4, broken mirror is skipped") {
    const auto path = scratch("theorem.csv");
    const auto r = run({"theorem", "--trials", "30", "--db-dim", "2", "--seed", "42", "--out", path.string()});
    CHECK(r.code == cli::kExitCounterexample);
    CHECK(r.out.find("result: COUNTEREXAMPLE") != std::string::npos);
    CHECK(r.out.find("failures 0") != std::string::npos);
    const std::string csv = slurp(path);
    CHECK(std::count(csv.begin(), csv.end(), '\n') == 31);
    CHECK(csv.rfind("trial,family,", 0) == 0);

    const auto broken = run({"theorem", "--trials", "1", "--db-dim", "2", "--seed", "1", "--break-symmetry"});
    CHECK(broken.code == cli::kExitOk);
    CHECK(broken.out.find("symmetry violation in 1 of 1 trials") != std::string::npos);
    CHECK(run({"theorem", "--trials", "0"}).code == cli::kExitUsage);
}

TEST_CASE("optimize: Ising lambda control") {
    const auto path = scratch("trace.csv");
    const auto r = run({"optimize", "--model", "ising", "--delta", "0.1", "--bounds", "0:3", "--budget", "300",
                        "--seed", "4", "--out", path.string()});
    CHECK(r.code == cli::kExitOk);
    // tests/oracles/optimizer_oracle.py
    CHECK(std::abs(field_after(r.out, "best value ") - 0.5887472201539053) < 1e-3);
    const std::string first = slurp(path);
    CHECK(first.rfind("evaluation,restart,u0,value,concurrence,degenerate,best_so_far\n", 0) == 0);
    run({"optimize", "--model", "ising", "--delta", "0.1", "--bounds", "0:3", "--budget", "300", "--seed", "4",
         "--out", path.string()});
    CHECK(slurp(path) == first);
}

TEST_CASE("optimize: usage errors") {
    CHECK(run({"optimize", "--budget", "0"}).code == cli::kExitUsage);
    CHECK(run({"optimize", "--bounds", "3:0"}).code == cli::kExitUsage);
    CHECK(run({"optimize", "--bounds", "0-3"}).code == cli::kExitUsage);
    CHECK(run({"optimize", "--target", "2"}).code == cli::kExitUsage);
}

TEST_CASE("usage errors exit 2") {
    CHECK(run({}).code == cli::kExitUsage);
    CHECK(run({"frobnicate"}).code == cli::kExitUsage);
    CHECK(run({"spectrum", "--model", "heisenberg"}).code == cli::kExitUsage);
    CHECK(run({"spectrum", "--delta", "abc"}).code == cli::kExitUsage);
    CHECK(run({"sweep", "--delta", "1:0:3"}).code == cli::kExitUsage);
    CHECK(run({"sweep", "--model", "dicke", "--variant", "h4"}).code == cli::kExitUsage);
    CHECK(run({"spectrum", "--model", "dicke", "--nmax", "0"}).code == cli::kExitUsage);
    CHECK(run({"spectrum", "--help"}).code == cli::kExitOk);
}

TEST_CASE("config file: entries apply, flags override") {
    const auto cfg = scratch("run.cfg");
    {
        std::ofstream f(cfg);
        f << "# archived run\n\nmodel = ising\ndelta = 0.3\n--lambda=2\n";
    }
    auto r = run({"spectrum", "--config", cfg.string()});
    CHECK(r.code == cli::kExitOk);
    CHECK(r.out.rfind("model ising j=1 delta=0.3 lambda=2\n", 0) == 0);
    r = run({"spectrum", "--config", cfg.string(), "--delta", "0"});
    CHECK(r.out.rfind("model ising j=1 delta=0 lambda=2\n", 0) == 0);
    r = run({"spectrum", "--delta", "0", "--config=" + cfg.string()});
    CHECK(r.out.rfind("model ising j=1 delta=0 lambda=2\n", 0) == 0);

    {
        std::ofstream f(cfg);
        f << "trials = 1\nbreak-symmetry = true\n";
    }
    r = run({"theorem", "--config", cfg.string()});
    CHECK(r.code == cli::kExitOk);
    CHECK(r.out.find("break-symmetry") != std::string::npos);

    {
        std::ofstream f(cfg);
        f << "no-such-option = 1\n";
    }
    CHECK(run({"spectrum", "--config", cfg.string()}).code == cli::kExitUsage);
    CHECK(run({"spectrum", "--config", scratch("missing.cfg").string()}).code == cli::kExitUsage);
}

TEST_CASE("config parsing") {
    std::istringstream ok("  a = 1 \n# c\n\n--b=x y\n");
    const auto e = cli::parse_config(ok);
    REQUIRE(e.size() == 2);
    CHECK(e[0] == std::pair<std::string, std::string>{"a", "1"});
    CHECK(e[1] == std::pair<std::string, std::string>{"b", "x y"});
    std::istringstream bad("novalue\n");
    CHECK_THROWS_AS(cli::parse_config(bad), PreconditionError);
    std::istringstream nested("config = other\n");
    CHECK_THROWS_AS(cli::parse_config(nested), PreconditionError);
    CHECK(cli::merge_config({"spectrum", "--delta", "1"}) == std::vector<std::string>{"spectrum", "--delta", "1"});
}
