#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include <unistd.h>

#include "cli.hpp"
#include "hyperma/errors.hpp"
#include "hyperma/random.hpp"
#include "json_io.hpp"

using namespace hyperma;
using io::Json;
using io::Where;
namespace fs = std::filesystem;

namespace {

struct Run {
    int code = -1;
    std::string out;
    std::string err;
    Json json() const { return Json::parse(out); }
};

Run run(std::vector<std::string> args) {
    std::ostringstream out, err;
    Run r;
    r.code = cli::dispatch(args, out, err);
    r.out = out.str();
    r.err = err.str();
    return r;
}

class TempDir {
public:
    TempDir() : path_(fs::temp_directory_path() / ("hyperma_cli_" + std::to_string(::getpid()))) {
        fs::create_directories(path_);
    }
    ~TempDir() { fs::remove_all(path_); }
    std::string file(const std::string& name, const std::string& contents = "") const {
        const auto p = path_ / name;
        if (!contents.empty()) std::ofstream(p) << contents;
        return p.string();
    }

private:
    fs::path path_;
};

const char* kDiag23 = R"({"n": 2, "entries": [[[2,0,0,0], 0], [0, [3,0,0,0]]]})";

const char* kBallProblem = R"({"n": 1,
  "domain": {"kind": "ball", "params": {"radius": 1.0}},
  "phi": {"kind": "constant", "params": {"value": 1.0}},
  "f": {"kind": "constant", "params": {"value": 8.0}},
  "exact": {"kind": "abs_sq", "params": {"scale": 1.0}}})";

double value_at(const TestFunction& f, const Point& x) { return f.value(x); }

}  // namespace

TEST_CASE("det prints the Moore determinant of diag(2, 3)") {
    TempDir dir;
    const auto r = run({"det", dir.file("A.json", kDiag23)});
    CHECK(r.code == cli::kExitOk);
    const Json j = r.json();
    CHECK(j["det"].get<double>() == 6.0);
    CHECK(j["eigenvalues"] == Json::array({2.0, 3.0}));
    CHECK(j["positive_definite"].get<bool>());
    CHECK(j["manifest"]["subcommand"] == "det");
    CHECK(j["manifest"].contains("seed"));
}

TEST_CASE("check-identities reports zero counted failures") {
    const auto r = run({"check-identities", "--n", "2", "--samples", "500", "--seed", "7"});
    CHECK(r.code == cli::kExitOk);
    const Json j = r.json();
    CHECK(j["failures"] == 0);
    CHECK(j["manifest"]["seed"] == 7);
    bool literal_seen = false;
    for (const auto& c : j["checks"]) {
        if (c["name"] == "claim214_literal") {
            literal_seen = true;
            CHECK_FALSE(c["counted"].get<bool>());
        }
    }
    CHECK(literal_seen);
}

TEST_CASE("solve reports the error against the declared exact solution") {
    TempDir dir;
    const auto problem = dir.file("p.json", kBallProblem);
    const auto report = dir.file("r.json");
    const auto grid = dir.file("u.json");
    const auto r = run({"solve", problem, "--h", "0.25", "--report", report, "--out", grid});
    REQUIRE(r.code == cli::kExitOk);
    const Json j = io::load_json(report);
    CHECK(j == r.json());
    CHECK(j["solve"]["converged"].get<bool>());
    CHECK(j["solve"]["max_error"].get<double>() < 1e-9);
    CHECK(j["checks"]["minimum_principle"]["holds"].get<bool>());
    CHECK(j["checks"]["barrier"]["holds"].get<bool>());
    CHECK(j["manifest"]["outputs"].size() == 2);

    SUBCASE("csv flattens the history") {
        const auto csv = run({"report", report, "--csv"});
        CHECK(csv.code == cli::kExitOk);
        std::istringstream lines(csv.out);
        std::string line;
        std::getline(lines, line);
        CHECK(line == "iteration,residual,step,krylov_iterations,min_eigenvalue");
        std::size_t rows = 0;
        while (std::getline(lines, line)) ++rows;
        CHECK(rows == j["solve"]["history"]["residual"].size());
    }
    SUBCASE("the solution grid is readable by hessian") {
        const auto h = run({"hessian", grid, "--at", "0.125,0.125,0.125,0.125"});
        CHECK(h.code == cli::kExitOk);
        CHECK(h.json()["ma"].get<double>() == doctest::Approx(8.0).epsilon(1e-8));
    }
    SUBCASE("the embedded problem reads back") {
        const Problem p = io::problem_from(j["problem"], Where("report"));
        CHECK(io::to_json(p) == j["problem"]);
    }
}

TEST_CASE("identical invocations give byte-identical output") {
    TempDir dir;
    const auto problem = dir.file("p.json", kBallProblem);
    const auto a = run({"solve", problem, "--h", "0.25"});
    const auto b = run({"solve", problem, "--h", "0.25"});
    CHECK(a.code == cli::kExitOk);
    CHECK(a.out == b.out);
    const auto c = run({"check-identities", "--n", "3", "--samples", "20", "--seed", "11"});
    const auto d = run({"check-identities", "--n", "3", "--samples", "20", "--seed", "11"});
    CHECK(c.out == d.out);
}

TEST_CASE("verification failures exit 1") {
    TempDir dir;
    const auto capped = run({"solve", dir.file("p.json", kBallProblem), "--max-newton", "1"});
    CHECK(capped.code == cli::kExitFailed);
    CHECK(capped.json()["solve"]["converged"] == false);
    CHECK(capped.json()["checks"].is_null());

    // A box has faces the subsolution cannot match exactly.
    const auto box = dir.file("box.json", R"({"n": 1, "domain": {"kind": "box", "params": {"half_width": 0.5}},
        "phi": {"kind": "abs_sq", "params": {}}, "f": {"kind": "constant", "params": {"value": 8}}})");
    const auto sub = run({"subsolution", box, "--samples", "500"});
    CHECK(sub.code == cli::kExitFailed);
    CHECK_FALSE(sub.json()["verify"]["boundary_ok"].get<bool>());
}

TEST_CASE("malformed input exits 2 with a location") {
    TempDir dir;
    struct Case {
        std::string name, contents, sub, where;
    };
    const std::vector<Case> cases = {
        {"syntax.json", "{\"n\": 2,", "det", "syntax.json: byte"},
        {"rows.json", R"({"n": 2, "entries": [[1, 0]]})", "det", "rows.json:/entries"},
        {"nonherm.json", R"({"n": 2, "entries": [[1, [0,1,0,0]], [[0,1,0,0], 1]]})", "det", "nonherm.json:/entries"},
        {"quat.json", R"({"n": 1, "entries": [[[1, 2]]]})", "det", "quat.json:/entries/0/0"},
        {"missing.json", R"({"n": 1, "domain": {"kind": "ball"}, "phi": {"kind": "constant"}})", "solve",
         "missing.json:/: missing field 'f'"},
        {"key.json",
         R"({"n": 1, "domain": {"kind": "ball"}, "phi": {"kind": "abs_sq", "params": {"radius": 2}},
             "f": {"kind": "constant", "params": {"value": 1}}})",
         "solve", "key.json:/phi/params/radius: unknown field"},
        {"radius.json",
         R"({"n": 1, "domain": {"kind": "ball", "params": {"radius": -1}}, "phi": {"kind": "constant"},
             "f": {"kind": "constant", "params": {"value": 1}}})",
         "subsolution", "radius.json:/domain/params"},
        {"kind.json",
         R"({"n": 1, "domain": {"kind": "torus"}, "phi": {"kind": "constant"},
             "f": {"kind": "constant", "params": {"value": 1}}})",
         "solve", "kind.json:/domain/kind"},
    };
    for (const auto& c : cases) {
        CAPTURE(c.name);
        const auto r = run({c.sub, dir.file(c.name, c.contents)});
        CHECK(r.code == cli::kExitUsage);
        CHECK(r.err.find(c.where) != std::string::npos);
    }
    CHECK(run({"det", dir.file("absent.json")}).code == cli::kExitUsage);
    CHECK(run({"report", dir.file("plain.json", "{\"a\": 1}")}).err.find("plain.json:/: missing field 'manifest'") !=
          std::string::npos);
}

TEST_CASE("usage errors exit 2") {
    CHECK(run({}).code == cli::kExitUsage);
    CHECK(run({"frobnicate"}).code == cli::kExitUsage);
    CHECK(run({"check-identities", "--n", "0"}).code == cli::kExitUsage);
    CHECK(run({"check-identities", "--samples", "x"}).code == cli::kExitUsage);
    CHECK(run({"solve"}).code == cli::kExitUsage);
    const auto help = run({"--help"});
    CHECK(help.code == cli::kExitOk);
    CHECK(help.out.find("check-identities") != std::string::npos);
}

TEST_CASE("mixdisc and dimension mismatches") {
    TempDir dir;
    const auto a = dir.file("A.json", kDiag23);
    const auto r = run({"mixdisc", a, a});
    CHECK(r.code == cli::kExitOk);
    CHECK(r.json()["value"].get<double>() == doctest::Approx(6.0).epsilon(1e-14));
    CHECK(run({"mixdisc", a}).code == cli::kExitUsage);
    CHECK(run({"hessian", dir.file("f.json", R"({"kind": "abs_sq"})"), "--at", "1,2,3"}).code == cli::kExitUsage);
}

TEST_CASE("hessian output round-trips through det") {
    TempDir dir;
    const auto f = dir.file("f.json", R"({"kind": "sum", "params": {"terms": [
        {"kind": "abs_sq", "params": {"scale": 2}},
        {"kind": "affine", "params": {"var": 1, "component": 2, "constant": 3}}]}})");
    const auto m = dir.file("H.json");
    const auto r = run({"hessian", f, "--at", "0.1,0.2,0.3,0.4,0.5,0.6,0.7,0.8", "--out", m});
    REQUIRE(r.code == cli::kExitOk);
    CHECK(r.json()["ma"].get<double>() == doctest::Approx(256.0).epsilon(1e-10));
    const auto d = run({"det", m});
    CHECK(d.code == cli::kExitOk);
    CHECK(d.json()["det"].get<double>() == doctest::Approx(256.0).epsilon(1e-10));
}

TEST_CASE("every writer's output is accepted by its reader") {
    Rng rng = sample_rng(3, 0, 0);
    const std::size_t n = 2;
    const auto a = random_hyperhermitian(n, rng);
    CHECK(io::matrix_from(io::to_json(a), Where("m")) == a);

    std::vector<double> w(4 * n);
    for (auto& v : w) v = uniform(rng, -1.0, 1.0);
    const Point c{0.1, -0.2, 0.3, 0.0, 0.5, 0.0, -0.1, 0.2};
    TestFunction f = TestFunction::affine(w, 0.7) + TestFunction::abs_sq(n, 2.0) +
                     TestFunction::radial_pow4(n, 0.5) + TestFunction::exp_abs_sq(n, 0.3, 1.5) +
                     TestFunction::quadratic_form(random_positive_definite(n, rng), 0.25) +
                     TestFunction::constant(n, -4.0);
    f = f.shifted(c);
    const TestFunction g = io::function_from(io::to_json(f), 0, Where("f"));
    CHECK(io::to_json(g) == io::to_json(f));
    for (int i = 0; i < 10; ++i) {
        Point x(4 * n);
        for (auto& v : x) v = uniform(rng, -1.0, 1.0);
        CHECK(value_at(g, x) == value_at(f, x));
    }

    for (const auto& d : {DomainSpec::ball(n, 1.5, c), DomainSpec::ellipsoid({1.0, 2.0}), DomainSpec::box(n, 0.5)}) {
        const Json j = io::to_json(d);
        CHECK(io::to_json(io::domain_from(j, n, Where("d"))) == j);
    }
    RhsFunction shifted = RhsFunction::abs_sq(24.0, 1.0);
    shifted.center = c;
    for (const auto& r : {RhsFunction::constant_value(8.0), shifted, RhsFunction::exp_u(2.0, 0.5, 1.0),
                          RhsFunction::grad_power(1.0, 2.0, 3.0)}) {
        const Json j = io::to_json(r);
        CHECK(io::to_json(io::rhs_from(j, Where("r"))) == j);
    }
}
