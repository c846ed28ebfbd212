#include "cli.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <ostream>

#include <CLI11.hpp>

#include "hyperma/errors.hpp"
#include "hyperma/grid.hpp"
#include "hyperma/identities.hpp"
#include "hyperma/mixed_discriminant.hpp"
#include "hyperma/operators.hpp"
#include "hyperma/solver.hpp"
#include "hyperma/subsolution.hpp"
#include "json_io.hpp"

#ifndef HYPERMA_VERSION
#define HYPERMA_VERSION "unknown"
#endif

namespace hyperma::cli {

namespace {

using io::Json;
using io::Where;

struct Manifest {
    std::string subcommand;
    std::vector<std::string> inputs;
    Json parameters = Json::object();
    std::uint64_t seed = kDefaultSampleSeed;
    std::vector<std::string> outputs;

    Json to_json() const {
        return Json{{"subcommand", subcommand}, {"inputs", inputs}, {"parameters", parameters},
                    {"seed", seed},             {"outputs", outputs}, {"version", HYPERMA_VERSION}};
    }
};

// NaN and infinities have no JSON literal; they become null.
Json number(double v) { return std::isfinite(v) ? Json(v) : Json(nullptr); }

std::string shortest(double v) {
    char buf[32];
    const auto r = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, r.ptr);
}

int emit(std::ostream& out, Json doc, const Manifest& m, const std::string& report_path) {
    doc["manifest"] = m.to_json();
    if (!report_path.empty()) io::save_json(report_path, doc);
    out << doc.dump(2) << '\n';
    const auto passed = doc.find("passed");
    return passed != doc.end() && passed->is_boolean() && !passed->get<bool>() ? kExitFailed : kExitOk;
}

Json spectrum_json(const HyperHermitianMatrix& a) {
    return Json{{"det", moore_det(a)},
                {"eigenvalues", eigenvalues(a)},
                {"positive_definite", is_positive_definite(a)}};
}

// ---- det -----------------------------------------------------------------

struct DetArgs {
    std::string file;
    std::string report;
};

int run_det(const DetArgs& a, std::ostream& out) {
    const auto m = io::matrix_from(io::load_json(a.file), Where(a.file));
    Manifest man{"det", {a.file}, Json::object(), kDefaultSampleSeed, {}};
    if (!a.report.empty()) man.outputs.push_back(a.report);
    Json doc = spectrum_json(m);
    doc["n"] = m.size();
    return emit(out, doc, man, a.report);
}

// ---- hessian -------------------------------------------------------------

struct HessianArgs {
    std::string file;
    std::vector<double> at;
    std::string out;
    std::string report;
};

int run_hessian(const HessianArgs& a, std::ostream& out) {
    const Json src = io::load_json(a.file);
    Json doc;
    HyperHermitianMatrix hess;
    if (src.is_object() && src.contains("shape")) {
        const GridFunction grid = read_grid(a.file);
        if (a.at.size() != grid.dim()) {
            throw DimensionError("--at: expected " + std::to_string(grid.dim()) + " coordinates");
        }
        const std::size_t node = grid.node_at(a.at);
        hess = hyper_hessian(grid, node);
        doc["source"] = "grid";
        doc["node"] = node;
        doc["ma"] = ma_operator(grid, node);
        doc["psh"] = is_psh_at(grid, node);
    } else {
        if (a.at.empty() || a.at.size() % 4 != 0) throw DimensionError("--at: expected 4n coordinates");
        const TestFunction u = io::function_from(src, a.at.size() / 4, Where(a.file));
        if (u.dim() != a.at.size()) throw DimensionError("--at: expected " + std::to_string(u.dim()) + " coordinates");
        hess = hyper_hessian(u, a.at);
        doc["source"] = "function";
        doc["ma"] = ma_operator(u, a.at);
        doc["psh"] = is_psh_at(u, a.at);
    }
    doc["at"] = a.at;
    doc["hessian"] = io::to_json(hess);
    doc["eigenvalues"] = eigenvalues(hess);
    Manifest man{"hessian", {a.file}, {{"at", a.at}}, kDefaultSampleSeed, {}};
    if (!a.out.empty()) {
        io::save_json(a.out, io::to_json(hess));
        man.outputs.push_back(a.out);
    }
    if (!a.report.empty()) man.outputs.push_back(a.report);
    return emit(out, doc, man, a.report);
}

// ---- mixdisc -------------------------------------------------------------

struct MixdiscArgs {
    std::vector<std::string> files;
    std::string report;
};

int run_mixdisc(const MixdiscArgs& a, std::ostream& out) {
    MatrixList mats;
    for (const auto& f : a.files) mats.push_back(io::matrix_from(io::load_json(f), Where(f)));
    const std::size_t n = mats.front().size();
    for (std::size_t i = 0; i < mats.size(); ++i) {
        if (mats[i].size() != n) throw DimensionError(a.files[i] + ": matrix dimension differs from the first");
    }
    if (mats.size() != n) {
        throw DimensionError("mixdisc: expected " + std::to_string(n) + " matrices, got " +
                             std::to_string(mats.size()));
    }
    Manifest man{"mixdisc", a.files, Json::object(), kDefaultSampleSeed, {}};
    if (!a.report.empty()) man.outputs.push_back(a.report);
    return emit(out, Json{{"n", n}, {"value", mixed_discriminant(mats)}}, man, a.report);
}

// ---- check-identities ----------------------------------------------------

struct IdentitiesArgs {
    std::size_t n = 2;
    std::size_t samples = 200;
    std::uint64_t seed = kDefaultSampleSeed;
    std::string report;
};

int run_identities(const IdentitiesArgs& a, std::ostream& out) {
    const IdentityReport rep = check_identities(a.n, a.samples, a.seed);
    Json checks = Json::array();
    for (const auto& c : rep.checks) {
        checks.push_back(Json{{"name", c.name},
                              {"cases", c.cases},
                              {"failures", c.failures},
                              {"worst", number(c.worst)},
                              {"tolerance", c.tolerance},
                              {"counted", c.counted}});
    }
    Json doc{{"n", rep.n}, {"samples", rep.samples}, {"checks", checks}, {"failures", rep.failures()},
             {"passed", rep.failures() == 0}};
    Manifest man{"check-identities", {}, {{"n", a.n}, {"samples", a.samples}}, a.seed, {}};
    if (!a.report.empty()) man.outputs.push_back(a.report);
    return emit(out, doc, man, a.report);
}

// ---- subsolution ---------------------------------------------------------

Json verify_json(const VerifyReport& v) {
    return Json{{"boundary_mismatch", number(v.boundary_mismatch)},
                {"boundary_worst", v.boundary_worst},
                {"min_margin", number(v.min_margin)},
                {"margin_worst", v.margin_worst},
                {"min_eigenvalue", number(v.min_eigenvalue)},
                {"psh", v.psh},
                {"boundary_ok", v.boundary_ok},
                {"margin_ok", v.margin_ok},
                {"passed", v.passed},
                {"interior_samples", v.interior_samples},
                {"boundary_samples", v.boundary_samples}};
}

Json build_json(const BuildReport& b) {
    return Json{{"k", b.sub.k},
                {"s", b.sub.s},
                {"alpha", b.alpha.alpha},
                {"alpha_argmin", b.alpha.argmin},
                {"m", b.m},
                {"c1", b.c1},
                {"c2", b.c2},
                {"k_inequality_holds", b.k_inequality_holds},
                {"k_inequality_min", number(b.k_inequality_min)},
                {"chain_slack", number(b.chain_slack)},
                {"det_slack", number(b.det_slack)},
                {"candidates", b.candidates},
                {"extension",
                 {{"identity", b.extension.identity},
                  {"correction", b.extension.correction},
                  {"min_eigenvalue_before", number(b.extension.min_eigenvalue_before)},
                  {"min_eigenvalue_after", number(b.extension.min_eigenvalue_after)},
                  {"function", io::to_json(b.extension.function)}}},
                {"growth",
                 {{"constant", number(b.growth.constant)},
                  {"worst_eta", b.growth.worst_eta},
                  {"worst_u", b.growth.worst_u},
                  {"worst_point", b.growth.worst_point},
                  {"evaluations", b.growth.evaluations}}}};
}

SubsolutionOptions sample_options(std::size_t samples, std::uint64_t seed) {
    SubsolutionOptions o;
    o.interior_samples = samples;
    o.boundary_samples = std::max<std::size_t>(1, samples / 10);
    o.seed = seed;
    return o;
}

struct SubsolutionArgs {
    std::string file;
    std::size_t samples = kDefaultInteriorSamples;
    std::uint64_t seed = kDefaultSampleSeed;
    std::string report;
};

int run_subsolution(const SubsolutionArgs& a, std::ostream& out) {
    const Problem p = io::problem_from(io::load_json(a.file), Where(a.file));
    const BuildReport b = build_subsolution(p, sample_options(a.samples, a.seed));
    const VerifyReport v = verify_subsolution(b.sub, p, b.samples);
    Json doc = build_json(b);
    doc["verify"] = verify_json(v);
    doc["passed"] = v.passed;
    Manifest man{"subsolution", {a.file}, {{"samples", a.samples}}, a.seed, {}};
    if (!a.report.empty()) man.outputs.push_back(a.report);
    return emit(out, doc, man, a.report);
}

// ---- solve ---------------------------------------------------------------

struct SolveArgs {
    std::string file;
    double h = 0.25;
    double tol = 1e-8;
    std::size_t max_newton = SolveConfig{}.max_newton;
    std::size_t samples = kDefaultInteriorSamples;
    std::uint64_t seed = kDefaultSampleSeed;
    std::string out;
    std::string report;
};

Json config_json(const SolveConfig& c) {
    return Json{{"tol", c.tol},
                {"max_newton", c.max_newton},
                {"damping", c.damping},
                {"spsh_floor", c.spsh_floor},
                {"min_step", c.min_step},
                {"krylov",
                 {{"restart", c.krylov.restart},
                  {"max_iterations", c.krylov.max_iterations},
                  {"rel_tol", c.krylov.rel_tol},
                  {"abs_tol", c.krylov.abs_tol}}}};
}

Json solve_json(const SolveReport& r) {
    Json j{{"converged", r.converged},
           {"failure", r.failure},
           {"newton_iterations", r.newton_iterations},
           {"final_residual", number(r.final_residual)},
           {"boundary_residual", number(r.boundary_residual)},
           {"max_error", r.max_error ? number(*r.max_error) : Json(nullptr)},
           {"history",
            {{"residual", r.residual_history},
             {"step", r.step_lengths},
             {"krylov_iterations", r.krylov_iterations},
             {"krylov_residual", r.krylov_residuals},
             {"min_eigenvalue", r.min_eigenvalues}}},
           {"config", config_json(r.config)}};
    return j;
}

int run_solve(const SolveArgs& a, std::ostream& out) {
    const Problem p = io::problem_from(io::load_json(a.file), Where(a.file));
    SolveConfig config;
    config.tol = a.tol;
    config.max_newton = a.max_newton;
    config.validate();
    const Discretization disc = discretize(p, a.h);
    const BuildReport b = build_subsolution(p, sample_options(a.samples, a.seed));
    const DiscreteFunction guess = subsolution_guess(disc, b.sub);
    const SolveResult res = solve_dirichlet(disc, config, guess);

    Json doc{{"problem", io::to_json(p)},
             {"lattice",
              {{"h", a.h}, {"interior_nodes", res.report.interior_nodes},
               {"boundary_points", res.report.boundary_points}}},
             {"solve", solve_json(res.report)},
             {"subsolution", {{"k", b.sub.k}, {"s", b.sub.s}}}};
    if (p.exact) {
        Point x(disc.grid.dim());
        double sq = 0.0;
        for (std::size_t idx : disc.interior) {
            res.u.nodes.position(idx, x);
            const double e = res.u.nodes[idx] - p.exact->value(x);
            sq += e * e;
        }
        doc["solve"]["rms_error"] = std::sqrt(sq / static_cast<double>(disc.interior.size()));
    } else {
        doc["solve"]["rms_error"] = nullptr;
    }

    bool passed = res.report.converged;
    if (res.report.converged) {
        const auto mp = minimum_principle_check(res.u, guess, disc);
        const auto bar = barrier_bounds_check(res.u, guess, disc);
        doc["checks"] = {{"minimum_principle",
                          {{"interior_min", mp.interior_min},
                           {"boundary_min", mp.boundary_min},
                           {"applicable", mp.applicable},
                           {"inapplicable_reason", mp.inapplicable_reason},
                           {"slack", mp.slack},
                           {"holds", mp.holds}}},
                         {"barrier",
                          {{"lower_margin", bar.lower_margin},
                           {"upper_margin", bar.upper_margin},
                           {"slack", bar.slack},
                           {"lower_holds", bar.lower_holds},
                           {"upper_holds", bar.upper_holds},
                           {"holds", bar.holds}}}};
        passed = passed && mp.holds && bar.holds;
    } else {
        doc["checks"] = nullptr;
    }
    doc["passed"] = passed;

    Manifest man{"solve", {a.file},
                 {{"h", a.h}, {"tol", a.tol}, {"max_newton", a.max_newton}, {"samples", a.samples}}, a.seed, {}};
    if (!a.out.empty()) {
        write_grid(a.out, res.u.nodes);
        man.outputs.push_back(a.out);
    }
    if (!a.report.empty()) man.outputs.push_back(a.report);
    return emit(out, doc, man, a.report);
}

// ---- report --------------------------------------------------------------

struct ReportArgs {
    std::vector<std::string> files;
    bool csv = false;
};

const Json& field(const Json& j, const std::string& key, const Where& at) {
    if (!j.is_object() || !j.contains(key)) at.fail("missing field '" + key + "'");
    return j[key];
}

std::string subcommand_of(const Json& doc, const Where& at) {
    const Json& s = field(field(doc, "manifest", at), "subcommand", at / "manifest");
    if (!s.is_string()) (at / "manifest" / "subcommand").fail("expected a string");
    return s.get<std::string>();
}

std::string csv_cell(const Json& v) {
    if (v.is_number_integer() || v.is_number_unsigned()) return v.dump();
    if (v.is_number()) return shortest(v.get<double>());
    return "";
}

int run_report(const ReportArgs& a, std::ostream& out) {
    const bool tag = a.files.size() > 1;
    if (a.csv) {
        if (tag) out << "file,";
        out << "iteration,residual,step,krylov_iterations,min_eigenvalue\n";
    }
    Json summary = Json::array();
    for (const auto& file : a.files) {
        const Where at(file);
        const Json doc = io::load_json(file);
        const std::string sub = subcommand_of(doc, at);
        if (a.csv) {
            if (sub != "solve") at.fail("not a solve report");
            const Json& hist = field(field(doc, "solve", at), "history", at / "solve");
            const Where hat = at / "solve" / "history";
            const Json& res = field(hist, "residual", hat);
            const Json& step = field(hist, "step", hat);
            const Json& kry = field(hist, "krylov_iterations", hat);
            const Json& eig = field(hist, "min_eigenvalue", hat);
            for (std::size_t i = 0; i < res.size(); ++i) {
                if (tag) out << file << ',';
                out << i << ',' << csv_cell(res[i]) << ',';
                if (i > 0 && i - 1 < step.size()) out << csv_cell(step[i - 1]);
                out << ',';
                if (i > 0 && i - 1 < kry.size()) out << csv_cell(kry[i - 1]);
                out << ',';
                if (i < eig.size()) out << csv_cell(eig[i]);
                out << '\n';
            }
            continue;
        }
        Json entry{{"file", file}, {"subcommand", sub}, {"seed", doc["manifest"].value("seed", Json(nullptr))}};
        if (doc.contains("passed")) entry["passed"] = doc["passed"];
        if (sub == "solve") {
            const Json& s = field(doc, "solve", at);
            for (const char* key : {"converged", "newton_iterations", "final_residual", "max_error", "rms_error"}) {
                if (s.contains(key)) entry[key] = s[key];
            }
            if (doc.contains("lattice")) entry["h"] = doc["lattice"].value("h", Json(nullptr));
        } else if (sub == "check-identities") {
            entry["failures"] = doc.value("failures", Json(nullptr));
        } else if (sub == "det") {
            entry["det"] = doc.value("det", Json(nullptr));
        } else if (sub == "subsolution") {
            entry["k"] = doc.value("k", Json(nullptr));
            entry["s"] = doc.value("s", Json(nullptr));
        }
        summary.push_back(entry);
    }
    if (!a.csv) out << Json{{"reports", summary}}.dump(2) << '\n';
    return kExitOk;
}

}  // namespace

int dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Quaternionic Monge-Ampere toolkit", "hyperma"};
    app.require_subcommand(1);
    app.set_version_flag("--version", HYPERMA_VERSION);

    DetArgs det;
    auto* det_cmd = app.add_subcommand("det", "Moore determinant and eigenvalues of a hyperhermitian matrix");
    det_cmd->add_option("file", det.file, "Matrix JSON")->required();
    det_cmd->add_option("--report", det.report, "Also write the output here");

    HessianArgs hes;
    auto* hes_cmd = app.add_subcommand("hessian", "Hyperhermitian Hessian of a test function or a grid file");
    hes_cmd->add_option("file", hes.file, "Function JSON or grid header")->required();
    hes_cmd->add_option("--at", hes.at, "Point as 4n comma-separated reals")->required()->delimiter(',');
    hes_cmd->add_option("--out", hes.out, "Write the Hessian as a matrix file");
    hes_cmd->add_option("--report", hes.report, "Also write the output here");

    MixdiscArgs mix;
    auto* mix_cmd = app.add_subcommand("mixdisc", "Mixed discriminant of n matrices");
    mix_cmd->add_option("files", mix.files, "Matrix JSON files")->required();
    mix_cmd->add_option("--report", mix.report, "Also write the output here");

    IdentitiesArgs ids;
    auto* ids_cmd = app.add_subcommand("check-identities", "Randomized determinant and mixed discriminant checks");
    ids_cmd->add_option("--n", ids.n, "Matrix dimension")->check(CLI::Range(1, 8));
    ids_cmd->add_option("--samples", ids.samples, "Random instances per check")->check(CLI::PositiveNumber);
    ids_cmd->add_option("--seed", ids.seed, "Random seed");
    ids_cmd->add_option("--report", ids.report, "Also write the output here");

    SubsolutionArgs sub;
    auto* sub_cmd = app.add_subcommand("subsolution", "Build and verify a subsolution for a problem file");
    sub_cmd->add_option("problem", sub.file, "Problem JSON")->required();
    sub_cmd->add_option("--samples", sub.samples, "Interior samples")->check(CLI::PositiveNumber);
    sub_cmd->add_option("--seed", sub.seed, "Sampling seed");
    sub_cmd->add_option("--report", sub.report, "Also write the output here");

    SolveArgs sol;
    auto* sol_cmd = app.add_subcommand("solve", "Finite-difference Dirichlet solve");
    sol_cmd->set_help_flag("--help", "Print this help message and exit");  // frees -h for --h
    sol_cmd->add_option("problem", sol.file, "Problem JSON")->required();
    sol_cmd->add_option("--h", sol.h, "Lattice spacing")->check(CLI::PositiveNumber);
    sol_cmd->add_option("--tol", sol.tol, "Newton tolerance on max |log det - log f|")->check(CLI::PositiveNumber);
    sol_cmd->add_option("--max-newton", sol.max_newton, "Newton iteration cap");
    sol_cmd->add_option("--samples", sol.samples, "Subsolution interior samples")->check(CLI::PositiveNumber);
    sol_cmd->add_option("--seed", sol.seed, "Subsolution sampling seed");
    sol_cmd->add_option("--out", sol.out, "Write the solution grid (header path)");
    sol_cmd->add_option("--report", sol.report, "Also write the output here");

    ReportArgs rep;
    auto* rep_cmd = app.add_subcommand("report", "Summarize report files");
    rep_cmd->add_option("files", rep.files, "Report JSON files")->required();
    rep_cmd->add_flag("--csv", rep.csv, "Flatten solve histories to CSV");

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kExitOk;
    } catch (const CLI::CallForVersion&) {
        out << HYPERMA_VERSION << '\n';
        return kExitOk;
    } catch (const CLI::ParseError& e) {
        err << "hyperma: " << e.what() << '\n';
        return kExitUsage;
    }

    try {
        if (det_cmd->parsed()) return run_det(det, out);
        if (hes_cmd->parsed()) return run_hessian(hes, out);
        if (mix_cmd->parsed()) return run_mixdisc(mix, out);
        if (ids_cmd->parsed()) return run_identities(ids, out);
        if (sub_cmd->parsed()) return run_subsolution(sub, out);
        if (sol_cmd->parsed()) return run_solve(sol, out);
        if (rep_cmd->parsed()) return run_report(rep, out);
    } catch (const FormatError& e) {
        err << "hyperma: format error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const DimensionError& e) {
        err << "hyperma: dimension error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const PreconditionError& e) {
        err << "hyperma: precondition failed: " << e.what() << '\n';
        return kExitUsage;
    } catch (const ImaginaryResidueError& e) {
        err << "hyperma: imaginary residue: " << e.what() << '\n';
        return kExitUsage;
    } catch (const MarginError& e) {
        err << "hyperma: margin error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const Error& e) {
        err << "hyperma: " << e.what() << '\n';
        return kExitFailed;
    } catch (const std::filesystem::filesystem_error& e) {
        err << "hyperma: " << e.what() << '\n';
        return kExitUsage;
    }
    return kExitUsage;
}

}  // namespace hyperma::cli
