#include "helikon/cli.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include "helikon/acceptance.hpp"
#include "helikon/parallel.hpp"
#include "helikon/surface.hpp"
#include "helikon/version.hpp"

namespace helikon::cli {

namespace {

using json = nlohmann::ordered_json;

json complex_json(cplx z) { return json::array({z.real(), z.imag()}); }

std::string fmt(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

class UsageError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

void require(bool ok, const std::string& what) {
    if (!ok) throw UsageError(what);
}

void write_text(const std::string& path, const std::string& text, std::ostream& out) {
    if (path.empty() || path == "-") {
        out << text;
        return;
    }
    std::ofstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot open " + path + " for writing");
    f << text;
    if (!f) throw std::runtime_error("write to " + path + " failed");
}

json scan_table_json(const std::vector<ScanRow>& table) {
    json rows = json::array();
    for (const auto& r : table)
        rows.push_back({{"theta", r.theta}, {"b", r.b ? json(*r.b) : json(nullptr)}, {"horiz_residual", r.horiz_residual},
                        {"note", r.note}});
    return rows;
}

struct SolveArgs {
    double k = 0.0;
    double tol_h = 1e-6;
    double tol_v = 1e-6;
    std::vector<double> theta_bracket;
    std::vector<double> b_bracket;
    unsigned threads = 0;
    std::string out;
};

SolverOptions solver_options(const SolveArgs& a) {
    require(a.k > 0.5, "k must exceed 1/2");
    require(a.tol_h > 0.0 && a.tol_v > 0.0, "tolerances must be positive");
    SolverOptions o;
    o.tol_h = a.tol_h;
    o.tol_v = a.tol_v;
    o.threads = resolve_threads(a.threads);
    if (!a.theta_bracket.empty()) {
        require(a.theta_bracket.size() == 2 && a.theta_bracket[0] < a.theta_bracket[1], "theta bracket must be lo < hi");
        o.theta_bracket = {a.theta_bracket[0], a.theta_bracket[1]};
    }
    if (!a.b_bracket.empty()) {
        require(a.b_bracket.size() == 2 && a.b_bracket[0] < a.b_bracket[1], "b bracket must be lo < hi");
        o.b_bracket = std::pair{a.b_bracket[0], a.b_bracket[1]};
    }
    return o;
}

int cmd_solve(const SolveArgs& a, std::ostream& out, std::ostream& err) {
    const auto opt = solver_options(a);
    try {
        const auto s = solve_k(a.k, opt);
        write_text(a.out, solution_document(s), out);
        return exit_ok;
    } catch (const SolveFailure& e) {
        json doc{{"error", e.what()}, {"k", a.k}, {"scan", scan_table_json(e.table)}, {"version", version}};
        err << doc.dump(2) << '\n';
        return exit_math;
    }
}

struct SweepArgs {
    double k = 1.0;
    std::vector<double> theta_range{1.2, 2.2};
    std::vector<double> b_range;
    int theta_n = 20;
    int b_n = 20;
    unsigned threads = 0;
    std::string out;
};

std::vector<double> linspace(double lo, double hi, int n) {
    std::vector<double> v(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) v[static_cast<std::size_t>(i)] = n == 1 ? lo : lo + (hi - lo) * i / (n - 1);
    return v;
}

int cmd_sweep(const SweepArgs& a, std::ostream& out) {
    require(a.k > 0.5, "k must exceed 1/2");
    require(a.theta_n >= 1 && a.b_n >= 1, "grid sizes must be positive");
    require(a.theta_range.size() == 2 && a.theta_range[0] <= a.theta_range[1], "theta range must be lo <= hi");
    auto b_range = a.b_range;
    if (b_range.empty()) {
        const auto d = default_b_bracket(a.k);
        b_range = {d.first, d.second};
    }
    require(b_range.size() == 2 && b_range[0] <= b_range[1], "b range must be lo <= hi");
    SolverOptions o;
    o.threads = resolve_threads(a.threads);
    const auto rows = sweep(a.k, linspace(a.theta_range[0], a.theta_range[1], a.theta_n),
                            linspace(b_range[0], b_range[1], a.b_n), o);
    write_text(a.out, sweep_document(rows), out);
    return exit_ok;
}

struct MeshArgs {
    std::string from;
    std::optional<double> k;
    std::optional<double> theta;
    std::optional<double> b;
    int res = 64;
    double cutoff = 0.05;
    int copies = 1;
    bool helicoid = false;
    bool force = false;
    bool skip_intersections = false;
    unsigned threads = 0;
    std::string out = "mesh.obj";
    std::string report;
};

std::string report_path(const MeshArgs& a) {
    if (!a.report.empty()) return a.report;
    return std::filesystem::path(a.out).replace_extension(".report.json").string();
}

int cmd_mesh_helicoid(const MeshArgs& a, std::ostream& out) {
    require(a.k.has_value() && *a.k > 0.0, "helicoid mode needs --k > 0");
    const HelicoidData h(*a.k);
    const auto hm = helicoid_mesh(h, 25, 41);
    const double end_dh = std::abs(
        integrate_circle<1>([&](cplx z) { return std::array<cplx, 1>{h.dh(z)}; }, 0.0, 1.0, 64)[0] - cplx(-2.0 * pi * *a.k));
    export_mesh(hm.mesh, format_from_path(a.out), a.out);
    json rep{{"mode", "helicoid"},
             {"k", *a.k},
             {"vertices", hm.mesh.vertices.size()},
             {"faces", hm.mesh.faces.size()},
             {"max_closed_form_error", hm.max_closed_form_error},
             {"end_cycle_dh_error", end_dh},
             {"version", version}};
    write_text(report_path(a), rep.dump(2) + "\n", out);
    return exit_ok;
}

int cmd_mesh(const MeshArgs& a, std::ostream& out) {
    require(a.res >= 8 && a.res % 2 == 0, "resolution must be even and at least 8");
    require(a.cutoff > 0.0, "end cutoff must be positive");
    require(a.copies >= 1, "copies must be at least 1");
    const unsigned threads = resolve_threads(a.threads);
    if (a.helicoid) return cmd_mesh_helicoid(a, out);

    double k = 0.0, theta = 0.0, b = 0.0;
    if (!a.from.empty()) {
        std::ifstream f(a.from);
        require(static_cast<bool>(f), "cannot read " + a.from);
        json doc;
        try {
            doc = json::parse(f);
            k = doc.at("k").get<double>();
            theta = doc.at("theta").get<double>();
            b = doc.at("b").get<double>();
        } catch (const json::exception& e) {
            throw UsageError(std::string("malformed solution file: ") + e.what());
        }
    }
    if (a.k) k = *a.k;
    if (a.theta) theta = *a.theta;
    if (a.b) b = *a.b;
    require(k > 0.5 && theta > 0.0 && theta < pi && b > 0.0 && b < 1.0,
            "mesh needs a solution file or --k, --theta, --b in range");

    const auto torus = make_torus(theta);
    const auto data = WeierstrassData::build(torus, place_points(torus, k, b));
    ImmerseOptions io;
    io.resolution = a.res;
    io.end_cutoff = a.cutoff;
    io.allow_unsolved = a.force;
    io.threads = threads;
    const auto imm = immerse(data, io);
    const auto geo = verify_geometry(imm, data);
    const auto sigma = screw_motion(data);
    const Mesh tiled = a.copies == 1 ? imm.mesh : apply_screw(imm.mesh, sigma, a.copies);
    export_mesh(tiled, format_from_path(a.out), a.out);

    json rep{{"mode", "torus"}, {"k", k}, {"theta", theta}, {"b", b}, {"resolution", a.res}, {"end_cutoff", a.cutoff},
             {"copies", a.copies}, {"vertices", tiled.vertices.size()}, {"faces", tiled.faces.size()},
             {"diameter", geo.diameter}, {"seam_mismatch", imm.seam_mismatch},
             {"screw", {{"angle", sigma.angle}, {"translation", sigma.translation},
                        {"seam_mismatch", screw_seam_mismatch(imm, sigma)}}}};
    rep["symmetry"] = {{"axis_max_xy", geo.axis_max_xy},
                       {"inner_x3_spread", geo.inner_x3_spread},
                       {"outer_x3_spread", geo.outer_x3_spread},
                       {"line_angle", geo.line_angle},
                       {"line_angle_error", geo.line_angle_error},
                       {"rho_symmetry", geo.rho_symmetry},
                       {"normal_at_center", geo.normal_at_center}};
    if (!a.skip_intersections) {
        const auto ir = self_intersection_check(tiled, 0.0, threads);
        rep["intersections"] = {{"pairs", ir.pairs.size()}, {"candidates", ir.candidate_pairs},
                                {"degenerate_skipped", ir.degenerate_skipped}};
    }
    json asym = json::array();
    for (const double r : {0.1, 0.05}) {
        try {
            asym.push_back({{"ring_radius", r}, {"deviation", asymptotic_compare(data, r)}});
        } catch (const GeometryError& e) {
            asym.push_back({{"ring_radius", r}, {"error", e.what()}});
        }
    }
    rep["asymptotic_deviation"] = asym;
    rep["version"] = version;
    write_text(report_path(a), rep.dump(2) + "\n", out);
    return exit_ok;
}

struct VerifyArgs {
    std::vector<std::string> only;
    std::string inject = "none";
    unsigned threads = 0;
    std::string out;
};

int cmd_verify(const VerifyArgs& a, std::ostream& out, std::ostream& err) {
    acceptance::Options o;
    o.only = a.only;
    for (const auto& g : o.only) {
        const auto& all = acceptance::groups();
        require(std::find(all.begin(), all.end(), g) != all.end(), "unknown check group: " + g);
    }
    try {
        o.perturbation = acceptance::parse_perturbation(a.inject);
    } catch (const std::invalid_argument& e) {
        throw UsageError(e.what());
    }
    o.threads = resolve_threads(a.threads);
    const auto results = acceptance::run(o, [&](const acceptance::CheckResult& r) {
        err << (r.passed ? "PASS " : "FAIL ") << r.criterion << ' ' << r.name << ": " << r.detail << '\n';
    });
    json checks = json::array();
    bool all_pass = true;
    for (const auto& r : results) {
        all_pass = all_pass && r.passed;
        checks.push_back({{"criterion", r.criterion}, {"group", r.group}, {"name", r.name},
                          {"status", r.passed ? "pass" : "fail"}, {"detail", r.detail}});
    }
    json doc{{"checks", checks}, {"all_pass", all_pass}, {"version", version}};
    write_text(a.out, doc.dump(2) + "\n", out);
    return all_pass ? exit_ok : exit_math;
}

}  // namespace

std::string solution_document(const Solution& s) {
    json doc{{"k", s.k},
             {"theta", s.theta_angle},
             {"b", s.b},
             {"a", s.a},
             {"residuals", {{"horiz", s.horiz_residual}, {"vert", s.vert_residual}, {"cross_check", s.report.cross_check}}},
             {"residues", {{"E1", complex_json(s.report.residue_E1)}, {"E2", complex_json(s.report.residue_E2)}}},
             {"axis_turning", s.axis_turning},
             {"iterations", s.iterations},
             {"version", version}};
    return doc.dump(2) + "\n";
}

std::string sweep_document(const std::vector<SweepRow>& rows) {
    std::ostringstream os;
    os << "# helikon " << version << '\n';
    os << "k,theta,b,horiz_residual,vert_residual,quad_err,flag\n";
    for (const auto& r : rows)
        os << fmt(r.k) << ',' << fmt(r.theta) << ',' << fmt(r.b) << ',' << fmt(r.horiz_residual) << ','
           << fmt(r.vert_residual) << ',' << fmt(r.quad_err) << ',' << r.flag << '\n';
    return os.str();
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Genus-one helicoid construction and verification"};
    app.set_version_flag("--version", std::string(version));
    app.require_subcommand(1);

    SolveArgs sa;
    auto* solve = app.add_subcommand("solve", "Solve the period problem for one k");
    solve->add_option("--k", sa.k, "Screw parameter (> 1/2)")->required();
    solve->add_option("--tol-h", sa.tol_h, "Horizontal residual tolerance");
    solve->add_option("--tol-v", sa.tol_v, "Vertical residual tolerance");
    solve->add_option("--theta-bracket", sa.theta_bracket, "Outer bracket lo hi")->expected(2);
    solve->add_option("--b-bracket", sa.b_bracket, "Inner bracket lo hi")->expected(2);
    solve->add_option("--threads", sa.threads, "Worker threads (default HELIKON_THREADS or cores)");
    solve->add_option("-o,--out", sa.out, "Output JSON (default stdout)");

    SweepArgs wa;
    auto* sw = app.add_subcommand("sweep", "Residual field over a (theta, b) grid");
    sw->add_option("--k", wa.k, "Screw parameter (> 1/2)");
    sw->add_option("--theta-range", wa.theta_range, "theta lo hi")->expected(2);
    sw->add_option("--b-range", wa.b_range, "b lo hi (default admissible bracket)")->expected(2);
    sw->add_option("--theta-n", wa.theta_n, "theta samples");
    sw->add_option("--b-n", wa.b_n, "b samples");
    sw->add_option("--threads", wa.threads, "Worker threads");
    sw->add_option("-o,--out", wa.out, "Output CSV (default stdout)");

    MeshArgs ma;
    auto* mesh = app.add_subcommand("mesh", "Immerse and export a fundamental domain");
    mesh->add_option("--from", ma.from, "Solution JSON from solve");
    mesh->add_option("--k", ma.k, "Override k");
    mesh->add_option("--theta", ma.theta, "Override theta");
    mesh->add_option("--b", ma.b, "Override b");
    mesh->add_option("--res", ma.res, "Grid resolution (even, >= 8)");
    mesh->add_option("--cutoff", ma.cutoff, "Radius of the removed end disks");
    mesh->add_option("--copies", ma.copies, "Number of screw-motion copies");
    mesh->add_flag("--helicoid", ma.helicoid, "Mesh the reference helicoid instead");
    mesh->add_flag("--force", ma.force, "Allow parameters that do not solve the period problem");
    mesh->add_flag("--no-intersections", ma.skip_intersections, "Skip the self-intersection check");
    mesh->add_option("--threads", ma.threads, "Worker threads");
    mesh->add_option("-o,--out", ma.out, "Mesh file (.obj or .ply)");
    mesh->add_option("--report", ma.report, "Report JSON (default next to the mesh)");

    VerifyArgs va;
    auto* verify = app.add_subcommand("verify", "Run the acceptance battery");
    verify->add_option("--only", va.only, "Restrict to check groups");
    verify->add_option("--inject", va.inject, "Negative control: none | quasi-factor-sign");
    verify->add_option("--threads", va.threads, "Worker threads");
    verify->add_option("-o,--out", va.out, "Report JSON (default stdout)");

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? exit_ok : exit_usage;
    }

    try {
        if (*solve) return cmd_solve(sa, out, err);
        if (*sw) return cmd_sweep(wa, out);
        if (*mesh) return cmd_mesh(ma, out);
        if (*verify) return cmd_verify(va, out, err);
    } catch (const UsageError& e) {
        err << "error: " << e.what() << '\n';
        return exit_usage;
    } catch (const PlacementError& e) {
        err << "error: " << e.what() << '\n';
        return exit_usage;
    } catch (const DomainError& e) {
        err << "error: " << e.what() << '\n';
        return exit_usage;
    } catch (const Error& e) {
        err << "failure: " << e.what() << '\n';
        return exit_math;
    }
    return exit_usage;
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    std::vector<std::string> args;
    for (int i = 1; i < argc; ++i) args.emplace_back(argv[i]);
    return run(args, out, err);
}

}  // namespace helikon::cli
