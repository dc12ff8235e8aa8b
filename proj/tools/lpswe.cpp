// lpswe: run configured simulations, the acceptance suite, or the reference experiments.
// Exit codes: 0 success, 1 runtime failure, 2 usage or configuration error.
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "lpswe/acceptance.hpp"
#include "lpswe/detail/parallel.hpp"
#include "lpswe/experiments.hpp"
#include "lpswe/lpswe.hpp"

namespace fs = std::filesystem;
using namespace lpswe;

namespace {

constexpr int exit_ok = 0;
constexpr int exit_runtime = 1;
constexpr int exit_usage = 2;

std::string g17(double x) { return detail::fmt17(x); }

std::string sci(double x) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3e", x);
    return buf;
}

fs::path ensure_dir(const std::string& d) {
    fs::path p(d);
    fs::create_directories(p);
    return p;
}

std::string mesh_label(const Mesh& m) {
    return std::to_string(m.n_cells()) + " cells, " + std::to_string(m.n_faces()) + " faces";
}

// -- run ------------------------------------------------------------------------

struct RunFlags {
    std::string config;
    std::optional<std::string> scheme, theta, mesh, out;
    std::optional<double> tf, solver_tol;
    std::optional<int> threads;
    std::vector<std::string> sets;
};

int cmd_run(const RunFlags& f) {
    RunConfig cfg;
    try {
        cfg = parse_config(f.config);
        for (const auto& kv : f.sets) {
            const auto eq = kv.find('=');
            if (eq == std::string::npos) throw ConfigError("--set expects key=value, got '" + kv + "'");
            apply_setting(cfg, detail::trim(kv.substr(0, eq)), detail::trim(kv.substr(eq + 1)));
        }
        if (f.scheme) apply_setting(cfg, "scheme", *f.scheme);
        if (f.theta) apply_setting(cfg, "theta_policy", *f.theta);
        if (f.mesh) apply_setting(cfg, "mesh", *f.mesh);
        if (f.tf) apply_setting(cfg, "T_f", g17(*f.tf));
        if (f.solver_tol) apply_setting(cfg, "solver_tol", g17(*f.solver_tol));
        if (f.out) cfg.output_dir = *f.out;
        if (f.threads) cfg.threads = *f.threads;
        validate(cfg);
    } catch (const Error& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return exit_usage;
    }

    if (cfg.threads > 0) set_threads(cfg.threads);
    const Scenario sc = make_scenario(cfg.scenario, cfg.H);
    const Mesh mesh = build_mesh(cfg.mesh, sc.domain);
    BoundaryCondition bc = sc.bc;
    if (cfg.bc_x) bc.x = *cfg.bc_x;
    if (cfg.bc_y) bc.y = *cfg.bc_y;

    RunOptions opts;
    opts.t_final = cfg.t_final;
    opts.dt_max = cfg.dt_max;
    opts.solver_tol = cfg.solver_tol;
    opts.max_iter = cfg.max_iter;
    Solver solver(mesh, sample_topography(mesh, sc.topography), cfg.params, bc, opts);
    const fs::path out = ensure_dir(cfg.output_dir);

    RunState s = solver.initial_state(sc.initial(mesh, solver.topography(), cfg.params));
    const ConservedField init = s.fields;
    const double g = cfg.params.g;
    if (cfg.output_every > 0) write_vtk(s.fields, solver.topography(), mesh, g, (out / "step_000000.vtk").string());
    const RunReport rep = solver.run(std::move(s), [&](const RunState& st, const StepInfo&) {
        if (cfg.output_every > 0 && st.step % cfg.output_every == 0) {
            std::ostringstream name;
            name << "step_" << std::setw(6) << std::setfill('0') << st.step << ".vtk";
            write_vtk(st.fields, solver.topography(), mesh, g, (out / name.str()).string());
        }
    });

    const auto& fin = rep.final_fields;
    write_vtk(fin, solver.topography(), mesh, g, (out / "final.vtk").string());
    const Rect bb = mesh.bounding_box();
    write_cut_csv(line_cut(fin, solver.topography(), mesh, 0.5 * (bb.y0 + bb.y1)), (out / "cut.csv").string());

    ReportLines lines{
        {"scenario", cfg.scenario},
        {"scheme", to_string(cfg.params.scheme)},
        {"theta_policy", to_string(cfg.params.theta_policy)},
        {"mesh", mesh_label(mesh)},
        {"t_end", g17(rep.t_end)},
        {"steps", std::to_string(rep.steps)},
        {"wall_time_s", sci(rep.wall_time)},
        {"dt_min", sci(rep.dt_min)},
        {"dt_mean", sci(rep.dt_mean)},
        {"dt_max", sci(rep.dt_max)},
        {"solver_iterations", std::to_string(rep.solver_iterations)},
        {"mass_drift_rel", sci((rep.mass_history.back() - rep.mass_history.front()) / rep.mass_history.front())},
        {"max_froude", sci(rep.max_froude)},
    };
    const std::size_t n = mesh.n_cells();
    if (sc.exact) {
        const auto ex = sample_exact(sc, mesh, rep.t_end, cfg.params);
        std::vector<double> h_ref(n), u_ref(n), u_num(n);
        for (std::size_t j = 0; j < n; ++j) {
            h_ref[j] = ex[j].h;
            u_ref[j] = norm(ex[j].u);
            u_num[j] = norm(fin.hu[j] / fin.h[j]);
        }
        const Norms eh = error_norms(fin.h, h_ref, mesh), eu = error_norms(u_num, u_ref, mesh);
        lines.push_back({"error_h_l1", sci(eh.l1)});
        lines.push_back({"error_h_l2", sci(eh.l2)});
        lines.push_back({"error_h_linf", sci(eh.linf)});
        lines.push_back({"error_speed_l2", sci(eu.l2)});
    }
    if (cfg.scenario == "lake_at_rest") {
        const auto H0 = experiments::surface(init, solver.topography(), n);
        const auto H1 = experiments::surface(fin, solver.topography(), n);
        double dH = 0.0;
        for (std::size_t j = 0; j < n; ++j) dH = std::max(dH, std::abs(H1[j] - H0[j]));
        const double u = experiments::max_speed(fin, n);
        const double bound = cfg.params.scheme == Scheme::EXEX ? 1e-11 : 10.0 * cfg.solver_tol;
        lines.push_back({"surface_dev_linf", sci(dH)});
        lines.push_back({"velocity_linf", sci(u)});
        lines.push_back({"well_balanced", u <= bound && dH <= std::max(bound, 1e-12) ? "yes" : "no"});
    }
    write_report(lines, std::cout);
    write_report(lines, (out / "report.txt").string());
    return exit_ok;
}

// -- verify -----------------------------------------------------------------------

int cmd_verify(const std::vector<std::string>& only) {
    acceptance::Suite suite;
    std::vector<acceptance::Outcome> res;
    try {
        res = suite.run(only, std::cout);
    } catch (const InvalidArgument& e) {
        std::cerr << "verify: " << e.what() << '\n';
        return exit_usage;
    }
    std::size_t failed = 0;
    for (const auto& r : res) failed += r.passed ? 0 : 1;
    std::cout << res.size() - failed << "/" << res.size() << " criteria passed\n";
    return failed ? exit_runtime : exit_ok;
}

// -- reproduce --------------------------------------------------------------------

void write_ref_csv(const ref1d::Result& r, const fs::path& path) {
    std::vector<CutSample> cut;
    for (std::size_t i = 0; i < r.grid.n; ++i)
        cut.push_back({r.grid.center(i), r.state.h[i], {r.state.u1[i], r.state.u2[i]}, r.z[i]});
    write_cut_csv(cut, path.string());
}

int reproduce_wb(const fs::path& out, std::size_t n) {
    const Scenario sc = make_scenario("lake_at_rest", 0.5);
    const Mesh mesh = build_triangulated(n, n, sc.domain);
    std::ofstream csv(out / "wb_table.csv");
    csv << "scheme,H_linf,H_l1,u_linf,u_l1,steps\n";
    std::cout << "lake at rest, " << mesh_label(mesh) << ", T_f = 0.1\n";
    std::cout << "scheme   |H-0.5|_inf  |H-0.5|_1    |u|_inf      |u|_1        steps\n";
    for (Scheme s : {Scheme::EXEX, Scheme::IMEX}) {
        Params p;
        p.scheme = s;
        RunOptions o;
        o.t_final = 0.1;
        const auto r = experiments::run_scenario(sc, mesh, p, o);
        const std::size_t nc = mesh.n_cells();
        std::vector<double> H = experiments::surface(r.report.final_fields, r.topo, nc), half(nc, 0.5), u(nc), zero(nc, 0.0);
        for (std::size_t j = 0; j < nc; ++j) u[j] = norm(r.report.final_fields.hu[j] / r.report.final_fields.h[j]);
        const Norms eH = error_norms(H, half, mesh), eu = error_norms(u, zero, mesh);
        std::cout << std::left << std::setw(9) << to_string(s) << std::setw(13) << sci(eH.linf) << std::setw(13)
                  << sci(eH.l1) << std::setw(13) << sci(eu.linf) << std::setw(13) << sci(eu.l1) << r.report.steps << '\n';
        csv << to_string(s) << ',' << g17(eH.linf) << ',' << g17(eH.l1) << ',' << g17(eu.linf) << ',' << g17(eu.l1) << ','
            << r.report.steps << '\n';
    }
    return exit_ok;
}

int reproduce_dambreak(const fs::path& out, std::size_t n) {
    const Scenario sc = make_scenario("dam_break");
    const Mesh mesh = build_triangulated(n, n, sc.domain);
    std::cout << "dam break, " << mesh_label(mesh) << ", T_f = 0.1, cut y = 0.5 vs 1D reference (200 cells)\n";
    for (Scheme s : {Scheme::EXEX, Scheme::IMEX}) {
        Params p;
        p.scheme = s;
        RunOptions o;
        o.t_final = 0.1;
        const auto r = experiments::run_scenario(sc, mesh, p, o);
        const auto cut = line_cut(r.report.final_fields, r.topo, r.mesh, 0.5);
        const auto ref = experiments::dam_break_1d(200, 0.1, p);
        write_cut_csv(cut, (out / ("dambreak_cut_" + to_string(s) + ".csv")).string());
        write_ref_csv(ref, out / ("dambreak_ref1d_" + to_string(s) + ".csv"));
        write_vtk(r.report.final_fields, r.topo, r.mesh, p.g, (out / ("dambreak_" + to_string(s) + ".vtk")).string());
        const auto pc = experiments::profile_of(cut), pr = experiments::profile_of(ref);
        const auto f2 = experiments::fronts(pc, 0.5, 1.0, 0.1), f1 = experiments::fronts(pr, 0.5, 1.0, 0.1);
        std::cout << to_string(s) << ": steps " << r.report.steps << ", L1(H) cut vs 1D " << sci(experiments::cut_l1(pc, pr, 1.0))
                  << ", shock " << f2.shock << " (1D " << f1.shock << "), rarefaction head " << f2.rarefaction << " (1D "
                  << f1.rarefaction << ")\n";
    }
    return exit_ok;
}

int reproduce_vortex(const std::string& name, const fs::path& out, std::size_t n) {
    const Scenario sc = make_scenario(name);
    const Rect d = sc.domain;
    const std::size_t nx = static_cast<std::size_t>(std::lround(static_cast<double>(n) * d.width() / d.height()));
    const Mesh mesh = build_cartesian(nx, n, d);
    std::cout << name << ", " << mesh_label(mesh) << ", T_f = 0.1\n";
    std::ofstream csv(out / (name + "_summary.csv"));
    csv << "scheme,theta,steps,solver_iterations,wall_time_s,core_swirl_ratio,speed_err_l2,h_err_l1\n";
    std::cout << "scheme theta      steps  solver_its  wall_s     core_ratio";
    if (sc.exact) std::cout << "  L2|u|_err   L1(h)_err";
    std::cout << '\n';
    for (Scheme s : {Scheme::EXEX, Scheme::IMEX})
        for (ThetaPolicy th : {ThetaPolicy::corrected, ThetaPolicy::unity}) {
            Params p;
            p.scheme = s;
            p.theta_policy = th;
            RunOptions o;
            o.t_final = 0.1;
            const auto r = experiments::run_scenario(sc, mesh, p, o);
            const double core = experiments::core_swirl(r.report.final_fields, mesh, 0.1) /
                                experiments::core_swirl(r.initial, mesh, 0.0);
            const std::string tag = to_string(s) + "_" + to_string(th);
            write_vtk(r.report.final_fields, r.topo, mesh, p.g, (out / (name + "_" + tag + ".vtk")).string());
            std::cout << std::left << std::setw(7) << to_string(s) << std::setw(11) << to_string(th) << std::setw(7)
                      << r.report.steps << std::setw(12) << r.report.solver_iterations << std::setw(11)
                      << sci(r.report.wall_time) << std::setw(12) << sci(core);
            csv << to_string(s) << ',' << to_string(th) << ',' << r.report.steps << ',' << r.report.solver_iterations << ','
                << g17(r.report.wall_time) << ',' << g17(core) << ',';
            if (sc.exact) {
                const double eu = experiments::speed_error_l2(r, sc, 0.1), eh = experiments::depth_error(r, sc, 0.1).l1;
                std::cout << std::setw(12) << sci(eu) << sci(eh);
                csv << g17(eu) << ',' << g17(eh);
            } else {
                csv << ',';
            }
            std::cout << '\n';
            csv << '\n';
        }
    return exit_ok;
}

int cmd_reproduce(const std::string& id, const std::string& out_dir, std::size_t n) {
    const fs::path out = ensure_dir(out_dir);
    if (id == "wb") return reproduce_wb(out, n ? n : 100);
    if (id == "dambreak") return reproduce_dambreak(out, n ? n : 100);
    if (id == "vortex_flat") return reproduce_vortex(id, out, n ? n : 80);
    if (id == "vortex_topo") return reproduce_vortex(id, out, n ? n : 80);
    std::cerr << "reproduce: unknown experiment '" << id << "' (wb, dambreak, vortex_flat, vortex_topo)\n";
    return exit_usage;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Lagrange-projection shallow water solver"};
    app.require_subcommand(1);

    RunFlags rf;
    auto* run = app.add_subcommand("run", "run a configured simulation");
    run->add_option("config", rf.config, "config file")->required();
    run->add_option("--scheme", rf.scheme, "EXEX or IMEX");
    run->add_option("--theta", rf.theta, "corrected or unity");
    run->add_option("--mesh", rf.mesh, "mesh spec, e.g. 'tri 100x100'");
    run->add_option("--tf", rf.tf, "final time");
    run->add_option("--out", rf.out, "output directory");
    run->add_option("--threads", rf.threads, "thread cap");
    run->add_option("--solver-tol", rf.solver_tol, "implicit solver tolerance");
    run->add_option("--set", rf.sets, "override any config key: key=value")->take_all();

    std::vector<std::string> only;
    auto* verify = app.add_subcommand("verify", "run the acceptance suite");
    verify->add_option("--only", only, "criterion ids")->take_all();

    std::string exp_id, exp_out = "reproduce";
    std::size_t exp_n = 0;
    auto* repro = app.add_subcommand("reproduce", "run one of the reference experiments");
    repro->add_option("experiment", exp_id, "wb | dambreak | vortex_flat | vortex_topo")->required();
    repro->add_option("--out", exp_out, "output directory");
    repro->add_option("--resolution", exp_n, "cells along y (default: desk scale)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? exit_ok : exit_usage;
    }

    try {
        if (*run) return cmd_run(rf);
        if (*verify) return cmd_verify(only);
        if (*repro) return cmd_reproduce(exp_id, exp_out, exp_n);
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return exit_usage;
    } catch (const FormatError& e) {
        std::cerr << "input error: " << e.what() << '\n';
        return exit_usage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return exit_runtime;
    }
    return exit_usage;
}
