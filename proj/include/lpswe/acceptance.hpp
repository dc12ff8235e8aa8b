#pragma once

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <functional>
#include <map>
#include <ostream>
#include <random>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "lpswe/experiments.hpp"
#include "lpswe/lpswe.hpp"

// Desk-scale acceptance suite: one pass/fail outcome per criterion.
namespace lpswe::acceptance {

struct Outcome {
    std::string id;
    std::string title;
    bool passed = false;
    std::string detail;
};

namespace detail {

inline std::string num(double x) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3g", x);
    return buf;
}

struct Checks {
    bool ok = true;
    std::string text;

    void add(const std::string& what, double value, const char* op, double bound) {
        const bool pass = std::string(op) == "<=" ? value <= bound
                          : std::string(op) == ">=" ? value >= bound
                          : std::string(op) == "<"  ? value < bound
                                                    : value > bound;
        ok = ok && pass;
        if (!text.empty()) text += "; ";
        text += what + "=" + num(value) + (pass ? " " : " NOT ") + op + " " + num(bound);
    }
    void note(const std::string& s) {
        if (!text.empty()) text += "; ";
        text += s;
    }
};

inline double max_abs(const std::vector<double>& v, std::size_t n) {
    double m = 0.0;
    for (std::size_t j = 0; j < n; ++j) m = std::max(m, std::abs(v[j]));
    return m;
}

/// max |a - b| / max |b| over interior cells, separately for h and hu; returns the larger.
inline double relative_deviation(const ConservedField& a, const ConservedField& b, std::size_t n) {
    double dh = 0.0, sh = 0.0, du = 0.0, su = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
        dh = std::max(dh, std::abs(a.h[j] - b.h[j]));
        sh = std::max(sh, std::abs(b.h[j]));
        du = std::max({du, std::abs(a.hu[j].x - b.hu[j].x), std::abs(a.hu[j].y - b.hu[j].y)});
        su = std::max({su, std::abs(b.hu[j].x), std::abs(b.hu[j].y)});
    }
    return std::max(sh > 0.0 ? dh / sh : dh, su > 0.0 ? du / su : du);
}

inline ConservedField random_field(const Mesh& mesh, const Topography& topo, std::mt19937_64& rng, double umax) {
    std::uniform_real_distribution<double> H(0.6, 1.6), U(-umax, umax);
    ConservedField c(mesh.n_total());
    for (std::size_t j = 0; j < mesh.n_cells(); ++j) {
        c.h[j] = std::max(H(rng) - topo.z[j], 0.2);
        c.hu[j] = c.h[j] * Vec2{U(rng), U(rng)};
    }
    return c;
}

} // namespace detail

class Suite {
public:
    struct Criterion {
        std::string id;
        std::string title;
        std::function<detail::Checks(Suite&)> body;
    };

    static const std::vector<Criterion>& criteria() {
        static const std::vector<Criterion> list{
            {"wb", "well-balanced lake at rest", &Suite::well_balanced},
            {"mass", "mass and momentum conservation", &Suite::conservation},
            {"positivity", "positivity under the explicit time step", &Suite::positivity},
            {"dambreak", "dam break 2D cut vs 1D reference", &Suite::dam_break},
            {"lowfroude", "low-Froude correction efficacy", &Suite::low_froude},
            {"imex_steps", "IMEX large time steps", &Suite::imex_steps},
            {"vortex_topo", "vortex over a Gaussian bump", &Suite::vortex_topo},
            {"equivalence", "scheme equivalence oracles", &Suite::equivalence},
            {"rotation", "rotational invariance", &Suite::rotation},
            {"convergence", "first-order convergence", &Suite::convergence},
        };
        return list;
    }

    static std::vector<std::string> ids() {
        std::vector<std::string> out;
        for (const auto& c : criteria()) out.push_back(c.id);
        return out;
    }

    /// Runs the selected criteria (all when `only` is empty), printing one line each.
    std::vector<Outcome> run(const std::vector<std::string>& only, std::ostream& out) {
        for (const auto& id : only)
            if (std::none_of(criteria().begin(), criteria().end(), [&](const Criterion& c) { return c.id == id; }))
                throw InvalidArgument("unknown criterion '" + id + "'");
        std::vector<Outcome> results;
        for (const auto& c : criteria()) {
            if (!only.empty() && std::find(only.begin(), only.end(), c.id) == only.end()) continue;
            Outcome o{c.id, c.title, false, {}};
            try {
                const detail::Checks ch = c.body(*this);
                o.passed = ch.ok;
                o.detail = ch.text;
            } catch (const std::exception& e) {
                o.detail = std::string("error: ") + e.what();
            }
            out << (o.passed ? "PASS " : "FAIL ") << o.id << ": " << o.title << " | " << o.detail << std::endl;
            results.push_back(std::move(o));
        }
        return results;
    }

    // -- criteria -----------------------------------------------------------

    detail::Checks well_balanced() {
        detail::Checks ch;
        const Scenario sc = make_scenario("lake_at_rest", 0.5);
        const Mesh mesh = build_triangulated(100, 100, sc.domain);
        for (Scheme s : {Scheme::EXEX, Scheme::IMEX}) {
            Params p;
            p.scheme = s;
            RunOptions o;
            o.t_final = 0.1;
            o.solver_tol = 1e-10;
            const auto r = experiments::run_scenario(sc, mesh, p, o);
            const std::size_t n = mesh.n_cells();
            std::vector<double> dev = experiments::surface(r.report.final_fields, r.topo, n);
            for (double& v : dev) v -= 0.5;
            const double u = experiments::max_speed(r.report.final_fields, n);
            const std::string tag = to_string(s);
            if (s == Scheme::EXEX) {
                ch.add(tag + " |H-0.5|inf", detail::max_abs(dev, n), "<=", 1e-14);
                ch.add(tag + " |u|inf", u, "<=", 1e-11);
            } else {
                ch.add(tag + " |u|inf", u, "<=", 1e-6);
            }
        }
        return ch;
    }

    detail::Checks conservation() {
        detail::Checks ch;
        const Scenario sc = make_scenario("vortex_flat");
        const BoundaryCondition periodic{BcKind::periodic, BcKind::periodic};
        for (Scheme s : {Scheme::EXEX, Scheme::IMEX}) {
            Params p;
            p.scheme = s;
            RunOptions o;
            o.t_final = 10.0;
            o.dt_max = 1e-3;
            o.max_steps = 200;
            const auto r = experiments::run_scenario(sc, build_cartesian(40, 40, sc.domain), p, o, periodic);
            const double m0 = r.report.mass_history.front();
            const double drift = std::abs(r.report.mass_history.back() - m0) / m0;
            const Vec2 q0 = total_momentum(r.initial, r.mesh), q1 = total_momentum(r.report.final_fields, r.mesh);
            const double qdrift = norm(q1 - q0) / norm(q0);
            ch.add(to_string(s) + " steps", static_cast<double>(r.report.steps), ">=", 200);
            ch.add(to_string(s) + " mass drift", drift, "<=", 1e-11);
            ch.add(to_string(s) + " momentum drift", qdrift, "<=", 1e-11);
        }
        // non-flat bottom: mass only
        {
            const Scenario topo = make_scenario("vortex_topo");
            Params p;
            RunOptions o;
            o.t_final = 10.0;
            o.dt_max = 1e-3;
            o.max_steps = 200;
            const auto r = experiments::run_scenario(topo, build_triangulated(40, 20, topo.domain), p, o, periodic);
            const double m0 = r.report.mass_history.front();
            ch.add("EXEX topography mass drift", std::abs(r.report.mass_history.back() - m0) / m0, "<=", 1e-11);
        }
        return ch;
    }

    detail::Checks positivity() {
        detail::Checks ch;
        std::mt19937_64 rng(20240611);
        std::uniform_real_distribution<double> H(0.1, 2.0), unit(0.0, 1.0), ang(0.0, 2.0 * std::numbers::pi);
        const Mesh mesh = build_cartesian(20, 20, {0.0, 1.0, 0.0, 1.0});
        std::size_t failures = 0, steps = 0;
        double h_min = INFINITY;
        for (int trial = 0; trial < 100; ++trial) {
            // two random states split by a random line, plus per-cell noise on odd trials
            const double hl = H(rng), hr = H(rng);
            const Vec2 ul = std::sqrt(unit(rng)) * 2.0 * Vec2{std::cos(ang(rng)), std::sin(ang(rng))};
            const Vec2 ur = std::sqrt(unit(rng)) * 2.0 * Vec2{std::cos(ang(rng)), std::sin(ang(rng))};
            const double phi = ang(rng), off = unit(rng) - 0.5;
            const bool noisy = trial % 2 == 1;
            const bool bump = trial % 4 >= 2;
            Topography topo = sample_topography(mesh, [bump](double x, double y) { return bump ? bump_topography(x, y) : 0.0; });
            ConservedField c(mesh.n_cells());
            for (std::size_t j = 0; j < mesh.n_cells(); ++j) {
                const Vec2 x = mesh.cells()[j].centroid - Vec2{0.5, 0.5};
                const bool left = x.x * std::cos(phi) + x.y * std::sin(phi) < off;
                double h = left ? hl : hr;
                Vec2 u = left ? ul : ur;
                if (noisy) {
                    h = H(rng);
                    u = std::sqrt(unit(rng)) * 2.0 * Vec2{std::cos(ang(rng)), std::sin(ang(rng))};
                }
                c.h[j] = h;
                c.hu[j] = h * u;
            }
            Params p;
            p.k_cfl = 0.9;
            RunOptions o;
            o.t_final = 1e6;
            o.dt_max = 1e6;
            o.max_steps = 200;
            Solver solver(mesh, topo, p, {}, o);
            try {
                solver.run(solver.initial_state(c), [&](const RunState& s, const StepInfo&) {
                    ++steps;
                    for (std::size_t j = 0; j < mesh.n_cells(); ++j) h_min = std::min(h_min, s.fields.h[j]);
                });
            } catch (const Error&) {
                ++failures;
            }
        }
        ch.add("failures", static_cast<double>(failures), "<=", 0);
        ch.add("steps", static_cast<double>(steps), ">=", 100 * 200);
        ch.add("min h", h_min, ">", 0.0);
        return ch;
    }

    detail::Checks dam_break() {
        detail::Checks ch;
        const Scenario sc = make_scenario("dam_break");
        const double dx_ref = 1.0 / 200.0;
        for (Scheme s : {Scheme::EXEX, Scheme::IMEX}) {
            Params p;
            p.scheme = s;
            RunOptions o;
            o.t_final = 0.1;
            const auto r = experiments::run_scenario(sc, build_triangulated(100, 100, sc.domain), p, o);
            const auto cut = experiments::profile_of(line_cut(r.report.final_fields, r.topo, r.mesh, 0.5));
            const auto ref = experiments::profile_of(experiments::dam_break_1d(200, 0.1, p));
            const std::string tag = to_string(s);
            ch.add(tag + " L1(H)", experiments::cut_l1(cut, ref, 1.0), "<=", 0.05 * 0.5);
            const auto f2 = experiments::fronts(cut, 0.5, 1.0, 0.1), f1 = experiments::fronts(ref, 0.5, 1.0, 0.1);
            ch.add(tag + " |shock shift|", std::abs(f2.shock - f1.shock), "<=", 3 * dx_ref);
            ch.add(tag + " |rarefaction shift|", std::abs(f2.rarefaction - f1.rarefaction), "<=", 3 * dx_ref);
        }
        return ch;
    }

    detail::Checks low_froude() {
        detail::Checks ch;
        const Scenario sc = make_scenario("vortex_flat");
        for (Scheme s : {Scheme::EXEX, Scheme::IMEX}) {
            const double ec = experiments::speed_error_l2(vortex80(s, ThetaPolicy::corrected), sc, 0.1);
            const double eu = experiments::speed_error_l2(vortex80(s, ThetaPolicy::unity), sc, 0.1);
            ch.note(to_string(s) + " L2|u| err corrected=" + detail::num(ec) + " unity=" + detail::num(eu));
            ch.add(to_string(s) + " ratio", ec / eu, "<=", 0.5);
        }
        return ch;
    }

    detail::Checks imex_steps() {
        detail::Checks ch;
        const auto ne = vortex80(Scheme::EXEX, ThetaPolicy::corrected).report.steps;
        const auto ni = vortex80(Scheme::IMEX, ThetaPolicy::corrected).report.steps;
        ch.note("EXEX steps=" + std::to_string(ne) + " IMEX steps=" + std::to_string(ni));
        ch.add("EXEX/IMEX", static_cast<double>(ne) / static_cast<double>(ni), ">=", 10);
        return ch;
    }

    detail::Checks vortex_topo() {
        detail::Checks ch;
        const Scenario sc = make_scenario("vortex_topo");
        const Mesh mesh = build_cartesian(160, 80, sc.domain);
        std::map<std::string, std::size_t> steps;
        auto run = [&](Scheme s, ThetaPolicy th) {
            Params p;
            p.scheme = s;
            p.theta_policy = th;
            RunOptions o;
            o.t_final = 0.1;
            const auto r = experiments::run_scenario(sc, mesh, p, o);
            const double ratio =
                experiments::core_swirl(r.report.final_fields, mesh, 0.1) / experiments::core_swirl(r.initial, mesh, 0.0);
            steps[to_string(s)] = r.report.steps;
            return ratio;
        };
        ch.add("EXEX corrected core", run(Scheme::EXEX, ThetaPolicy::corrected), ">=", 0.5);
        ch.add("IMEX corrected core", run(Scheme::IMEX, ThetaPolicy::corrected), ">=", 0.5);
        ch.add("EXEX unity core", run(Scheme::EXEX, ThetaPolicy::unity), "<", 0.5);
        ch.add("EXEX/IMEX steps", static_cast<double>(steps["EXEX"]) / static_cast<double>(steps["IMEX"]), ">=", 10);
        return ch;
    }

    detail::Checks equivalence() {
        detail::Checks ch;
        ch.add("combined vs two-step", combined_vs_two_step(), "<=", 1e-12);
        ch.add("strip vs 1D", strip_vs_1d(), "<=", 1e-12);
        ch.add("iterative vs dense solve", iterative_vs_dense(), "<=", 1e-12);
        return ch;
    }

    detail::Checks rotation() {
        detail::Checks ch;
        const std::size_t n = 32;
        const Mesh mesh = build_cartesian(n, n, {0.0, 1.0, 0.0, 1.0});
        const BoundaryCondition periodic{BcKind::periodic, BcKind::periodic};
        Params p;
        Topography flat = sample_topography(mesh, [](double, double) { return 0.0; });
        Solver solver(mesh, flat, p, periodic);
        ConservedField a = vortex_initial(mesh, flat, p.g);
        // rotation by +90 degrees about the centre: cell (i, j) -> (n-1-j, i), u -> (-v, u)
        auto rotated = [n](std::size_t k) { return (k % n) * n + (n - 1 - k / n); };
        ConservedField b(mesh.n_cells());
        for (std::size_t k = 0; k < mesh.n_cells(); ++k) {
            b.h[rotated(k)] = a.h[k];
            b.hu[rotated(k)] = {-a.hu[k].y, a.hu[k].x};
        }
        RunState sa = solver.initial_state(a), sb = solver.initial_state(b);
        double worst = 0.0;
        for (int step = 0; step < 50; ++step) {
            const RelaxedField r = to_relaxed(sa.fields, p);
            const double dt = dt_exex(r, explicit_face_fluxes(r, mesh, solver.topography(), p), mesh, p);
            solver.step(sa, dt);
            solver.step(sb, dt);
            for (std::size_t k = 0; k < mesh.n_cells(); ++k) {
                const std::size_t m = rotated(k);
                worst = std::max({worst, std::abs(sb.fields.h[m] - sa.fields.h[k]) / sa.fields.h[k],
                                  std::abs(sb.fields.hu[m].x + sa.fields.hu[k].y) / sa.fields.h[k],
                                  std::abs(sb.fields.hu[m].y - sa.fields.hu[k].x) / sa.fields.h[k]});
            }
        }
        ch.add("max mismatch (h, u)", worst, "<=", 1e-12);
        return ch;
    }

    detail::Checks convergence() {
        detail::Checks ch;
        const Scenario sc = make_scenario("vortex_flat");
        Params p;
        RunOptions o;
        o.t_final = 0.1;
        const double e40 = experiments::depth_error(experiments::run_scenario(sc, build_cartesian(40, 40, sc.domain), p, o), sc, 0.1).l1;
        const double e80 = experiments::depth_error(vortex80(Scheme::EXEX, ThetaPolicy::corrected), sc, 0.1).l1;
        const double e160 = experiments::depth_error(experiments::run_scenario(sc, build_cartesian(160, 160, sc.domain), p, o), sc, 0.1).l1;
        ch.note("L1(h) 40=" + detail::num(e40) + " 80=" + detail::num(e80) + " 160=" + detail::num(e160));
        ch.note("order 40-80=" + detail::num(std::log2(e40 / e80)));
        const double order = std::log2(e80 / e160);
        ch.add("order 80-160", order, ">=", 0.7);
        ch.add("order 80-160", order, "<=", 1.3);
        return ch;
    }

    // -- equivalence oracles ---------------------------------------------------

    static double combined_vs_two_step() {
        std::mt19937_64 rng(7);
        const Mesh mesh = build_triangulated(10, 10, {0.0, 1.0, 0.0, 1.0});
        const BoundaryMap bc(mesh, {});
        double worst = 0.0;
        for (int trial = 0; trial < 10; ++trial) {
            Topography topo = sample_topography(mesh, [](double x, double y) { return bump_topography(x, y); });
            ConservedField c = detail::random_field(mesh, topo, rng, 0.5);
            topo.z.resize(mesh.n_total());
            apply_bc(c, topo, bc);
            for (Scheme s : {Scheme::EXEX, Scheme::IMEX}) {
                Params p;
                p.scheme = s;
                const RelaxedField r = to_relaxed(c, p);
                const auto f0 = explicit_face_fluxes(r, mesh, topo, p);
                const double dt = dt_exex(r, f0, mesh, p) * (s == Scheme::IMEX ? 3.0 : 1.0);
                AcousticResult ac = s == Scheme::EXEX ? explicit_acoustic(r, mesh, topo, p, dt)
                                                      : implicit_acoustic(r, mesh, topo, p, dt, bc, 1e-15, 2000);
                if (transport_cfl(ac.face_fluxes, mesh, dt) > 1.0) continue;
                apply_bc(ac.relaxed, bc);
                const ConservedField one = combined_update(c, ac, mesh, dt);
                const ConservedField two = transport(ac.relaxed, ac.face_fluxes, mesh, dt);
                worst = std::max(worst, detail::relative_deviation(one, two, mesh.n_cells()));
            }
        }
        return worst;
    }

    /// nx x 1 cartesian strip, y-periodic, against reference1d with identical time steps.
    static double strip_vs_1d() {
        std::mt19937_64 rng(11);
        std::uniform_real_distribution<double> U(-0.5, 0.5);
        const std::size_t nx = 50;
        const Mesh mesh = build_cartesian(nx, 1, {0.0, 1.0, 0.0, 1.0});
        const BoundaryCondition bc{BcKind::neumann, BcKind::periodic};
        double worst = 0.0;
        for (Scheme s : {Scheme::EXEX, Scheme::IMEX}) {
            Params p;
            p.scheme = s;
            ref1d::State s1{std::vector<double>(nx), std::vector<double>(nx), std::vector<double>(nx)};
            std::vector<double> z(nx);
            for (std::size_t i = 0; i < nx; ++i) {
                const double x = mesh.cells()[i].centroid.x;
                z[i] = bump_topography(x);
                s1.h[i] = dam_break_surface(x) - z[i];
                s1.u1[i] = U(rng);
                s1.u2[i] = U(rng);
            }
            RunOptions o;
            o.solver_tol = 1e-15;
            o.max_iter = 2000;
            Topography topo{z};
            Solver solver(mesh, topo, p, bc, o);
            ConservedField c(nx);
            for (std::size_t i = 0; i < nx; ++i) {
                c.h[i] = s1.h[i];
                c.hu[i] = s1.h[i] * Vec2{s1.u1[i], s1.u2[i]};
            }
            RunState s2 = solver.initial_state(c);
            const double dx = 1.0 / static_cast<double>(nx);
            for (int step = 0; step < 50; ++step) {
                Params pe = p;
                pe.scheme = Scheme::EXEX;
                const auto probe = ref1d::step1d(s1, z, dx, pe, 0.0);
                const double dt = ref1d::time_step(probe.fluxes.face, s1.h, dx, p, true) * (s == Scheme::IMEX ? 2.0 : 1.0);
                s1 = ref1d::step1d(s1, z, dx, p, dt).state;
                solver.step(s2, dt);
                for (std::size_t i = 0; i < nx; ++i) {
                    const double h = s2.fields.h[i];
                    const Vec2 u = s2.fields.hu[i] / h;
                    worst = std::max({worst, std::abs(h - s1.h[i]) / s1.h[i], std::abs(u.x - s1.u1[i]),
                                      std::abs(u.y - s1.u2[i])});
                }
            }
        }
        return worst;
    }

    static double iterative_vs_dense() {
        std::mt19937_64 rng(3);
        double worst = 0.0;
        struct Case {
            Mesh mesh;
            BoundaryCondition bc;
        };
        std::vector<Case> cases;
        cases.push_back({build_cartesian(3, 3, {0.0, 1.0, 0.0, 1.0}), {}});
        cases.push_back({build_cartesian(3, 3, {0.0, 1.0, 0.0, 1.0}), {BcKind::periodic, BcKind::neumann}});
        cases.push_back({build_triangulated(2, 2, {0.0, 1.0, 0.0, 1.0}), {}});
        cases.push_back({build_triangulated(2, 2, {0.0, 1.0, 0.0, 1.0}), {BcKind::periodic, BcKind::periodic}});
        for (const auto& cs : cases)
            for (int trial = 0; trial < 5; ++trial) {
                const BoundaryMap bc(cs.mesh, cs.bc);
                Topography topo = sample_topography(cs.mesh, [](double x, double y) { return 0.2 * x * y; });
                ConservedField c = detail::random_field(cs.mesh, topo, rng, 1.0);
                topo.z.resize(cs.mesh.n_total());
                apply_bc(c, topo, bc);
                Params p;
                p.scheme = Scheme::IMEX;
                const RelaxedField r = to_relaxed(c, p);
                const double dt = 20.0 * dt_exex(r, explicit_face_fluxes(r, cs.mesh, topo, p), cs.mesh, p);
                const LinearSystem sys = assemble_implicit(r, cs.mesh, topo, p, dt, bc);
                const Eigen::VectorXd x = solve_implicit(sys, 1e-15, 2000).x;
                const Eigen::VectorXd xd = Eigen::MatrixXd(sys.matrix).fullPivLu().solve(sys.rhs);
                worst = std::max(worst, (x - xd).lpNorm<Eigen::Infinity>() / xd.lpNorm<Eigen::Infinity>());
            }
        return worst;
    }

private:
    const experiments::Run& vortex80(Scheme s, ThetaPolicy th) {
        const std::string key = to_string(s) + "/" + to_string(th);
        auto it = vortex_cache_.find(key);
        if (it != vortex_cache_.end()) return it->second;
        const Scenario sc = make_scenario("vortex_flat");
        Params p;
        p.scheme = s;
        p.theta_policy = th;
        RunOptions o;
        o.t_final = 0.1;
        return vortex_cache_.emplace(key, experiments::run_scenario(sc, build_cartesian(80, 80, sc.domain), p, o)).first->second;
    }

    std::map<std::string, experiments::Run> vortex_cache_;
};

} // namespace lpswe::acceptance
