#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <numbers>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "lpswe/driver.hpp"
#include "lpswe/reference1d.hpp"
#include "lpswe/scenarios.hpp"

// Packaged scenario runs and the measures reported on them.
namespace lpswe::experiments {

struct Run {
    Mesh mesh;
    Topography topo; ///< interior + ghosts
    Params params;
    ConservedField initial;
    RunReport report;
};

inline Run run_scenario(const Scenario& sc, Mesh mesh, const Params& p, RunOptions opts,
                        std::optional<BoundaryCondition> bc = {}) {
    Run out{std::move(mesh), {}, p, {}, {}};
    Solver solver(out.mesh, sample_topography(out.mesh, sc.topography), p, bc.value_or(sc.bc), opts);
    out.topo = solver.topography();
    RunState s = solver.initial_state(sc.initial(out.mesh, out.topo, p));
    out.initial = s.fields;
    out.report = solver.run(std::move(s));
    return out;
}

inline std::vector<double> surface(const ConservedField& c, const Topography& t, std::size_t n) {
    std::vector<double> H(n);
    for (std::size_t j = 0; j < n; ++j) H[j] = c.h[j] + t.z[j];
    return H;
}

inline double max_speed(const ConservedField& c, std::size_t n) {
    double m = 0.0;
    for (std::size_t j = 0; j < n; ++j) m = std::max(m, norm(c.hu[j] / c.h[j]));
    return m;
}

/// Area-weighted L2 error of |u| against the exact solution at time t.
inline double speed_error_l2(const Run& r, const Scenario& sc, double t) {
    const auto ex = sample_exact(sc, r.mesh, t, r.params);
    std::vector<double> num(r.mesh.n_cells()), ref(r.mesh.n_cells());
    for (std::size_t j = 0; j < num.size(); ++j) {
        num[j] = norm(r.report.final_fields.hu[j] / r.report.final_fields.h[j]);
        ref[j] = norm(ex[j].u);
    }
    return error_norms(num, ref, r.mesh).l2;
}

inline Norms depth_error(const Run& r, const Scenario& sc, double t) {
    const auto ex = sample_exact(sc, r.mesh, t, r.params);
    std::vector<double> ref(r.mesh.n_cells());
    for (std::size_t j = 0; j < ref.size(); ++j) ref[j] = ex[j].h;
    return error_norms(r.report.final_fields.h, ref, r.mesh);
}

/// Largest swirl speed |u - (0.6, 0)| over cells within the vortex core radius of the
/// advected centre (x wrapped to the domain).
inline double core_swirl(const ConservedField& c, const Mesh& mesh, double t) {
    const Rect bb = mesh.bounding_box();
    double cx = 0.5 + vortex::advection_speed * t;
    cx = bb.x0 + std::fmod(cx - bb.x0, bb.width());
    const double radius = std::numbers::pi / vortex::omega;
    double m = 0.0;
    for (std::size_t j = 0; j < mesh.n_cells(); ++j) {
        const Vec2 d = mesh.cells()[j].centroid - Vec2{cx, 0.5};
        if (norm(d) > radius) continue;
        const Vec2 u = c.hu[j] / c.h[j] - Vec2{vortex::advection_speed, 0.0};
        m = std::max(m, norm(u));
    }
    return m;
}

// -- dam break: 2D cut against the 1D reference ------------------------------

struct Profile {
    std::vector<double> x, H;

    /// Value of the sample nearest to xq.
    double at(double xq) const {
        auto it = std::lower_bound(x.begin(), x.end(), xq);
        if (it == x.begin()) return H.front();
        if (it == x.end()) return H.back();
        const auto i = static_cast<std::size_t>(it - x.begin());
        return xq - x[i - 1] <= x[i] - xq ? H[i - 1] : H[i];
    }
};

inline Profile profile_of(const std::vector<CutSample>& cut) {
    Profile p;
    for (const auto& s : cut) {
        p.x.push_back(s.x);
        p.H.push_back(s.surface());
    }
    return p;
}

inline Profile profile_of(const ref1d::Result& r) {
    Profile p;
    for (std::size_t i = 0; i < r.grid.n; ++i) {
        p.x.push_back(r.grid.center(i));
        p.H.push_back(r.state.h[i] + r.z[i]);
    }
    return p;
}

/// Shock: leftmost x with H above low + level*jump. Rarefaction head: rightmost x with
/// H below high - level*jump.
struct Fronts {
    double shock = std::numeric_limits<double>::quiet_NaN();
    double rarefaction = std::numeric_limits<double>::quiet_NaN();
};

inline Fronts fronts(const Profile& p, double low, double high, double level) {
    Fronts f;
    const double jump = high - low;
    for (std::size_t i = 0; i < p.x.size(); ++i)
        if (p.H[i] >= low + level * jump) {
            f.shock = p.x[i];
            break;
        }
    for (std::size_t i = p.x.size(); i-- > 0;)
        if (p.H[i] <= high - level * jump) {
            f.rarefaction = p.x[i];
            break;
        }
    return f;
}

/// Mean |H_cut - H_ref| over the cut samples times the cut length.
inline double cut_l1(const Profile& cut, const Profile& ref, double length) {
    if (cut.x.empty()) return 0.0;
    double s = 0.0;
    for (std::size_t i = 0; i < cut.x.size(); ++i) s += std::abs(cut.H[i] - ref.at(cut.x[i]));
    return s / static_cast<double>(cut.x.size()) * length;
}

inline ref1d::Result dam_break_1d(std::size_t n, double t_final, const Params& p) {
    return ref1d::run1d(dam_break_surface, [](double x) { return bump_topography(x); }, {0.0, 1.0, n}, t_final, p);
}

} // namespace lpswe::experiments
