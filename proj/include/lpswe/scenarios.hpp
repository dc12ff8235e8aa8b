#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <numbers>
#include <string>
#include <vector>

#include "lpswe/boundary.hpp"
#include "lpswe/error.hpp"
#include "lpswe/fields.hpp"
#include "lpswe/mesh.hpp"

namespace lpswe {

struct PointState {
    double h = 0.0;
    Vec2 u;
};

// -- topographies -----------------------------------------------------------

/// Smooth plateau of height 0.3 on [0.325, 0.675], independent of y.
inline double bump_topography(double x, double /*y*/ = 0.0) {
    double s = 0.0;
    if (x > 0.325 && x <= 0.375)
        s = 0.5 * std::exp(2.0 - 0.1 / (x - 0.325));
    else if (x > 0.375 && x < 0.425)
        s = 1.0 - 0.5 * std::exp(2.0 - 0.1 / (0.425 - x));
    else if (x >= 0.425 && x <= 0.575)
        s = 1.0;
    else if (x > 0.575 && x < 0.625)
        s = 1.0 - 0.5 * std::exp(2.0 - 0.1 / (x - 0.575));
    else if (x >= 0.625 && x < 0.675)
        s = 0.5 * std::exp(2.0 - 0.1 / (0.675 - x));
    return 0.3 * s;
}

inline double vortex_gaussian_topography(double x, double y) {
    return 10.0 * std::exp(-5.0 * (x - 1.0) * (x - 1.0) - 50.0 * (y - 0.5) * (y - 0.5));
}

// -- traveling vortex -------------------------------------------------------

namespace vortex {

inline constexpr double background_depth = 110.0;
inline constexpr double advection_speed = 0.6;
inline constexpr double circulation = 15.0;                 // Gamma
inline constexpr double omega = 4.0 * std::numbers::pi;     // core radius pi / omega = 1/4
inline constexpr double period = 5.0 / 3.0;                 // unit domain crossed at 0.6

inline double k(double r) {
    return 2.0 * std::cos(r) + 2.0 * r * std::sin(r) + std::cos(2.0 * r) / 8.0 + r / 4.0 * std::sin(2.0 * r) +
           0.75 * r * r;
}

/// Vortex centred at `centre`, no translation.
inline PointState profile(double x, double y, double g, Vec2 centre = {0.5, 0.5}) {
    const double dx = x - centre.x, dy = y - centre.y;
    const double rc = std::sqrt(dx * dx + dy * dy);
    PointState s{background_depth, {advection_speed, 0.0}};
    if (omega * rc <= std::numbers::pi) {
        const double G = circulation;
        s.h += G * G / (g * omega * omega) * (k(omega * rc) - k(std::numbers::pi));
        const double swirl = G * (1.0 + std::cos(omega * rc));
        s.u.x += swirl * (centre.y - y);
        s.u.y += swirl * (x - centre.x);
    }
    return s;
}

} // namespace vortex

/// Exact traveling vortex on the x-periodic unit square.
inline PointState vortex_exact(double x, double y, double t, double g) {
    double xs = x - vortex::advection_speed * t;
    xs -= std::floor(xs);
    return vortex::profile(xs, y, g);
}

// -- sampled initial data ---------------------------------------------------

/// Topography at cell centroids (interior cells; ghosts are filled from the boundary map).
inline Topography sample_topography(const Mesh& mesh, const std::function<double(double, double)>& z) {
    Topography t;
    t.z.resize(mesh.n_cells());
    for (std::size_t j = 0; j < mesh.n_cells(); ++j) t.z[j] = z(mesh.cells()[j].centroid.x, mesh.cells()[j].centroid.y);
    return t;
}

inline ConservedField still_water(const std::function<double(double)>& surface, const Mesh& mesh,
                                  const Topography& topo) {
    ConservedField c(mesh.n_cells());
    for (std::size_t j = 0; j < mesh.n_cells(); ++j) {
        c.h[j] = surface(mesh.cells()[j].centroid.x) - topo.z[j];
        if (!(c.h[j] > 0.0)) throw InvalidArgument("dry cell " + std::to_string(j) + " in initial condition");
    }
    return c;
}

/// h = H - z, u = 0.
inline ConservedField lake_at_rest(double H, const Mesh& mesh, const Topography& topo) {
    return still_water([H](double) { return H; }, mesh, topo);
}

/// Surface 0.5 for x <= 0.5, 1 otherwise; fluid at rest.
inline double dam_break_surface(double x) { return x <= 0.5 ? 0.5 : 1.0; }

inline ConservedField dam_break(const Mesh& mesh, const Topography& topo) {
    return still_water(dam_break_surface, mesh, topo);
}

/// Vortex profile with the free surface of the flat case: h = h_vortex - z.
inline ConservedField vortex_initial(const Mesh& mesh, const Topography& topo, double g) {
    ConservedField c(mesh.n_cells());
    for (std::size_t j = 0; j < mesh.n_cells(); ++j) {
        const Vec2 x = mesh.cells()[j].centroid;
        const PointState s = vortex::profile(x.x, x.y, g);
        c.h[j] = s.h - topo.z[j];
        if (!(c.h[j] > 0.0)) throw InvalidArgument("dry cell " + std::to_string(j) + " in initial condition");
        c.hu[j] = c.h[j] * s.u;
    }
    return c;
}

// -- scenario registry ------------------------------------------------------

struct Scenario {
    std::string name;
    Rect domain;
    BoundaryCondition bc;
    std::function<double(double, double)> topography;
    std::function<ConservedField(const Mesh&, const Topography&, const Params&)> initial;
    /// Exact solution at a point and time; empty when none is known.
    std::function<PointState(double, double, double, const Params&)> exact;
};

inline const std::vector<std::string>& scenario_names() {
    static const std::vector<std::string> names{"lake_at_rest", "dam_break", "vortex_flat", "vortex_topo"};
    return names;
}

inline Scenario make_scenario(const std::string& name, double H = 0.5) {
    Scenario s;
    s.name = name;
    if (name == "lake_at_rest") {
        s.topography = [](double x, double y) { return bump_topography(x, y); };
        s.initial = [H](const Mesh& m, const Topography& t, const Params&) { return lake_at_rest(H, m, t); };
        s.exact = [H](double x, double y, double, const Params&) {
            return PointState{H - bump_topography(x, y), {}};
        };
    } else if (name == "dam_break") {
        s.topography = [](double x, double y) { return bump_topography(x, y); };
        s.initial = [](const Mesh& m, const Topography& t, const Params&) { return dam_break(m, t); };
    } else if (name == "vortex_flat") {
        s.bc = {BcKind::periodic, BcKind::absorbing};
        s.topography = [](double, double) { return 0.0; };
        s.initial = [](const Mesh& m, const Topography& t, const Params& p) { return vortex_initial(m, t, p.g); };
        s.exact = [](double x, double y, double t, const Params& p) { return vortex_exact(x, y, t, p.g); };
    } else if (name == "vortex_topo") {
        s.domain = {0.0, 2.0, 0.0, 1.0};
        s.bc = {BcKind::periodic, BcKind::absorbing};
        s.topography = [](double x, double y) { return vortex_gaussian_topography(x, y); };
        s.initial = [](const Mesh& m, const Topography& t, const Params& p) { return vortex_initial(m, t, p.g); };
    } else {
        throw InvalidArgument("unknown scenario '" + name + "'");
    }
    return s;
}

// -- error measures ---------------------------------------------------------

struct Norms {
    double linf = 0.0;
    double l1 = 0.0; ///< area weighted, normalized by total area
    double l2 = 0.0;
};

inline Norms error_norms(const std::vector<double>& numerical, const std::vector<double>& reference, const Mesh& mesh) {
    const std::size_t n = mesh.n_cells();
    if (numerical.size() < n || reference.size() < n ||
        (numerical.size() != reference.size() && (numerical.size() != n && reference.size() != n)))
        throw InvalidArgument("error_norms: field does not match mesh");
    Norms out;
    double area = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
        const double e = std::abs(numerical[j] - reference[j]);
        const double w = mesh.cells()[j].area;
        out.linf = std::max(out.linf, e);
        out.l1 += w * e;
        out.l2 += w * e * e;
        area += w;
    }
    out.l1 /= area;
    out.l2 = std::sqrt(out.l2 / area);
    return out;
}

/// Samples of the exact solution at cell centroids.
inline std::vector<PointState> sample_exact(const Scenario& s, const Mesh& mesh, double t, const Params& p) {
    if (!s.exact) throw InvalidArgument("scenario '" + s.name + "' has no exact solution");
    std::vector<PointState> out(mesh.n_cells());
    for (std::size_t j = 0; j < mesh.n_cells(); ++j)
        out[j] = s.exact(mesh.cells()[j].centroid.x, mesh.cells()[j].centroid.y, t, p);
    return out;
}

// -- line cuts ----------------------------------------------------------------

struct CutSample {
    double x = 0.0;
    double h = 0.0;
    Vec2 u;
    double z = 0.0;
    double surface() const noexcept { return h + z; }
};

/// Cells whose centroid lies nearest the line y = c, sorted by x.
inline std::vector<CutSample> line_cut(const ConservedField& c, const Topography& topo, const Mesh& mesh, double y) {
    const Rect bb = mesh.bounding_box();
    if (y < bb.y0 || y > bb.y1) throw InvalidArgument("line_cut: line does not intersect the domain");
    double best = INFINITY;
    for (const auto& cell : mesh.cells()) best = std::min(best, std::abs(cell.centroid.y - y));
    const double tol = best + 1e-9 * bb.height();
    std::vector<CutSample> out;
    for (std::size_t j = 0; j < mesh.n_cells(); ++j) {
        const Vec2 x = mesh.cells()[j].centroid;
        if (std::abs(x.y - y) <= tol) out.push_back({x.x, c.h[j], c.hu[j] / c.h[j], topo.z[j]});
    }
    std::stable_sort(out.begin(), out.end(), [](const CutSample& a, const CutSample& b) { return a.x < b.x; });
    return out;
}

} // namespace lpswe
