#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <string>
#include <vector>

#include "lpswe/acoustic_step.hpp"
#include "lpswe/detail/parallel.hpp"
#include "lpswe/error.hpp"
#include "lpswe/fields.hpp"
#include "lpswe/mesh.hpp"

namespace lpswe {

/// dt * max_j sum_{k: u_jk < 0} sigma_jk |u_jk|; upwind transport needs <= 1.
inline double transport_cfl(const std::vector<FaceFlux>& fluxes, const Mesh& mesh, double dt) {
    double worst = 0.0;
    for (std::size_t j = 0; j < mesh.n_cells(); ++j) {
        const Cell& c = mesh.cells()[j];
        double inflow = 0.0;
        for (std::size_t f : c.face_ids) {
            const Face& fc = mesh.faces()[f];
            const double u = fc.owner == j ? fluxes[f].u_star : -fluxes[f].u_star;
            if (u < 0.0) inflow += fc.length / c.area * -u;
        }
        worst = std::max(worst, inflow);
    }
    return dt * worst;
}

namespace detail {

inline void check_transport_cfl(const std::vector<FaceFlux>& fluxes, const Mesh& mesh, double dt) {
    const double cfl = transport_cfl(fluxes, mesh, dt);
    if (cfl > 1.0 + 1e-12) throw CflError("transport CFL violated: " + std::to_string(cfl) + " > 1", cfl);
}

inline void check_depth(const ConservedField& c, std::size_t n, double dt) {
    for (std::size_t j = 0; j < n; ++j)
        if (!(c.h[j] > 0.0)) throw PositivityError("non-positive water depth after transport", j, 0.5 * dt);
}

} // namespace detail

/// Upwind transport of (h, hu) from the t^{n+1-} state:
///   phi_j = L_j phi_j^- - dt sum sigma u*_jk phi_jk^-,  L_j = 1 + dt sum sigma u*_jk.
/// `r_minus` must have refreshed ghost slots. Kept as the reference path for
/// the combined update.
inline ConservedField transport(const RelaxedField& r_minus, const std::vector<FaceFlux>& fluxes, const Mesh& mesh,
                                double dt) {
    detail::check_transport_cfl(fluxes, mesh, dt);
    const ConservedField minus = to_conserved(r_minus);
    ConservedField out = minus;
    const auto& cells = mesh.cells();
    const auto& faces = mesh.faces();
    LPSWE_PARALLEL_FOR
    for (std::size_t j = 0; j < cells.size(); ++j) {
        const Cell& c = cells[j];
        double div_u = 0.0;
        double flux_h = 0.0;
        Vec2 flux_hu;
        for (std::size_t f : c.face_ids) {
            const Face& fc = faces[f];
            const bool own = fc.owner == j;
            const double u = own ? fluxes[f].u_star : -fluxes[f].u_star;
            const std::size_t up = u >= 0.0 ? j : (own ? fc.neighbor : fc.owner);
            const double sig = fc.length / c.area;
            div_u += sig * u;
            flux_h += sig * u * minus.h[up];
            flux_hu += (sig * u) * minus.hu[up];
        }
        const double L = 1.0 + dt * div_u;
        out.h[j] = L * minus.h[j] - dt * flux_h;
        out.hu[j] = L * minus.hu[j] - dt * flux_hu;
    }
    detail::check_depth(out, mesh.n_cells(), dt);
    return out;
}

/// Acoustic and transport steps in one conservative update:
///   h  -= dt sum sigma h_jk^- u*_jk
///   hu -= dt sum sigma (hu_jk^- u*_jk + pi*_jk n_jk)
/// `ac.relaxed` must have refreshed ghost slots.
inline ConservedField combined_update(const ConservedField& c_n, const AcousticResult& ac, const Mesh& mesh,
                                      double dt) {
    detail::check_transport_cfl(ac.face_fluxes, mesh, dt);
    const RelaxedField& rm = ac.relaxed;
    ConservedField out = c_n;
    const auto& cells = mesh.cells();
    const auto& faces = mesh.faces();
    LPSWE_PARALLEL_FOR
    for (std::size_t j = 0; j < cells.size(); ++j) {
        const Cell& c = cells[j];
        double flux_h = 0.0;
        Vec2 flux_hu;
        for (std::size_t f : c.face_ids) {
            const Face& fc = faces[f];
            const FaceFlux& ff = ac.face_fluxes[f];
            const bool own = fc.owner == j;
            const double u = own ? ff.u_star : -ff.u_star;
            const double pi = own ? ff.pi_star_L : ff.pi_star_R;
            const Vec2 n = own ? fc.normal : -fc.normal;
            const std::size_t up = u >= 0.0 ? j : (own ? fc.neighbor : fc.owner);
            const double sig = fc.length / c.area;
            const double h_up = 1.0 / rm.tau[up];
            const Vec2 hu_up = rm.u[up] / rm.tau[up];
            flux_h += sig * (h_up * u);
            flux_hu += sig * (u * hu_up + pi * n);
        }
        out.h[j] = c_n.h[j] - dt * flux_h;
        out.hu[j] = c_n.hu[j] - dt * flux_hu;
    }
    detail::check_depth(out, mesh.n_cells(), dt);
    return out;
}

} // namespace lpswe
