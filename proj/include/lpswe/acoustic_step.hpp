#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <string>
#include <vector>

#include <Eigen/Sparse>
#include <unsupported/Eigen/IterativeSolvers>

#include "lpswe/boundary.hpp"
#include "lpswe/detail/parallel.hpp"
#include "lpswe/error.hpp"
#include "lpswe/fields.hpp"
#include "lpswe/flux_kernels.hpp"
#include "lpswe/mesh.hpp"

namespace lpswe {

using kernels::FaceFlux;

struct AcousticResult {
    /// State at t^{n+1-}; ghost slots are stale copies of the input and must be
    /// refreshed (apply_bc) before the transport step reads them.
    RelaxedField relaxed;
    std::vector<FaceFlux> face_fluxes; ///< owner-oriented, one per mesh face
    double acoustic_cfl = 0.0;         ///< dt max_j tau_j max_k sigma_jk a_jk
    int solver_iterations = 0;
    double solver_residual = 0.0;
};

inline kernels::CellState cell_state(const RelaxedField& r, const Topography& topo, std::size_t k) {
    return {1.0 / r.tau[k], topo.z[k], r.u[k], r.pi[k]};
}

/// Face fluxes with every input taken at t^n.
inline std::vector<FaceFlux> explicit_face_fluxes(const RelaxedField& r, const Mesh& mesh, const Topography& topo,
                                                  const Params& p) {
    std::vector<FaceFlux> out(mesh.n_faces());
    const auto& faces = mesh.faces();
    LPSWE_PARALLEL_FOR
    for (std::size_t f = 0; f < faces.size(); ++f) {
        const Face& fc = faces[f];
        out[f] = kernels::face_flux(cell_state(r, topo, fc.owner), cell_state(r, topo, fc.neighbor), fc.normal, p);
    }
    return out;
}

/// dt * max_j (tau_j max_k sigma_jk a_jk); the explicit acoustic step needs <= 1/2.
inline double acoustic_cfl(const RelaxedField& r, const std::vector<FaceFlux>& fluxes, const Mesh& mesh, double dt) {
    double worst = 0.0;
    for (std::size_t j = 0; j < mesh.n_cells(); ++j) {
        const Cell& c = mesh.cells()[j];
        double m = 0.0;
        for (std::size_t f : c.face_ids) m = std::max(m, mesh.faces()[f].length / c.area * fluxes[f].a);
        worst = std::max(worst, r.tau[j] * m);
    }
    return dt * worst;
}

/// Cell update of the acoustic system from given face fluxes:
///   tau += tau dt sum sigma u*,  u -= tau dt sum sigma pi* n,  pi -= tau dt sum sigma a^2 u*.
/// Accumulation follows each cell's face order so results are reproducible.
inline RelaxedField acoustic_update(const RelaxedField& r, const std::vector<FaceFlux>& fluxes, const Mesh& mesh,
                                   double dt) {
    RelaxedField out = r;
    const auto& cells = mesh.cells();
    const auto& faces = mesh.faces();
    LPSWE_PARALLEL_FOR
    for (std::size_t j = 0; j < cells.size(); ++j) {
        const Cell& c = cells[j];
        double div_u = 0.0;
        Vec2 grad_pi;
        double div_a2u = 0.0;
        for (std::size_t f : c.face_ids) {
            const Face& fc = faces[f];
            const FaceFlux& ff = fluxes[f];
            const double sig = fc.length / c.area;
            const bool own = fc.owner == j;
            const double u = own ? ff.u_star : -ff.u_star;
            const double pi = own ? ff.pi_star_L : ff.pi_star_R;
            const Vec2 n = own ? fc.normal : -fc.normal;
            div_u += sig * u;
            grad_pi += (sig * pi) * n;
            div_a2u += sig * (ff.a * ff.a) * u;
        }
        const double tdt = r.tau[j] * dt;
        out.tau[j] = r.tau[j] + tdt * div_u;
        out.u[j] = r.u[j] - tdt * grad_pi;
        out.pi[j] = r.pi[j] - tdt * div_a2u;
    }
    for (std::size_t j = 0; j < cells.size(); ++j)
        if (!(out.tau[j] > 0.0)) {
            const double cfl = acoustic_cfl(r, fluxes, mesh, dt);
            throw PositivityError("acoustic step produced non-positive specific volume", j,
                                  cfl > 0.0 ? 0.5 * dt / cfl : 0.0);
        }
    return out;
}

/// Explicit acoustic step (fluxes at t^n). A violated acoustic CFL throws when
/// `strict_cfl`, otherwise it is reported through `acoustic_cfl`.
inline AcousticResult explicit_acoustic(const RelaxedField& r, const Mesh& mesh, const Topography& topo,
                                        const Params& p, double dt, bool strict_cfl = false) {
    AcousticResult res;
    res.face_fluxes = explicit_face_fluxes(r, mesh, topo, p);
    res.acoustic_cfl = acoustic_cfl(r, res.face_fluxes, mesh, dt);
    if (strict_cfl && res.acoustic_cfl > 0.5 * (1.0 + 1e-12))
        throw CflError("acoustic CFL violated: " + std::to_string(res.acoustic_cfl) + " > 1/2", res.acoustic_cfl);
    res.relaxed = acoustic_update(r, res.face_fluxes, mesh, dt);
    return res;
}

// ---------------------------------------------------------------------------
// Implicit acoustic step: unknowns (u1, u2, pi) per interior cell.

using SparseMatrix = Eigen::SparseMatrix<double, Eigen::RowMajor>;

struct LinearSystem {
    SparseMatrix matrix;
    Eigen::VectorXd rhs;
    Eigen::VectorXd guess;                  ///< time-n values
    std::vector<kernels::FrozenFace> frozen; ///< owner-oriented, per face
};

inline std::size_t unknown_index(std::size_t cell, int component) noexcept { return 3 * cell + component; }

/// Frozen impedance, source bracket and theta per face, all from t^n.
inline std::vector<kernels::FrozenFace> freeze_faces(const RelaxedField& r, const Mesh& mesh, const Topography& topo,
                                                     const Params& p) {
    std::vector<kernels::FrozenFace> out(mesh.n_faces());
    const auto& faces = mesh.faces();
    LPSWE_PARALLEL_FOR
    for (std::size_t f = 0; f < faces.size(); ++f) {
        const Face& fc = faces[f];
        out[f] = kernels::freeze(
            kernels::rotate(cell_state(r, topo, fc.owner), cell_state(r, topo, fc.neighbor), fc.normal), p);
    }
    return out;
}

/// Assembles A x = b for x = (u, pi) at t^{n+1-}. Ghost unknowns are replaced by
/// their donor cell, so `r` must have its ghost slots populated.
inline LinearSystem assemble_implicit(const RelaxedField& r, const Mesh& mesh, const Topography& topo,
                                      const Params& p, double dt, const BoundaryMap& bc) {
    const std::size_t n = mesh.n_cells();
    LinearSystem sys;
    sys.frozen = freeze_faces(r, mesh, topo, p);
    sys.rhs.resize(3 * n);
    sys.guess.resize(3 * n);

    std::vector<Eigen::Triplet<double>> trip;
    trip.reserve(3 * n + 24 * mesh.n_faces() * 2);
    for (std::size_t j = 0; j < n; ++j) {
        const std::size_t iu = unknown_index(j, 0), iv = unknown_index(j, 1), ip = unknown_index(j, 2);
        trip.emplace_back(iu, iu, 1.0);
        trip.emplace_back(iv, iv, 1.0);
        trip.emplace_back(ip, ip, 1.0);
        sys.rhs[iu] = sys.guess[iu] = r.u[j].x;
        sys.rhs[iv] = sys.guess[iv] = r.u[j].y;
        sys.rhs[ip] = sys.guess[ip] = r.pi[j];

        const Cell& c = mesh.cells()[j];
        for (std::size_t f : c.face_ids) {
            const Face& fc = mesh.faces()[f];
            const kernels::FrozenFace& fr = sys.frozen[f];
            const bool own = fc.owner == j;
            const Vec2 nv = own ? fc.normal : -fc.normal;
            const double src = own ? fr.src : -fr.src;
            const std::size_t k = bc.resolve(own ? fc.neighbor : fc.owner);
            const double cf = r.tau[j] * dt * (fc.length / c.area);
            const double nn[2] = {nv.x, nv.y};
            const double ta = fr.theta * fr.a;

            // velocity rows: u_j + cf n (pi_c + src/2) = u_j^n
            for (int d = 0; d < 2; ++d) {
                const std::size_t row = unknown_index(j, d);
                trip.emplace_back(row, unknown_index(j, 2), cf * nn[d] / 2.0);
                trip.emplace_back(row, unknown_index(k, 2), cf * nn[d] / 2.0);
                for (int e = 0; e < 2; ++e) {
                    trip.emplace_back(row, unknown_index(j, e), cf * nn[d] * ta / 2.0 * nn[e]);
                    trip.emplace_back(row, unknown_index(k, e), -cf * nn[d] * ta / 2.0 * nn[e]);
                }
                sys.rhs[row] -= cf * nn[d] * src / 2.0;
            }
            // pressure row: pi_j + cf a^2 u*_jk = pi_j^n
            for (int e = 0; e < 2; ++e) {
                trip.emplace_back(ip, unknown_index(j, e), cf * fr.a * fr.a * nn[e] / 2.0);
                trip.emplace_back(ip, unknown_index(k, e), cf * fr.a * fr.a * nn[e] / 2.0);
            }
            trip.emplace_back(ip, unknown_index(j, 2), cf * fr.a / 2.0);
            trip.emplace_back(ip, unknown_index(k, 2), -cf * fr.a / 2.0);
            sys.rhs[ip] += cf * fr.a * src / 2.0;
        }
    }
    sys.matrix.resize(3 * n, 3 * n);
    sys.matrix.setFromTriplets(trip.begin(), trip.end());
    sys.matrix.makeCompressed();
    return sys;
}

struct SolveResult {
    Eigen::VectorXd x;
    int iterations = 0;
    double residual = 0.0; ///< ||A x - b|| / ||b||
};

/// BiCGSTAB with diagonal scaling, restarted GMRES as fallback. Guarantees
/// or throws SolverError.
inline SolveResult solve_implicit(const LinearSystem& sys, double tol = 1e-10, int max_iter = 500) {
    if (!(tol > 0.0)) throw InvalidArgument("solve_implicit: tol must be > 0");
    SolveResult out;
    const double bnorm = sys.rhs.norm();
    if (bnorm == 0.0) {
        out.x = Eigen::VectorXd::Zero(sys.rhs.size());
        return out;
    }
    out.x = sys.guess.size() == sys.rhs.size() ? sys.guess : Eigen::VectorXd::Zero(sys.rhs.size());
    out.residual = (sys.matrix * out.x - sys.rhs).norm() / bnorm;
    if (out.residual <= tol) return out;

    {
        Eigen::BiCGSTAB<SparseMatrix, Eigen::DiagonalPreconditioner<double>> bicg;
        bicg.compute(sys.matrix);
        bicg.setTolerance(tol);
        bicg.setMaxIterations(max_iter);
        Eigen::VectorXd x = bicg.solveWithGuess(sys.rhs, out.x);
        out.iterations += static_cast<int>(bicg.iterations());
        const double res = (sys.matrix * x - sys.rhs).norm() / bnorm;
        if (std::isfinite(res) && res < out.residual) {
            out.x = std::move(x);
            out.residual = res;
        }
        if (out.residual <= tol) return out;
    }
    // breakdown or stagnation: restarted GMRES, tightening its own stop test until the true residual holds
    Eigen::GMRES<SparseMatrix, Eigen::DiagonalPreconditioner<double>> gmres;
    gmres.set_restart(30);
    gmres.compute(sys.matrix);
    double inner_tol = tol;
    for (int attempt = 0; attempt < 4; ++attempt) {
        gmres.setTolerance(inner_tol);
        gmres.setMaxIterations(max_iter);
        Eigen::VectorXd x = gmres.solveWithGuess(sys.rhs, out.x);
        out.iterations += static_cast<int>(gmres.iterations());
        out.x = std::move(x);
        out.residual = (sys.matrix * out.x - sys.rhs).norm() / bnorm;
        if (out.residual <= tol) return out;
        inner_tol *= 0.1;
    }
    throw SolverError("implicit acoustic solve did not converge: residual " + std::to_string(out.residual) +
                          " after " + std::to_string(out.iterations) + " iterations",
                      out.residual);
}

/// Implicit acoustic step: solves for (u, pi) at t^{n+1-} with source and theta
/// frozen at t^n, then back-substitutes tau from the solved interface velocities.
inline AcousticResult implicit_acoustic(const RelaxedField& r, const Mesh& mesh, const Topography& topo,
                                        const Params& p, double dt, const BoundaryMap& bc, double tol = 1e-10,
                                        int max_iter = 500) {
    const LinearSystem sys = assemble_implicit(r, mesh, topo, p, dt, bc);
    const SolveResult sol = solve_implicit(sys, tol, max_iter);

    RelaxedField sharp = r;
    for (std::size_t j = 0; j < mesh.n_cells(); ++j) {
        sharp.u[j] = {sol.x[unknown_index(j, 0)], sol.x[unknown_index(j, 1)]};
        sharp.pi[j] = sol.x[unknown_index(j, 2)];
    }
    bc.fill(sharp.u);
    bc.fill(sharp.pi);

    AcousticResult res;
    res.solver_iterations = sol.iterations;
    res.solver_residual = sol.residual;
    res.face_fluxes.resize(mesh.n_faces());
    const auto& faces = mesh.faces();
    LPSWE_PARALLEL_FOR
    for (std::size_t f = 0; f < faces.size(); ++f) {
        const Face& fc = faces[f];
        const kernels::CellState lo{0.0, 0.0, sharp.u[fc.owner], sharp.pi[fc.owner]};
        const kernels::CellState hi{0.0, 0.0, sharp.u[fc.neighbor], sharp.pi[fc.neighbor]};
        res.face_fluxes[f] = kernels::evaluate(kernels::rotate(lo, hi, fc.normal), sys.frozen[f]);
    }
    res.acoustic_cfl = acoustic_cfl(r, res.face_fluxes, mesh, dt);

    // tau from the solved fluxes; u and pi are the solved unknowns.
    RelaxedField full = acoustic_update(r, res.face_fluxes, mesh, dt);
    res.relaxed = std::move(sharp);
    res.relaxed.tau = std::move(full.tau);
    return res;
}

} // namespace lpswe
