#pragma once

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstddef>
#include <functional>
#include <limits>
#include <string>
#include <vector>

#include "lpswe/acoustic_step.hpp"
#include "lpswe/boundary.hpp"
#include "lpswe/error.hpp"
#include "lpswe/fields.hpp"
#include "lpswe/mesh.hpp"
#include "lpswe/transport_step.hpp"

namespace lpswe {

struct RunOptions {
    double t_final = 0.1;
    double dt_max = 0.0; ///< <= 0 selects t_final / 10
    double solver_tol = 1e-10;
    int max_iter = 500;
    bool strict_cfl = true; ///< acoustic CFL violation (EXEX) throws instead of being counted
    std::size_t max_steps = 100'000'000;

    double effective_dt_max() const noexcept {
        return dt_max > 0.0 ? dt_max : (t_final > 0.0 ? t_final / 10.0 : std::numeric_limits<double>::infinity());
    }
};

struct RunState {
    ConservedField fields; ///< interior and ghost cells
    double t = 0.0;
    std::size_t step = 0;
    double dt_lag = 0.0; ///< next IMEX step, from the previous transport speeds; 0 bootstraps with dt_exex
};

struct StepInfo {
    double dt = 0.0;
    int solver_iterations = 0;
    double acoustic_cfl = 0.0;
    double transport_cfl = 0.0;
};

struct RunReport {
    std::size_t steps = 0;
    double wall_time = 0.0; ///< seconds
    double t_end = 0.0;
    double dt_min = 0.0, dt_max = 0.0, dt_mean = 0.0;
    std::vector<double> mass_history; ///< initial value then one entry per step
    double max_froude = 0.0;          ///< over all steps
    long solver_iterations = 0;
    std::size_t cfl_warnings = 0;
    ConservedField final_fields;
};

// -- diagnostics --------------------------------------------------------------

inline double total_mass(const ConservedField& c, const Mesh& mesh) {
    double m = 0.0;
    for (std::size_t j = 0; j < mesh.n_cells(); ++j) m += mesh.cells()[j].area * c.h[j];
    return m;
}

inline Vec2 total_momentum(const ConservedField& c, const Mesh& mesh) {
    Vec2 m;
    for (std::size_t j = 0; j < mesh.n_cells(); ++j) m += mesh.cells()[j].area * c.hu[j];
    return m;
}

/// max_j |u_j| / sqrt(g h_j) over interior cells.
inline double max_froude(const ConservedField& c, const Mesh& mesh, double g) {
    double fr = 0.0;
    for (std::size_t j = 0; j < mesh.n_cells(); ++j)
        fr = std::max(fr, norm(c.hu[j] / c.h[j]) / std::sqrt(g * c.h[j]));
    return fr;
}

// -- time step ----------------------------------------------------------------

namespace detail {

/// K / (2 max_j (perimeter_j / area_j) max_k speed(j, f)), clamped to dt_max.
template <class Speed>
double cfl_time_step(const Mesh& mesh, const Params& p, double dt_max, Speed&& speed) {
    double worst = 0.0;
    for (std::size_t j = 0; j < mesh.n_cells(); ++j) {
        const Cell& c = mesh.cells()[j];
        double v = 0.0;
        for (std::size_t f : c.face_ids) v = std::max(v, speed(j, f));
        worst = std::max(worst, c.perimeter / c.area * v);
    }
    if (!(worst > 0.0)) return dt_max;
    return std::min(p.k_cfl / (2.0 * worst), dt_max);
}

} // namespace detail

/// Explicit time step from acoustic (tau_j a_jk) and material (|u_jk|) speeds at t^n.
inline double dt_exex(const RelaxedField& r, const std::vector<FaceFlux>& fluxes_n, const Mesh& mesh,
                      const Params& p, double dt_max = std::numeric_limits<double>::infinity()) {
    return detail::cfl_time_step(mesh, p, dt_max, [&](std::size_t j, std::size_t f) {
        return std::max(r.tau[j] * fluxes_n[f].a, std::abs(fluxes_n[f].u_star));
    });
}

/// IMEX time step: material speeds |u_jk| only.
inline double dt_imex(const std::vector<FaceFlux>& fluxes, const Mesh& mesh, const Params& p,
                      double dt_max = std::numeric_limits<double>::infinity()) {
    return detail::cfl_time_step(mesh, p, dt_max, [&](std::size_t, std::size_t f) { return std::abs(fluxes[f].u_star); });
}

// -- solver -------------------------------------------------------------------

/// Owns topography, boundary map and parameters for runs on one mesh.
/// The mesh must outlive the solver.
class Solver {
public:
    Solver(const Mesh& mesh, Topography topo, const Params& params, const BoundaryCondition& bc, RunOptions opts = {})
        : mesh_(&mesh), topo_(std::move(topo)), params_(params), bc_(mesh, bc), opts_(opts) {
        params_.validate();
        if (topo_.z.size() == mesh.n_cells()) topo_.z.resize(mesh.n_total(), 0.0);
        if (topo_.z.size() != mesh.n_total()) throw InvalidArgument("topography size does not match mesh");
        bc_.fill(topo_.z);
    }

    const Mesh& mesh() const noexcept { return *mesh_; }
    const Topography& topography() const noexcept { return topo_; }
    const Params& params() const noexcept { return params_; }
    const BoundaryMap& boundary() const noexcept { return bc_; }
    const RunOptions& options() const noexcept { return opts_; }
    RunOptions& options() noexcept { return opts_; }

    /// Accepts interior-only or full-size fields; ghosts are populated.
    RunState initial_state(ConservedField init) const {
        if (init.size() == mesh_->n_cells()) {
            init.h.resize(mesh_->n_total(), 0.0);
            init.hu.resize(mesh_->n_total());
        }
        if (init.size() != mesh_->n_total()) throw InvalidArgument("initial field size does not match mesh");
        apply_bc(init, bc_);
        RunState s;
        s.fields = std::move(init);
        return s;
    }

    /// One step of prescribed size: re-initialize pi, acoustic step, combined update.
    StepInfo step(RunState& s, double dt) const {
        StepInfo info;
        info.dt = dt;
        apply_bc(s.fields, bc_);
        const RelaxedField r = to_relaxed(s.fields, params_);
        AcousticResult ac = params_.scheme == Scheme::EXEX
                                ? explicit_acoustic(r, *mesh_, topo_, params_, dt, opts_.strict_cfl)
                                : implicit_acoustic(r, *mesh_, topo_, params_, dt, bc_, opts_.solver_tol, opts_.max_iter);
        finish(s, ac, dt, info);
        return info;
    }

    /// One step with the scheme's own time step, truncated to reach t_final exactly.
    StepInfo advance(RunState& s) const {
        const double remaining = opts_.t_final - s.t;
        if (!(remaining > 0.0)) return {};
        const double cap = std::min(opts_.effective_dt_max(), remaining);

        apply_bc(s.fields, bc_);
        const RelaxedField r = to_relaxed(s.fields, params_);
        StepInfo info;

        if (params_.scheme == Scheme::EXEX) {
            AcousticResult ac;
            ac.face_fluxes = explicit_face_fluxes(r, *mesh_, topo_, params_);
            const double dt = dt_exex(r, ac.face_fluxes, *mesh_, params_, cap);
            ac.acoustic_cfl = acoustic_cfl(r, ac.face_fluxes, *mesh_, dt);
            if (opts_.strict_cfl && ac.acoustic_cfl > 0.5 * (1.0 + 1e-12))
                throw CflError("acoustic CFL violated", ac.acoustic_cfl);
            ac.relaxed = acoustic_update(r, ac.face_fluxes, *mesh_, dt);
            info.dt = dt;
            finish(s, ac, dt, info);
        } else {
            double dt = s.dt_lag > 0.0 ? std::min(s.dt_lag, cap)
                                       : dt_exex(r, explicit_face_fluxes(r, *mesh_, topo_, params_), *mesh_, params_, cap);
            AcousticResult ac;
            // The lagged dt may overshoot the transport CFL of the new speeds: retry with the fresh estimate.
            for (int attempt = 0;; ++attempt) {
                ac = implicit_acoustic(r, *mesh_, topo_, params_, dt, bc_, opts_.solver_tol, opts_.max_iter);
                info.solver_iterations += ac.solver_iterations;
                if (transport_cfl(ac.face_fluxes, *mesh_, dt) <= 1.0 || attempt == 4) break;
                dt = std::min(dt_imex(ac.face_fluxes, *mesh_, params_, cap), 0.5 * dt);
            }
            s.dt_lag = dt_imex(ac.face_fluxes, *mesh_, params_);
            info.dt = dt;
            const int its = info.solver_iterations;
            finish(s, ac, dt, info);
            info.solver_iterations = its;
        }
        if (info.dt >= remaining) s.t = opts_.t_final;
        return info;
    }

    RunReport run(ConservedField init) const { return run(initial_state(std::move(init))); }

    RunReport run(RunState s, const std::function<void(const RunState&, const StepInfo&)>& observer = {}) const {
        const auto t0 = std::chrono::steady_clock::now();
        RunReport rep;
        rep.mass_history.push_back(total_mass(s.fields, *mesh_));
        rep.max_froude = max_froude(s.fields, *mesh_, params_.g);
        rep.dt_min = std::numeric_limits<double>::infinity();
        double dt_sum = 0.0;
        while (s.t < opts_.t_final && rep.steps < opts_.max_steps) {
            StepInfo info;
            try {
                info = advance(s);
            } catch (const PositivityError& e) {
                throw PositivityError("step " + std::to_string(s.step + 1) + ": " + e.what(), e.cell(), e.suggested_dt());
            } catch (const CflError& e) {
                throw CflError("step " + std::to_string(s.step + 1) + ": " + e.what(), e.cfl());
            } catch (const SolverError& e) {
                throw SolverError("step " + std::to_string(s.step + 1) + ": " + e.what(), e.residual());
            }
            ++rep.steps;
            rep.dt_min = std::min(rep.dt_min, info.dt);
            rep.dt_max = std::max(rep.dt_max, info.dt);
            dt_sum += info.dt;
            rep.solver_iterations += info.solver_iterations;
            if (info.acoustic_cfl > 0.5 * (1.0 + 1e-12) && params_.scheme == Scheme::EXEX) ++rep.cfl_warnings;
            rep.mass_history.push_back(total_mass(s.fields, *mesh_));
            rep.max_froude = std::max(rep.max_froude, max_froude(s.fields, *mesh_, params_.g));
            if (observer) observer(s, info);
        }
        if (rep.steps == 0) rep.dt_min = 0.0;
        rep.dt_mean = rep.steps ? dt_sum / static_cast<double>(rep.steps) : 0.0;
        rep.t_end = s.t;
        rep.final_fields = std::move(s.fields);
        rep.wall_time = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        return rep;
    }

private:
    void finish(RunState& s, AcousticResult& ac, double dt, StepInfo& info) const {
        info.acoustic_cfl = ac.acoustic_cfl;
        info.solver_iterations = ac.solver_iterations;
        info.transport_cfl = transport_cfl(ac.face_fluxes, *mesh_, dt);
        apply_bc(ac.relaxed, bc_);
        s.fields = combined_update(s.fields, ac, *mesh_, dt);
        apply_bc(s.fields, bc_);
        s.t += dt;
        ++s.step;
    }

    const Mesh* mesh_;
    Topography topo_;
    Params params_;
    BoundaryMap bc_;
    RunOptions opts_;
};

} // namespace lpswe
