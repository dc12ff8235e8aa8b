#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <limits>
#include <string>
#include <vector>

#include <Eigen/Sparse>
#include <Eigen/SparseLU>

#include "lpswe/error.hpp"
#include "lpswe/fields.hpp"
#include "lpswe/flux_kernels.hpp"

/// Lagrange-projection scheme on a uniform 1D grid with zero-gradient ghosts.
/// Face i sits between cells i-1 and i; faces 0 and n are boundary faces.
namespace lpswe::ref1d {

struct State {
    std::vector<double> h;
    std::vector<double> u1; ///< velocity along the grid
    std::vector<double> u2; ///< transverse velocity, passively transported

    std::size_t size() const noexcept { return h.size(); }
};

struct Grid {
    double x0 = 0.0;
    double x1 = 1.0;
    std::size_t n = 1;

    double dx() const noexcept { return (x1 - x0) / static_cast<double>(n); }
    double center(std::size_t i) const noexcept { return x0 + (static_cast<double>(i) + 0.5) * dx(); }
};

struct Fluxes {
    std::vector<kernels::FaceFlux> face; ///< n + 1 faces
};

namespace detail {

inline std::size_t left_of(std::size_t i) noexcept { return i == 0 ? 0 : i - 1; }
inline std::size_t right_of(std::size_t i, std::size_t n) noexcept { return i == n ? n - 1 : i; }

inline kernels::FaceStates face_states(const std::vector<double>& h_n, const std::vector<double>& z,
                                       const std::vector<double>& u, const std::vector<double>& pi, std::size_t L,
                                       std::size_t R) {
    return {{h_n[L], z[L], u[L], 0.0, pi[L]}, {h_n[R], z[R], u[R], 0.0, pi[R]}};
}

} // namespace detail

struct StepResult {
    State state;
    Fluxes fluxes; ///< interface quantities used by the step
};

/// One Lagrange-projection step of size dt (scheme from Params).
inline StepResult step1d(const State& s, const std::vector<double>& z, double dx, const Params& p, double dt,
                         bool checked = true) {
    const std::size_t n = s.size();
    if (n == 0 || z.size() != n || s.u1.size() != n || s.u2.size() != n) throw InvalidArgument("step1d: size mismatch");
    if (!(dx > 0.0)) throw InvalidArgument("step1d: dx must be > 0");
    for (std::size_t j = 0; j < n; ++j)
        if (!(s.h[j] > 0.0)) throw PositivityError("step1d: non-positive depth", j);

    std::vector<double> tau(n), pi(n);
    for (std::size_t j = 0; j < n; ++j) {
        tau[j] = 1.0 / s.h[j];
        pi[j] = pressure_eos(s.h[j], p.g);
    }

    std::vector<kernels::FrozenFace> frozen(n + 1);
    for (std::size_t i = 0; i <= n; ++i)
        frozen[i] = kernels::freeze(
            detail::face_states(s.h, z, s.u1, pi, detail::left_of(i), detail::right_of(i, n)), p);

    // (u1, pi) at the evaluation level
    std::vector<double> u_sh = s.u1, pi_sh = pi;
    if (p.scheme == Scheme::IMEX) {
        // unknowns: u1_j -> 2j, pi_j -> 2j+1
        const double lam = dt / dx;
        std::vector<Eigen::Triplet<double>> trip;
        Eigen::VectorXd rhs(2 * n);
        for (std::size_t j = 0; j < n; ++j) {
            rhs[2 * j] = s.u1[j];
            rhs[2 * j + 1] = pi[j];
            trip.emplace_back(2 * j, 2 * j, 1.0);
            trip.emplace_back(2 * j + 1, 2 * j + 1, 1.0);
        }
        for (std::size_t i = 0; i <= n; ++i) {
            const std::size_t L = detail::left_of(i), R = detail::right_of(i, n);
            const auto& fr = frozen[i];
            // u*_i = (U_L+U_R)/2 - (P_R-P_L)/(2a) - src/(2a)
            // pi_c = (P_L+P_R)/2 - theta a (U_R-U_L)/2; piL = pi_c + src/2, piR = pi_c - src/2
            auto add_u_star = [&](std::size_t row, double w) {
                trip.emplace_back(row, 2 * L, w / 2.0);
                trip.emplace_back(row, 2 * R, w / 2.0);
                trip.emplace_back(row, 2 * R + 1, -w / (2.0 * fr.a));
                trip.emplace_back(row, 2 * L + 1, w / (2.0 * fr.a));
                rhs[row] += w * fr.src / (2.0 * fr.a);
            };
            auto add_pi = [&](std::size_t row, double w, double side_sign) {
                trip.emplace_back(row, 2 * L + 1, w / 2.0);
                trip.emplace_back(row, 2 * R + 1, w / 2.0);
                trip.emplace_back(row, 2 * R, -w * fr.theta * fr.a / 2.0);
                trip.emplace_back(row, 2 * L, w * fr.theta * fr.a / 2.0);
                rhs[row] -= w * side_sign * fr.src / 2.0;
            };
            // face i is the right face of cell i-1 and the left face of cell i
            if (i > 0) {
                const std::size_t j = i - 1;
                add_pi(2 * j, tau[j] * lam, +1.0);
                add_u_star(2 * j + 1, tau[j] * lam * fr.a * fr.a);
            }
            if (i < n) {
                const std::size_t j = i;
                add_pi(2 * j, -tau[j] * lam, -1.0);
                add_u_star(2 * j + 1, -tau[j] * lam * fr.a * fr.a);
            }
        }
        Eigen::SparseMatrix<double> A(2 * n, 2 * n);
        A.setFromTriplets(trip.begin(), trip.end());
        Eigen::SparseLU<Eigen::SparseMatrix<double>> lu;
        lu.compute(A);
        if (lu.info() != Eigen::Success) throw SolverError("step1d: factorization failed", INFINITY);
        const Eigen::VectorXd x = lu.solve(rhs);
        for (std::size_t j = 0; j < n; ++j) {
            u_sh[j] = x[2 * j];
            pi_sh[j] = x[2 * j + 1];
        }
    }

    StepResult out;
    out.fluxes.face.resize(n + 1);
    for (std::size_t i = 0; i <= n; ++i)
        out.fluxes.face[i] = kernels::evaluate(
            detail::face_states(s.h, z, u_sh, pi_sh, detail::left_of(i), detail::right_of(i, n)), frozen[i]);
    const auto& F = out.fluxes.face;

    // acoustic step
    const double lam = dt / dx;
    std::vector<double> tau_m(n), u1_m(n);
    for (std::size_t j = 0; j < n; ++j) {
        tau_m[j] = tau[j] + tau[j] * lam * (F[j + 1].u_star - F[j].u_star);
        u1_m[j] = p.scheme == Scheme::IMEX ? u_sh[j] : s.u1[j] - tau[j] * lam * (F[j + 1].pi_star_L - F[j].pi_star_R);
        if (checked && !(tau_m[j] > 0.0)) throw PositivityError("step1d: acoustic step produced non-positive specific volume", j);
    }

    // upwind transport of (h, h u1, h u2)
    std::vector<double> phi[3];
    for (auto& v : phi) v.resize(n);
    for (std::size_t j = 0; j < n; ++j) {
        phi[0][j] = 1.0 / tau_m[j];
        phi[1][j] = u1_m[j] / tau_m[j];
        phi[2][j] = s.u2[j] / tau_m[j];
    }
    if (checked)
        for (std::size_t j = 0; j < n; ++j) {
            const double inflow = std::max(0.0, -F[j + 1].u_star) + std::max(0.0, F[j].u_star);
            if (lam * inflow > 1.0 + 1e-12) throw CflError("step1d: transport CFL violated", lam * inflow);
        }
    out.state = s;
    for (std::size_t j = 0; j < n; ++j) {
        const double ur = F[j + 1].u_star, ul = F[j].u_star;
        const std::size_t up_r = ur >= 0.0 ? j : std::min(j + 1, n - 1);
        const std::size_t up_l = ul >= 0.0 ? (j == 0 ? 0 : j - 1) : j;
        double next[3];
        for (int q = 0; q < 3; ++q)
            next[q] = phi[q][j] - lam * (ur * phi[q][up_r] - ul * phi[q][up_l]) + lam * phi[q][j] * (ur - ul);
        if (checked && !(next[0] > 0.0)) throw PositivityError("step1d: non-positive depth after transport", j);
        out.state.h[j] = next[0];
        out.state.u1[j] = next[1] / next[0];
        out.state.u2[j] = next[2] / next[0];
    }
    return out;
}

struct Result {
    Grid grid;
    State state;
    std::vector<double> z;
    std::size_t steps = 0;
    double t_end = 0.0;
};

inline double transport_cfl(const std::vector<kernels::FaceFlux>& F, double dx, double dt) {
    double worst = 0.0;
    for (std::size_t j = 0; j + 1 < F.size(); ++j)
        worst = std::max(worst, std::max(0.0, -F[j + 1].u_star) + std::max(0.0, F[j].u_star));
    return dt / dx * worst;
}

/// Time step: K / (2 (2/dx) max speed); IMEX uses material speeds only.
inline double time_step(const std::vector<kernels::FaceFlux>& F, const std::vector<double>& h, double dx,
                        const Params& p, bool acoustic) {
    double v = 0.0;
    for (std::size_t j = 0; j < h.size(); ++j)
        for (std::size_t i : {j, j + 1}) {
            v = std::max(v, std::abs(F[i].u_star));
            if (acoustic) v = std::max(v, F[i].a / h[j]);
        }
    return v > 0.0 ? p.k_cfl / (2.0 * (2.0 / dx) * v) : std::numeric_limits<double>::infinity();
}

/// Runs to t_final from sampled initial data. `surface(x)` gives h + z at rest;
/// velocities start at zero.
inline Result run1d(const std::function<double(double)>& surface, const std::function<double(double)>& topography,
                    const Grid& grid, double t_final, Params p, double dt_max = 0.0) {
    p.validate();
    Result res;
    res.grid = grid;
    const std::size_t n = grid.n;
    res.z.resize(n);
    State s{std::vector<double>(n), std::vector<double>(n, 0.0), std::vector<double>(n, 0.0)};
    for (std::size_t j = 0; j < n; ++j) {
        const double x = grid.center(j);
        res.z[j] = topography(x);
        s.h[j] = surface(x) - res.z[j];
        if (!(s.h[j] > 0.0)) throw InvalidArgument("run1d: dry cell in initial condition");
    }
    if (!(dt_max > 0.0)) dt_max = t_final / 10.0;
    const double dx = grid.dx();
    double t = 0.0, dt_lag = 0.0;
    while (t < t_final) {
        const double cap = std::min(dt_max, t_final - t);
        double dt;
        if (p.scheme == Scheme::EXEX || dt_lag <= 0.0) {
            Params pe = p;
            pe.scheme = Scheme::EXEX;
            const auto probe = step1d(s, res.z, dx, pe, 0.0);
            dt = std::min(time_step(probe.fluxes.face, s.h, dx, p, true), cap);
        } else {
            dt = std::min(dt_lag, cap);
        }
        StepResult st;
        if (p.scheme == Scheme::IMEX) {
            // same retry as the 2D driver when the lagged step overshoots the transport CFL
            for (int attempt = 0;; ++attempt) {
                st = step1d(s, res.z, dx, p, dt, attempt == 4);
                if (transport_cfl(st.fluxes.face, dx, dt) <= 1.0 || attempt == 4) break;
                dt = std::min(std::min(time_step(st.fluxes.face, s.h, dx, p, false), cap), 0.5 * dt);
            }
            for (std::size_t j = 0; j < n; ++j)
                if (!(st.state.h[j] > 0.0)) throw PositivityError("run1d: non-positive depth", j);
            dt_lag = time_step(st.fluxes.face, s.h, dx, p, false);
        } else {
            st = step1d(s, res.z, dx, p, dt);
        }
        s = std::move(st.state);
        t = dt >= t_final - t ? t_final : t + dt;
        ++res.steps;
    }
    res.state = std::move(s);
    res.t_end = t;
    return res;
}

} // namespace lpswe::ref1d
