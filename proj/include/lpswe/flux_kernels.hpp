#pragma once

#include <algorithm>
#include <cmath>

#include "lpswe/error.hpp"
#include "lpswe/fields.hpp"
#include "lpswe/vec2.hpp"

/// Per-face kernels of the relaxation (Lagrangian) acoustic solver, written in
/// the frame of the face normal. Left = owner side, right = neighbor side.
///
/// The evaluation order in each kernel is fixed: lake-at-rest cancellation
/// relies on it.
namespace lpswe::kernels {

/// One side of a face, already rotated into the normal frame.
struct SideState {
    double h_n = 0.0; ///< depth at t^n (impedance, source, theta)
    double z = 0.0;
    double u_n = 0.0; ///< normal velocity at the evaluation level
    double u_t = 0.0; ///< tangential velocity; never enters a flux
    double pi = 0.0;  ///< relaxed pressure at the evaluation level
};

struct FaceStates {
    SideState left;
    SideState right;
};

struct FaceFlux {
    double u_star = 0.0;    ///< interface velocity, positive from owner to neighbor
    double pi_star_L = 0.0; ///< pressure seen by the owner
    double pi_star_R = 0.0; ///< pressure seen by the neighbor
    double a = 0.0;         ///< local Lagrangian impedance
    double theta = 1.0;     ///< low-Froude factor on the velocity-jump dissipation
};

/// a = kappa * max(h_L c_L, h_R c_R); satisfies the sub-characteristic condition a > h c.
inline double impedance(double h_L, double h_R, const Params& p) {
    if (!(h_L > 0.0) || !(h_R > 0.0)) throw InvalidArgument("impedance: non-positive depth");
    return p.kappa * std::max(h_L * std::sqrt(p.g * h_L), h_R * std::sqrt(p.g * h_R));
}

/// Centered source bracket g (h_L + h_R)/2 (z_R - z_L), always from time-n depths.
inline double hydrostatic_source(double h_L_n, double h_R_n, double z_L, double z_R, double g) noexcept {
#ifdef LPSWE_MUTATE_SOURCE_SIGN
    return -(g * (h_L_n + h_R_n) / 2.0 * (z_R - z_L));
#else
    return g * (h_L_n + h_R_n) / 2.0 * (z_R - z_L);
#endif
}

inline double interface_velocity(double u_nL, double u_nR, double pi_L, double pi_R, double a, double src) noexcept {
    return (u_nL + u_nR) / 2.0 - (pi_R - pi_L) / (2.0 * a) - src / (2.0 * a);
}

inline double interface_velocity(const FaceStates& fs, double a, double src) noexcept {
    return interface_velocity(fs.left.u_n, fs.right.u_n, fs.left.pi, fs.right.pi, a, src);
}

/// theta = min(|u_n| / max(c_L, c_R), 1) for the corrected policy, 1 otherwise.
/// u_star_n must be the interface velocity built from time-n states.
inline double theta_policy(double u_star_n, double h_L, double h_R, const Params& p) {
    if (p.theta_policy == ThetaPolicy::unity) return 1.0;
    const double c_max = std::max(sound_speed(h_L, p.g), sound_speed(h_R, p.g));
    if (!(c_max > 0.0)) throw InvalidArgument("theta_policy: zero sound speed on both sides");
    return std::min(std::abs(u_star_n) / c_max, 1.0);
}

struct InterfacePressures {
    double left;
    double right;
};

inline InterfacePressures interface_pressures(double u_nL, double u_nR, double pi_L, double pi_R, double a,
                                              double theta, double src) noexcept {
    const double pi_c = (pi_L + pi_R) / 2.0 - theta * a * (u_nR - u_nL) / 2.0;
    return {pi_c + src / 2.0, pi_c - src / 2.0};
}

inline InterfacePressures interface_pressures(const FaceStates& fs, double a, double theta, double src) noexcept {
    return interface_pressures(fs.left.u_n, fs.right.u_n, fs.left.pi, fs.right.pi, a, theta, src);
}

/// Quantities frozen at t^n for a face: they make the implicit system linear.
struct FrozenFace {
    double a = 0.0;
    double src = 0.0;
    double theta = 1.0;
};

/// Freezes impedance, source bracket and theta from time-n states.
inline FrozenFace freeze(const FaceStates& at_n, const Params& p) {
    FrozenFace fr;
    fr.a = impedance(at_n.left.h_n, at_n.right.h_n, p);
    fr.src = hydrostatic_source(at_n.left.h_n, at_n.right.h_n, at_n.left.z, at_n.right.z, p.g);
    const double u_n = interface_velocity(at_n, fr.a, fr.src);
    fr.theta = theta_policy(u_n, at_n.left.h_n, at_n.right.h_n, p);
    return fr;
}

inline FaceFlux evaluate(const FaceStates& sharp, const FrozenFace& fr) noexcept {
    FaceFlux ff;
    ff.a = fr.a;
    ff.theta = fr.theta;
    ff.u_star = interface_velocity(sharp, fr.a, fr.src);
    const auto pr = interface_pressures(sharp, fr.a, fr.theta, fr.src);
    ff.pi_star_L = pr.left;
    ff.pi_star_R = pr.right;
    return ff;
}

/// Cell-frame state used to build face states.
struct CellState {
    double h = 0.0; ///< time-n depth
    double z = 0.0;
    Vec2 u;
    double pi = 0.0;
};

inline SideState rotate(const CellState& s, const Vec2& n) noexcept {
    const Vec2 un = to_normal_frame(s.u, n);
    return {s.h, s.z, un.x, un.y, s.pi};
}

inline FaceStates rotate(const CellState& owner, const CellState& neighbor, const Vec2& n) noexcept {
    return {rotate(owner, n), rotate(neighbor, n)};
}

/// Full face flux. `owner_sharp`/`neighbor_sharp` carry (u, pi) at the
/// evaluation level; the time-n states feed impedance, source and theta.
inline FaceFlux face_flux(const CellState& owner_sharp, const CellState& neighbor_sharp, const CellState& owner_n,
                          const CellState& neighbor_n, const Vec2& normal, const Params& p) {
    const FrozenFace fr = freeze(rotate(owner_n, neighbor_n, normal), p);
    return evaluate(rotate(owner_sharp, neighbor_sharp, normal), fr);
}

/// Explicit variant: evaluation level is t^n.
inline FaceFlux face_flux(const CellState& owner_n, const CellState& neighbor_n, const Vec2& normal, const Params& p) {
    const FaceStates fs = rotate(owner_n, neighbor_n, normal);
    return evaluate(fs, freeze(fs, p));
}

} // namespace lpswe::kernels
