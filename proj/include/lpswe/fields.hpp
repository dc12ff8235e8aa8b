#pragma once

#include <cmath>
#include <cstddef>
#include <string>
#include <vector>

#include "lpswe/error.hpp"
#include "lpswe/vec2.hpp"

namespace lpswe {

enum class ThetaPolicy { corrected, unity };
enum class Scheme { EXEX, IMEX };

inline std::string to_string(ThetaPolicy p) { return p == ThetaPolicy::corrected ? "corrected" : "unity"; }
inline std::string to_string(Scheme s) { return s == Scheme::EXEX ? "EXEX" : "IMEX"; }

struct Params {
    double g = 9.81;
    double kappa = 1.01; ///< impedance safety factor, > 1
    double k_cfl = 0.9;
    ThetaPolicy theta_policy = ThetaPolicy::corrected;
    Scheme scheme = Scheme::EXEX;

    void validate() const {
        if (!(g > 0.0)) throw InvalidArgument("g must be > 0");
        if (!(kappa > 1.0)) throw InvalidArgument("kappa must be > 1");
        if (!(k_cfl > 0.0 && k_cfl <= 1.0)) throw InvalidArgument("k_cfl must be in (0, 1]");
    }
};

/// Physical unknowns (h, h u), one entry per interior and ghost cell.
struct ConservedField {
    std::vector<double> h;
    std::vector<Vec2> hu;

    ConservedField() = default;
    explicit ConservedField(std::size_t n) : h(n, 0.0), hu(n) {}
    std::size_t size() const noexcept { return h.size(); }
};

/// Acoustic-step working state: specific volume tau = 1/h, velocity, relaxed pressure.
struct RelaxedField {
    std::vector<double> tau;
    std::vector<Vec2> u;
    std::vector<double> pi;

    RelaxedField() = default;
    explicit RelaxedField(std::size_t n) : tau(n, 0.0), u(n), pi(n, 0.0) {}
    std::size_t size() const noexcept { return tau.size(); }
};

/// Bottom elevation per interior and ghost cell; fixed for the run.
struct Topography {
    std::vector<double> z;
};

inline double sound_speed(double h, double g) {
    if (h < 0.0) throw InvalidArgument("sound_speed: negative depth");
    return std::sqrt(g * h);
}

/// Hydrostatic pressure law g h^2 / 2.
inline double pressure_eos(double h, double g) noexcept { return 0.5 * g * h * h; }

/// Re-initializes the relaxed pressure at equilibrium: pi = g h^2 / 2.
inline RelaxedField to_relaxed(const ConservedField& c, const Params& p) {
    RelaxedField r(c.size());
    for (std::size_t j = 0; j < c.size(); ++j) {
        const double h = c.h[j];
        if (!(h > 0.0)) throw PositivityError("to_relaxed: non-positive water depth", j);
        r.tau[j] = 1.0 / h;
        r.u[j] = c.hu[j] / h;
        r.pi[j] = pressure_eos(h, p.g);
    }
    return r;
}

inline ConservedField to_conserved(const RelaxedField& r) {
    ConservedField c(r.size());
    for (std::size_t j = 0; j < r.size(); ++j) {
        const double tau = r.tau[j];
        if (!(tau > 0.0)) throw PositivityError("to_conserved: non-positive specific volume", j);
        c.h[j] = 1.0 / tau;
        c.hu[j] = r.u[j] / tau;
    }
    return c;
}

} // namespace lpswe
