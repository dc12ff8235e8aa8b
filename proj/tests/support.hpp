#pragma once

#include <cstddef>
#include <random>

#include "lpswe/boundary.hpp"
#include "lpswe/fields.hpp"
#include "lpswe/mesh.hpp"

// Small fixtures shared by the unit tests.
namespace lpswe::test_support {

/// Interior + ghost fields on `mesh`, ghosts filled through `bc`.
struct Setup {
    Topography topo;
    ConservedField c;
    RelaxedField r;
};

template <class Depth, class Bottom, class Velocity>
Setup make_setup(const Mesh& mesh, const BoundaryMap& bc, const Params& p, Depth&& h, Bottom&& z, Velocity&& u) {
    Setup s;
    s.topo.z.assign(mesh.n_total(), 0.0);
    s.c = ConservedField(mesh.n_total());
    for (std::size_t j = 0; j < mesh.n_cells(); ++j) {
        const Vec2 x = mesh.cells()[j].centroid;
        s.topo.z[j] = z(x);
        s.c.h[j] = h(x);
        s.c.hu[j] = s.c.h[j] * u(x);
    }
    bc.fill(s.topo.z);
    apply_bc(s.c, bc);
    s.r = to_relaxed(s.c, p);
    return s;
}

/// Random smooth-ish state: h in [0.5, 1.5], |u| < 0.5, bottom in [0, 0.2].
inline Setup random_setup(const Mesh& mesh, const BoundaryMap& bc, const Params& p, unsigned seed) {
    std::mt19937 rng(seed);
    std::uniform_real_distribution<double> H(0.5, 1.5), U(-0.35, 0.35), Z(0.0, 0.2);
    return make_setup(
        mesh, bc, p, [&](Vec2) { return H(rng); }, [&](Vec2) { return Z(rng); },
        [&](Vec2) { return Vec2{U(rng), U(rng)}; });
}

} // namespace lpswe::test_support
