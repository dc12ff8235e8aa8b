#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <string>
#include <vector>

#include "lpswe/error.hpp"
#include "lpswe/fields.hpp"
#include "lpswe/mesh.hpp"

namespace lpswe {

/// Absorbing is a zero-gradient copy, identical to Neumann.
enum class BcKind { neumann, periodic, absorbing };

inline std::string to_string(BcKind k) {
    switch (k) {
    case BcKind::neumann: return "neumann";
    case BcKind::periodic: return "periodic";
    case BcKind::absorbing: return "absorbing";
    }
    return "?";
}

/// Boundary kind for the x-facing (left/right) and y-facing (bottom/top) sides
/// of the mesh bounding box.
struct BoundaryCondition {
    BcKind x = BcKind::neumann;
    BcKind y = BcKind::neumann;
};

/// Ghost cell -> interior donor cell whose state the ghost replicates.
class BoundaryMap {
public:
    BoundaryMap() = default;
    BoundaryMap(const Mesh& mesh, const BoundaryCondition& bc);

    std::size_t n_cells() const noexcept { return n_cells_; }
    const std::vector<std::size_t>& donors() const noexcept { return donor_; }

    /// Interior index standing for k (identity for interior cells).
    std::size_t resolve(std::size_t k) const noexcept { return k < n_cells_ ? k : donor_[k - n_cells_]; }

    /// Copies donor values into the ghost slots of any per-cell array.
    template <class T>
    void fill(std::vector<T>& values) const {
        if (values.size() != n_cells_ + donor_.size()) throw InvalidArgument("apply_bc: field size mismatch");
        for (std::size_t g = 0; g < donor_.size(); ++g) values[n_cells_ + g] = values[donor_[g]];
    }

private:
    std::size_t n_cells_ = 0;
    std::vector<std::size_t> donor_;
};

namespace detail {

enum class Side { left, right, bottom, top };

inline Side classify_side(const Vec2& n) {
    if (std::abs(n.x) >= std::abs(n.y)) return n.x < 0.0 ? Side::left : Side::right;
    return n.y < 0.0 ? Side::bottom : Side::top;
}

/// Pairs ghosts of opposite sides by matching the face midpoint coordinate along the side.
inline void pair_periodic(const Mesh& mesh, std::vector<std::size_t> lo, std::vector<std::size_t> hi, bool along_y,
                          std::vector<std::size_t>& donor) {
    const std::size_t n = mesh.n_cells();
    auto coord = [&](std::size_t g) {
        const Face& f = mesh.face(mesh.ghost_face(g));
        return along_y ? f.midpoint.y : f.midpoint.x;
    };
    auto by_coord = [&](std::size_t a, std::size_t b) { return coord(a) < coord(b); };
    std::sort(lo.begin(), lo.end(), by_coord);
    std::sort(hi.begin(), hi.end(), by_coord);
    const Rect bb = mesh.bounding_box();
    const double tol = 1e-9 * std::max(bb.width(), bb.height());
    if (lo.size() != hi.size()) throw ConfigError("periodic boundary: opposite sides have different face counts");
    for (std::size_t i = 0; i < lo.size(); ++i) {
        const Face& fl = mesh.face(mesh.ghost_face(lo[i]));
        const Face& fh = mesh.face(mesh.ghost_face(hi[i]));
        if (std::abs(coord(lo[i]) - coord(hi[i])) > tol || std::abs(fl.length - fh.length) > tol)
            throw ConfigError("periodic boundary: unpaired face near midpoint (" + std::to_string(fl.midpoint.x) +
                              ", " + std::to_string(fl.midpoint.y) + ")");
        donor[lo[i] - n] = fh.owner;
        donor[hi[i] - n] = fl.owner;
    }
}

} // namespace detail

inline BoundaryMap::BoundaryMap(const Mesh& mesh, const BoundaryCondition& bc)
    : n_cells_(mesh.n_cells()), donor_(mesh.n_ghosts()) {
    std::vector<std::size_t> side[4];
    for (std::size_t g = 0; g < mesh.n_ghosts(); ++g) {
        const std::size_t k = n_cells_ + g;
        const Face& f = mesh.face(mesh.ghost_face(k));
        donor_[g] = f.owner;
        side[static_cast<int>(detail::classify_side(f.normal))].push_back(k);
    }
    using detail::Side;
    if (bc.x == BcKind::periodic)
        detail::pair_periodic(mesh, side[int(Side::left)], side[int(Side::right)], true, donor_);
    if (bc.y == BcKind::periodic)
        detail::pair_periodic(mesh, side[int(Side::bottom)], side[int(Side::top)], false, donor_);
}

/// Populates ghost depth, discharge and bottom elevation from their donors.
inline void apply_bc(ConservedField& c, Topography& topo, const BoundaryMap& bc) {
    bc.fill(c.h);
    bc.fill(c.hu);
    bc.fill(topo.z);
}

inline void apply_bc(ConservedField& c, const BoundaryMap& bc) {
    bc.fill(c.h);
    bc.fill(c.hu);
}

inline void apply_bc(RelaxedField& r, const BoundaryMap& bc) {
    bc.fill(r.tau);
    bc.fill(r.u);
    bc.fill(r.pi);
}

} // namespace lpswe
