#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "lpswe/detail/numfmt.hpp"
#include "lpswe/error.hpp"
#include "lpswe/vec2.hpp"

namespace lpswe {

struct Rect {
    double x0 = 0.0, x1 = 1.0, y0 = 0.0, y1 = 1.0;

    double width() const noexcept { return x1 - x0; }
    double height() const noexcept { return y1 - y0; }
    double area() const noexcept { return width() * height(); }
};

struct Cell {
    double area = 0.0;
    double perimeter = 0.0;
    Vec2 centroid;
    std::vector<std::size_t> face_ids;   ///< counter-clockwise order
    std::vector<std::size_t> vertex_ids; ///< counter-clockwise order
};

/// Straight face with unit normal pointing from owner to neighbor.
/// The neighbor index is >= n_cells() for boundary faces (ghost cell).
struct Face {
    double length = 0.0;
    Vec2 normal;
    Vec2 midpoint;
    std::size_t owner = 0;
    std::size_t neighbor = 0;
    std::size_t v0 = 0, v1 = 0;
};

/// Immutable unstructured polygonal mesh with one ghost cell per boundary face.
///
/// Cell indices [0, n_cells()) are interior; ghost indices follow in
/// [n_cells(), n_total()), in boundary-face order.
class Mesh {
public:
    Mesh() = default;

    /// Builds connectivity from counter-clockwise vertex loops and validates eagerly.
    static Mesh from_polygons(std::vector<Vec2> vertices, const std::vector<std::vector<std::size_t>>& polygons);

    std::size_t n_cells() const noexcept { return cells_.size(); }
    std::size_t n_ghosts() const noexcept { return ghost_face_.size(); }
    std::size_t n_total() const noexcept { return n_cells() + n_ghosts(); }
    std::size_t n_faces() const noexcept { return faces_.size(); }

    const std::vector<Cell>& cells() const noexcept { return cells_; }
    const std::vector<Face>& faces() const noexcept { return faces_; }
    const std::vector<Vec2>& vertices() const noexcept { return vertices_; }
    const Cell& cell(std::size_t j) const { return cells_.at(j); }
    const Face& face(std::size_t f) const { return faces_.at(f); }

    bool is_ghost(std::size_t k) const noexcept { return k >= n_cells(); }
    bool is_boundary_face(std::size_t f) const noexcept { return is_ghost(faces_[f].neighbor); }
    /// Boundary face that created ghost cell k.
    std::size_t ghost_face(std::size_t k) const { return ghost_face_.at(k - n_cells()); }

    /// Unit normal of face f pointing out of cell j (exact negation on the neighbor side).
    Vec2 outward_normal(std::size_t j, std::size_t f) const {
        const Face& fc = faces_[f];
        return fc.owner == j ? fc.normal : -fc.normal;
    }
    /// Cell on the other side of face f as seen from j.
    std::size_t across(std::size_t j, std::size_t f) const {
        const Face& fc = faces_[f];
        return fc.owner == j ? fc.neighbor : fc.owner;
    }

    /// Geometric ratio |face| / |cell|.
    double sigma(std::size_t j, std::size_t f) const {
        if (j >= n_cells() || f >= n_faces()) throw InvalidArgument("sigma: index out of range");
        const Face& fc = faces_[f];
        if (fc.owner != j && fc.neighbor != j) throw InvalidArgument("sigma: face not incident to cell");
        return fc.length / cells_[j].area;
    }

    Rect bounding_box() const noexcept { return bbox_; }
    double total_area() const noexcept {
        double s = 0.0;
        for (const auto& c : cells_) s += c.area;
        return s;
    }

private:
    void validate() const;

    std::vector<Vec2> vertices_;
    std::vector<Cell> cells_;
    std::vector<Face> faces_;
    std::vector<std::size_t> ghost_face_;
    Rect bbox_;
};

inline Mesh Mesh::from_polygons(std::vector<Vec2> vertices, const std::vector<std::vector<std::size_t>>& polygons) {
    Mesh m;
    m.vertices_ = std::move(vertices);
    if (polygons.empty()) throw FormatError("mesh has no cells");
    m.cells_.resize(polygons.size());

    // Directed edge (a, b) of the owner; the neighbor sees (b, a).
    std::map<std::pair<std::size_t, std::size_t>, std::size_t> edge_face;

    for (std::size_t j = 0; j < polygons.size(); ++j) {
        const auto& poly = polygons[j];
        if (poly.size() < 3) throw FormatError("cell " + std::to_string(j) + " has fewer than 3 vertices");
        Cell& c = m.cells_[j];
        c.vertex_ids = poly;
        for (std::size_t v : poly)
            if (v >= m.vertices_.size()) throw FormatError("cell " + std::to_string(j) + " references missing vertex");

        // Shoelace about the first vertex.
        const Vec2 o = m.vertices_[poly[0]];
        double twice_area = 0.0;
        Vec2 moment;
        for (std::size_t i = 1; i + 1 < poly.size(); ++i) {
            const Vec2 p = m.vertices_[poly[i]] - o;
            const Vec2 q = m.vertices_[poly[i + 1]] - o;
            const double cr = p.x * q.y - p.y * q.x;
            twice_area += cr;
            moment += cr * (p + q);
        }
        c.area = 0.5 * twice_area;
        if (!(c.area > 0.0))
            throw FormatError("cell " + std::to_string(j) + " has non-positive area (vertices must be counter-clockwise)");
        c.centroid = o + moment / (3.0 * twice_area);

        for (std::size_t i = 0; i < poly.size(); ++i) {
            const std::size_t a = poly[i];
            const std::size_t b = poly[(i + 1) % poly.size()];
            if (a == b) throw FormatError("cell " + std::to_string(j) + " has a repeated vertex");
            if (edge_face.count({a, b}))
                throw FormatError("duplicated face between vertices " + std::to_string(a) + " and " + std::to_string(b));
            auto rev = edge_face.find({b, a});
            if (rev != edge_face.end()) {
                Face& fc = m.faces_[rev->second];
                if (fc.neighbor != SIZE_MAX)
                    throw FormatError("face shared by more than two cells");
                fc.neighbor = j;
                c.face_ids.push_back(rev->second);
                edge_face[{a, b}] = rev->second;
                continue;
            }
            Face fc;
            fc.v0 = a;
            fc.v1 = b;
            fc.owner = j;
            fc.neighbor = SIZE_MAX;
            const Vec2 d = m.vertices_[b] - m.vertices_[a];
            fc.length = norm(d);
            if (!(fc.length > 0.0)) throw FormatError("zero-length face in cell " + std::to_string(j));
            fc.normal = Vec2{d.y, -d.x} / fc.length;
            fc.midpoint = 0.5 * (m.vertices_[a] + m.vertices_[b]);
            const std::size_t id = m.faces_.size();
            m.faces_.push_back(fc);
            c.face_ids.push_back(id);
            edge_face[{a, b}] = id;
        }
    }

    const std::size_t n = m.cells_.size();
    for (std::size_t f = 0; f < m.faces_.size(); ++f) {
        Face& fc = m.faces_[f];
        if (fc.neighbor == SIZE_MAX) {
            fc.neighbor = n + m.ghost_face_.size();
            m.ghost_face_.push_back(f);
        }
    }
    for (auto& c : m.cells_) {
        c.perimeter = 0.0;
        for (std::size_t f : c.face_ids) c.perimeter += m.faces_[f].length;
    }

    Rect bb{m.vertices_.front().x, m.vertices_.front().x, m.vertices_.front().y, m.vertices_.front().y};
    for (const auto& v : m.vertices_) {
        bb.x0 = std::min(bb.x0, v.x);
        bb.x1 = std::max(bb.x1, v.x);
        bb.y0 = std::min(bb.y0, v.y);
        bb.y1 = std::max(bb.y1, v.y);
    }
    m.bbox_ = bb;
    m.validate();
    return m;
}

inline void Mesh::validate() const {
    for (std::size_t j = 0; j < cells_.size(); ++j) {
        const Cell& c = cells_[j];
        Vec2 closure;
        for (std::size_t f : c.face_ids) closure += faces_[f].length * outward_normal(j, f);
        if (norm(closure) > 1e-12 * c.perimeter)
            throw FormatError("cell " + std::to_string(j) + " is not a closed polygon");
    }
}

namespace detail {

inline double grid_coord(double a, double b, std::size_t i, std::size_t n) {
    return i == n ? b : a + (b - a) * static_cast<double>(i) / static_cast<double>(n);
}

inline std::vector<Vec2> grid_vertices(std::size_t nx, std::size_t ny, const Rect& r) {
    if (nx < 1 || ny < 1) throw InvalidArgument("mesh dimensions must be >= 1");
    if (!(r.x1 > r.x0) || !(r.y1 > r.y0)) throw InvalidArgument("degenerate mesh domain");
    std::vector<Vec2> v;
    v.reserve((nx + 1) * (ny + 1));
    for (std::size_t j = 0; j <= ny; ++j)
        for (std::size_t i = 0; i <= nx; ++i)
            v.push_back({grid_coord(r.x0, r.x1, i, nx), grid_coord(r.y0, r.y1, j, ny)});
    return v;
}

} // namespace detail

/// nx*ny rectangles; cell (i, j) has index j*nx + i.
inline Mesh build_cartesian(std::size_t nx, std::size_t ny, const Rect& domain = {}) {
    auto verts = detail::grid_vertices(nx, ny, domain);
    auto vid = [nx](std::size_t i, std::size_t j) { return j * (nx + 1) + i; };
    std::vector<std::vector<std::size_t>> polys;
    polys.reserve(nx * ny);
    for (std::size_t j = 0; j < ny; ++j)
        for (std::size_t i = 0; i < nx; ++i)
            polys.push_back({vid(i, j), vid(i + 1, j), vid(i + 1, j + 1), vid(i, j + 1)});
    return Mesh::from_polygons(std::move(verts), polys);
}

/// Each rectangle split along its (i,j)-(i+1,j+1) diagonal; 2*nx*ny triangles.
inline Mesh build_triangulated(std::size_t nx, std::size_t ny, const Rect& domain = {}) {
    auto verts = detail::grid_vertices(nx, ny, domain);
    auto vid = [nx](std::size_t i, std::size_t j) { return j * (nx + 1) + i; };
    std::vector<std::vector<std::size_t>> polys;
    polys.reserve(2 * nx * ny);
    for (std::size_t j = 0; j < ny; ++j)
        for (std::size_t i = 0; i < nx; ++i) {
            polys.push_back({vid(i, j), vid(i + 1, j), vid(i + 1, j + 1)});
            polys.push_back({vid(i, j), vid(i + 1, j + 1), vid(i, j + 1)});
        }
    return Mesh::from_polygons(std::move(verts), polys);
}

// SWMESH text format:
//   SWMESH 1
//   <n_vertices> <n_cells>
//   x y            (n_vertices lines)
//   k v0 ... vk-1  (n_cells lines, counter-clockwise)
// '#' starts a comment.

inline Mesh parse_mesh(std::istream& in) {
    std::string raw;
    std::size_t lineno = 0;
    auto next_tokens = [&](std::vector<std::string>& toks) -> bool {
        while (std::getline(in, raw)) {
            ++lineno;
            if (auto p = raw.find('#'); p != std::string::npos) raw.erase(p);
            std::istringstream ss(raw);
            toks.clear();
            for (std::string t; ss >> t;) toks.push_back(t);
            if (!toks.empty()) return true;
        }
        return false;
    };

    std::vector<std::string> t;
    if (!next_tokens(t) || t.size() != 2 || t[0] != "SWMESH" || t[1] != "1")
        throw FormatError("expected header 'SWMESH 1'", lineno);
    std::size_t nv = 0, nc = 0;
    if (!next_tokens(t) || t.size() != 2 || !detail::parse_int(t[0], nv) || !detail::parse_int(t[1], nc))
        throw FormatError("expected '<n_vertices> <n_cells>'", lineno);

    std::vector<Vec2> verts(nv);
    for (std::size_t i = 0; i < nv; ++i) {
        if (!next_tokens(t)) throw FormatError("unexpected end of file in vertex list", lineno);
        if (t.size() != 2 || !detail::parse_double(t[0], verts[i].x) || !detail::parse_double(t[1], verts[i].y))
            throw FormatError("expected 'x y'", lineno);
    }
    std::vector<std::vector<std::size_t>> polys(nc);
    for (std::size_t j = 0; j < nc; ++j) {
        if (!next_tokens(t)) throw FormatError("unexpected end of file in cell list", lineno);
        std::size_t k = 0;
        if (!detail::parse_int(t[0], k) || t.size() != k + 1) throw FormatError("malformed cell record", lineno);
        polys[j].resize(k);
        for (std::size_t i = 0; i < k; ++i) {
            if (!detail::parse_int(t[i + 1], polys[j][i])) throw FormatError("bad vertex index", lineno);
            if (polys[j][i] >= nv) throw FormatError("vertex index out of range", lineno);
        }
    }
    if (next_tokens(t)) throw FormatError("trailing data after cell list", lineno);
    return Mesh::from_polygons(std::move(verts), polys);
}

inline Mesh read_mesh(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw FormatError("cannot open mesh file '" + path + "'");
    return parse_mesh(in);
}

inline void write_mesh(const Mesh& mesh, std::ostream& out) {
    out << "SWMESH 1\n" << mesh.vertices().size() << ' ' << mesh.n_cells() << '\n';
    for (const auto& v : mesh.vertices()) out << detail::fmt17(v.x) << ' ' << detail::fmt17(v.y) << '\n';
    for (const auto& c : mesh.cells()) {
        out << c.vertex_ids.size();
        for (std::size_t v : c.vertex_ids) out << ' ' << v;
        out << '\n';
    }
}

inline void write_mesh(const Mesh& mesh, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw Error("cannot write mesh file '" + path + "'");
    write_mesh(mesh, out);
}

} // namespace lpswe
