#pragma once

#include <algorithm>
#include <cctype>
#include <cstddef>
#include <fstream>
#include <functional>
#include <map>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "lpswe/boundary.hpp"
#include "lpswe/detail/numfmt.hpp"
#include "lpswe/error.hpp"
#include "lpswe/fields.hpp"
#include "lpswe/mesh.hpp"
#include "lpswe/scenarios.hpp"

namespace lpswe {

// -- run configuration --------------------------------------------------------

struct MeshSpec {
    enum class Kind { cartesian, triangulated, file } kind = Kind::triangulated;
    std::size_t nx = 0, ny = 0;
    std::string path;
    std::optional<Rect> domain; ///< scenario default when empty
};

struct RunConfig {
    std::string scenario;
    double H = 0.5; ///< lake_at_rest surface level
    MeshSpec mesh;
    Params params;
    double t_final = 0.0;
    double solver_tol = 1e-10;
    int max_iter = 500;
    double dt_max = 0.0;
    std::optional<BcKind> bc_x, bc_y; ///< scenario default when empty
    std::string output_dir = "out";
    std::size_t output_every = 0; ///< VTK cadence in steps; 0 writes the final state only
    int threads = 0;
};

namespace detail {

inline std::string trim(std::string s) {
    auto ws = [](unsigned char c) { return std::isspace(c); };
    s.erase(s.begin(), std::find_if_not(s.begin(), s.end(), ws));
    s.erase(std::find_if_not(s.rbegin(), s.rend(), ws).base(), s.end());
    return s;
}

inline double to_double(const std::string& key, const std::string& v) {
    double d = 0.0;
    if (!parse_double(v, d)) throw ConfigError("key '" + key + "': expected a number, got '" + v + "'");
    return d;
}

template <class Int>
Int to_int(const std::string& key, const std::string& v) {
    Int i{};
    if (!parse_int(v, i)) throw ConfigError("key '" + key + "': expected an integer, got '" + v + "'");
    return i;
}

inline BcKind to_bc(const std::string& key, const std::string& v) {
    if (v == "neumann") return BcKind::neumann;
    if (v == "periodic") return BcKind::periodic;
    if (v == "absorbing") return BcKind::absorbing;
    throw ConfigError("key '" + key + "': expected neumann|periodic|absorbing, got '" + v + "'");
}

/// "tri 100x100", "cartesian 80x80" or "file path.swmesh".
inline MeshSpec to_mesh(const std::string& key, const std::string& v, MeshSpec m) {
    std::istringstream ss(v);
    std::string kind, arg;
    ss >> kind;
    std::getline(ss, arg);
    arg = trim(arg);
    if (kind == "file") {
        if (arg.empty()) throw ConfigError("key '" + key + "': file mesh needs a path");
        m.kind = MeshSpec::Kind::file;
        m.path = arg;
        return m;
    }
    if (kind == "tri" || kind == "triangulated")
        m.kind = MeshSpec::Kind::triangulated;
    else if (kind == "cartesian" || kind == "cart")
        m.kind = MeshSpec::Kind::cartesian;
    else
        throw ConfigError("key '" + key + "': mesh kind must be tri|cartesian|file, got '" + kind + "'");
    const auto x = arg.find('x');
    if (x == std::string::npos || !parse_int(std::string_view(arg).substr(0, x), m.nx) ||
        !parse_int(std::string_view(arg).substr(x + 1), m.ny) || m.nx == 0 || m.ny == 0)
        throw ConfigError("key '" + key + "': expected '<nx>x<ny>' with positive sizes, got '" + arg + "'");
    return m;
}

using Setter = std::function<void(RunConfig&, const std::string& key, const std::string& value)>;

inline const std::map<std::string, Setter>& config_keys() {
    static const std::map<std::string, Setter> table = [] {
        std::map<std::string, Setter> t;
        auto alias = [&t](std::initializer_list<const char*> names, Setter s) {
            for (const char* n : names) t.emplace(n, s);
        };
        alias({"scenario", "scenario.name"}, [](RunConfig& c, const std::string& k, const std::string& v) {
            const auto& names = scenario_names();
            if (std::find(names.begin(), names.end(), v) == names.end())
                throw ConfigError("key '" + k + "': unknown scenario '" + v + "'");
            c.scenario = v;
        });
        alias({"H", "scenario.H"}, [](RunConfig& c, const std::string& k, const std::string& v) { c.H = to_double(k, v); });
        alias({"mesh", "mesh.spec"}, [](RunConfig& c, const std::string& k, const std::string& v) {
            c.mesh = to_mesh(k, v, c.mesh);
        });
        alias({"mesh.domain"}, [](RunConfig& c, const std::string& k, const std::string& v) {
            std::istringstream ss(v);
            std::string a[4], extra;
            Rect r;
            if (!(ss >> a[0] >> a[1] >> a[2] >> a[3]) || (ss >> extra))
                throw ConfigError("key '" + k + "': expected 'x0 x1 y0 y1'");
            r.x0 = to_double(k, a[0]);
            r.x1 = to_double(k, a[1]);
            r.y0 = to_double(k, a[2]);
            r.y1 = to_double(k, a[3]);
            if (!(r.x1 > r.x0) || !(r.y1 > r.y0)) throw ConfigError("key '" + k + "': degenerate domain");
            c.mesh.domain = r;
        });
        alias({"scheme", "run.scheme"}, [](RunConfig& c, const std::string& k, const std::string& v) {
            if (v == "EXEX" || v == "exex")
                c.params.scheme = Scheme::EXEX;
            else if (v == "IMEX" || v == "imex")
                c.params.scheme = Scheme::IMEX;
            else
                throw ConfigError("key '" + k + "': expected EXEX|IMEX, got '" + v + "'");
        });
        alias({"theta_policy", "theta", "run.theta_policy"}, [](RunConfig& c, const std::string& k, const std::string& v) {
            if (v == "corrected")
                c.params.theta_policy = ThetaPolicy::corrected;
            else if (v == "unity")
                c.params.theta_policy = ThetaPolicy::unity;
            else
                throw ConfigError("key '" + k + "': expected corrected|unity, got '" + v + "'");
        });
        alias({"g", "run.g"}, [](RunConfig& c, const std::string& k, const std::string& v) {
            c.params.g = to_double(k, v);
            if (!(c.params.g > 0.0)) throw ConfigError("key '" + k + "': g must be > 0");
        });
        alias({"kappa", "run.kappa"}, [](RunConfig& c, const std::string& k, const std::string& v) {
            c.params.kappa = to_double(k, v);
            if (!(c.params.kappa > 1.0)) throw ConfigError("key '" + k + "': kappa must be > 1");
        });
        alias({"k_cfl", "run.k_cfl"}, [](RunConfig& c, const std::string& k, const std::string& v) {
            c.params.k_cfl = to_double(k, v);
            if (!(c.params.k_cfl > 0.0 && c.params.k_cfl <= 1.0)) throw ConfigError("key '" + k + "': k_cfl must be in (0, 1]");
        });
        alias({"T_f", "tf", "run.T_f"}, [](RunConfig& c, const std::string& k, const std::string& v) {
            c.t_final = to_double(k, v);
            if (!(c.t_final >= 0.0)) throw ConfigError("key '" + k + "': T_f must be >= 0");
        });
        alias({"solver_tol", "run.solver_tol"}, [](RunConfig& c, const std::string& k, const std::string& v) {
            c.solver_tol = to_double(k, v);
            if (!(c.solver_tol > 0.0)) throw ConfigError("key '" + k + "': solver_tol must be > 0");
        });
        alias({"max_iter", "run.max_iter"}, [](RunConfig& c, const std::string& k, const std::string& v) {
            c.max_iter = to_int<int>(k, v);
            if (c.max_iter <= 0) throw ConfigError("key '" + k + "': max_iter must be > 0");
        });
        alias({"dt_max", "run.dt_max"}, [](RunConfig& c, const std::string& k, const std::string& v) { c.dt_max = to_double(k, v); });
        alias({"threads", "run.threads"}, [](RunConfig& c, const std::string& k, const std::string& v) { c.threads = to_int<int>(k, v); });
        alias({"bc_x", "boundary.x"}, [](RunConfig& c, const std::string& k, const std::string& v) { c.bc_x = to_bc(k, v); });
        alias({"bc_y", "boundary.y"}, [](RunConfig& c, const std::string& k, const std::string& v) { c.bc_y = to_bc(k, v); });
        alias({"output_dir", "output.dir", "out"}, [](RunConfig& c, const std::string&, const std::string& v) { c.output_dir = v; });
        alias({"output_every", "output.every"}, [](RunConfig& c, const std::string& k, const std::string& v) {
            c.output_every = to_int<std::size_t>(k, v);
        });
        return t;
    }();
    return table;
}

} // namespace detail

/// Applies one `key = value` setting (config file key or command-line override).
inline void apply_setting(RunConfig& cfg, const std::string& key, const std::string& value) {
    const auto& keys = detail::config_keys();
    auto it = keys.find(key);
    if (it == keys.end()) throw ConfigError("unknown key '" + key + "'");
    it->second(cfg, key, value);
}

inline void validate(const RunConfig& cfg) {
    if (cfg.scenario.empty()) throw ConfigError("missing required key 'scenario'");
    if (cfg.mesh.kind != MeshSpec::Kind::file && (cfg.mesh.nx == 0 || cfg.mesh.ny == 0))
        throw ConfigError("missing required key 'mesh'");
    if (!(cfg.t_final > 0.0) && cfg.t_final != 0.0) throw ConfigError("key 'T_f' must be >= 0");
}

/// Flat `key = value` grammar with optional `[section]` headers; '#' comments.
/// Keys inside a section are looked up as `section.key`. Unknown keys are errors.
inline RunConfig parse_config(std::istream& in) {
    RunConfig cfg;
    std::string line, section;
    std::size_t lineno = 0;
    bool have_tf = false, have_mesh = false;
    while (std::getline(in, line)) {
        ++lineno;
        if (auto p = line.find('#'); p != std::string::npos) line.erase(p);
        line = detail::trim(line);
        if (line.empty()) continue;
        if (line.front() == '[') {
            if (line.back() != ']') throw ConfigError("line " + std::to_string(lineno) + ": malformed section header");
            section = detail::trim(line.substr(1, line.size() - 2));
            static const char* known[] = {"scenario", "mesh", "run", "boundary", "output"};
            if (std::find(std::begin(known), std::end(known), section) == std::end(known))
                throw ConfigError("line " + std::to_string(lineno) + ": unknown section '" + section + "'");
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos) throw ConfigError("line " + std::to_string(lineno) + ": expected 'key = value'");
        const std::string key = detail::trim(line.substr(0, eq));
        const std::string value = detail::trim(line.substr(eq + 1));
        if (key.empty() || value.empty())
            throw ConfigError("line " + std::to_string(lineno) + ": empty key or value");
        const std::string full = section.empty() ? key : section + "." + key;
        try {
            apply_setting(cfg, full, value);
        } catch (const ConfigError& e) {
            throw ConfigError("line " + std::to_string(lineno) + ": " + e.what());
        }
        if (full == "T_f" || full == "tf" || full == "run.T_f") have_tf = true;
        if (full == "mesh" || full == "mesh.spec") have_mesh = true;
    }
    if (cfg.scenario.empty()) throw ConfigError("missing required key 'scenario'");
    if (!have_mesh) throw ConfigError("missing required key 'mesh'");
    if (!have_tf) throw ConfigError("missing required key 'T_f'");
    return cfg;
}

inline RunConfig parse_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file '" + path + "'");
    return parse_config(in);
}

inline Mesh build_mesh(const MeshSpec& spec, const Rect& scenario_domain) {
    const Rect dom = spec.domain.value_or(scenario_domain);
    switch (spec.kind) {
    case MeshSpec::Kind::cartesian: return build_cartesian(spec.nx, spec.ny, dom);
    case MeshSpec::Kind::triangulated: return build_triangulated(spec.nx, spec.ny, dom);
    case MeshSpec::Kind::file: return read_mesh(spec.path);
    }
    throw ConfigError("bad mesh spec");
}

// -- field output -------------------------------------------------------------

/// Legacy ASCII VTK unstructured grid with cell data h, z, H, Froude, velocity.
inline void write_vtk(const ConservedField& c, const Topography& topo, const Mesh& mesh, double g, std::ostream& out) {
    using detail::fmt17;
    const std::size_t n = mesh.n_cells();
    out << "# vtk DataFile Version 3.0\nlpswe shallow water fields\nASCII\nDATASET UNSTRUCTURED_GRID\n";
    out << "POINTS " << mesh.vertices().size() << " double\n";
    for (const auto& v : mesh.vertices()) out << fmt17(v.x) << ' ' << fmt17(v.y) << " 0\n";
    std::size_t total = 0;
    for (const auto& cell : mesh.cells()) total += cell.vertex_ids.size() + 1;
    out << "CELLS " << n << ' ' << total << '\n';
    for (const auto& cell : mesh.cells()) {
        out << cell.vertex_ids.size();
        for (auto v : cell.vertex_ids) out << ' ' << v;
        out << '\n';
    }
    out << "CELL_TYPES " << n << '\n';
    for (const auto& cell : mesh.cells()) out << (cell.vertex_ids.size() == 3 ? 5 : cell.vertex_ids.size() == 4 ? 9 : 7) << '\n';
    out << "CELL_DATA " << n << '\n';
    auto scalars = [&](const char* name, auto&& value) {
        out << "SCALARS " << name << " double 1\nLOOKUP_TABLE default\n";
        for (std::size_t j = 0; j < n; ++j) out << fmt17(value(j)) << '\n';
    };
    scalars("h", [&](std::size_t j) { return c.h[j]; });
    scalars("z", [&](std::size_t j) { return topo.z[j]; });
    scalars("H", [&](std::size_t j) { return c.h[j] + topo.z[j]; });
    scalars("Froude", [&](std::size_t j) { return norm(c.hu[j] / c.h[j]) / std::sqrt(g * c.h[j]); });
    out << "VECTORS velocity double\n";
    for (std::size_t j = 0; j < n; ++j) {
        const Vec2 u = c.hu[j] / c.h[j];
        out << fmt17(u.x) << ' ' << fmt17(u.y) << " 0\n";
    }
}

inline void write_vtk(const ConservedField& c, const Topography& topo, const Mesh& mesh, double g,
                      const std::string& path) {
    std::ofstream out(path);
    if (!out) throw Error("cannot write '" + path + "'");
    write_vtk(c, topo, mesh, g, out);
}

inline void write_cut_csv(const std::vector<CutSample>& samples, std::ostream& out) {
    using detail::fmt17;
    out << "x,h,u,v,H,z\n";
    for (const auto& s : samples)
        out << fmt17(s.x) << ',' << fmt17(s.h) << ',' << fmt17(s.u.x) << ',' << fmt17(s.u.y) << ','
            << fmt17(s.surface()) << ',' << fmt17(s.z) << '\n';
}

inline void write_cut_csv(const std::vector<CutSample>& samples, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw Error("cannot write '" + path + "'");
    write_cut_csv(samples, out);
}

/// Ordered `key = value` report lines.
using ReportLines = std::vector<std::pair<std::string, std::string>>;

inline void write_report(const ReportLines& lines, std::ostream& out) {
    for (const auto& [k, v] : lines) out << k << " = " << v << '\n';
}

inline void write_report(const ReportLines& lines, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw Error("cannot write '" + path + "'");
    write_report(lines, out);
}

} // namespace lpswe
