#include <sstream>
#include <string>

#include <gtest/gtest.h>

#include "lpswe/io.hpp"

using namespace lpswe;

namespace {

RunConfig parse(const std::string& s) {
    std::istringstream in(s);
    return parse_config(in);
}

std::string config_error(const std::string& s) {
    try {
        parse(s);
    } catch (const ConfigError& e) {
        return e.what();
    }
    return "";
}

std::size_t count(const std::string& hay, const std::string& needle) {
    std::size_t n = 0;
    for (auto p = hay.find(needle); p != std::string::npos; p = hay.find(needle, p + 1)) ++n;
    return n;
}

} // namespace

TEST(Config, Minimal) {
    const auto c = parse("scenario = lake_at_rest\nmesh = tri 10x20\nT_f = 0.1\n");
    EXPECT_EQ(c.scenario, "lake_at_rest");
    EXPECT_EQ(c.mesh.kind, MeshSpec::Kind::triangulated);
    EXPECT_EQ(c.mesh.nx, 10u);
    EXPECT_EQ(c.mesh.ny, 20u);
    EXPECT_EQ(c.t_final, 0.1);
    EXPECT_EQ(c.params.scheme, Scheme::EXEX);
    EXPECT_EQ(c.params.kappa, 1.01);
}

TEST(Config, SectionsAndComments) {
    const auto c = parse("# run\n[scenario]\nname = vortex_flat\n[mesh]\nspec = cartesian 8x8  # small\n"
                         "[run]\nscheme = IMEX\ntheta_policy = unity\nT_f = 0.2\n[boundary]\nx = periodic\n"
                         "[output]\ndir = somewhere\nevery = 5\n");
    EXPECT_EQ(c.scenario, "vortex_flat");
    EXPECT_EQ(c.mesh.kind, MeshSpec::Kind::cartesian);
    EXPECT_EQ(c.params.scheme, Scheme::IMEX);
    EXPECT_EQ(c.params.theta_policy, ThetaPolicy::unity);
    EXPECT_EQ(c.bc_x, BcKind::periodic);
    EXPECT_FALSE(c.bc_y.has_value());
    EXPECT_EQ(c.output_dir, "somewhere");
    EXPECT_EQ(c.output_every, 5u);
}

TEST(Config, KappaMustExceedOne) {
    const auto msg = config_error("scenario = dam_break\nmesh = tri 4x4\nkappa = 0.5\nT_f = 1\n");
    EXPECT_NE(msg.find("line 3"), std::string::npos) << msg;
    EXPECT_NE(msg.find("kappa"), std::string::npos) << msg;
}

TEST(Config, ErrorsNameTheLine) {
    auto msg = config_error("scenario = dam_break\nmesh = tri 4x4\n\nfoo = 1\nT_f = 1\n");
    EXPECT_NE(msg.find("line 4"), std::string::npos) << msg;
    EXPECT_NE(msg.find("foo"), std::string::npos) << msg;
    msg = config_error("scenario = dam_break\n[physics]\ng = 1\n");
    EXPECT_NE(msg.find("line 2"), std::string::npos) << msg;
    msg = config_error("scenario = dam_break\nmesh = hex 4x4\nT_f = 1\n");
    EXPECT_NE(msg.find("line 2"), std::string::npos) << msg;
    msg = config_error("scenario = dam_break\nmesh = tri 4x4\nT_f = fast\n");
    EXPECT_NE(msg.find("line 3"), std::string::npos) << msg;
    msg = config_error("scenario = dam_break\nmesh tri 4x4\n");
    EXPECT_NE(msg.find("line 2"), std::string::npos) << msg;
}

TEST(Config, MissingKeys) {
    EXPECT_NE(config_error("mesh = tri 4x4\nT_f = 1\n").find("scenario"), std::string::npos);
    EXPECT_NE(config_error("scenario = dam_break\nT_f = 1\n").find("mesh"), std::string::npos);
    EXPECT_NE(config_error("scenario = dam_break\nmesh = tri 4x4\n").find("T_f"), std::string::npos);
}

TEST(Config, OverridesAndBuildMesh) {
    auto c = parse("scenario = vortex_topo\nmesh = tri 4x2\nT_f = 1\n");
    apply_setting(c, "scheme", "IMEX");
    apply_setting(c, "theta", "unity");
    EXPECT_EQ(c.params.scheme, Scheme::IMEX);
    EXPECT_EQ(c.params.theta_policy, ThetaPolicy::unity);
    EXPECT_THROW(apply_setting(c, "nope", "1"), ConfigError);
    const Mesh m = build_mesh(c.mesh, make_scenario(c.scenario).domain);
    EXPECT_EQ(m.n_cells(), 16u);
    EXPECT_DOUBLE_EQ(m.total_area(), 2.0);
}

TEST(Vtk, SingleCell) {
    const Mesh mesh = build_cartesian(1, 1);
    ConservedField c(1);
    c.h[0] = 2.0;
    c.hu[0] = {1.0, -0.5};
    std::ostringstream out;
    write_vtk(c, Topography{{0.25}}, mesh, 9.81, out);
    const std::string s = out.str();
    EXPECT_NE(s.find("POINTS 4 double"), std::string::npos);
    EXPECT_NE(s.find("CELLS 1 5"), std::string::npos);
    EXPECT_NE(s.find("CELL_TYPES 1\n9\n"), std::string::npos);
    EXPECT_EQ(count(s, "SCALARS "), 4u);
    EXPECT_EQ(count(s, "VECTORS "), 1u);
    EXPECT_NE(s.find("SCALARS H double 1\nLOOKUP_TABLE default\n2.25\n"), std::string::npos);
    EXPECT_NE(s.find("0.5 -0.25 0\n"), std::string::npos);
}

TEST(Vtk, LakeAtRestAndDeterminism) {
    const Mesh mesh = build_triangulated(10, 4);
    const Scenario sc = make_scenario("lake_at_rest");
    const auto topo = sample_topography(mesh, sc.topography);
    const auto c = sc.initial(mesh, topo, Params{});
    std::ostringstream a, b;
    write_vtk(c, topo, mesh, 9.81, a);
    write_vtk(c, topo, mesh, 9.81, b);
    EXPECT_EQ(a.str(), b.str());
    std::istringstream in(a.str());
    std::string line;
    while (std::getline(in, line) && line != "SCALARS H double 1") {}
    std::getline(in, line);
    for (std::size_t j = 0; j < mesh.n_cells(); ++j) {
        std::getline(in, line);
        EXPECT_DOUBLE_EQ(std::stod(line), 0.5);
    }
}

TEST(Vtk, FullPrecisionRoundTrip) {
    const Mesh mesh = build_cartesian(1, 1);
    ConservedField c(1);
    c.h[0] = 0.1 + 0.2;
    std::ostringstream out;
    write_vtk(c, Topography{{1.0 / 3.0}}, mesh, 9.81, out);
    std::istringstream in(out.str());
    std::string line;
    while (std::getline(in, line) && line != "SCALARS h double 1") {}
    std::getline(in, line);
    std::getline(in, line);
    EXPECT_EQ(std::stod(line), 0.1 + 0.2);
    while (std::getline(in, line) && line != "SCALARS z double 1") {}
    std::getline(in, line);
    std::getline(in, line);
    EXPECT_EQ(std::stod(line), 1.0 / 3.0);
}

TEST(CutCsv, Cases) {
    std::ostringstream empty;
    write_cut_csv({}, empty);
    EXPECT_EQ(empty.str(), "x,h,u,v,H,z\n");
    std::ostringstream two;
    write_cut_csv({{0.25, 1.0, {0.5, 0.0}, 0.5}, {0.75, 2.0, {0.0, -1.0}, 0.0}}, two);
    EXPECT_EQ(two.str(), "x,h,u,v,H,z\n0.25,1,0.5,0,1.5,0.5\n0.75,2,0,-1,2,0\n");
}

TEST(CutCsv, SortedFromLineCut) {
    const Mesh mesh = build_triangulated(7, 3);
    const Scenario sc = make_scenario("dam_break");
    const auto topo = sample_topography(mesh, sc.topography);
    const auto c = sc.initial(mesh, topo, Params{});
    std::ostringstream out;
    write_cut_csv(line_cut(c, topo, mesh, 0.5), out);
    std::istringstream in(out.str());
    std::string line;
    std::getline(in, line);
    double prev = -1.0;
    int rows = 0;
    while (std::getline(in, line)) {
        const double x = std::stod(line.substr(0, line.find(',')));
        EXPECT_GE(x, prev);
        prev = x;
        ++rows;
    }
    EXPECT_GT(rows, 0);
}
