#include <sys/wait.h>

#include <array>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>

#include <gtest/gtest.h>

namespace fs = std::filesystem;

namespace {

struct Output {
    int code = -1;
    std::string text;
};

Output run(const std::string& args) {
    const std::string cmd = std::string(LPSWE_CLI) + " " + args + " 2>&1";
    Output o;
    FILE* pipe = popen(cmd.c_str(), "r");
    if (!pipe) return o;
    std::array<char, 4096> buf{};
    while (fgets(buf.data(), buf.size(), pipe)) o.text += buf.data();
    const int status = pclose(pipe);
    o.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    return o;
}

fs::path scratch(const std::string& name) {
    const fs::path d = fs::temp_directory_path() / ("lpswe_cli_" + name);
    fs::remove_all(d);
    fs::create_directories(d);
    return d;
}

} // namespace

TEST(Cli, BadConfigExitsWith2) {
    const fs::path d = scratch("bad");
    std::ofstream(d / "bad.cfg") << "scenario = dam_break\nmesh = tri 4x4\nkappa = 0.5\nT_f = 0.1\n";
    const auto o = run("run " + (d / "bad.cfg").string() + " --out " + (d / "out").string());
    EXPECT_EQ(o.code, 2) << o.text;
    EXPECT_NE(o.text.find("line 3"), std::string::npos) << o.text;
}

TEST(Cli, MissingConfigExitsWith2) {
    const auto o = run("run /nonexistent/x.cfg");
    EXPECT_EQ(o.code, 2) << o.text;
}

TEST(Cli, RunWritesOutputs) {
    const fs::path d = scratch("run");
    std::ofstream(d / "lake.cfg") << "scenario = lake_at_rest\nmesh = tri 8x8\nT_f = 0.02\n";
    const auto o = run("run " + (d / "lake.cfg").string() + " --scheme IMEX --out " + (d / "out").string() +
                       " --set output_every=1");
    ASSERT_EQ(o.code, 0) << o.text;
    EXPECT_TRUE(fs::exists(d / "out" / "final.vtk"));
    EXPECT_TRUE(fs::exists(d / "out" / "cut.csv"));
    EXPECT_TRUE(fs::exists(d / "out" / "step_000001.vtk"));
    std::ifstream rep(d / "out" / "report.txt");
    const std::string text((std::istreambuf_iterator<char>(rep)), std::istreambuf_iterator<char>());
    EXPECT_NE(text.find("scheme = IMEX"), std::string::npos) << text;
    EXPECT_NE(text.find("well_balanced = yes"), std::string::npos) << text;
}

TEST(Cli, UnknownOverrideExitsWith2) {
    const fs::path d = scratch("override");
    std::ofstream(d / "lake.cfg") << "scenario = lake_at_rest\nmesh = tri 4x4\nT_f = 0.01\n";
    const auto o = run("run " + (d / "lake.cfg").string() + " --set warp=9 --out " + (d / "out").string());
    EXPECT_EQ(o.code, 2) << o.text;
}

TEST(Cli, VerifySingleCriterion) {
    const auto o = run("verify --only rotation");
    EXPECT_EQ(o.code, 0) << o.text;
    EXPECT_NE(o.text.find("PASS rotation"), std::string::npos) << o.text;
    EXPECT_EQ(run("verify --only nonsense").code, 2);
}
