#include <array>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <regex>
#include <sstream>
#include <string>

#include <gtest/gtest.h>
#include <json.hpp>

namespace fs = std::filesystem;

namespace {

struct Outcome {
    int status;
    std::string out;
};

Outcome run(const std::string& args)
{
    const std::string cmd = std::string(QMIRROR_CLI) + " " + args + " 2>&1";
    FILE* p = popen(cmd.c_str(), "r");
    std::string out;
    std::array<char, 4096> buf;
    std::size_t n;
    while ((n = fread(buf.data(), 1, buf.size(), p)) > 0) out.append(buf.data(), n);
    const int rc = pclose(p);
    return {WEXITSTATUS(rc), out};
}

fs::path write_config(const std::string& name, const std::string& body)
{
    const fs::path dir = fs::temp_directory_path() / "qmirror_cli_test";
    fs::create_directories(dir);
    const fs::path p = dir / name;
    std::ofstream(p) << body;
    return p;
}

const std::string kHeadline = R"({"version": 1, "m": [[1, 0], [0, 1]], "theta": [[1, 0], [0, 1]], "N": 1, "K": 4, "seed": 1})";

std::size_t count(const std::string& s, const std::string& needle)
{
    std::size_t c = 0;
    for (auto pos = s.find(needle); pos != std::string::npos; pos = s.find(needle, pos + 1)) ++c;
    return c;
}

} // namespace

TEST(Cli, VerifyHeadlinePasses)
{
    const auto cfg = write_config("headline.json", kHeadline);
    const Outcome r = run("verify --config " + cfg.string());
    ASSERT_EQ(r.status, 0) << r.out;
    const auto j = nlohmann::json::parse(r.out);
    EXPECT_TRUE(j["pass"].get<bool>());
    EXPECT_EQ(j["checks"].size(), 4u);
}

TEST(Cli, VerifyIsDeterministic)
{
    const auto cfg = write_config("headline.json", kHeadline);
    const Outcome a = run("verify --config " + cfg.string() + " --seed 17 --order-t 2");
    const Outcome b = run("verify --config " + cfg.string() + " --seed 17 --order-t 2");
    EXPECT_EQ(a.status, 0);
    EXPECT_EQ(a.out, b.out);
    const Outcome ta = run("verify --config " + cfg.string() + " --format table");
    const Outcome tb = run("verify --config " + cfg.string() + " --format table");
    EXPECT_EQ(ta.out, tb.out);
}

TEST(Cli, ScatterSingleLine)
{
    const auto cfg = write_config("single.json", R"({"version": 1, "m": [[1, 0]], "N": 3})");
    const Outcome r = run("scatter --config " + cfg.string());
    ASSERT_EQ(r.status, 0) << r.out;
    const auto j = nlohmann::json::parse(r.out);
    ASSERT_EQ(j["walls"].size(), 1u);
    EXPECT_EQ(j["walls"][0]["kind"], "line");
    EXPECT_EQ(j["walls"][0]["window"]["N"], 3);
}

TEST(Cli, PlotFirstOrderTopology)
{
    const auto cfg = write_config("headline.json", kHeadline);
    const fs::path out = fs::temp_directory_path() / "qmirror_cli_test" / "plot";
    fs::remove_all(out);
    const Outcome r = run("plot --config " + cfg.string() + " --out " + out.string());
    ASSERT_EQ(r.status, 0) << r.out;
    std::ifstream in(out / "diagram.svg");
    ASSERT_TRUE(in);
    std::stringstream ss;
    ss << in.rdbuf();
    const std::string svg = ss.str();
    const auto walls = svg.substr(svg.find("<g id=\"walls\">"), svg.find("</g>") - svg.find("<g id=\"walls\">"));
    const auto rays = svg.substr(svg.find("<g id=\"rays\">"));
    EXPECT_EQ(count(walls, "<polyline"), 2u);
    EXPECT_EQ(count(rays, "<polyline"), 1u);
    EXPECT_TRUE(fs::exists(out / "broken_lines.svg"));
}

TEST(Cli, ExitCodes)
{
    const auto missing = write_config("missing.json", R"({"version": 1, "N": 2})");
    Outcome r = run("scatter --config " + missing.string());
    EXPECT_EQ(r.status, 2);
    EXPECT_NE(r.out.find("'m'"), std::string::npos);

    const auto zero = write_config("zero.json", R"({"version": 1, "m": [[1, 0], [0, 0]]})");
    r = run("scatter --config " + zero.string());
    EXPECT_EQ(r.status, 2);
    EXPECT_NE(r.out.find("m[1]"), std::string::npos);

    const auto broken = write_config("broken.json", "{\"version\": 1,\n \"m\": [[1, 0]");
    r = run("scatter --config " + broken.string());
    EXPECT_EQ(r.status, 2);
    EXPECT_NE(r.out.find("line"), std::string::npos);

    const auto big = write_config("big.json", R"({"version": 1, "m": [[1, 0], [0, 1], [1, 1]], "N": 3, "factored": true})");
    r = run("scatter --config " + big.string());
    EXPECT_EQ(r.status, 2);
    EXPECT_NE(r.out.find("--override-guardrail"), std::string::npos);

    const auto degenerate = write_config("degenerate.json",
        R"({"version": 1, "m": [[1, 0]], "tropical": {"ends": [{"dir": [-1, 0]}, {"dir": [0, -1]}, {"dir": [1, 1]}], "points": [{"pos": [0, 0]}, {"pos": [1, 1]}]}})");
    r = run("tropical --config " + degenerate.string());
    EXPECT_EQ(r.status, 3);
    EXPECT_NE(r.out.find("--seed"), std::string::npos);
}

TEST(Cli, TropicalConics)
{
    const auto cfg = write_config("conics.json", R"({"version": 1, "m": [[1, 0]], "seed": 2, "tropical": {"ends": [
        {"dir": [-1, 0], "cls": 0}, {"dir": [-1, 0], "cls": 0}, {"dir": [0, -1], "cls": 1}, {"dir": [0, -1], "cls": 1},
        {"dir": [1, 1], "cls": 2}, {"dir": [1, 1], "cls": 2}], "random_points": 5}})");
    const Outcome r = run("tropical --config " + cfg.string());
    ASSERT_EQ(r.status, 0) << r.out;
    const auto j = nlohmann::json::parse(r.out);
    EXPECT_EQ(j["refined"], "1");
    EXPECT_EQ(j["classical"], "1");
}

TEST(Cli, PredictCarriesWindows)
{
    const auto cfg = write_config("predict.json", R"({"version": 1, "m": [[1, 0], [1, 2]], "theta": [[1, 2], [2, 0]], "N": 2, "K": 4, "seed": 3})");
    const Outcome r = run("predict --config " + cfg.string() + " --format table");
    ASSERT_EQ(r.status, 0) << r.out;
    EXPECT_NE(r.out.find("(N=2,K=4)"), std::string::npos);
    EXPECT_NE(r.out.find("-5/2"), std::string::npos);
}
