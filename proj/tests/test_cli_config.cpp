#include "zigzag/commands.hpp"

#include <gtest/gtest.h>

#include <cstdio>
#include <filesystem>
#include <sys/wait.h>

using namespace zz;

namespace {

int run(const std::string& args)
{
    std::string cmd = std::string(ZIGZAG_BIN) + " " + args + " > /dev/null 2>&1";
    int st = std::system(cmd.c_str());
    return WIFEXITED(st) ? WEXITSTATUS(st) : -1;
}

std::string temp_path(const std::string& name)
{
    return (std::filesystem::temp_directory_path() / ("zigzag_test_" + name)).string();
}

RunConfig quick_algebra(std::vector<std::string> suites)
{
    auto c = default_config("verify-algebra");
    c.suites = std::move(suites);
    c.shapes = "n<=1,k<=2";
    return c;
}

} // namespace

TEST(Config, PrintParseRoundTrip)
{
    for (auto& name : command_names()) {
        auto c = default_config(name);
        EXPECT_EQ(parse_config(print_config(c)), c) << name;
        EXPECT_EQ(print_config(parse_config(print_config(c))), print_config(c)) << name;
    }
}

TEST(Config, ShippedFilesMatchDefaults)
{
    for (auto& name : command_names())
        EXPECT_EQ(load_config(std::string(CONFIG_DIR) + "/" + name + ".json"), default_config(name)) << name;
}

TEST(Config, DigestIgnoresOutputOnly)
{
    auto a = default_config("transport"), b = a;
    EXPECT_EQ(inputs_digest(a), inputs_digest(b));
    b.output = "elsewhere.json";
    EXPECT_EQ(inputs_digest(a), inputs_digest(b));
    b.seed = a.seed + 1;
    EXPECT_NE(inputs_digest(a), inputs_digest(b));
}

TEST(Config, RejectsMalformedInput)
{
    EXPECT_THROW(parse_config("{"), std::invalid_argument);
    auto j = to_json(default_config("transport"));
    j["colour"] = "blue";
    EXPECT_THROW(parse_config(j.dump()), std::invalid_argument);
    EXPECT_THROW(load_config("/nonexistent/zigzag.json"), std::invalid_argument);
}

TEST(Config, ValidateCatchesInconsistentFields)
{
    auto c = default_config("transport");
    c.point = {0.1, 0.2};
    EXPECT_THROW(c.validate(), std::invalid_argument);

    c = default_config("holonomy2");
    c.B = make_form(2, 2, {{{1}, {"1", "0", "0", "1"}}});
    EXPECT_THROW(c.validate(), std::invalid_argument);

    c = default_config("verify-algebra");
    c.suites = {"zigzag", "nonsense"};
    EXPECT_THROW(c.validate(), std::invalid_argument);

    c = default_config("verify-algebra");
    c.debug_flip_sign = "nonsense";
    EXPECT_THROW(c.validate(), std::invalid_argument);

    c = default_config("verify-chainmap");
    c.quadrature.h = 0.5;
    EXPECT_THROW(c.validate(), std::invalid_argument);
}

TEST(VerifyAlgebra, SelectedSuitesPass)
{
    auto out = run_command(quick_algebra({"zigzag", "collapse", "interval"}));
    EXPECT_EQ(out.exit_code, 0) << out.summary;
    EXPECT_TRUE(out.report["pass"].get<bool>());
    auto c = quick_algebra({"zigzag"});
    EXPECT_EQ(out.report["enumerated_shapes"].get<long>(), ShapeSpec::parse(c.shapes).count(2));
    EXPECT_EQ(out.report["identities"][0]["cases"].get<long>(), ShapeSpec::parse(c.shapes).count(2));
}

TEST(VerifyAlgebra, FlippedSignFails)
{
    auto c = quick_algebra({"zigzag"});
    c.debug_flip_sign = "b";
    auto out = run_command(c);
    EXPECT_EQ(out.exit_code, 1);
    EXPECT_FALSE(out.report["pass"].get<bool>());
}

TEST(VerifyChainmap, ZeroChainHasZeroResidual)
{
    auto c = default_config("verify-chainmap");
    c.geometry.resize(1);
    c.chains = {{"zero", FormChain{}}};
    auto out = run_command(c);
    EXPECT_EQ(out.report["residual"].get<double>(), 0.0);
    EXPECT_EQ(out.exit_code, 0);
}

TEST(VerifyChainmap, OneFamilyConverges)
{
    auto c = default_config("verify-chainmap");
    c.geometry.resize(1);
    c.chains.resize(2);
    auto out = run_command(c);
    EXPECT_EQ(out.exit_code, 0) << out.summary;
    EXPECT_GT(out.report["residual_half_points"].get<double>(), out.report["residual"].get<double>());
}

TEST(Transport, ZeroConnectionGivesIdentity)
{
    auto c = default_config("transport");
    c.A = PolyMatrixForm(2, 2);
    auto out = run_command(c);
    EXPECT_EQ(out.exit_code, 0);
    EXPECT_EQ(out.report["residual"].get<double>(), 0.0);
    EXPECT_EQ(out.report["value"]["series"], matrix_json(Mat::Identity(2, 2)));
}

TEST(Transport, NilpotentIsExact)
{
    auto c = default_config("transport");
    c.A = bundled::nilpotent_connection();
    c.geometry = {bundled::nilpotent_path()};
    c.quadrature.trunc = 3;
    auto out = run_command(c);
    EXPECT_EQ(out.exit_code, 0);
    EXPECT_LE(out.report["residual"].get<double>(), 1e-12);
}

TEST(Holonomy2, BundledDefaultPasses)
{
    auto out = run_command(default_config("holonomy2"));
    EXPECT_EQ(out.exit_code, 0) << out.summary;
    EXPECT_LE(out.report["residual"].get<double>(), 1e-6);
}

TEST(Holonomy2, SquareNeedsSquareMode)
{
    auto c = default_config("holonomy2");
    c.geometry = {bundled::square()};
    EXPECT_THROW(run_command(c), std::invalid_argument);
    c.square_mode = true;
    auto out = run_command(c);
    EXPECT_EQ(out.exit_code, 0) << out.summary;
    EXPECT_GT(out.report["uncorrected_residual"].get<double>(), 1e-6);
}

TEST(Binary, ExitCodes)
{
    EXPECT_EQ(run("transport"), 0);
    EXPECT_EQ(run("transport --tol 1e-30"), 1);
    EXPECT_EQ(run("verify-algebra --shapes 'n<=1,k<=2' --debug-flip-sign b"), 1);
    EXPECT_EQ(run("no-such-command"), 2);
    EXPECT_EQ(run("transport --config /nonexistent.json"), 2);
    EXPECT_EQ(run("holonomy2 --config " + std::string(CONFIG_DIR) + "/transport.json"), 2);
    EXPECT_EQ(run("print-config holonomy2"), 0);
}

TEST(Binary, WritesReport)
{
    auto path = temp_path("report.json");
    std::filesystem::remove(path);
    ASSERT_EQ(run("transport --trunc 14 --report " + path), 0);
    std::ifstream in(path);
    auto j = nlohmann::json::parse(in);
    EXPECT_EQ(j["operation"], "transport");
    EXPECT_EQ(j["settings"]["quadrature"]["truncation"], 14);
    EXPECT_TRUE(j["pass"].get<bool>());
    std::filesystem::remove(path);
}

TEST(Binary, ConfigFileDrivesRun)
{
    auto path = temp_path("holonomy2.json");
    auto c = default_config("holonomy2");
    c.geometry = {bundled::square()};
    std::ofstream(path) << print_config(c);
    EXPECT_EQ(run("holonomy2 --config " + path), 2);
    EXPECT_EQ(run("holonomy2 --square-mode --config " + path), 0);
    std::filesystem::remove(path);
}
