#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "cli.hpp"

using namespace heatcalc;
namespace fs = std::filesystem;

namespace
{

struct Outcome
{
    int code;
    std::string out;
    std::string err;
};

Outcome run_cli(std::vector<std::string> args)
{
    args.insert(args.begin(), "heatcalc");
    std::vector<const char *> argv;
    for (const auto &a : args) {
        argv.push_back(a.c_str());
    }
    std::ostringstream out, err;
    const int code = cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
    return {code, out.str(), err.str()};
}

fs::path scratch(const std::string &name)
{
    const fs::path dir = fs::temp_directory_path() / "heatcalc_cli_test";
    fs::create_directories(dir);
    return dir / name;
}

fs::path write_text(const std::string &name, const std::string &text)
{
    const fs::path p = scratch(name);
    std::ofstream(p) << text;
    return p;
}

std::string message_of(const std::string &text)
{
    try {
        cli::parse_config(text, "cfg.json");
    } catch (const cli::InputError &e) {
        return e.what();
    }
    return "";
}

} // namespace

TEST(Cli, DeriveMatchesCanonicalForms)
{
    auto r = run_cli({"derive", "--order", "2"});
    EXPECT_EQ(r.code, 0);
    EXPECT_EQ(r.out, "-f2^2/f^1 + 1/3 f1^4/f^3\n");
    r = run_cli({"derive", "-n", "3", "--lines"});
    EXPECT_EQ(r.out, "1 f3^2/f^1\n1 f2^3/f^2\n-3 f1^2 f2^2/f^3\n6/5 f1^6/f^5\n");
    r = run_cli({"derive", "--order", "4"});
    EXPECT_EQ(r.out, "-f4^2/f^1 - 4 f2 f3^2/f^2 + 4 f1^2 f3^2/f^3 - 3 f2^4/f^3 + 24 f1^2 f2^3/f^4 - "
                     "36 f1^4 f2^2/f^5 + 90/7 f1^8/f^7\n");
}

TEST(Cli, UsageErrors)
{
    EXPECT_EQ(run_cli({}).code, 1);
    EXPECT_EQ(run_cli({"derive"}).code, 1);
    EXPECT_EQ(run_cli({"derive", "--order", "0"}).code, 1);
    EXPECT_EQ(run_cli({"frobnicate"}).code, 1);
    EXPECT_EQ(run_cli({"--help"}).code, 0);
    const auto r = run_cli({"scan", "--config", scratch("missing.json").string()});
    EXPECT_EQ(r.code, 1);
    EXPECT_NE(r.err.find("heatcalc:"), std::string::npos);
}

TEST(Cli, VerifyIdentities)
{
    const auto r = run_cli({"verify-identities"});
    EXPECT_EQ(r.code, 0);
    EXPECT_NE(r.out.find("13/13 identities verified"), std::string::npos);
    EXPECT_EQ(std::count(r.out.begin(), r.out.end(), '\n'), 14);
}

TEST(Cli, CertifyKnownOrders)
{
    for (const char *n : {"1", "2", "3", "4"}) {
        const auto r = run_cli({"certify", "--order", n});
        EXPECT_EQ(r.code, 0) << r.out << r.err;
        EXPECT_NE(r.out.find("VERIFIED (exact)"), std::string::npos);
    }
    const auto r3 = run_cli({"certify", "--order", "3"});
    EXPECT_NE(r3.out.find("remainder: 1/45 f1^6/f^5"), std::string::npos) << r3.out;
    EXPECT_EQ(run_cli({"certify", "--order", "5"}).code, 1);
}

TEST(Cli, CertificateJsonRoundTrip)
{
    const fs::path out = scratch("c4.json");
    ASSERT_EQ(run_cli({"certify", "--order", "4", "--out", out.string()}).code, 0);
    std::ifstream in(out);
    const std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    const Certificate back = cli::certificate_from_json(text);
    const Certificate known = *known_certificate(4);
    EXPECT_EQ(back.order, 4);
    EXPECT_EQ(back.sign, -1);
    EXPECT_EQ(back.remainder, known.remainder);
    EXPECT_EQ(back.squares.size(), known.squares.size());
    EXPECT_EQ(run_cli({"certify", "--cert", out.string()}).code, 0);
    EXPECT_EQ(cli::square_entry_str(DerivMonomial::from_orders({1, 3})), "f1 f3/f^2");
    EXPECT_EQ(cli::parse_square_entry("f1^2 f2/f^3"), DerivMonomial::from_orders({1, 1, 2}));
}

TEST(Cli, PerturbedCertificateFails)
{
    const fs::path p = write_text("bad3.json", R"({"order": 3, "sign": 1,
        "squares": [[["f3/f", 1], ["f1 f2/f^2", -1], ["f1^3/f^3", "1/3"]]],
        "remainder": [["f1^6/f^5", "1/44"]]})");
    const auto r = run_cli({"certify", "--cert", p.string()});
    EXPECT_EQ(r.code, 2);
    EXPECT_NE(r.out.find("NOT VERIFIED"), std::string::npos);
    EXPECT_NE(r.out.find("-1/1980 f1^6/f^5"), std::string::npos) << r.out;

    const fs::path good = write_text("good3.json", R"({"order": 3, "sign": 1,
        "squares": [[["f3/f", 1], ["f1 f2/f^2", -1], ["f1^3/f^3", "1/3"]]],
        "remainder": [["f1^6/f^5", "1/45"]]})");
    EXPECT_EQ(run_cli({"certify", "--cert", good.string()}).code, 0);
}

TEST(Cli, MalformedCertificateNamesField)
{
    const fs::path p = write_text("odd.json", R"({"order": 3, "sign": 1, "squares": [[["f2/f", 1]]], "remainder": []})");
    const auto r = run_cli({"certify", "--cert", p.string()});
    EXPECT_EQ(r.code, 1);
    EXPECT_NE(r.err.find("squares[0][0][0]"), std::string::npos) << r.err;
}

TEST(Cli, SearchIsReportOnly)
{
    const auto r = run_cli({"certify", "--order", "3", "--search", "--starts", "4", "--no-known-seed"});
    EXPECT_EQ(r.code, 0) << r.err;
    EXPECT_NE(r.out.find("starts run"), std::string::npos);
    EXPECT_NE(r.out.find("VERIFIED (exact)"), std::string::npos) << r.out;
}

TEST(Cli, ConfigDiagnostics)
{
    EXPECT_NE(message_of("{\n  \"mixture\": [\n    {\"w\": 1, \"mu\": 0,, \"var\": 1}\n  ]\n}").find("cfg.json:3:"),
              std::string::npos);
    EXPECT_NE(message_of(R"({"mixture": [{"w": 1, "mu": 0, "var": -1}]})").find("mixture[0].var"),
              std::string::npos);
    EXPECT_NE(message_of(R"({"mixture": [{"w": 1, "mu": 0, "var": 1}], "bogus": 1})").find("bogus"),
              std::string::npos);
    EXPECT_NE(message_of(R"({"mixture": [{"w": 1, "mu": 0, "var": 1}],
                             "t_grid": {"start": 1, "stop": 2, "points": 3, "spacing": "log"}, "max_order": 9})").find("max_order"),
              std::string::npos);
    EXPECT_NE(message_of(R"({"mixture": []})").find("mixture"), std::string::npos);
    EXPECT_NE(message_of(R"({"mixture": [{"w": 0.5, "mu": 0, "var": 1}]})").find("mixture"), std::string::npos);
    const cli::ExperimentConfig cfg = cli::parse_config(
        R"({"mixture": [{"w": 0.5, "mu": 0, "var": 0.1}, {"w": 0.5, "mu": 10, "var": 0.1}],
            "t_grid": {"start": 0.05, "stop": 100, "points": 400, "spacing": "log"},
            "max_order": 4, "tolerances": {"quad_tol": 1e-12}, "output": "bimodal"})");
    EXPECT_EQ(cfg.mixture.size(), 2u);
    EXPECT_EQ(cfg.t_grid.points, 400);
    EXPECT_EQ(cfg.t_grid.spacing, Spacing::log);
    EXPECT_EQ(cfg.output, "bimodal");
    EXPECT_DOUBLE_EQ(*cfg.tolerances.quad_tol, 1e-12);
    EXPECT_FALSE(cfg.tolerances.sign_factor.has_value());
}

TEST(Cli, MalformedConfigExitsOne)
{
    const fs::path p = write_text("broken.json", "{\n  \"mixture\": [\n");
    const auto r = run_cli({"scan", "--config", p.string()});
    EXPECT_EQ(r.code, 1);
    EXPECT_NE(r.err.find("broken.json:"), std::string::npos) << r.err;
}

TEST(Cli, GaussianScanWritesCsvAndSvg)
{
    const fs::path cfg = write_text("g.json", R"({"mixture": [{"w": 1, "mu": 0, "var": 1}],
        "t_grid": {"start": 0.5, "stop": 2, "points": 3, "spacing": "log"}, "max_order": 4})");
    const fs::path prefix = scratch("gauss");
    const auto r = run_cli({"scan", "--config", cfg.string(), "--out", prefix.string(), "--svg"});
    EXPECT_EQ(r.code, 0) << r.err;
    EXPECT_NE(r.out.find("sign of d4 h: 3 pass, 0 fail, 0 inconclusive"), std::string::npos) << r.out;
    EXPECT_NE(r.out.find("asserted checks: PASS"), std::string::npos);
    EXPECT_TRUE(fs::exists(prefix.string() + ".csv"));
    EXPECT_TRUE(fs::exists(prefix.string() + "_invJ.svg"));
    std::ifstream svg(prefix.string() + "_h.svg");
    std::string first;
    std::getline(svg, first);
    EXPECT_NE(first.find("<svg"), std::string::npos);

    const auto to_stdout = run_cli({"scan", "--config", cfg.string()});
    EXPECT_EQ(to_stdout.code, 0);
    EXPECT_EQ(to_stdout.out.rfind("t,h,J,", 0), 0u);
    EXPECT_NE(to_stdout.err.find("asserted checks: PASS"), std::string::npos);
}

TEST(Cli, WtScan)
{
    const fs::path cfg = write_text("w.json", R"({"mixture": [{"w": 1, "mu": 0, "var": 4}],
        "t_grid": {"start": 0.1, "stop": 0.9, "points": 9, "spacing": "linear"}})");
    const auto r = run_cli({"wt-scan", "--config", cfg.string()});
    EXPECT_EQ(r.code, 0) << r.err;
    EXPECT_NE(r.err.find("h(W_t) concave: holds"), std::string::npos) << r.err;
    EXPECT_NE(r.err.find("both signs: no"), std::string::npos);
}
