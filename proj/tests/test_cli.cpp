#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "cli.hpp"

namespace fs = std::filesystem;
using fockspec::cli::run;
using Json = nlohmann::ordered_json;

namespace {

struct Outcome {
    int code;
    std::string out;
    std::string err;
    Json json() const { return Json::parse(out); }
};

Outcome invoke(const std::vector<std::string>& args) {
    std::ostringstream out, err;
    const int code = run(args, out, err);
    return {code, out.str(), err.str()};
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

struct GoldenCase {
    std::string name;
    std::vector<std::string> args;
    int code;
};

const std::vector<GoldenCase> golden_cases{
    {"normal_order_a2b2.json", {"normal-order", "--expr", "a^2*b^2"}, 0},
    {"normal_order_commutator.txt", {"--format", "text", "normal-order", "--expr", "a*b-b*a"}, 0},
    {"classify_hermite.json", {"classify", "--op", "hermite", "--nmax", "4"}, 0},
    {"classify_lame.json", {"classify", "--op", "lame", "--bind", "m=2", "--bind", "d=1", "--bind", "n=3"}, 0},
    {"classify_b.json", {"classify", "--expr", "b", "--nmax", "3"}, 0},
    {"classify_constraint_mismatch.json", {"classify", "--expr", "b^4*a^2 + b^3*a - b^2 + b", "--nmax", "3"}, 0},
    {"spectrum_hermite.json", {"spectrum", "--op", "hermite", "--n", "5"}, 0},
    {"spectrum_sextic.json", {"spectrum", "--op", "sextic", "--bind", "alpha=1", "--bind", "beta=0", "--bind", "n=1"}, 0},
    {"spectrum_sextic.txt",
     {"--format", "text", "spectrum", "--op", "sextic", "--bind", "alpha=1", "--bind", "beta=0", "--bind", "n=1"},
     0},
    {"spectrum_lame_q.json",
     {"spectrum", "--op", "lame", "--bind", "m=2", "--bind", "d=1", "--bind", "n=1", "--realization", "q", "--param",
      "1/2"},
     0},
    {"spectrum_leakage.json", {"spectrum", "--expr", "b", "--n", "2"}, 3},
    {"isospectral_lame.json",
     {"--fibers", "0,1,2", "isospectral", "--op", "lame", "--bind", "m=2", "--bind", "d=1", "--bind", "n=3"},
     0},
    {"isospectral_sextic.json",
     {"isospectral", "--op", "sextic", "--bind", "alpha=1", "--bind", "beta=1", "--bind", "n=2"},
     0},
    {"catalog.json", {"catalog"}, 0},
    {"unbound.json", {"normal-order", "--expr", "m*a"}, 2},
    {"nonconvergence.json",
     {"--max-iter", "1", "spectrum", "--op", "sextic", "--bind", "alpha=1", "--bind", "beta=0", "--bind", "n=1"},
     4},
};

}  // namespace

// Set FOCKSPEC_UPDATE_GOLDEN=1 to rewrite the files after an intended output change.
TEST(CliGolden, OutputsMatchCheckedInFiles) {
    const fs::path dir = FOCKSPEC_GOLDEN_DIR;
    const bool update = std::getenv("FOCKSPEC_UPDATE_GOLDEN") != nullptr;
    for (const auto& c : golden_cases) {
        Outcome o = invoke(c.args);
        ASSERT_EQ(o.code, c.code) << c.name << "\n" << o.err;
        if (update) {
            std::ofstream(dir / c.name, std::ios::binary) << o.out;
            continue;
        }
        ASSERT_TRUE(fs::exists(dir / c.name)) << c.name;
        EXPECT_EQ(o.out, slurp(dir / c.name)) << c.name;
    }
}

TEST(CliGolden, ByteStableAcrossRuns) {
    for (const auto& c : golden_cases) {
        Outcome first = invoke(c.args), second = invoke(c.args);
        ASSERT_EQ(first.out, second.out) << c.name;
        ASSERT_EQ(first.err, second.err) << c.name;
        ASSERT_EQ(first.code, second.code) << c.name;
    }
}

TEST(Cli, NormalOrder) {
    Outcome o = invoke({"normal-order", "--expr", "a^2*b^2"});
    ASSERT_EQ(o.code, 0);
    Json j = o.json();
    EXPECT_EQ(j["command"], "normal-order");
    EXPECT_EQ(j["result"]["canonical"], "b^2*a^2 + 4*b*a + 2");
    EXPECT_EQ(j["result"]["terms"].size(), 3u);
    EXPECT_EQ(j["result"]["terms"][1]["coeff"], "4");
    EXPECT_TRUE(o.err.empty());

    Outcome t = invoke({"--format", "text", "normal-order", "--expr", "a*b-b*a"});
    EXPECT_EQ(t.out, "operator: 1\n  b^0 a^0  1\n");

    Outcome b = invoke({"normal-order", "--expr", "k*b", "--bind", "k=-3/6"});
    EXPECT_EQ(b.json()["result"]["canonical"], "-1/2*b");
    EXPECT_EQ(b.json()["operator"]["bindings"]["k"], "-1/2");
}

TEST(Cli, ClassifyExamples) {
    Json h = invoke({"classify", "--op", "hermite"}).json();
    EXPECT_EQ(h["result"]["exactly_solvable"], true);

    Json l = invoke({"classify", "--op", "lame", "--bind", "m=2", "--bind", "d=1", "--bind", "n=3"}).json();
    EXPECT_EQ(l["result"]["exactly_solvable"], false);
    EXPECT_EQ(l["result"]["invariant_degrees"], Json::array({3}));

    Json b = invoke({"classify", "--expr", "b"}).json();
    EXPECT_EQ(b["result"]["invariant_degrees"], Json::array());
    EXPECT_EQ(b["result"]["leakage_witness"]["column"], 0);
}

TEST(Cli, ClassifyFlagsConstraintMismatch) {
    // closed-form residuals vanish at n = 1, yet column 0 leaks
    Json j = invoke({"classify", "--expr", "b^4*a^2 + b^3*a - b^2 + b", "--nmax", "3"}).json();
    EXPECT_EQ(j["result"]["invariant_degrees"], Json::array());
    ASSERT_EQ(j["diagnostics"].size(), 1u);
    EXPECT_EQ(j["diagnostics"][0]["kind"], "constraint_mismatch");

    // invariant at n = 0 although r2 = 2
    Json z = invoke({"classify", "--expr", "b^4*a^2", "--nmax", "3"}).json();
    EXPECT_EQ(z["result"]["constraint_residuals"][0]["r2"], "2");
    EXPECT_EQ(z["result"]["constraint_residuals"][0]["derived"]["raise2_at_prev"], nullptr);
    ASSERT_EQ(z["diagnostics"].size(), 1u);
    EXPECT_EQ(z["diagnostics"][0]["kind"], "constraint_mismatch");

    Json l = invoke({"classify", "--op", "lame", "--bind", "m=2", "--bind", "d=1", "--bind", "n=3"}).json();
    EXPECT_TRUE(l["diagnostics"].empty());
}

TEST(Cli, SpectrumExamples) {
    Json h = invoke({"spectrum", "--op", "hermite", "--n", "5"}).json();
    ASSERT_EQ(h["result"]["eigenvalues"].size(), 6u);
    for (int k = 0; k <= 5; ++k) EXPECT_EQ(h["result"]["eigenvalues"][k]["exact"], std::to_string(k));

    Json s = invoke({"spectrum", "--op", "sextic", "--bind", "alpha=1", "--bind", "beta=0", "--bind", "n=1"}).json();
    EXPECT_EQ(s["result"]["char_poly"]["text"], "t^2 - 8");
    EXPECT_EQ(s["result"]["char_poly"]["coeffs"], Json::array({"-8", "0", "1"}));
    ASSERT_EQ(s["result"]["eigenvalues"].size(), 2u);
    EXPECT_NEAR(std::stod(s["result"]["eigenvalues"][1]["re"].get<std::string>()), 2 * std::sqrt(2.0), 1e-15);

    Outcome leak = invoke({"spectrum", "--expr", "b", "--n", "2"});
    EXPECT_EQ(leak.code, 3);
    Json lj = leak.json();
    EXPECT_TRUE(lj["result"].is_null());
    EXPECT_EQ(lj["diagnostics"][0]["witness"]["column"], 2);
    EXPECT_FALSE(leak.err.empty());
}

TEST(Cli, IsospectralExamples) {
    for (const auto& args : std::vector<std::vector<std::string>>{
             {"isospectral", "--op", "hermite", "--n", "5"},
             {"isospectral", "--op", "lame", "--bind", "m=2", "--bind", "d=1", "--bind", "n=3"},
             {"isospectral", "--op", "sextic", "--bind", "alpha=1", "--bind", "beta=1", "--bind", "n=2"}}) {
        Outcome o = invoke(args);
        ASSERT_EQ(o.code, 0) << o.err;
        Json j = o.json();
        EXPECT_EQ(j["result"]["all_equal"], true);
        EXPECT_EQ(j["result"]["entries"].size(), 6u);
    }
    Json j = invoke({"--deltas", "1/2", "--qs", "3", "--fibers", "0,4", "isospectral", "--op", "hermite", "--n", "2"})
                 .json();
    EXPECT_EQ(j["result"]["entries"].size(), 5u);
}

TEST(Cli, CatalogListing) {
    Json j = invoke({"catalog"}).json();
    std::vector<std::string> names;
    for (const auto& e : j["result"]["operators"]) names.push_back(e["name"]);
    for (const char* want : {"hermite", "laguerre", "heun", "lame", "sextic", "number", "jplus", "jzero", "jminus"})
        EXPECT_NE(std::find(names.begin(), names.end(), want), names.end()) << want;
    for (const auto& e : j["result"]["operators"])
        if (e["name"] == "lame") {
            std::vector<std::string> ps;
            for (const auto& p : e["params"]) ps.push_back(p["name"]);
            EXPECT_EQ(ps, (std::vector<std::string>{"m", "d", "n"}));
        }
}

TEST(Cli, ExitCodes) {
    EXPECT_EQ(invoke({"catalog"}).code, 0);
    EXPECT_EQ(invoke({"--help"}).code, 0);
    EXPECT_EQ(invoke({}).code, 1);
    EXPECT_EQ(invoke({"frobnicate"}).code, 1);
    EXPECT_EQ(invoke({"normal-order", "--expr", "a^-1"}).code, 1);
    EXPECT_EQ(invoke({"classify", "--op", "nope"}).code, 1);
    EXPECT_EQ(invoke({"classify", "--op", "hermite", "--expr", "a"}).code, 1);
    EXPECT_EQ(invoke({"--tol", "0", "catalog"}).code, 1);
    EXPECT_EQ(invoke({"--degree-cap", "4", "normal-order", "--expr", "a^5"}).code, 1);
    EXPECT_EQ(invoke({"spectrum", "--expr", "a*b"}).code, 1);  // no sector degree
    EXPECT_EQ(invoke({"normal-order", "--expr", "m*a"}).code, 2);
    EXPECT_EQ(invoke({"normal-order", "--expr", "a", "--bind", "m=x"}).code, 2);
    EXPECT_EQ(invoke({"normal-order", "--expr", "a", "--bind", "novalue"}).code, 1);
    EXPECT_EQ(invoke({"spectrum", "--op", "lame", "--bind", "m=2", "--bind", "d=1"}).code, 2);
    EXPECT_EQ(invoke({"classify", "--op", "heun", "--bind", "a3=4", "--bind", "a2=0", "--bind", "a1=0", "--bind",
                      "b2=6", "--bind", "b1=0", "--bind", "b0=0", "--bind", "d1=-21", "--bind", "n=2"})
                  .code,
              2);
    EXPECT_EQ(invoke({"spectrum", "--expr", "b", "--n", "1"}).code, 3);
    EXPECT_EQ(invoke({"spectrum", "--op", "lame", "--bind", "m=2", "--bind", "d=1", "--bind", "n=3", "--n", "2"}).code,
              3);
    EXPECT_EQ(invoke({"--max-iter", "1", "spectrum", "--op", "lame", "--bind", "m=1/3", "--bind", "d=1", "--bind",
                      "n=1"})
                  .code,
              4);
}

TEST(Cli, ConfigFile) {
    const fs::path dir = fs::temp_directory_path() / "fockspec_cli_test";
    fs::create_directories(dir);
    const fs::path good = dir / "good.ini", bad = dir / "bad.ini";
    std::ofstream(good) << "format = text\ndegree-cap = 8\nqs = 3\n";
    std::ofstream(bad) << "degree_cap = 8\n";

    Outcome o = invoke({"--config", good.string(), "normal-order", "--expr", "a*b"});
    ASSERT_EQ(o.code, 0) << o.err;
    EXPECT_EQ(o.out, "operator: b*a + 1\n  b^1 a^1  1\n  b^0 a^0  1\n");
    EXPECT_EQ(invoke({"--config", good.string(), "normal-order", "--expr", "a^9"}).code, 1);

    // flags override the file
    Outcome f = invoke({"--config", good.string(), "--format", "json", "normal-order", "--expr", "a*b"});
    ASSERT_EQ(f.code, 0);
    Json j = f.json();
    EXPECT_EQ(j["config"]["degree_cap"], 8);
    EXPECT_EQ(j["config"]["qs"], Json::array({"3"}));

    EXPECT_EQ(invoke({"--config", bad.string(), "catalog"}).code, 1);
    EXPECT_EQ(invoke({"--config", (dir / "missing.ini").string(), "catalog"}).code, 1);
    fs::remove_all(dir);
}

TEST(Cli, Diagnostics) {
    Outcome o = invoke({"normal-order", "--expr", "a", "--bind", "k=2"});
    ASSERT_EQ(o.code, 0);
    Json j = o.json();
    ASSERT_EQ(j["diagnostics"].size(), 1u);
    EXPECT_EQ(j["diagnostics"][0]["severity"], "warning");
    EXPECT_EQ(j["diagnostics"][0]["kind"], "unused_binding");

    Outcome p = invoke({"normal-order", "--expr", "a + + "});
    EXPECT_EQ(p.code, 1);
    EXPECT_EQ(p.json()["diagnostics"][0]["position"], 6);
}
