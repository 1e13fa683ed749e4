#include "doctest.h"
#include "commands.hpp"
#include "padicfrob/special_functions.hpp"

#include <filesystem>
#include <fstream>
#include <sstream>

using namespace padicfrob;
using namespace padicfrob::cli;

namespace {

std::string slurp(const std::filesystem::path& p) {
    std::ifstream in(p);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::filesystem::path scratch_dir(const std::string& name) {
    auto d = std::filesystem::temp_directory_path() / ("padicfrob_cli_" + name);
    std::filesystem::remove_all(d);
    std::filesystem::create_directories(d);
    return d;
}

struct GammaRow {
    long p, k, M;
    std::string err;
    mpq_class value;
};

std::vector<GammaRow> parse_gamma(const std::string& text) {
    std::vector<GammaRow> rows;
    std::istringstream in(text);
    std::string line;
    std::getline(in, line);
    while (std::getline(in, line)) {
        std::vector<std::string> f;
        std::stringstream ls(line);
        std::string cell;
        while (std::getline(ls, cell, ',')) f.push_back(cell);
        rows.push_back({std::stol(f[0]), std::stol(f[1]), std::stol(f[2]), f[3], parse_rational(f[4])});
    }
    return rows;
}

mpq_class summary_sigma(const std::string& summary, long p) {
    std::istringstream in(summary);
    std::string line;
    std::getline(in, line);
    while (std::getline(in, line)) {
        std::vector<std::string> f;
        std::stringstream ls(line);
        std::string cell;
        while (std::getline(ls, cell, ',')) f.push_back(cell);
        if (std::stol(f[1]) == p) return mpq_class(f[6] + "/" + f[7]);
    }
    throw std::runtime_error("prime not in summary");
}

}  // namespace

TEST_CASE("gamma command") {
    RunConfig cfg;
    cfg.primes = {5};
    cfg.k_max = 2;
    cfg.precision = 3;
    std::ostringstream out, err;
    REQUIRE(cmd_gamma(cfg, out, err) == kOk);
    auto rows = parse_gamma(out.str());
    REQUIRE(rows.size() == 3);
    PrimeContext ctx(5);
    CHECK(val_p(ctx, mpq_class(rows[2].value - rows[1].value * rows[1].value)) >= ExtRational(3));

    cfg.precision = 6;
    std::ostringstream out6;
    REQUIRE(cmd_gamma(cfg, out6, err) == kOk);
    auto rows6 = parse_gamma(out6.str());
    for (std::size_t k = 0; k < 3; ++k) CHECK(val_p(ctx, mpq_class(rows6[k].value - rows[k].value)) >= ExtRational(3));

    cfg.primes = {3};
    cfg.k_max = 0;
    std::ostringstream out0;
    REQUIRE(cmd_gamma(cfg, out0, err) == kOk);
    auto r0 = parse_gamma(out0.str());
    CHECK(r0[0].value == 1);
    CHECK(r0[0].err == "inf");

    cfg.primes = {4};
    std::ostringstream bad;
    CHECK(cmd_gamma(cfg, bad, err) == kValidation);
    cfg.primes = {2};
    CHECK(cmd_gamma(cfg, bad, err) == kValidation);
}

TEST_CASE("profile command") {
    auto dir = scratch_dir("profile");
    RunConfig cfg;
    cfg.connection = "dwork(1)";
    cfg.primes = {3};
    cfg.order = 40;
    cfg.window_hi = 40;
    cfg.out = dir.string();
    std::ostringstream out, err;
    REQUIRE(cmd_profile(cfg, out, err) == kOk);
    const std::string csv = slurp(dir / "dwork_1_p3.csv");
    PrimeContext ctx(3);
    auto dc = dwork_coefficients(ctx, 40);
    std::istringstream in(csv);
    std::string line;
    std::getline(in, line);
    CHECK(line == "m,neg_val_num,neg_val_den,neg_val_float,certified,reference");
    for (std::size_t m = 0; m <= 40; ++m) {
        REQUIRE(std::getline(in, line));
        std::stringstream ls(line);
        std::string f0, num, den;
        std::getline(ls, f0, ',');
        std::getline(ls, num, ',');
        std::getline(ls, den, ',');
        CHECK(std::stoul(f0) == m);
        CHECK(-mpq_class(num + "/" + den) == val_p(ctx, dc.d[m]).value());
    }

    // determinism
    std::ostringstream out2, err2;
    REQUIRE(cmd_profile(cfg, out2, err2) == kOk);
    CHECK(slurp(dir / "dwork_1_p3.csv") == csv);

    cfg.connection = "cp(3)";
    cfg.primes = {3, 5};
    cfg.order = 60;
    cfg.window_hi = 60;
    REQUIRE(cmd_profile(cfg, out, err) == kOk);
    const std::string first = slurp(dir / "cp_3_p5.csv");
    REQUIRE(cmd_profile(cfg, out, err) == kOk);
    CHECK(slurp(dir / "cp_3_p5.csv") == first);
    auto summary = slurp(dir / "cp_3_summary.csv");
    CHECK(abs(summary_sigma(summary, 3) - mpq_class(16, 100)) <= mpq_class(3, 100));

    cfg.connection = "two-quadrics";
    cfg.primes = {5};
    REQUIRE(cmd_profile(cfg, out, err) == kOk);
    CHECK(abs(summary_sigma(slurp(dir / "two-quadrics_summary.csv"), 5) - mpq_class(9, 100)) <= mpq_class(3, 100));

    // a fixed G that is too small to certify every coefficient
    cfg.connection = "cubic-surface";
    cfg.precision = 1;
    std::ostringstream e3;
    CHECK(cmd_profile(cfg, out, e3) == kPrecision);
    CHECK(e3.str().find("raise --precision") != std::string::npos);
}

TEST_CASE("newton command") {
    RunConfig cfg;
    cfg.connection = "cubic-surface";
    std::ostringstream out, err;
    REQUIRE(cmd_newton(cfg, out, err) == kOk);
    const std::string text = out.str();
    std::size_t count = 0, pos = 0;
    while ((pos = text.find("vertices: (0,-3) (1,-3) (2,-2) (3,0)", pos)) != std::string::npos) {
        ++count;
        ++pos;
    }
    CHECK(count == 2);
    CHECK(text.find("tentative: yes") != std::string::npos);

    cfg.connection = "twistor-simple(4)";
    cfg.primes = {5};
    std::ostringstream tw;
    REQUIRE(cmd_newton(cfg, tw, err) == kOk);
    CHECK(tw.str().find("vertices: (0,-14) (1,-12) (2,-9) (3,-5) (4,0)") != std::string::npos);

    cfg.connection = "no-such-connection";
    std::ostringstream bad, berr;
    CHECK(cmd_newton(cfg, bad, berr) == kValidation);
}

TEST_CASE("satake command") {
    RunConfig cfg;
    cfg.k = 2;
    cfg.N = 4;
    cfg.primes = {3};
    cfg.order = 20;
    std::ostringstream out, err;
    CHECK(cmd_satake(cfg, out, err) == kOk);
    CHECK(out.str().find("PASS (exact)") != std::string::npos);

    cfg.k = 1;
    cfg.N = 5;
    std::ostringstream o1;
    CHECK(cmd_satake(cfg, o1, err) == kOk);
    CHECK(o1.str().find("PASS (exact)") != std::string::npos);

    cfg.k = 2;
    cfg.N = 4;
    cfg.primes = {7};
    std::ostringstream o7;
    CHECK(cmd_satake(cfg, o7, err) == kOk);
    CHECK(o7.str().find("slopes: 0 (x1) 1 (x1) 2 (x2) 3 (x1) 4 (x1)") != std::string::npos);
    CHECK(o7.str().find("tentative: yes") != std::string::npos);

    cfg.k = 4;
    std::ostringstream bad;
    CHECK(cmd_satake(cfg, bad, err) == kValidation);
}

TEST_CASE("list and validate") {
    std::ostringstream out, err;
    REQUIRE(cmd_list(out) == kOk);
    for (const char* n : {"cp1", "cubic-surface", "f1", "two-quadrics", "twistor-simple", "twistor-big"}) {
        CHECK(out.str().find(n) != std::string::npos);
    }
    auto dir = scratch_dir("validate");
    {
        std::ofstream f(dir / "cp1.json");
        f << serialize_connection(builtin("cp1"));
    }
    std::ostringstream ok;
    CHECK(cmd_validate((dir / "cp1.json").string(), ok, err) == kOk);
    CHECK(ok.str().rfind("OK cp1", 0) == 0);

    std::ostringstream nil, nerr;
    CHECK(cmd_validate(std::string(PADICFROB_TEST_DATA) + "/non-nilpotent.json", nil, nerr) == kValidation);
    CHECK(nerr.str().find("not nilpotent") != std::string::npos);

    {
        std::ofstream f(dir / "broken.json");
        f << "{\n  \"name\": \"x\",\n  \"rank\": 2,,\n}\n";
    }
    std::ostringstream b, berr;
    CHECK(cmd_validate((dir / "broken.json").string(), b, berr) == kValidation);
    CHECK(berr.str().find("line 3") != std::string::npos);

    std::ostringstream m, merr;
    CHECK(cmd_validate((dir / "missing.json").string(), m, merr) == kValidation);

    // a file path is accepted wherever a connection is selected
    CHECK(load_connection((dir / "cp1.json").string()) == builtin("cp1"));
    CHECK(slug("grassmannian(2,4)") == "grassmannian_2_4");
}
