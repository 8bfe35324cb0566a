#include <doctest.h>

#include <cstdio>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "degen/cli.hpp"

using namespace degen;
using namespace degen::cli;

namespace {

struct Result {
    int code;
    std::string out;
    std::string err;
};

Result invoke(std::vector<std::string> args)
{
    args.insert(args.begin(), "degen-bergman");
    std::vector<const char*> argv;
    for (const auto& a : args)
        argv.push_back(a.c_str());
    std::ostringstream out, err;
    const int code = run(static_cast<int>(argv.size()), argv.data(), out, err);
    return {code, out.str(), err.str()};
}

}  // namespace

TEST_CASE("complex literals")
{
    CHECK(parse_complex("1.5") == Complex{1.5, 0.0});
    CHECK(parse_complex("-2e-3+4i") == Complex{-2e-3, 4.0});
    CHECK(parse_complex("1-0.5i") == Complex{1.0, -0.5});
    CHECK(parse_complex("3i") == Complex{0.0, 3.0});
    CHECK(parse_complex("-i") == Complex{0.0, -1.0});
    CHECK(parse_complex(" 2 ") == Complex{2.0, 0.0});
    CHECK_THROWS_AS(parse_complex("abc"), std::invalid_argument);
    CHECK_THROWS_AS(parse_complex(""), std::invalid_argument);
    for (Complex v : {Complex{0.1, -0.2}, Complex{1e-300, 3.0}, Complex{-7.0, 0.0}})
        CHECK(parse_complex(format_complex(v)) == v);
}

TEST_CASE("lambda literals and ranges")
{
    CHECK(parse_lambda("1e-4") == std::vector<Complex>{Complex{1e-4, 0.0}});
    const auto r = parse_lambda("1e-2:1e-6:1");
    REQUIRE(r.size() == 5);
    CHECK(std::abs(r.back()) == doctest::Approx(1e-6));
    CHECK_THROWS_AS(parse_lambda("1e-2:1e-6"), std::invalid_argument);
    CHECK_THROWS_AS(parse_lambda("1e-2:1e-6:x"), std::invalid_argument);
}

TEST_CASE("config JSON round trip")
{
    CliConfig cfg;
    cfg.subcommand = "sweep";
    cfg.family = "cusp2";
    cfg.genus = 3;
    cfg.proots = {{2.0, 0.0}, {3.0, 0.0}, {4.0, 0.0}, {5.0, 0.0}};
    cfg.lambda = "1e-3:1e-5:2";
    cfg.z = {{0.3, 0.1}};
    cfg.order = 512;
    cfg.format = "csv";
    cfg.threads = 3;
    CliConfig back;
    apply_config_json(back, config_to_json(cfg));
    CHECK(config_to_json(back) == config_to_json(cfg));

    CHECK_THROWS_AS(apply_config_json(back, "{\"bogus\": 1}"), std::invalid_argument);
    CHECK_THROWS_AS(apply_config_json(back, "[1, 2]"), std::invalid_argument);
    CHECK_THROWS_AS(apply_config_json(back, "{not json"), std::invalid_argument);
}

TEST_CASE("flags override the config file")
{
    const std::string path = "test_cli_config.json";
    {
        std::ofstream f(path);
        f << R"({"family": "cusp1", "genus": 2, "a": 2, "b": 3, "lambda": "1e-6", "order": 128})";
    }
    const auto r = invoke({"--config", path, "--lambda", "1e-8", "--print-config", "kernel"});
    std::remove(path.c_str());
    REQUIRE(r.code == 0);
    const auto j = nlohmann::json::parse(r.out);
    CHECK(j["family"] == "cusp1");
    CHECK(j["lambda"] == "1e-8");
    CHECK(j["order"] == 128);
    CHECK(j["subcommand"] == "kernel");
}

TEST_CASE("periods subcommand")
{
    const auto r = invoke({"periods", "--family", "node", "--a", "2", "--b", "3", "--lambda", "1e-4"});
    REQUIRE(r.code == 0);
    const auto j = nlohmann::json::parse(r.out);
    for (const char* key : {"A", "B", "Z", "sym_defect", "min_eig"})
        CHECK(j.contains(key));
    CHECK(j["Z"].size() == 2);
    CHECK(j["sym_defect"].get<double>() <= 1e-8);
}

TEST_CASE("kernel and constants subcommands")
{
    auto r = invoke({"kernel", "--a", "2", "--b", "3", "--lambda", "1e-3:1e-4:1", "--z", "0.3", "0.2+0.1i",
                     "--format", "csv"});
    REQUIRE(r.code == 0);
    CHECK(std::count(r.out.begin(), r.out.end(), '\n') == 5);

    r = invoke({"constants", "--a", "2", "--b", "3"});
    REQUIRE(r.code == 0);
    const auto j = nlohmann::json::parse(r.out);
    CHECK(j["c"][1].get<double>() > 0.0);
    CHECK(j["tau"][1].get<double>() > 0.0);
}

TEST_CASE("exit codes")
{
    CHECK(invoke({"periods", "--family", "torus", "--a", "2", "--b", "3"}).code == 2);
    CHECK(invoke({"periods", "--a", "2", "--b", "3", "--lambda", "0"}).code == 2);
    CHECK(invoke({"periods", "--genus", "notanumber"}).code == 2);
    CHECK(invoke({"kernel", "--a", "2", "--b", "3", "--format", "xml"}).code == 2);
    CHECK(invoke({"constants", "--genus", "3", "--proots", "2", "3", "4", "5"}).code == 2);
    CHECK(invoke({"verify", "--suite", "bogus"}).code == 2);
    CHECK(invoke({}).code == 2);
    CHECK(invoke({"--help"}).code == 0);
    // z^2 on a branch point: the kernel denominator vanishes.
    CHECK(invoke({"kernel", "--a", "2", "--b", "3", "--z", "1"}).code == 1);
    CHECK(invoke({"verify", "--suite", "quadrature"}).code == 0);
}
