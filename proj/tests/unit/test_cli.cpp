#include <doctest.h>

#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "renyi/densities.hpp"
#include "renyi/diagnostics.hpp"
#include "repi_cli.hpp"

namespace {

struct Result {
    int code;
    std::string out;
    std::string err;
};

Result run(std::vector<std::string> args) {
    std::ostringstream out, err;
    renyi::set_warnings_enabled(false);
    const int code = repi::run(args, out, err);
    renyi::set_warnings_enabled(true);
    return {code, out.str(), err.str()};
}

nlohmann::json reports(const Result& r) { return nlohmann::json::parse(r.out)["reports"]; }

std::string tmp_path(const std::string& name) {
    const char* dir = std::getenv("REPI_TEST_TMP");
    return std::string(dir ? dir : ".") + "/" + name;
}

} // namespace

TEST_CASE("entropy") {
    const auto r = run({"entropy", "--family", "gaussian:1", "--orders", "2"});
    REQUIRE(r.code == 0);
    const auto rep = reports(r);
    REQUIRE(rep.size() == 1);
    CHECK(rep[0]["h"].get<double>() == doctest::Approx(1.265512).epsilon(1e-6));
    CHECK(rep[0]["N"].get<double>() == doctest::Approx(12.566).epsilon(1e-4));

    const auto u = run({"entropy", "--family", "uniform:0,1", "--orders", "0.5,1,2"});
    REQUIRE(u.code == 0);
    for (const auto& row : reports(u)) {
        CHECK(std::abs(row["h"].get<double>()) < 1e-12);
        CHECK(row["N"].get<double>() == doctest::Approx(1.0));
    }
}

TEST_CASE("entropy from a CSV density") {
    const auto path = tmp_path("triangle.csv");
    {
        const auto u = renyi::make_analytic(renyi::Uniform{0.0, 1.0}, 4096, 1e-10);
        std::ofstream f(path);
        renyi::write_density_csv(f, renyi::convolve(u, u));
    }
    const auto r = run({"entropy", "--csv", path, "--orders", "2"});
    REQUIRE(r.code == 0);
    CHECK(reports(r)[0]["h"].get<double>() == doctest::Approx(0.405465).epsilon(1e-5));
}

TEST_CASE("constants") {
    const auto r = run({"constants", "--orders", "2,0.5,1", "--m", "2"});
    REQUIRE(r.code == 0);
    const auto rep = reports(r);
    REQUIRE(rep.size() == 3);
    CHECK(rep[0]["c_ram_sason"].get<double>() == 0.84375);
    CHECK(rep[0]["alpha_li"].get<double>() == doctest::Approx(1.324699).epsilon(1e-6));
    CHECK(rep[0]["c_bobkov_chistyakov"].get<double>() == doctest::Approx(0.735758882343));
    CHECK(rep[1]["logconcave_c"].get<double>() == 0.84375);
    CHECK(rep[1]["c_ram_sason"].is_null());
    CHECK(rep[2]["c_ram_sason"].is_null());
    CHECK(rep[2]["logconcave_c"].is_null());
    CHECK_FALSE(rep[2]["notes"].empty());
}

TEST_CASE("check dct, equality case") {
    const auto r = run({"check", "dct", "--family", "gaussian:1", "gaussian:1", "--order", "2", "--suborders",
                        "1.3333,1.3333"});
    REQUIRE(r.code == 0);
    const auto rep = reports(r)[0];
    CHECK(std::abs(rep["gap"].get<double>()) < 1e-4);
    CHECK(rep["pass"].get<bool>());
    CHECK(rep["equality_within_tolerance"].get<bool>());
    CHECK(rep["inequality_id"] == "dct");
    CHECK_FALSE(rep["notes"].empty());
}

TEST_CASE("check varentropy and repic") {
    const auto v = run({"check", "varentropy", "--family", "exponential:1"});
    REQUIRE(v.code == 0);
    CHECK(reports(v)[0]["varentropy"].get<double>() == doctest::Approx(1.0).epsilon(1e-3));

    const auto c = run({"check", "repic", "--family", "uniform:0,1", "uniform:0,1", "--order", "2"});
    REQUIRE(c.code == 0);
    const auto rep = reports(c)[0];
    CHECK(rep["gap"].get<double>() == doctest::Approx(0.5625).epsilon(1e-5));
    CHECK(rep["constants"]["source"] == "c_ram_sason");
    CHECK(rep["linearization"]["multiplicative_pass"] == rep["linearization"]["linearized_pass"]);
}

TEST_CASE("other suites run") {
    CHECK(run({"check", "repialpha", "--family", "laplace:1", "gaussian:1", "--order", "1.5"}).code == 0);
    CHECK(run({"check", "repig", "--family", "laplace:1", "exponential:1", "--order", "0.5"}).code == 0);
    CHECK(run({"check", "concavity", "--family", "gaussian:1", "student_t:1"}).code == 0);
    CHECK(run({"check", "derivatives", "--family", "laplace:1", "--orders", "2"}).code == 0);
    CHECK(run({"check", "rotation", "--lambda", "0.3", "--seed", "7", "--samples", "20000"}).code == 0);
    CHECK(run({"check", "preservation", "--family", "gaussian:1", "gaussian:1.41421356237", "--order", "2",
               "--transport", "cubic"}).code == 0);
}

TEST_CASE("exit codes") {
    CHECK(run({"check", "repic", "--family", "gaussian:1", "gaussian:1", "--order", "2", "--c", "2"}).code == 1);
    CHECK(run({"entropy", "--family", "cauchy:1"}).code == 2);
    CHECK(run({"entropy", "--bogus"}).code == 2);
    CHECK(run({}).code == 2);
    CHECK(run({"check", "dct", "--family", "gaussian:1", "gaussian:1", "--order", "2", "--suborders", "1.5,2"}).code == 2);
    CHECK(run({"check", "repialpha", "--family", "student_t:1", "gaussian:1", "--order", "0.5"}).code == 2);
    CHECK(run({"check", "preservation", "--family", "gaussian:1", "gaussian:2", "--order", "2", "--transport", "warp"}).code == 2);

    const auto path = tmp_path("zero.csv");
    {
        std::ofstream f(path);
        for (int i = 0; i < 100; ++i) f << i << ",0\n";
    }
    CHECK(run({"entropy", "--csv", path}).code == 3);
    CHECK(run({"--help"}).code == 0);
}

TEST_CASE("output is deterministic and hashed by config") {
    const std::vector<std::string> args{"check", "dct", "--family", "laplace:1", "uniform:0,1", "--order", "2"};
    const auto a = run(args);
    const auto b = run(args);
    CHECK(a.out == b.out);
    const auto c = run({"check", "dct", "--family", "laplace:1", "uniform:0,1", "--order", "1.5"});
    const auto ha = nlohmann::json::parse(a.out)["meta"]["config_hash"];
    const auto hc = nlohmann::json::parse(c.out)["meta"]["config_hash"];
    CHECK(ha != hc);
    CHECK(repi::fnv1a_hex("") == "cbf29ce484222325");
}

TEST_CASE("csv format and output file") {
    const auto path = tmp_path("report.csv");
    const auto r = run({"entropy", "--family", "gaussian:1", "--orders", "1,2", "--format", "csv", "--output", path});
    REQUIRE(r.code == 0);
    CHECK(r.out.empty());
    std::ifstream f(path);
    std::string header, row;
    std::getline(f, header);
    std::getline(f, row);
    CHECK(header.rfind("kind,density,r,h,N", 0) == 0);
    CHECK(row.rfind("entropy,gaussian:1,1", 0) == 0);
}
