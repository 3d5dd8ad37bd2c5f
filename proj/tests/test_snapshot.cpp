#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "hch/grid.hpp"
#include "hch/snapshot.hpp"

using namespace hch;
using doctest::Contains;

namespace {

std::string temp_path(const char* name) {
    return (std::filesystem::temp_directory_path() / name).string();
}

GridFunction random_field(double a, double b, std::size_t n, unsigned seed) {
    std::mt19937_64 gen(seed);
    std::uniform_real_distribution<double> dist(-1.3, 1.3);
    std::vector<double> v(n);
    for (double& x : v) x = dist(gen);
    return GridFunction(a, b, std::move(v));
}

void write_text(const std::string& path, const std::string& text) {
    std::ofstream out(path);
    out << text;
}

}  // namespace

TEST_CASE("second-order snapshot round-trips bitwise") {
    Snapshot s;
    s.n = 17;
    s.m = 1;
    s.a = -0.5;
    s.b = 2.0;
    s.eps = 0.05;
    s.tau = 0.7;
    s.t = 1.25;
    s.formulation = "second-order";
    s.u = {random_field(s.a, s.b, s.n, 1)};
    s.w = {random_field(s.a, s.b, s.n, 2)};

    const std::string path = temp_path("snap_second.snap");
    write_snapshot(path, s);
    const Snapshot r = read_snapshot(path);
    CHECK(r.n == s.n);
    CHECK(r.m == 1);
    CHECK(r.a == s.a);
    CHECK(r.b == s.b);
    CHECK(r.eps == s.eps);
    CHECK(r.tau == s.tau);
    CHECK(r.t == s.t);
    CHECK(r.formulation == "second-order");
    REQUIRE(r.u.size() == 1);
    REQUIRE(r.w.size() == 1);
    for (std::size_t i = 0; i < s.n; ++i) {
        CHECK(r.u[0].values[i] == s.u[0].values[i]);
        CHECK(r.w[0].values[i] == s.w[0].values[i]);
    }
    std::remove(path.c_str());
}

TEST_CASE("classic snapshot has no velocity columns") {
    Snapshot s;
    s.n = 9;
    s.a = 0.0;
    s.b = 1.0;
    s.eps = 0.1;
    s.tau = 0.0;
    s.t = 0.5;
    s.formulation = "classic";
    s.u = {random_field(0.0, 1.0, 9, 3)};

    const std::string path = temp_path("snap_classic.snap");
    write_snapshot(path, s);

    std::ifstream in(path);
    std::string header, row;
    std::getline(in, header);
    std::getline(in, row);
    CHECK(header.find("formulation=classic") != std::string::npos);
    // Two columns per row: x and u.
    std::istringstream ls(row);
    std::string tok;
    std::size_t cols = 0;
    while (ls >> tok) ++cols;
    CHECK(cols == 2);

    const Snapshot r = read_snapshot(path);
    CHECK(r.w.empty());
    for (std::size_t i = 0; i < s.n; ++i) CHECK(r.u[0].values[i] == s.u[0].values[i]);
    std::remove(path.c_str());
}

TEST_CASE("flux snapshot stores faces and reconstructs the staggered grid") {
    Snapshot s;
    s.n = 12;
    s.a = 0.0;
    s.b = 1.1;
    s.eps = 0.05;
    s.tau = 0.4;
    s.t = 0.0;
    s.formulation = "flux";
    s.u = {random_field(s.a, s.b, s.n, 4)};
    const double dx = s.u[0].dx();
    // Faces live midway between nodes: n-1 values.
    std::vector<double> faces(s.n - 1);
    for (std::size_t i = 0; i + 1 < s.n; ++i) faces[i] = 0.1 * static_cast<double>(i) - 0.3;
    s.w = {GridFunction(s.a + 0.5 * dx, s.b - 0.5 * dx, faces)};

    const std::string path = temp_path("snap_flux.snap");
    write_snapshot(path, s);
    const Snapshot r = read_snapshot(path);
    REQUIRE(r.w.size() == 1);
    REQUIRE(r.w[0].n() == s.n - 1);
    CHECK(r.w[0].a == doctest::Approx(s.a + 0.5 * dx));
    CHECK(r.w[0].b == doctest::Approx(s.b - 0.5 * dx));
    for (std::size_t i = 0; i + 1 < s.n; ++i) CHECK(r.w[0].values[i] == faces[i]);
    std::remove(path.c_str());
}

TEST_CASE("vector snapshot interleaves components per row") {
    Snapshot s;
    s.n = 11;
    s.m = 2;
    s.a = 0.0;
    s.b = 1.0;
    s.eps = 0.03;
    s.tau = 1.0;
    s.t = 2.0;
    s.formulation = "second-order";
    s.u = {random_field(0.0, 1.0, 11, 5), random_field(0.0, 1.0, 11, 6)};
    s.w = {random_field(0.0, 1.0, 11, 7), random_field(0.0, 1.0, 11, 8)};

    const std::string path = temp_path("snap_vector.snap");
    write_snapshot(path, s);
    const Snapshot r = read_snapshot(path);
    CHECK(r.m == 2);
    REQUIRE(r.u.size() == 2);
    REQUIRE(r.w.size() == 2);
    for (std::size_t c = 0; c < 2; ++c)
        for (std::size_t i = 0; i < s.n; ++i) {
            CHECK(r.u[c].values[i] == s.u[c].values[i]);
            CHECK(r.w[c].values[i] == s.w[c].values[i]);
        }
    std::remove(path.c_str());
}

TEST_CASE("snapshot reader rejects malformed files by name") {
    const std::string path = temp_path("snap_bad.snap");

    CHECK_THROWS_WITH_AS(read_snapshot(temp_path("snap_missing.snap")),
                         Contains("cannot open"), std::runtime_error);

    write_text(path, "NOPE n=2 m=1 a=0 b=1 eps=0.1 tau=0 t=0 formulation=classic\n0 0\n1 0\n");
    CHECK_THROWS_WITH_AS(read_snapshot(path), Contains("missing HCH1 magic"),
                         std::runtime_error);

    write_text(path, "HCH1 n=3 m=1 a=0 b=1 eps=0.1 tau=0 t=0 formulation=classic\n0 0\n1 0\n");
    CHECK_THROWS_WITH_AS(read_snapshot(path), Contains("found 2 rows"), std::runtime_error);

    write_text(path, "HCH1 n=2 m=1 a=0 b=1 eps=0.1 tau=0 t=0 formulation=classic\n0 0 9\n1 0\n");
    CHECK_THROWS_WITH_AS(read_snapshot(path), Contains("row 1 has"), std::runtime_error);

    write_text(path, "HCH1 n=2 m=1 a=0 b=1 eps=0.1 tau=0 t=0 formulation=classic\n0 zz\n1 0\n");
    CHECK_THROWS_WITH_AS(read_snapshot(path), Contains("expected a number"),
                         std::runtime_error);

    write_text(path, "HCH1 n=2 m=1 a=0 b=1 eps=0.1 tau=0 t=0 formulation=classic\n0 0\n0.7 0\n");
    CHECK_THROWS_WITH_AS(read_snapshot(path), Contains("does not match the uniform grid"),
                         std::runtime_error);

    write_text(path, "HCH1 n=2 m=1 a=1 b=0 eps=0.1 tau=0 t=0 formulation=classic\n1 0\n0 0\n");
    CHECK_THROWS_WITH_AS(read_snapshot(path), Contains("requires a < b"), std::runtime_error);

    write_text(path, "HCH1 n=2 m=1 a=0 b=1 eps=0.1 tau=0\n");
    CHECK_THROWS_WITH_AS(read_snapshot(path), Contains("missing header field"),
                         std::runtime_error);
    std::remove(path.c_str());
}

TEST_CASE("grid function files round-trip and reject ragged tables") {
    const GridFunction f = random_field(-1.0, 3.0, 33, 9);
    const std::string path = temp_path("grid_fn.txt");
    write_grid_function(path, f);
    const GridFunction r = read_grid_function(path);
    CHECK(r.a == f.a);
    CHECK(r.b == f.b);
    REQUIRE(r.n() == f.n());
    for (std::size_t i = 0; i < f.n(); ++i) CHECK(r.values[i] == f.values[i]);

    write_text(path, "0 1 2\n1 2 3\n");
    CHECK_THROWS_WITH_AS(read_grid_function(path), Contains("more than two columns"),
                         std::runtime_error);
    write_text(path, "0\n1\n");
    CHECK_THROWS_WITH_AS(read_grid_function(path), Contains("single column"),
                         std::runtime_error);
    write_text(path, "0 1\n");
    CHECK_THROWS_WITH_AS(read_grid_function(path), Contains("at least 2 rows"),
                         std::runtime_error);
    write_text(path, "0 1\n1 2\n1.5 3\n");
    CHECK_THROWS_WITH_AS(read_grid_function(path), Contains("uniformly spaced"),
                         std::runtime_error);
    write_text(path, "1 1\n0 2\n");
    CHECK_THROWS_WITH_AS(read_grid_function(path), Contains("strictly increasing"),
                         std::runtime_error);
    std::remove(path.c_str());
}

TEST_CASE("format17 round-trips doubles through text") {
    const double values[] = {0.1, -1.0 / 3.0, 1e-300, 2.2250738585072014e-308,
                             9.9e307, 0.0, 123456.78901234567};
    for (double v : values) {
        CAPTURE(v);
        CHECK(std::stod(format17(v)) == v);
    }
}
