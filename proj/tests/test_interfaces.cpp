#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstdint>
#include <vector>

#include "hch/interfaces.hpp"
#include "hch/profiles.hpp"

using namespace hch;
using doctest::Contains;

namespace {

GridFunction tanh_layer(double center, double eps, std::size_t n) {
    GridFunction u(0.0, 1.0, std::vector<double>(n, 0.0));
    for (std::size_t i = 0; i < n; ++i)
        u.values[i] = std::tanh((u.x(i) - center) / (std::sqrt(2.0) * eps));
    return u;
}

double lcg_unit(std::uint64_t& s) {
    s = s * 6364136223846793005ULL + 1442695040888963407ULL;
    return static_cast<double>(s >> 11) * 0x1p-53;
}

}  // namespace

TEST_CASE("kband construction and validation") {
    const ScalarPotential p = make_quartic();
    const KBand K = make_kband({{-0.5, 0.5}}, p);
    CHECK(K.contains(0.0));
    CHECK(K.contains(0.5));
    CHECK(K.contains(-0.5));
    CHECK(!K.contains(0.51));
    CHECK(!K.contains(-2.0));

    const KBand two = make_kband({{0.3, 0.5}, {-0.5, -0.3}}, p);  // sorted on return
    CHECK(two.intervals[0][0] == -0.5);
    CHECK(two.contains(0.4));
    CHECK(!two.contains(0.0));

    CHECK_THROWS_WITH_AS(make_kband({}, p), Contains("empty"), std::invalid_argument);
    CHECK_THROWS_WITH_AS(make_kband({{0.5, -0.5}}, p), Contains("lo > hi"), std::invalid_argument);
    CHECK_THROWS_WITH_AS(make_kband({{-0.5, 0.2}, {0.1, 0.5}}, p), Contains("overlapping"),
                         std::invalid_argument);
    CHECK_THROWS_WITH_AS(make_kband({{0.5, 1.2}}, p), Contains("well"), std::invalid_argument);
}

TEST_CASE("interface of a single standing layer") {
    const ScalarPotential p = make_quartic();
    const KBand K = make_kband({{-0.5, 0.5}}, p);
    const double eps = 0.02;
    const GridFunction u = tanh_layer(0.5, eps, 2049);

    const InterfaceSet iface = interface_of_function(u, K);
    REQUIRE(iface.points.size() == 2);
    // tanh(x*/(sqrt(2) eps)) = 1/2 at x* = sqrt(2) eps atanh(1/2).
    const double xstar = std::sqrt(2.0) * eps * std::atanh(0.5);
    CHECK(std::abs(iface.points[0] - (0.5 - xstar)) < 1e-5);
    CHECK(std::abs(iface.points[1] - (0.5 + xstar)) < 1e-5);

    GridFunction flat(0.0, 1.0, std::vector<double>(65, 1.0));
    CHECK(interface_of_function(flat, K).empty());

    // A function inside K everywhere reports the domain endpoints.
    GridFunction zero(0.0, 1.0, std::vector<double>(65, 0.0));
    const InterfaceSet whole = interface_of_function(zero, K);
    REQUIRE(whole.points.size() == 2);
    CHECK(whole.points[0] == 0.0);
    CHECK(whole.points[1] == 1.0);
}

TEST_CASE("interface of a two layer profile stays near the jump set") {
    const ScalarPotential p = make_quartic();
    const double r = 1.0 / 6.0;
    const StepProfile v = build_step(0.0, 1.0, {1.0 / 3.0, 2.0 / 3.0}, r, -1);
    const double eps = r / 8.0;
    const GridFunction u = build_layer_profile(v, p, eps, 4097);
    const KBand K = make_kband({{-0.5, 0.5}}, p);

    const InterfaceSet iface = interface_of_function(u, K);
    REQUIRE(iface.points.size() == 4);
    InterfaceSet jump_set;
    jump_set.points = v.jumps;
    CHECK(hausdorff(iface, jump_set) < 0.5 * r);
}

TEST_CASE("hausdorff distance on enumerated sets") {
    const auto set = [](std::vector<double> pts) {
        InterfaceSet s;
        s.points = std::move(pts);
        return s;
    };
    CHECK(hausdorff(set({0.0}), set({1.0})) == 1.0);
    CHECK(hausdorff(set({0.0, 1.0}), set({0.0, 3.0})) == 2.0);
    CHECK(hausdorff(set({0.25, 0.5, 0.75}), set({0.25, 0.5, 0.75})) == 0.0);
    CHECK_THROWS_WITH_AS(hausdorff(set({}), set({1.0})), Contains("empty interface"),
                         std::runtime_error);
}

TEST_CASE("hausdorff is an exact metric on random finite sets") {
    const auto set = [](std::vector<double> pts) {
        InterfaceSet s;
        s.points = std::move(pts);
        return s;
    };
    std::uint64_t state = 2026;
    for (int trial = 0; trial < 300; ++trial) {
        const auto draw = [&]() {
            std::vector<double> pts(1 + static_cast<std::size_t>(lcg_unit(state) * 5.0));
            for (auto& x : pts) x = 10.0 * lcg_unit(state);
            return set(pts);
        };
        const InterfaceSet A = draw(), B = draw(), C = draw();
        CHECK(hausdorff(A, A) == 0.0);
        CHECK(hausdorff(A, B) == hausdorff(B, A));
        CHECK(hausdorff(A, C) <= hausdorff(A, B) + hausdorff(B, C) + 1e-15);
        CHECK(hausdorff(A, B) >= 0.0);
    }
}

TEST_CASE("zero crossing location") {
    GridFunction line(0.0, 1.0, std::vector<double>(101, 0.0));
    for (std::size_t i = 0; i < line.n(); ++i) line.values[i] = line.x(i) - 0.25;
    const InterfaceSet s = locate_layers(line);
    REQUIRE(s.points.size() == 1);
    CHECK(s.points[0] == doctest::Approx(0.25).epsilon(1e-14));

    GridFunction flat(0.0, 1.0, std::vector<double>(11, 1.0));
    CHECK(locate_layers(flat).empty());

    const ScalarPotential p = make_quartic();
    const StepProfile v = build_step(0.0, 1.0, {0.3, 0.7}, 0.15, -1);
    const GridFunction u = build_layer_profile(v, p, 0.02, 1025);
    const InterfaceSet layers = locate_layers(u);
    REQUIRE(layers.points.size() == 2);
    CHECK(std::abs(layers.points[0] - 0.3) < u.dx());
    CHECK(std::abs(layers.points[1] - 0.7) < u.dx());
}

TEST_CASE("layer tracking follows a translating front") {
    const ScalarPotential p = make_quartic();
    LayerTrack track;
    track.kband = make_kband({{-0.5, 0.5}}, p);
    track.matching_radius = 0.05;

    for (int k = 0; k <= 5; ++k) {
        const double h = 0.4 + 0.01 * k;
        track_append(track, static_cast<double>(k), tanh_layer(h, 0.02, 2049));
    }
    REQUIRE(track.times.size() == 6);
    REQUIRE(track.layer_positions[0].size() == 1);
    CHECK(track.events.empty());
    for (int k = 0; k <= 5; ++k) {
        CHECK(std::abs(track.layer_positions[k][0] - (0.4 + 0.01 * k)) < 1e-4);
        CHECK(std::abs(track.hausdorff_from_init[k] - 0.01 * k) < 1e-4);
    }

    CHECK(exit_time_monitor(track, 0.025).value() == 3.0);
    CHECK(!exit_time_monitor(track, 1.0).has_value());
    CHECK_THROWS_WITH_AS(exit_time_monitor(track, 0.0), Contains("delta1"), std::invalid_argument);

    const auto vel = layer_velocity(track, 0);
    REQUIRE(vel.size() == 4);
    for (const auto& [t, v] : vel) {
        CHECK(t >= 1.0);
        CHECK(t <= 4.0);
        CHECK(v == doctest::Approx(0.01).epsilon(1e-2));
    }

    CHECK_THROWS_WITH_AS(track_append(track, 5.0, tanh_layer(0.45, 0.02, 2049)),
                         Contains("strictly increasing"), std::invalid_argument);
}

TEST_CASE("layer tracking records annihilation and creation events") {
    const ScalarPotential p = make_quartic();

    SUBCASE("annihilation closes the column") {
        LayerTrack track;
        track.kband = make_kband({{-0.5, 0.5}}, p);
        track.matching_radius = 0.05;
        track_append(track, 0.0, tanh_layer(0.5, 0.02, 1025));
        track_append(track, 1.0, tanh_layer(0.505, 0.02, 1025));
        GridFunction gone(0.0, 1.0, std::vector<double>(1025, 1.0));
        track_append(track, 2.0, gone);

        CHECK(std::isinf(track.hausdorff_from_init[2]));
        CHECK(std::isnan(track.layer_positions[2][0]));
        REQUIRE(track.events.size() == 2);
        CHECK(track.events[0].find("interface left K") != std::string::npos);
        CHECK(track.events[1].find("layer 1 lost") != std::string::npos);
        CHECK(exit_time_monitor(track, 0.25).value() == 2.0);
        CHECK_THROWS_WITH_AS(layer_velocity(track, 0), Contains("layer identity lost"),
                             std::runtime_error);
    }

    SUBCASE("creation pads history with NaN") {
        LayerTrack track;
        track.kband = make_kband({{-0.5, 0.5}}, p);
        track.matching_radius = 0.05;
        track_append(track, 0.0, tanh_layer(0.3, 0.02, 2049));
        // Second observation gains a second front far from the first.
        GridFunction two(0.0, 1.0, std::vector<double>(2049, 0.0));
        for (std::size_t i = 0; i < two.n(); ++i) {
            const double x = two.x(i);
            two.values[i] = std::tanh((x - 0.3) / (std::sqrt(2.0) * 0.02)) -
                            std::tanh((x - 0.8) / (std::sqrt(2.0) * 0.02)) - 1.0;
        }
        track_append(track, 1.0, two);

        REQUIRE(track.layer_positions[1].size() == 2);
        CHECK(std::isnan(track.layer_positions[0][1]));
        CHECK(std::abs(track.layer_positions[1][0] - 0.3) < 1e-3);
        CHECK(std::abs(track.layer_positions[1][1] - 0.8) < 1e-3);
        REQUIRE(track.events.size() == 1);
        CHECK(track.events[0].find("layer 2 appeared") != std::string::npos);
        CHECK_THROWS_WITH_AS(layer_velocity(track, 1), Contains("need at least 3"),
                             std::invalid_argument);
    }

    SUBCASE("empty initial interface refuses to start") {
        LayerTrack track;
        track.kband = make_kband({{-0.5, 0.5}}, p);
        track.matching_radius = 0.05;
        GridFunction flat(0.0, 1.0, std::vector<double>(65, 1.0));
        CHECK_THROWS_WITH_AS(track_append(track, 0.0, flat),
                             Contains("empty interface at the initial time"), std::runtime_error);
        track.matching_radius = 0.0;
        CHECK_THROWS_WITH_AS(track_append(track, 0.0, flat), Contains("matching_radius"),
                             std::invalid_argument);
    }
}
