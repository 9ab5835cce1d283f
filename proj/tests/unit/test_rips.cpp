#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "oracles.hpp"
#include "topoloss/error.hpp"
#include "topoloss/geometry.hpp"
#include "topoloss/matching.hpp"
#include "topoloss/rips.hpp"

using namespace topoloss;

TEST_CASE("PersistenceDiagram validates and sorts") {
    CHECK_THROWS_AS(PersistenceDiagram(0, {{1.0, 1.0}}), InvalidArgument);
    CHECK_THROWS_AS(PersistenceDiagram(0, {{-1.0, 1.0}}), InvalidArgument);
    const PersistenceDiagram d(1, {{2, 3}, {0, kInfinity}, {0, 1}});
    CHECK(d.pairs()[0] == PersistencePair{0, 1});
    CHECK(d.pairs()[1] == PersistencePair{0, kInfinity});
    CHECK(d.essential_count() == 1);
    CHECK(d.finite_part().size() == 2);
}

TEST_CASE("RipsConfig validation") {
    RipsConfig c;
    c.max_points = 2;
    CHECK_THROWS_AS(rips_diagram(PointCloud({{0, 0}}), 0, c), InvalidArgument);
    c = {};
    c.edge_cap = 0.0;
    CHECK_THROWS_AS(rips_diagram(PointCloud({{0, 0}}), 0, c), InvalidArgument);
    c = {};
    c.convention_scale = 0.3;
    CHECK_THROWS_AS(rips_diagram(PointCloud({{0, 0}}), 0, c), InvalidArgument);
    CHECK_THROWS_AS(rips_diagram(PointCloud(), 0), InvalidArgument);
    CHECK_THROWS_AS(rips_diagram(PointCloud({{0, 0}}), 2), InvalidArgument);
    CHECK(rips_diagram(PointCloud(), 1).empty());
}

TEST_CASE("degree-0 examples") {
    SUBCASE("two points") {
        const auto d = rips_diagram(PointCloud({{0, 0}, {3, 4}}), 0);
        REQUIRE(d.size() == 2);
        CHECK(d.pairs()[0] == PersistencePair{0, 5});
        CHECK(d.pairs()[1].essential());
    }
    SUBCASE("collinear points merge at the MST edge lengths") {
        const auto d = rips_diagram(PointCloud({{0, 0}, {3, 0}, {10, 0}}), 0);
        REQUIRE(d.size() == 3);
        CHECK(d.pairs()[0] == PersistencePair{0, 3});
        CHECK(d.pairs()[1] == PersistencePair{0, 7});
        CHECK(d.pairs()[2].essential());
    }
    SUBCASE("ball convention halves the deaths") {
        RipsConfig c;
        c.convention_scale = 0.5;
        const auto d = rips_diagram(PointCloud({{0, 0}, {3, 4}}), 0, c);
        CHECK(d.pairs()[0] == PersistencePair{0, 2.5});
    }
}

TEST_CASE("degree-1 examples") {
    SUBCASE("unit square") {
        const auto d = rips_diagram(PointCloud({{0, 0}, {1, 0}, {1, 1}, {0, 1}}), 1);
        REQUIRE(d.size() == 1);
        CHECK(d.pairs()[0].birth == 1.0);
        CHECK(d.pairs()[0].death == doctest::Approx(std::sqrt(2.0)).epsilon(1e-12));
    }
    SUBCASE("equilateral triangle has no persistent cycle") {
        const double s = 7.0;
        const auto d = rips_diagram(PointCloud({{0, 0}, {s, 0}, {s / 2, s * std::sqrt(3.0) / 2}}), 1);
        CHECK(d.empty());
    }
    SUBCASE("fewer than three points") {
        CHECK(rips_diagram(PointCloud({{0, 0}, {1, 1}}), 1).empty());
    }
    SUBCASE("hexagon cycle dies when the long diagonals appear") {
        std::vector<Point2> pts;
        for (int k = 0; k < 6; ++k) pts.push_back({10 * std::cos(k * M_PI / 3), 10 * std::sin(k * M_PI / 3)});
        const auto d = rips_diagram(PointCloud(pts), 1);
        REQUIRE(d.size() == 1);
        CHECK(d.pairs()[0].birth == doctest::Approx(10.0));
        CHECK(d.pairs()[0].death == doctest::Approx(10.0 * std::sqrt(3.0)));
    }
    SUBCASE("an edge cap below the death truncates the cycle at the cap") {
        RipsConfig c;
        c.edge_cap = 1.2;
        const auto d = rips_diagram(PointCloud({{0, 0}, {1, 0}, {1, 1}, {0, 1}}), 1, c);
        REQUIRE(d.size() == 1);
        CHECK(d.pairs()[0] == PersistencePair{1.0, 1.2});
        CHECK(d.essential_count() == 0);
    }
}

TEST_CASE("betti_at examples") {
    const PointCloud two({{0, 0}, {5, 0}});
    CHECK(betti_at(two, 0, 2.0) == 2);
    CHECK(betti_at(two, 0, 6.0) == 1);
    const PointCloud square({{0, 0}, {1, 0}, {1, 1}, {0, 1}});
    CHECK(betti_at(square, 1, 1.2) == 1);
    CHECK(betti_at(square, 1, 1.5) == 0);
}

TEST_CASE("oracle sanity") {
    const PointCloud square({{0, 0}, {1, 0}, {1, 1}, {0, 1}});
    CHECK(oracle::betti(square, 0, 0.0) == 4);
    CHECK(oracle::betti(square, 1, 1.2) == 1);
    CHECK(oracle::betti(square, 1, 1.5) == 0);
}

TEST_CASE("betti_at agrees with the explicit rank oracle") {
    std::mt19937_64 rng(2024);
    std::uniform_real_distribution<double> tdist(0.0, 150.0);
    for (int trial = 0; trial < 100; ++trial) {
        const auto cloud = oracle::random_cloud(rng, 1, 8);
        const auto d0 = rips_diagram(cloud, 0);
        const auto d1 = rips_diagram(cloud, 1);
        for (int k = 0; k < 10; ++k) {
            const double t = tdist(rng);
            CHECK(betti_at(d0, t) == oracle::betti(cloud, 0, t));
            CHECK(betti_at(d1, t) == oracle::betti(cloud, 1, t));
        }
    }
}

TEST_CASE("diagram invariants") {
    std::mt19937_64 rng(99);
    for (int trial = 0; trial < 40; ++trial) {
        const auto cloud = oracle::random_cloud(rng, 1, 25);
        const auto d0 = rips_diagram(cloud, 0);
        const auto d1 = rips_diagram(cloud, 1);
        CHECK(d0.size() == cloud.size());
        CHECK(d0.essential_count() == 1);
        CHECK(d1.essential_count() == 0);

        // point order does not matter
        std::vector<Point2> shuffled(cloud.points().begin(), cloud.points().end());
        std::shuffle(shuffled.begin(), shuffled.end(), rng);
        CHECK(rips_diagram(PointCloud(shuffled), 1) == d1);

        // scaling coordinates by c scales every finite value by c
        const double c = 2.5;
        std::vector<Point2> scaled;
        for (const auto& p : cloud.points()) scaled.push_back({p.x * c, p.y * c});
        const auto s1 = rips_diagram(PointCloud(scaled), 1);
        const auto s0 = rips_diagram(PointCloud(scaled), 0);
        REQUIRE(s1.size() == d1.size());
        for (std::size_t i = 0; i < d1.size(); ++i) {
            CHECK(s1.pairs()[i].birth == doctest::Approx(c * d1.pairs()[i].birth).epsilon(1e-12));
            CHECK(s1.pairs()[i].death == doctest::Approx(c * d1.pairs()[i].death).epsilon(1e-12));
        }
        for (std::size_t i = 0; i + 1 < d0.size(); ++i) {
            CHECK(s0.pairs()[i].death == doctest::Approx(c * d0.pairs()[i].death).epsilon(1e-12));
        }
    }
}

TEST_CASE("farthest point subsample") {
    std::vector<Point2> pts;
    for (int i = 0; i < 50; ++i) pts.push_back({static_cast<double>(i), 0.0});
    const auto sub = farthest_point_subsample(PointCloud(pts), 3);
    REQUIRE(sub.size() == 3);
    // seed (0,0), then the far end, then the midpoint
    CHECK(sub[0] == Point2{0, 0});
    CHECK(sub[1] == Point2{24, 0});
    CHECK(sub[2] == Point2{49, 0});
    CHECK(farthest_point_subsample(PointCloud(pts), 100).size() == 50);

    RipsConfig c;
    c.max_points = 3;
    CHECK(rips_diagram(PointCloud(pts), 0, c).size() == 3);
}

TEST_CASE("geometry discrimination: closer clusters merge earlier") {
    auto two_clusters = [](double gap) {
        std::vector<Point2> pts;
        for (int i = 0; i < 4; ++i) {
            pts.push_back({static_cast<double>(i % 2), static_cast<double>(i / 2)});
            pts.push_back({1.0 + gap + static_cast<double>(i % 2), static_cast<double>(i / 2)});
        }
        return PointCloud(pts);
    };
    const auto near = rips_diagram(two_clusters(5), 0).finite_part();
    const auto far = rips_diagram(two_clusters(15), 0).finite_part();
    CHECK(near.pairs().back().death == doctest::Approx(5.0));
    CHECK(far.pairs().back().death == doctest::Approx(15.0));
    CHECK(near.pairs().back().death < far.pairs().back().death);
}

TEST_CASE("shape discrimination: a bump changes the degree-1 diagram") {
    const auto circle = oracle::disk_mask(64, 64, 32, 32, 15);
    auto bumped = circle;
    const auto bump = oracle::disk_mask(64, 64, 32 + 15 * 0.7071 + 3, 32 - 15 * 0.7071 - 3, 5);
    for (std::size_t y = 0; y < 64; ++y)
        for (std::size_t x = 0; x < 64; ++x)
            if (bump.at(x, y)) bumped.set(x, y, true);
    const auto dc = rips_diagram(extract_contour(circle), 1);
    const auto db = rips_diagram(extract_contour(bumped), 1);
    CHECK(dc != db);
    CHECK(wasserstein(dc, db).value > 0.0);
    // both still have one dominant loop
    auto long_bars = [](const PersistenceDiagram& d) {
        return std::count_if(d.pairs().begin(), d.pairs().end(), [](auto& p) { return p.persistence() > 10; });
    };
    CHECK(long_bars(dc) == 1);
    CHECK(long_bars(db) == 1);
}
