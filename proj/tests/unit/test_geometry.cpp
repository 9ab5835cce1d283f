#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "oracles.hpp"
#include "topoloss/error.hpp"
#include "topoloss/geometry.hpp"

using namespace topoloss;

namespace {

BinaryMask random_mask(std::mt19937_64& rng, std::size_t w, std::size_t h, double density) {
    std::bernoulli_distribution on(density);
    std::vector<std::uint8_t> data(w * h);
    for (auto& v : data) v = on(rng) ? 1 : 0;
    return BinaryMask(w, h, std::move(data));
}

}  // namespace

TEST_CASE("BinaryMask rejects invalid construction") {
    CHECK_THROWS_AS(BinaryMask(0, 3), InvalidArgument);
    CHECK_THROWS_AS(BinaryMask(2, 2, {0, 1, 1}), InvalidArgument);
    CHECK_THROWS_AS(BinaryMask(2, 1, {0, 2}), InvalidArgument);
}

TEST_CASE("PointCloud sorts row-major and deduplicates") {
    PointCloud c({{2, 1}, {0, 1}, {5, 0}, {0, 1}});
    REQUIRE(c.size() == 3);
    CHECK(c[0] == Point2{5, 0});
    CHECK(c[1] == Point2{0, 1});
    CHECK(c[2] == Point2{2, 1});
    CHECK_THROWS_AS(PointCloud({{NAN, 0}}), InvalidArgument);
}

TEST_CASE("extract_contour on small masks") {
    SUBCASE("isolated pixel is its own boundary") {
        BinaryMask m(3, 3);
        m.set(1, 1, true);
        const auto c = extract_contour(m);
        REQUIRE(c.size() == 1);
        CHECK(c[0] == Point2{1, 1});
    }
    SUBCASE("full 3x3 keeps the ring and drops the centre") {
        BinaryMask m(3, 3, std::vector<std::uint8_t>(9, 1));
        const auto c = extract_contour(m);
        CHECK(c.size() == 8);
        for (const auto& p : c.points()) CHECK_FALSE((p.x == 1 && p.y == 1));
    }
    SUBCASE("blank mask gives an empty cloud") {
        CHECK(extract_contour(BinaryMask(4, 4)).empty());
    }
}

TEST_CASE("extract_contour of a rasterized disk stays near the circle") {
    const auto disk = oracle::disk_mask(64, 64, 32, 32, 20);
    const auto c = extract_contour(disk);
    REQUIRE_FALSE(c.empty());
    for (const auto& p : c.points()) {
        const double r = std::hypot(p.x - 32, p.y - 32);
        CHECK(r >= 19.0);
        CHECK(r <= 20.5);
    }
}

TEST_CASE("contour properties on random masks") {
    std::mt19937_64 rng(11);
    for (int trial = 0; trial < 50; ++trial) {
        const auto m = random_mask(rng, 12, 9, 0.5);
        const auto c = extract_contour(m);
        for (const auto& p : c.points()) {
            CHECK(m.at(static_cast<std::size_t>(p.x), static_cast<std::size_t>(p.y)) == 1);
        }
        // every 4-connected component owns at least one contour pixel
        const auto lab = label_components(m, Connectivity::Four);
        std::vector<bool> seen(lab.component_count + 1, false);
        for (const auto& p : c.points()) {
            seen[lab.labels[static_cast<std::size_t>(p.y) * 12 + static_cast<std::size_t>(p.x)]] = true;
        }
        for (std::size_t id = 1; id <= lab.component_count; ++id) CHECK(seen[id]);
    }
}

TEST_CASE("label_components") {
    SUBCASE("two disjoint blocks") {
        BinaryMask m(6, 3);
        oracle::paint_rect(m, 0, 0, 2, 2);
        oracle::paint_rect(m, 4, 1, 2, 2);
        const auto lab = label_components(m);
        CHECK(lab.component_count == 2);
        CHECK(lab.component_areas[1] == 4);
        CHECK(lab.component_areas[2] == 4);
    }
    SUBCASE("empty mask") {
        CHECK(label_components(BinaryMask(5, 5)).component_count == 0);
    }
    SUBCASE("diagonal neighbours depend on connectivity") {
        BinaryMask m(4, 4);
        m.set(1, 1, true);
        m.set(2, 2, true);
        CHECK(label_components(m, Connectivity::Eight).component_count == 1);
        CHECK(label_components(m, Connectivity::Four).component_count == 2);
    }
    SUBCASE("ids follow row-major discovery") {
        BinaryMask m(5, 5);
        m.set(4, 0, true);  // first in row-major order
        m.set(0, 3, true);
        const auto lab = label_components(m);
        CHECK(lab.labels[4] == 1);
        CHECK(lab.labels[3 * 5] == 2);
    }
}

TEST_CASE("label_components invariants on random masks") {
    std::mt19937_64 rng(5);
    for (int trial = 0; trial < 50; ++trial) {
        const auto m = random_mask(rng, 10, 10, 0.4);
        for (auto conn : {Connectivity::Four, Connectivity::Eight}) {
            const auto lab = label_components(m, conn);
            std::size_t area_sum = 0;
            for (std::size_t id = 1; id <= lab.component_count; ++id) {
                CHECK(lab.component_areas[id] > 0);
                area_sum += lab.component_areas[id];
            }
            CHECK(area_sum == m.foreground_count());
            for (std::size_t i = 0; i < m.size(); ++i) {
                CHECK((lab.labels[i] != 0) == (m.data()[i] == 1));
                CHECK(lab.labels[i] <= lab.component_count);
            }
            const auto again = label_components(BinaryMask(m), conn);
            CHECK(again.labels == lab.labels);
        }
    }
}

TEST_CASE("hausdorff examples") {
    CHECK(hausdorff(PointCloud({{0, 0}}), PointCloud({{3, 4}})) == 5.0);
    const PointCloud a({{0, 0}, {10, 0}, {4, 7}});
    CHECK(hausdorff(a, a) == 0.0);
    CHECK(hausdorff(PointCloud({{0, 0}, {10, 0}}), PointCloud({{0, 0}})) == 10.0);
    CHECK_THROWS_AS(hausdorff(PointCloud(), a), InvalidArgument);
}

TEST_CASE("hausdorff matches a direct double loop and is a semimetric") {
    std::mt19937_64 rng(3);
    auto direct = [](const PointCloud& a, const PointCloud& b) {
        double h = 0.0;
        for (const auto& p : a.points()) {
            double m = INFINITY;
            for (const auto& q : b.points()) m = std::min(m, std::hypot(p.x - q.x, p.y - q.y));
            h = std::max(h, m);
        }
        return h;
    };
    for (int trial = 0; trial < 100; ++trial) {
        const auto a = oracle::random_cloud(rng, 1, 12, 20);
        const auto b = oracle::random_cloud(rng, 1, 12, 20);
        const double h = hausdorff(a, b);
        CHECK(h == doctest::Approx(std::max(direct(a, b), direct(b, a))).epsilon(1e-12));
        CHECK(h == hausdorff(b, a));
        CHECK(h >= 0.0);
        CHECK((h == 0.0) == (a == b));
    }
}
