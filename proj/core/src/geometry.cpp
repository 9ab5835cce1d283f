#include "topoloss/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include "topoloss/error.hpp"

namespace topoloss {

BinaryMask::BinaryMask(std::size_t width, std::size_t height)
    : BinaryMask(width, height, std::vector<std::uint8_t>(width * height, 0)) {}

BinaryMask::BinaryMask(std::size_t width, std::size_t height, std::vector<std::uint8_t> data)
    : width_(width), height_(height), data_(std::move(data)) {
    if (width_ == 0 || height_ == 0) {
        throw InvalidArgument("mask dimensions must be positive");
    }
    if (data_.size() != width_ * height_) {
        throw InvalidArgument("mask data length " + std::to_string(data_.size()) +
                              " does not match " + std::to_string(width_) + "x" +
                              std::to_string(height_));
    }
    if (std::any_of(data_.begin(), data_.end(), [](std::uint8_t v) { return v > 1; })) {
        throw InvalidArgument("mask elements must be 0 or 1");
    }
}

std::size_t BinaryMask::foreground_count() const noexcept {
    return static_cast<std::size_t>(std::count(data_.begin(), data_.end(), std::uint8_t{1}));
}

PointCloud::PointCloud(std::vector<Point2> points) : points_(std::move(points)) {
    for (const auto& p : points_) {
        if (!std::isfinite(p.x) || !std::isfinite(p.y)) {
            throw InvalidArgument("point coordinates must be finite");
        }
    }
    std::sort(points_.begin(), points_.end(), [](const Point2& a, const Point2& b) {
        return a.y != b.y ? a.y < b.y : a.x < b.x;
    });
    points_.erase(std::unique(points_.begin(), points_.end()), points_.end());
}

BinaryMask ComponentLabeling::component_mask(std::uint32_t id) const {
    BinaryMask mask(width, height);
    for (std::size_t i = 0; i < labels.size(); ++i) {
        if (labels[i] == id) mask.set(i % width, i / width, true);
    }
    return mask;
}

PointCloud extract_contour(const BinaryMask& mask) {
    const std::size_t w = mask.width();
    const std::size_t h = mask.height();
    auto background = [&](std::ptrdiff_t x, std::ptrdiff_t y) {
        if (x < 0 || y < 0 || x >= static_cast<std::ptrdiff_t>(w) ||
            y >= static_cast<std::ptrdiff_t>(h)) {
            return true;
        }
        return mask.at(static_cast<std::size_t>(x), static_cast<std::size_t>(y)) == 0;
    };

    std::vector<Point2> points;
    for (std::size_t y = 0; y < h; ++y) {
        for (std::size_t x = 0; x < w; ++x) {
            if (mask.at(x, y) == 0) continue;
            const auto sx = static_cast<std::ptrdiff_t>(x);
            const auto sy = static_cast<std::ptrdiff_t>(y);
            if (background(sx - 1, sy) || background(sx + 1, sy) || background(sx, sy - 1) ||
                background(sx, sy + 1)) {
                points.push_back({static_cast<double>(x), static_cast<double>(y)});
            }
        }
    }
    return PointCloud(std::move(points));
}

ComponentLabeling label_components(const BinaryMask& mask, Connectivity connectivity) {
    const std::size_t w = mask.width();
    const std::size_t h = mask.height();

    ComponentLabeling out;
    out.width = w;
    out.height = h;
    out.labels.assign(w * h, 0);
    out.component_areas.push_back(0);

    static constexpr int kOffsets4[4][2] = {{-1, 0}, {1, 0}, {0, -1}, {0, 1}};
    static constexpr int kOffsets8[8][2] = {{-1, -1}, {0, -1}, {1, -1}, {-1, 0},
                                            {1, 0},   {-1, 1}, {0, 1},  {1, 1}};
    const std::span<const int[2]> offsets = connectivity == Connectivity::Four
                                                ? std::span<const int[2]>(kOffsets4)
                                                : std::span<const int[2]>(kOffsets8);

    std::vector<std::size_t> stack;
    std::uint32_t next_id = 0;
    for (std::size_t start = 0; start < w * h; ++start) {
        if (mask.data()[start] == 0 || out.labels[start] != 0) continue;
        const std::uint32_t id = ++next_id;
        std::size_t area = 0;
        out.labels[start] = id;
        stack.push_back(start);
        while (!stack.empty()) {
            const std::size_t cur = stack.back();
            stack.pop_back();
            ++area;
            const auto cx = static_cast<std::ptrdiff_t>(cur % w);
            const auto cy = static_cast<std::ptrdiff_t>(cur / w);
            for (const auto& off : offsets) {
                const std::ptrdiff_t nx = cx + off[0];
                const std::ptrdiff_t ny = cy + off[1];
                if (nx < 0 || ny < 0 || nx >= static_cast<std::ptrdiff_t>(w) ||
                    ny >= static_cast<std::ptrdiff_t>(h)) {
                    continue;
                }
                const std::size_t n = static_cast<std::size_t>(ny) * w + static_cast<std::size_t>(nx);
                if (mask.data()[n] != 0 && out.labels[n] == 0) {
                    out.labels[n] = id;
                    stack.push_back(n);
                }
            }
        }
        out.component_areas.push_back(area);
    }
    out.component_count = next_id;
    return out;
}

namespace {

double squared(const Point2& a, const Point2& b) {
    const double dx = a.x - b.x;
    const double dy = a.y - b.y;
    return dx * dx + dy * dy;
}

// Directed squared Hausdorff with the early-break scan: once a point of `from`
// finds a neighbour closer than the running maximum it cannot raise it.
double directed_squared(const PointCloud& from, const PointCloud& to) {
    double cmax = 0.0;
    for (const auto& p : from.points()) {
        double cmin = std::numeric_limits<double>::infinity();
        for (const auto& q : to.points()) {
            const double d = squared(p, q);
            if (d < cmin) {
                cmin = d;
                if (cmin <= cmax) break;
            }
        }
        cmax = std::max(cmax, cmin);
    }
    return cmax;
}

}  // namespace

double hausdorff(const PointCloud& a, const PointCloud& b) {
    if (a.empty() || b.empty()) {
        throw InvalidArgument("Hausdorff distance is undefined for an empty point cloud");
    }
    return std::sqrt(std::max(directed_squared(a, b), directed_squared(b, a)));
}

double min_distance(const PointCloud& a, const PointCloud& b) {
    if (a.empty() || b.empty()) {
        throw InvalidArgument("distance to an empty point cloud is undefined");
    }
    double best = std::numeric_limits<double>::infinity();
    for (const auto& p : a.points()) {
        for (const auto& q : b.points()) best = std::min(best, squared(p, q));
    }
    return std::sqrt(best);
}

}  // namespace topoloss
