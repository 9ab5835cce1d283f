#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace topoloss {

/// Row-major binary image; every element is 0 or 1.
class BinaryMask {
public:
    BinaryMask(std::size_t width, std::size_t height);
    BinaryMask(std::size_t width, std::size_t height, std::vector<std::uint8_t> data);

    std::size_t width() const noexcept { return width_; }
    std::size_t height() const noexcept { return height_; }
    std::size_t size() const noexcept { return data_.size(); }

    std::uint8_t at(std::size_t x, std::size_t y) const { return data_[y * width_ + x]; }
    void set(std::size_t x, std::size_t y, bool on) { data_[y * width_ + x] = on ? 1 : 0; }

    std::span<const std::uint8_t> data() const noexcept { return data_; }
    std::size_t foreground_count() const noexcept;

    friend bool operator==(const BinaryMask&, const BinaryMask&) = default;

private:
    std::size_t width_;
    std::size_t height_;
    std::vector<std::uint8_t> data_;
};

struct Point2 {
    double x = 0.0;  // column
    double y = 0.0;  // row

    friend bool operator==(const Point2&, const Point2&) = default;
};

/// Deduplicated point set kept in row-major (y, x) order.
class PointCloud {
public:
    PointCloud() = default;
    explicit PointCloud(std::vector<Point2> points);

    std::span<const Point2> points() const noexcept { return points_; }
    std::size_t size() const noexcept { return points_.size(); }
    bool empty() const noexcept { return points_.empty(); }
    const Point2& operator[](std::size_t i) const { return points_[i]; }

    friend bool operator==(const PointCloud&, const PointCloud&) = default;

private:
    std::vector<Point2> points_;
};

enum class Connectivity { Four = 4, Eight = 8 };

struct ComponentLabeling {
    std::size_t width = 0;
    std::size_t height = 0;
    std::vector<std::uint32_t> labels;        // 0 = background
    std::size_t component_count = 0;
    std::vector<std::size_t> component_areas;  // index 0 unused (always 0)

    /// Mask holding only the pixels of component `id`.
    BinaryMask component_mask(std::uint32_t id) const;
};

/// Foreground pixels with a background (or out-of-image) 4-neighbour.
PointCloud extract_contour(const BinaryMask& mask);

/// Connected components; ids follow row-major order of each component's first pixel.
ComponentLabeling label_components(const BinaryMask& mask,
                                   Connectivity connectivity = Connectivity::Eight);

/// Symmetric Hausdorff distance. Throws InvalidArgument if either cloud is empty.
double hausdorff(const PointCloud& a, const PointCloud& b);

/// Smallest pairwise distance between two non-empty clouds.
double min_distance(const PointCloud& a, const PointCloud& b);

}  // namespace topoloss
