#pragma once

#include <cstddef>
#include <limits>
#include <optional>
#include <vector>

#include "topoloss/geometry.hpp"

namespace topoloss {

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

struct PersistencePair {
    double birth = 0.0;
    double death = kInfinity;

    bool essential() const noexcept { return death == kInfinity; }
    double persistence() const noexcept { return death - birth; }

    friend bool operator==(const PersistencePair&, const PersistencePair&) = default;
    friend auto operator<=>(const PersistencePair&, const PersistencePair&) = default;
};

/// Multiset of (birth, death) pairs for one homology degree, sorted by (birth, death).
class PersistenceDiagram {
public:
    PersistenceDiagram() = default;
    /// Validates every pair (birth >= 0, death > birth) and sorts.
    PersistenceDiagram(int degree, std::vector<PersistencePair> pairs);

    int degree() const noexcept { return degree_; }
    const std::vector<PersistencePair>& pairs() const noexcept { return pairs_; }
    std::size_t size() const noexcept { return pairs_.size(); }
    bool empty() const noexcept { return pairs_.empty(); }
    std::size_t essential_count() const noexcept;

    /// Copy without the essential (infinite-death) pairs.
    PersistenceDiagram finite_part() const;

    friend bool operator==(const PersistenceDiagram&, const PersistenceDiagram&) = default;

private:
    int degree_ = 0;
    std::vector<PersistencePair> pairs_;
};

struct RipsConfig {
    std::size_t max_points = 128;
    /// Largest edge admitted to the degree-1 complex; empty means the cloud diameter.
    std::optional<double> edge_cap;
    /// Multiplier on Euclidean edge lengths: 1 for the usual Rips convention,
    /// 0.5 for the ball-radius (offset) convention.
    double convention_scale = 1.0;

    void validate() const;
};

/// Farthest-point subsample of at most `max_points` points, seeded at the first
/// point in row-major order. Returns the cloud unchanged when it is small enough.
PointCloud farthest_point_subsample(const PointCloud& cloud, std::size_t max_points);

/// Vietoris-Rips persistence of `cloud` in degree 0 or 1.
PersistenceDiagram rips_diagram(const PointCloud& cloud, int degree, const RipsConfig& config = {});

/// Number of diagram pairs alive at scale t (birth <= t < death).
std::size_t betti_at(const PersistenceDiagram& diagram, double t);
std::size_t betti_at(const PointCloud& cloud, int degree, double t, const RipsConfig& config = {});

}  // namespace topoloss
