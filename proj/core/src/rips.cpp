#include "topoloss/rips.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <iterator>
#include <map>
#include <numeric>
#include <string>
#include <tuple>

#include "topoloss/error.hpp"

namespace topoloss {

PersistenceDiagram::PersistenceDiagram(int degree, std::vector<PersistencePair> pairs)
    : degree_(degree), pairs_(std::move(pairs)) {
    if (degree_ < 0) throw InvalidArgument("homology degree must be non-negative");
    for (const auto& p : pairs_) {
        if (!(p.birth >= 0.0) || !std::isfinite(p.birth)) {
            throw InvalidArgument("persistence pair birth must be finite and >= 0");
        }
        if (!(p.death > p.birth)) {
            throw InvalidArgument("persistence pair death must exceed birth");
        }
    }
    std::sort(pairs_.begin(), pairs_.end());
}

std::size_t PersistenceDiagram::essential_count() const noexcept {
    return static_cast<std::size_t>(
        std::count_if(pairs_.begin(), pairs_.end(), [](const auto& p) { return p.essential(); }));
}

PersistenceDiagram PersistenceDiagram::finite_part() const {
    std::vector<PersistencePair> finite;
    std::copy_if(pairs_.begin(), pairs_.end(), std::back_inserter(finite),
                 [](const auto& p) { return !p.essential(); });
    return PersistenceDiagram(degree_, std::move(finite));
}

void RipsConfig::validate() const {
    if (max_points < 3) throw InvalidArgument("max_points must be at least 3");
    if (edge_cap && !(std::isfinite(*edge_cap) && *edge_cap > 0.0)) {
        throw InvalidArgument("edge_cap must be finite and positive");
    }
    if (convention_scale != 1.0 && convention_scale != 0.5) {
        throw InvalidArgument("convention_scale must be 1 or 0.5");
    }
}

namespace {

double squared_distance(const Point2& a, const Point2& b) {
    const double dx = a.x - b.x;
    const double dy = a.y - b.y;
    return dx * dx + dy * dy;
}

class DisjointSets {
public:
    explicit DisjointSets(std::size_t n) : parent_(n), rank_(n, 0) {
        std::iota(parent_.begin(), parent_.end(), std::size_t{0});
    }

    std::size_t find(std::size_t x) {
        while (parent_[x] != x) {
            parent_[x] = parent_[parent_[x]];
            x = parent_[x];
        }
        return x;
    }

    bool unite(std::size_t a, std::size_t b) {
        a = find(a);
        b = find(b);
        if (a == b) return false;
        if (rank_[a] < rank_[b]) std::swap(a, b);
        parent_[b] = a;
        if (rank_[a] == rank_[b]) ++rank_[a];
        return true;
    }

private:
    std::vector<std::size_t> parent_;
    std::vector<std::uint8_t> rank_;
};

/// Dense symmetric matrix of scaled Euclidean distances.
class DistanceMatrix {
public:
    DistanceMatrix(const PointCloud& cloud, double scale) : n_(cloud.size()), d_(n_ * n_, 0.0) {
        for (std::size_t i = 0; i < n_; ++i) {
            for (std::size_t j = i + 1; j < n_; ++j) {
                const double v = scale * std::sqrt(squared_distance(cloud[i], cloud[j]));
                d_[i * n_ + j] = v;
                d_[j * n_ + i] = v;
            }
        }
    }

    std::size_t size() const { return n_; }
    double operator()(std::size_t i, std::size_t j) const { return d_[i * n_ + j]; }

private:
    std::size_t n_;
    std::vector<double> d_;
};

struct Edge {
    double weight;
    std::uint32_t a;  // a < b
    std::uint32_t b;

    friend auto operator<=>(const Edge& l, const Edge& r) {
        return std::tie(l.weight, l.a, l.b) <=> std::tie(r.weight, r.a, r.b);
    }
    friend bool operator==(const Edge&, const Edge&) = default;
};

struct Triangle {
    double diameter;
    std::uint32_t a;  // a < b < c
    std::uint32_t b;
    std::uint32_t c;

    friend auto operator<=>(const Triangle& l, const Triangle& r) {
        return std::tie(l.diameter, l.a, l.b, l.c) <=> std::tie(r.diameter, r.a, r.b, r.c);
    }
    friend bool operator==(const Triangle&, const Triangle&) = default;
};

std::vector<Edge> sorted_edges(const DistanceMatrix& dist, double cap) {
    std::vector<Edge> edges;
    const std::size_t n = dist.size();
    edges.reserve(n * (n - 1) / 2);
    for (std::uint32_t i = 0; i < n; ++i) {
        for (std::uint32_t j = i + 1; j < n; ++j) {
            if (dist(i, j) <= cap) edges.push_back({dist(i, j), i, j});
        }
    }
    std::sort(edges.begin(), edges.end());
    return edges;
}

PersistenceDiagram degree0(const DistanceMatrix& dist) {
    const std::size_t n = dist.size();
    std::vector<PersistencePair> pairs;
    DisjointSets sets(n);
    for (const auto& e : sorted_edges(dist, kInfinity)) {
        if (sets.unite(e.a, e.b) && e.weight > 0.0) pairs.push_back({0.0, e.weight});
    }
    pairs.push_back({0.0, kInfinity});
    return PersistenceDiagram(0, std::move(pairs));
}

std::vector<Triangle> cofacets(const DistanceMatrix& dist, const Edge& e, double cap) {
    std::vector<Triangle> out;
    const std::size_t n = dist.size();
    for (std::uint32_t k = 0; k < n; ++k) {
        if (k == e.a || k == e.b) continue;
        const double diam = std::max({e.weight, dist(e.a, k), dist(e.b, k)});
        if (diam > cap) continue;
        std::array<std::uint32_t, 3> v{e.a, e.b, k};
        std::sort(v.begin(), v.end());
        out.push_back({diam, v[0], v[1], v[2]});
    }
    std::sort(out.begin(), out.end());
    return out;
}

// Persistent cohomology in degree 1: coboundary columns of the positive edges
// are reduced in reverse filtration order; the pivot of a column is its
// earliest cofacet. Edges of the minimum spanning forest are paired with
// vertices in degree 0 and are cleared up front.
PersistenceDiagram degree1(const DistanceMatrix& dist, double cap) {
    const std::vector<Edge> edges = sorted_edges(dist, cap);

    std::vector<bool> negative(edges.size(), false);
    DisjointSets sets(dist.size());
    for (std::size_t i = 0; i < edges.size(); ++i) {
        negative[i] = sets.unite(edges[i].a, edges[i].b);
    }

    std::map<Triangle, std::vector<Triangle>> reduced_by_pivot;
    std::vector<PersistencePair> pairs;
    std::vector<Triangle> scratch;

    for (std::size_t idx = edges.size(); idx-- > 0;) {
        if (negative[idx]) continue;
        const Edge& e = edges[idx];
        std::vector<Triangle> column = cofacets(dist, e, cap);
        while (!column.empty()) {
            auto it = reduced_by_pivot.find(column.front());
            if (it == reduced_by_pivot.end()) break;
            scratch.clear();
            std::set_symmetric_difference(column.begin(), column.end(), it->second.begin(),
                                          it->second.end(), std::back_inserter(scratch));
            column.swap(scratch);
        }
        if (column.empty()) {
            // Cycle still alive at the cap: only reachable with a cap below the diameter.
            if (cap > e.weight && std::isfinite(cap)) pairs.push_back({e.weight, cap});
            continue;
        }
        const double death = column.front().diameter;
        if (death > e.weight) pairs.push_back({e.weight, death});
        const Triangle pivot = column.front();
        reduced_by_pivot.emplace(pivot, std::move(column));
    }
    return PersistenceDiagram(1, std::move(pairs));
}

}  // namespace

PointCloud farthest_point_subsample(const PointCloud& cloud, std::size_t max_points) {
    if (cloud.size() <= max_points) return cloud;
    const std::size_t n = cloud.size();
    std::vector<double> nearest(n, kInfinity);
    std::vector<Point2> chosen;
    chosen.reserve(max_points);
    std::size_t next = 0;
    while (chosen.size() < max_points) {
        chosen.push_back(cloud[next]);
        const Point2 c = cloud[next];
        std::size_t far = 0;
        double far_d = -1.0;
        for (std::size_t i = 0; i < n; ++i) {
            nearest[i] = std::min(nearest[i], squared_distance(cloud[i], c));
            if (nearest[i] > far_d) {
                far_d = nearest[i];
                far = i;
            }
        }
        next = far;
    }
    return PointCloud(std::move(chosen));
}

PersistenceDiagram rips_diagram(const PointCloud& cloud, int degree, const RipsConfig& config) {
    config.validate();
    if (degree != 0 && degree != 1) {
        throw InvalidArgument("only homology degrees 0 and 1 are supported, got " +
                              std::to_string(degree));
    }
    if (cloud.empty()) {
        if (degree == 0) throw InvalidArgument("degree-0 persistence of an empty cloud");
        return PersistenceDiagram(1, {});
    }
    const PointCloud sample = farthest_point_subsample(cloud, config.max_points);
    const DistanceMatrix dist(sample, config.convention_scale);
    if (degree == 0) return degree0(dist);
    if (sample.size() < 3) return PersistenceDiagram(1, {});
    return degree1(dist, config.edge_cap.value_or(kInfinity));
}

std::size_t betti_at(const PersistenceDiagram& diagram, double t) {
    return static_cast<std::size_t>(std::count_if(
        diagram.pairs().begin(), diagram.pairs().end(),
        [t](const PersistencePair& p) { return p.birth <= t && t < p.death; }));
}

std::size_t betti_at(const PointCloud& cloud, int degree, double t, const RipsConfig& config) {
    if (cloud.empty()) throw InvalidArgument("betti_at requires a non-empty cloud");
    return betti_at(rips_diagram(cloud, degree, config), t);
}

}  // namespace topoloss
