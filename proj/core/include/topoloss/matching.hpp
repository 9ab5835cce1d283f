#pragma once

#include <cstddef>
#include <limits>
#include <string_view>
#include <vector>

#include "topoloss/rips.hpp"

namespace topoloss {

/// Row-major square matrix handed to the assignment solver.
class CostMatrix {
public:
    CostMatrix(std::size_t rows, std::size_t cols, double fill = 0.0)
        : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

    std::size_t rows() const noexcept { return rows_; }
    std::size_t cols() const noexcept { return cols_; }
    double& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
    double operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }
    const double* row(std::size_t r) const { return data_.data() + r * cols_; }

private:
    std::size_t rows_;
    std::size_t cols_;
    std::vector<double> data_;
};

struct Assignment {
    std::vector<std::size_t> row_to_col;
    double total_cost = 0.0;  // summed in row order
};

/// Exact minimum-cost perfect matching (shortest augmenting path Hungarian, O(n^3)).
/// Throws InvalidArgument for a non-square matrix or negative / non-finite entries.
Assignment solve_assignment(const CostMatrix& cost);

enum class GroundMetric { LInf, L2 };

std::string_view to_string(GroundMetric metric) noexcept;
GroundMetric parse_ground_metric(std::string_view name);

inline constexpr std::size_t kDiagonal = std::numeric_limits<std::size_t>::max();

/// One matched pair. Indices refer to positions in the input diagrams' `pairs()`;
/// kDiagonal marks a point sent to (or drawn from) the diagonal.
struct MatchedPair {
    std::size_t a = kDiagonal;
    std::size_t b = kDiagonal;

    friend bool operator==(const MatchedPair&, const MatchedPair&) = default;
};

struct DiagramDistanceReport {
    double value = 0.0;
    double order_q = 2.0;  // +inf for the bottleneck distance
    GroundMetric ground_metric = GroundMetric::LInf;
    std::vector<MatchedPair> matching;
};

double ground_distance(const PersistencePair& p, const PersistencePair& q, GroundMetric metric);
double diagonal_distance(const PersistencePair& p, GroundMetric metric);

/// Sum over an optimal partial matching of dist^q (no final root). Essential pairs
/// are excluded; their counts must agree. Throws InvalidArgument otherwise.
DiagramDistanceReport wasserstein(const PersistenceDiagram& a, const PersistenceDiagram& b,
                                  double q = 2.0, GroundMetric metric = GroundMetric::LInf);

/// Minimax matching cost under the L-infinity ground metric.
DiagramDistanceReport bottleneck(const PersistenceDiagram& a, const PersistenceDiagram& b);

}  // namespace topoloss
