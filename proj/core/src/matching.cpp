#include <algorithm>
#include <cmath>
#include <functional>
#include <string>
#include <utility>

#include "topoloss/error.hpp"
#include "topoloss/matching.hpp"

namespace topoloss {

std::string_view to_string(GroundMetric metric) noexcept {
    return metric == GroundMetric::LInf ? "linf" : "l2";
}

GroundMetric parse_ground_metric(std::string_view name) {
    if (name == "linf" || name == "Linf" || name == "LInf") return GroundMetric::LInf;
    if (name == "l2" || name == "L2") return GroundMetric::L2;
    throw InvalidArgument("unknown ground metric '" + std::string(name) + "' (expected linf or l2)");
}

double ground_distance(const PersistencePair& p, const PersistencePair& q, GroundMetric metric) {
    const double db = std::abs(p.birth - q.birth);
    const double dd = std::abs(p.death - q.death);
    return metric == GroundMetric::LInf ? std::max(db, dd) : std::hypot(db, dd);
}

double diagonal_distance(const PersistencePair& p, GroundMetric metric) {
    const double half = (p.death - p.birth) / 2.0;
    return metric == GroundMetric::LInf ? half : std::hypot(half, half);
}

namespace {

double power(double x, double q) {
    if (q == 1.0) return x;
    if (q == 2.0) return x * x;
    return std::pow(x, q);
}

struct FiniteIndices {
    std::vector<std::size_t> a;
    std::vector<std::size_t> b;
};

FiniteIndices check_and_index(const PersistenceDiagram& a, const PersistenceDiagram& b) {
    if (a.degree() != b.degree()) {
        throw InvalidArgument("cannot compare diagrams of degrees " + std::to_string(a.degree()) +
                              " and " + std::to_string(b.degree()));
    }
    if (a.essential_count() != b.essential_count()) {
        throw InvalidArgument("diagrams carry different numbers of essential classes (" +
                              std::to_string(a.essential_count()) + " vs " +
                              std::to_string(b.essential_count()) + ")");
    }
    FiniteIndices idx;
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (!a.pairs()[i].essential()) idx.a.push_back(i);
    }
    for (std::size_t j = 0; j < b.size(); ++j) {
        if (!b.pairs()[j].essential()) idx.b.push_back(j);
    }
    return idx;
}

// Augmented square layout: rows are A's points then one diagonal slot per B point;
// columns are B's points then one diagonal slot per A point.
CostMatrix augmented_costs(const PersistenceDiagram& a, const PersistenceDiagram& b,
                           const FiniteIndices& idx, GroundMetric metric,
                           const std::function<double(double)>& transform) {
    const std::size_t n = idx.a.size();
    const std::size_t m = idx.b.size();
    CostMatrix cost(n + m, n + m, 0.0);
    for (std::size_t r = 0; r < n; ++r) {
        const auto& p = a.pairs()[idx.a[r]];
        for (std::size_t c = 0; c < m; ++c) {
            cost(r, c) = transform(ground_distance(p, b.pairs()[idx.b[c]], metric));
        }
        const double to_diag = transform(diagonal_distance(p, metric));
        for (std::size_t c = m; c < n + m; ++c) cost(r, c) = to_diag;
    }
    for (std::size_t c = 0; c < m; ++c) {
        const double to_diag = transform(diagonal_distance(b.pairs()[idx.b[c]], metric));
        for (std::size_t r = n; r < n + m; ++r) cost(r, c) = to_diag;
    }
    return cost;
}

std::vector<MatchedPair> matching_from(const std::vector<std::size_t>& row_to_col,
                                       const FiniteIndices& idx) {
    const std::size_t n = idx.a.size();
    const std::size_t m = idx.b.size();
    std::vector<MatchedPair> out;
    for (std::size_t r = 0; r < row_to_col.size(); ++r) {
        const std::size_t c = row_to_col[r];
        if (r < n && c < m) {
            out.push_back({idx.a[r], idx.b[c]});
        } else if (r < n) {
            out.push_back({idx.a[r], kDiagonal});
        } else if (c < m) {
            out.push_back({kDiagonal, idx.b[c]});
        }
    }
    return out;
}

// Perfect matching restricted to entries <= threshold (Kuhn's augmenting paths).
bool perfect_matching_within(const CostMatrix& cost, double threshold,
                             std::vector<std::size_t>& row_to_col) {
    const std::size_t n = cost.rows();
    std::vector<std::size_t> col_owner(n, kDiagonal);
    std::vector<bool> visited(n);

    std::function<bool(std::size_t)> augment = [&](std::size_t r) {
        for (std::size_t c = 0; c < n; ++c) {
            if (visited[c] || cost(r, c) > threshold) continue;
            visited[c] = true;
            if (col_owner[c] == kDiagonal || augment(col_owner[c])) {
                col_owner[c] = r;
                return true;
            }
        }
        return false;
    };

    for (std::size_t r = 0; r < n; ++r) {
        std::fill(visited.begin(), visited.end(), false);
        if (!augment(r)) return false;
    }
    row_to_col.assign(n, 0);
    for (std::size_t c = 0; c < n; ++c) row_to_col[col_owner[c]] = c;
    return true;
}

}  // namespace

DiagramDistanceReport wasserstein(const PersistenceDiagram& a, const PersistenceDiagram& b,
                                  double q, GroundMetric metric) {
    if (!(q > 0.0) || !std::isfinite(q)) throw InvalidArgument("Wasserstein order q must be positive");
    const FiniteIndices idx = check_and_index(a, b);

    DiagramDistanceReport report;
    report.order_q = q;
    report.ground_metric = metric;
    if (idx.a.empty() && idx.b.empty()) return report;

    // Solve in a canonical argument order so swapping a and b is bit-exact.
    if (b.pairs() < a.pairs()) {
        report = wasserstein(b, a, q, metric);
        for (auto& m : report.matching) std::swap(m.a, m.b);
        return report;
    }

    const CostMatrix cost =
        augmented_costs(a, b, idx, metric, [q](double d) { return power(d, q); });
    const Assignment assignment = solve_assignment(cost);

    // Terms are summed in ascending order so the value does not depend on which
    // of several equal-cost matchings the solver returns.
    std::vector<double> terms;
    terms.reserve(assignment.row_to_col.size());
    for (std::size_t r = 0; r < assignment.row_to_col.size(); ++r) {
        terms.push_back(cost(r, assignment.row_to_col[r]));
    }
    std::sort(terms.begin(), terms.end());
    for (double t : terms) report.value += t;
    report.matching = matching_from(assignment.row_to_col, idx);
    return report;
}

DiagramDistanceReport bottleneck(const PersistenceDiagram& a, const PersistenceDiagram& b) {
    const FiniteIndices idx = check_and_index(a, b);

    DiagramDistanceReport report;
    report.order_q = kInfinity;
    report.ground_metric = GroundMetric::LInf;
    if (idx.a.empty() && idx.b.empty()) return report;

    const CostMatrix cost =
        augmented_costs(a, b, idx, GroundMetric::LInf, [](double d) { return d; });

    std::vector<double> candidates;
    candidates.reserve(cost.rows() * cost.cols());
    for (std::size_t r = 0; r < cost.rows(); ++r) {
        for (std::size_t c = 0; c < cost.cols(); ++c) candidates.push_back(cost(r, c));
    }
    std::sort(candidates.begin(), candidates.end());
    candidates.erase(std::unique(candidates.begin(), candidates.end()), candidates.end());

    // The largest candidate is always feasible (the full matrix admits any permutation).
    std::size_t lo = 0;
    std::size_t hi = candidates.size() - 1;
    std::vector<std::size_t> best;
    perfect_matching_within(cost, candidates[hi], best);
    while (lo < hi) {
        const std::size_t mid = lo + (hi - lo) / 2;
        std::vector<std::size_t> trial;
        if (perfect_matching_within(cost, candidates[mid], trial)) {
            hi = mid;
            best = std::move(trial);
        } else {
            lo = mid + 1;
        }
    }
    report.value = candidates[hi];
    report.matching = matching_from(best, idx);
    return report;
}

}  // namespace topoloss
