#include <algorithm>
#include <cmath>
#include <limits>

#include "topoloss/error.hpp"
#include "topoloss/matching.hpp"

namespace topoloss {

// Potentials u (rows) and v (columns) are kept feasible, u[i] + v[j] <= cost(i, j);
// each row is inserted by a Dijkstra-like search over reduced costs.
Assignment solve_assignment(const CostMatrix& cost) {
    if (cost.rows() != cost.cols()) throw InvalidArgument("assignment cost matrix must be square");
    const std::size_t n = cost.rows();
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            const double c = cost(i, j);
            if (!std::isfinite(c) || c < 0.0) {
                throw InvalidArgument("assignment costs must be finite and non-negative");
            }
        }
    }

    Assignment result;
    if (n == 0) return result;

    constexpr double inf = std::numeric_limits<double>::infinity();
    // 1-based internally; column 0 is the virtual source.
    std::vector<double> u(n + 1, 0.0), v(n + 1, 0.0), minv(n + 1);
    std::vector<std::size_t> owner(n + 1, 0), way(n + 1, 0);
    std::vector<char> used(n + 1);

    for (std::size_t i = 1; i <= n; ++i) {
        owner[0] = i;
        std::size_t j0 = 0;
        std::fill(minv.begin(), minv.end(), inf);
        std::fill(used.begin(), used.end(), 0);
        do {
            used[j0] = 1;
            const std::size_t i0 = owner[j0];
            const double ui0 = u[i0];
            const double* row = cost.row(i0 - 1);
            double delta = inf;
            std::size_t j1 = 0;
            for (std::size_t j = 1; j <= n; ++j) {
                if (used[j]) continue;
                const double cur = row[j - 1] - ui0 - v[j];
                if (cur < minv[j]) {
                    minv[j] = cur;
                    way[j] = j0;
                }
                if (minv[j] < delta) {
                    delta = minv[j];
                    j1 = j;
                }
            }
            for (std::size_t j = 0; j <= n; ++j) {
                if (used[j]) {
                    u[owner[j]] += delta;
                    v[j] -= delta;
                } else {
                    minv[j] -= delta;
                }
            }
            j0 = j1;
        } while (owner[j0] != 0);
        do {
            const std::size_t j1 = way[j0];
            owner[j0] = owner[j1];
            j0 = j1;
        } while (j0 != 0);
    }

    result.row_to_col.assign(n, 0);
    for (std::size_t j = 1; j <= n; ++j) result.row_to_col[owner[j] - 1] = j - 1;
    for (std::size_t i = 0; i < n; ++i) result.total_cost += cost(i, result.row_to_col[i]);
    return result;
}

}  // namespace topoloss
