#include "codetopics/math.hpp"

#include <limits>

#include "codetopics/errors.hpp"

namespace codetopics {

std::vector<int> min_cost_assignment(const DenseMatrix& cost) {
    if (cost.rows != cost.cols) {
        throw ValidationError("assignment needs a square cost matrix, got " +
                              std::to_string(cost.rows) + "x" +
                              std::to_string(cost.cols));
    }
    const int n = static_cast<int>(cost.rows);
    if (n == 0) {
        return {};
    }

    constexpr double kInf = std::numeric_limits<double>::infinity();
    // 1-indexed with a sentinel column 0; p[j] = row matched to column j.
    std::vector<double> u(n + 1, 0.0);
    std::vector<double> v(n + 1, 0.0);
    std::vector<int> p(n + 1, 0);
    std::vector<int> way(n + 1, 0);

    for (int i = 1; i <= n; ++i) {
        p[0] = i;
        int j0 = 0;
        std::vector<double> min_slack(n + 1, kInf);
        std::vector<char> used(n + 1, 0);
        do {
            used[j0] = 1;
            const int i0 = p[j0];
            int j1 = 0;
            double delta = kInf;
            for (int j = 1; j <= n; ++j) {
                if (used[j]) {
                    continue;
                }
                const double reduced = cost.at(i0 - 1, j - 1) - u[i0] - v[j];
                if (reduced < min_slack[j]) {
                    min_slack[j] = reduced;
                    way[j] = j0;
                }
                if (min_slack[j] < delta) {
                    delta = min_slack[j];
                    j1 = j;
                }
            }
            for (int j = 0; j <= n; ++j) {
                if (used[j]) {
                    u[p[j]] += delta;
                    v[j] -= delta;
                } else {
                    min_slack[j] -= delta;
                }
            }
            j0 = j1;
        } while (p[j0] != 0);
        do {
            const int j1 = way[j0];
            p[j0] = p[j1];
            j0 = j1;
        } while (j0 != 0);
    }

    std::vector<int> assignment(n, -1);
    for (int j = 1; j <= n; ++j) {
        assignment[p[j] - 1] = j - 1;
    }
    return assignment;
}

} // namespace codetopics
