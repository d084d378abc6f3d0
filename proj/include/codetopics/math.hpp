#pragma once

#include <cmath>
#include <cstddef>
#include <vector>

namespace codetopics {

// Dense row-major matrix of doubles. Just enough structure for the
// distributions this library passes around (phi, theta, cost matrices).
struct DenseMatrix {
    std::size_t rows = 0;
    std::size_t cols = 0;
    std::vector<double> values;

    DenseMatrix() = default;
    DenseMatrix(std::size_t r, std::size_t c, double fill = 0.0)
        : rows(r), cols(c), values(r * c, fill) {}

    double& at(std::size_t r, std::size_t c) { return values[r * cols + c]; }
    double at(std::size_t r, std::size_t c) const { return values[r * cols + c]; }

    const double* row(std::size_t r) const { return values.data() + r * cols; }
    double* row(std::size_t r) { return values.data() + r * cols; }

    bool empty() const { return values.empty(); }

    friend bool operator==(const DenseMatrix& a, const DenseMatrix& b) {
        return a.rows == b.rows && a.cols == b.cols && a.values == b.values;
    }
};

// log Gamma(x) for x > 0, Lanczos approximation (g = 7, 9 coefficients).
// Relative error is below 1e-13 over the arguments that occur here, which
// comfortably meets the 1e-10 accuracy the likelihood computation needs.
inline double log_gamma(double x) {
    static constexpr double kCoefficients[9] = {
        0.99999999999980993,      676.5203681218851,     -1259.1392167224028,
        771.32342877765313,       -176.61502916214059,   12.507343278686905,
        -0.13857109526572012,     9.9843695780195716e-6, 1.5056327351493116e-7,
    };
    static constexpr double kHalfLogTwoPi = 0.91893853320467274178;

    if (x < 0.5) {
        // Reflection: log Gamma(x) = log(pi / sin(pi x)) - log Gamma(1 - x).
        const double pi = 3.14159265358979323846;
        return std::log(pi / std::sin(pi * x)) - log_gamma(1.0 - x);
    }
    const double z = x - 1.0;
    double series = kCoefficients[0];
    for (int k = 1; k < 9; ++k) {
        series += kCoefficients[k] / (z + static_cast<double>(k));
    }
    const double t = z + 7.5;
    return kHalfLogTwoPi + (z + 0.5) * std::log(t) - t + std::log(series);
}

// Minimum-cost perfect matching on a square cost matrix (Kuhn-Munkres with
// potentials, O(n^3)). Returns assignment[row] = column.
std::vector<int> min_cost_assignment(const DenseMatrix& cost);

} // namespace codetopics
