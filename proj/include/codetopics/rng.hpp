#pragma once

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <random>

namespace codetopics {

// Seeded random source used by every stochastic operation in the library.
//
// The engine is mt19937_64, whose output stream is fully specified by the
// standard and therefore identical on every platform. All variate
// transformations live here as well, because the std:: distribution classes
// are allowed to differ between standard libraries and would break the
// reproducibility contract. Chains derive their seeds as
// master_seed + chain_index.
class Rng {
public:
    static constexpr const char* kAlgorithm = "mt19937_64";

    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    std::uint64_t next_u64() { return engine_(); }

    // Uniform in [0, 1) with 53-bit resolution.
    double uniform01() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

    // Uniform integer in [0, n). Rejection sampling, so no modulo bias.
    std::uint64_t uniform_below(std::uint64_t n) {
        const std::uint64_t limit = n * (UINT64_MAX / n);
        std::uint64_t x;
        do {
            x = engine_();
        } while (x >= limit);
        return x % n;
    }

    // Standard normal via the Marsaglia polar method (no trig calls).
    double normal() {
        for (;;) {
            const double u = 2.0 * uniform01() - 1.0;
            const double v = 2.0 * uniform01() - 1.0;
            const double s = u * u + v * v;
            if (s > 0.0 && s < 1.0) {
                return u * std::sqrt(-2.0 * std::log(s) / s);
            }
        }
    }

    // Gamma(shape, 1) via Marsaglia-Tsang, with the usual boost for shape < 1.
    double gamma(double shape) {
        if (shape < 1.0) {
            double u;
            do {
                u = uniform01();
            } while (u <= 0.0);
            return gamma(shape + 1.0) * std::pow(u, 1.0 / shape);
        }
        const double d = shape - 1.0 / 3.0;
        const double c = 1.0 / std::sqrt(9.0 * d);
        for (;;) {
            double x;
            double v;
            do {
                x = normal();
                v = 1.0 + c * x;
            } while (v <= 0.0);
            v = v * v * v;
            const double u = uniform01();
            if (u < 1.0 - 0.0331 * x * x * x * x) {
                return d * v;
            }
            if (u <= 0.0 || std::log(u) < 0.5 * x * x + d * (1.0 - v + std::log(v))) {
                return d * v;
            }
        }
    }

    // Poisson(mean) via Knuth's product method. Large means are split with
    // the additivity identity so the loop stays short and exp(-mean) cannot
    // underflow.
    std::uint64_t poisson(double mean) {
        if (mean <= 0.0) {
            return 0;
        }
        if (mean > 64.0) {
            const double half = mean / 2.0;
            return poisson(half) + poisson(mean - half);
        }
        const double threshold = std::exp(-mean);
        std::uint64_t k = 0;
        double p = 1.0;
        do {
            ++k;
            p *= uniform01();
        } while (p > threshold);
        return k - 1;
    }

    // Symmetric Dirichlet(concentration) of dimension dim, written to out.
    // With very small concentrations individual gamma draws can underflow to
    // zero; a row that underflows entirely is redrawn.
    void dirichlet_symmetric(double concentration, std::size_t dim, double* out) {
        for (;;) {
            double total = 0.0;
            for (std::size_t i = 0; i < dim; ++i) {
                out[i] = gamma(concentration);
                total += out[i];
            }
            if (total > 0.0) {
                for (std::size_t i = 0; i < dim; ++i) {
                    out[i] /= total;
                }
                return;
            }
        }
    }

    friend bool operator==(const Rng& a, const Rng& b) { return a.engine_ == b.engine_; }

private:
    std::mt19937_64 engine_;
};

} // namespace codetopics
