#pragma once

#include <random>

#include "quaternion.hpp"

namespace qjtest {

/// Deterministic quaternion generator for property-style suites.
class QuaternionGen {
public:
    explicit QuaternionGen(std::uint64_t seed) : rng_(seed) {}

    qjensen::Quaternion uniform(double lo = -1.0, double hi = 1.0) {
        std::uniform_real_distribution<double> d(lo, hi);
        return {d(rng_), d(rng_), d(rng_), d(rng_)};
    }

    qjensen::Quaternion nonzero(double lo = -1.0, double hi = 1.0) {
        for (;;) {
            const auto q = uniform(lo, hi);
            if (q.norm() > 1e-3) return q;
        }
    }

    qjensen::Quaternion unit() {
        std::normal_distribution<double> g(0.0, 1.0);
        for (;;) {
            qjensen::Quaternion q{g(rng_), g(rng_), g(rng_), g(rng_)};
            const double n = q.norm();
            if (n > 1e-6) return q * (1.0 / n);
        }
    }

    qjensen::Quaternion unit_imaginary() {
        std::normal_distribution<double> g(0.0, 1.0);
        for (;;) {
            qjensen::Quaternion q{0.0, g(rng_), g(rng_), g(rng_)};
            const double n = q.norm();
            if (n > 1e-6) return q * (1.0 / n);
        }
    }

    double real(double lo, double hi) {
        std::uniform_real_distribution<double> d(lo, hi);
        return d(rng_);
    }

    int integer(int lo, int hi) {
        std::uniform_int_distribution<int> d(lo, hi);
        return d(rng_);
    }

    std::mt19937_64& rng() { return rng_; }

private:
    std::mt19937_64 rng_;
};

inline double rel_err(double got, double want) {
    return std::abs(got - want) / std::max(1e-300, std::abs(want));
}

} // namespace qjtest
