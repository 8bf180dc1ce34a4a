#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <stdexcept>

namespace bellvis {

// C(n, k) as a double. Exact for every value representable in 53 bits,
// accurate to ~1e-15 relative error beyond that.
inline double binomial(int n, int k) {
    if (k < 0 || k > n) return 0.0;
    if (k > n - k) k = n - k;
    double c = 1.0;
    for (int i = 1; i <= k; ++i) c = c * double(n - k + i) / double(i);
    return c;
}

inline double log_binomial(int n, int k) {
    if (k < 0 || k > n) return -std::numeric_limits<double>::infinity();
    return std::lgamma(n + 1.0) - std::lgamma(k + 1.0) - std::lgamma(n - k + 1.0);
}

// Seeded RNG with a self-contained Box-Muller normal sampler so that
// streams are reproducible across standard libraries (std::normal_distribution
// is not pinned by the standard).
class SeededRng {
public:
    explicit SeededRng(std::uint64_t seed) : rng_(seed) {}

    // uniform in [0, 1)
    double uniform() { return double(rng_() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    double normal() {
        if (has_spare_) {
            has_spare_ = false;
            return spare_;
        }
        double u1 = 0.0;
        do { u1 = uniform(); } while (u1 <= 0.0);
        double u2 = uniform();
        double r = std::sqrt(-2.0 * std::log(u1));
        double a = 2.0 * M_PI * u2;
        spare_ = r * std::sin(a);
        has_spare_ = true;
        return r * std::cos(a);
    }

    std::uint64_t raw() { return rng_(); }

private:
    std::mt19937_64 rng_;
    bool has_spare_ = false;
    double spare_ = 0.0;
};

// Derives independent per-task seeds from a base seed (splitmix64 step).
inline std::uint64_t derive_seed(std::uint64_t base, std::uint64_t index) {
    std::uint64_t z = base + 0x9e3779b97f4a7c15ull * (index + 1);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
}

// Thrown when a scenario's deterministic-strategy count exceeds the
// configured cap; callers surface this distinctly from numerical failures.
class SizeRefusalError : public std::runtime_error {
public:
    SizeRefusalError(std::uint64_t count, std::uint64_t cap, const std::string& what)
        : std::runtime_error(what), strategy_count(count), strategy_cap(cap) {}
    std::uint64_t strategy_count;
    std::uint64_t strategy_cap;
};

// Numerical failure inside the LP solver (distinct from size refusal;
// infeasibility cannot occur because v = 0 is always feasible).
class SolverError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

} // namespace bellvis
