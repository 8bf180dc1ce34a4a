#include "bellvis/formulas.hpp"

#include <cmath>
#include <stdexcept>

#include "bellvis/util.hpp"

namespace bellvis {

double ghz_critical_visibility(int n) {
    if (n < 2) throw std::invalid_argument("ghz_critical_visibility: n must be >= 2");
    return std::exp2(-(n - 1) / 2.0);
}

double dicke_critical_visibility(int n, int e) {
    if (n < 3) throw std::invalid_argument("dicke_critical_visibility: n must be >= 3");
    if (e < 1 || e > n - 1)
        throw std::invalid_argument("dicke_critical_visibility: need 1 <= e <= n-1");
    const double c = std::sqrt(2.0) - 1.0;
    // 1 / (1 + 2^{n-1} c / C(n,e)), evaluated in log space so that large n
    // neither overflows 2^{n-1} nor loses the tiny result
    const double log_a = (n - 1) * std::log(2.0) + std::log(c) - log_binomial(n, e);
    if (log_a > 500.0) return std::exp(-log_a);
    return 1.0 / (1.0 + std::exp(log_a));
}

double product_ghz2_critical_visibility(int n) {
    if (n < 3) throw std::invalid_argument("product_ghz2_critical_visibility: n must be >= 3");
    const double log_a = std::log(std::sqrt(2.0) - 1.0) + (n - 2) * std::log(2.0);
    if (log_a > 500.0) return std::exp(-log_a);
    return 1.0 / (1.0 + std::exp(log_a));
}

double product_ghz3_critical_visibility(int n) {
    if (n < 4) throw std::invalid_argument("product_ghz3_critical_visibility: n must be >= 4");
    if (n > 1000) return 8.0 * std::exp2(double(-n));
    return 8.0 / (8.0 + std::exp2(double(n)));
}

double dicke_cascade_quantum_value(int n, int e, double v) {
    if (n < 3) throw std::invalid_argument("dicke_cascade_quantum_value: n must be >= 3");
    if (e < 1 || e > n - 1)
        throw std::invalid_argument("dicke_cascade_quantum_value: need 1 <= e <= n-1");
    if (!(v >= 0.0 && v <= 1.0))
        throw std::invalid_argument("dicke_cascade_quantum_value: v must lie in [0, 1]");
    return v * (2.0 + std::exp2(double(n)) * (std::sqrt(2.0) - 1.0) / binomial(n, e));
}

std::vector<std::vector<MeasurementSetting>> dicke_cascade_settings(int n, int e) {
    if (n < 3) throw std::invalid_argument("dicke_cascade_settings: n must be >= 3");
    if (e < 1 || e > n - 1)
        throw std::invalid_argument("dicke_cascade_settings: need 1 <= e <= n-1");
    const double half_pi = M_PI / 2.0;
    std::vector<std::vector<MeasurementSetting>> settings(n);
    // CHSH-optimal pair for (|01>+|10>)/sqrt2: sigma_x/sigma_y against the
    // pi/4-rotated equatorial pair
    settings[0] = {MeasurementSetting::projective(half_pi, 0.0),
                   MeasurementSetting::projective(half_pi, half_pi)};
    settings[1] = {MeasurementSetting::projective(half_pi, M_PI / 4.0),
                   MeasurementSetting::projective(half_pi, -M_PI / 4.0)};
    // e-1 parties absorb an excitation (project onto |1>, A = +sigma_z);
    // the remaining n-e-1 project onto |0> (A = -sigma_z)
    for (int p = 2; p < n; ++p) {
        const bool onto_one = (p - 2) < (e - 1);
        settings[p] = {MeasurementSetting::projective(onto_one ? 0.0 : M_PI, 0.0)};
    }
    return settings;
}

int dicke_crossover_party_count(int e) {
    if (e < 1) throw std::invalid_argument("dicke_crossover_party_count: e must be >= 1");
    constexpr int kSearchCap = 10000;
    const double log2v = std::log(2.0);
    auto dicke_below_ghz = [&](int n) {
        // dicke < ghz  <=>  2^{n-1}(sqrt2-1)/C(n,e) > 2^{(n-1)/2} - 1
        const double lhs = (n - 1) * log2v + std::log(std::sqrt(2.0) - 1.0) - log_binomial(n, e);
        const double rhs = 0.5 * (n - 1) * log2v + std::log1p(-std::exp2(-(n - 1) / 2.0));
        return lhs > rhs;
    };
    // The comparison is not monotone in n: near n = e + 1 the Dicke state is
    // complement-W-like and can dip below the GHZ formula before rising
    // again (e.g. e = 10 at n = 11). The crossover of interest is the stable
    // one, so return the point after the last n at which GHZ still wins.
    int last_ghz_wins = -1;
    for (int n = std::max(3, e + 1); n <= kSearchCap; ++n)
        if (!dicke_below_ghz(n)) last_ghz_wins = n;
    if (last_ghz_wins < 0) return std::max(3, e + 1);
    if (last_ghz_wins >= kSearchCap)
        throw std::runtime_error("dicke_crossover_party_count: no crossover below search cap");
    return last_ghz_wins + 1;
}

int product_ghz2_crossover_party_count() {
    for (int n = 3; n <= 64; ++n) {
        if (product_ghz2_critical_visibility(n) < ghz_critical_visibility(n)) return n;
    }
    throw std::runtime_error("product_ghz2_crossover_party_count: no crossover found");
}

} // namespace bellvis
