#include "bellvis/bell_expression.hpp"

#include <bit>
#include <cmath>
#include <stdexcept>

#include "bellvis/util.hpp"

namespace bellvis {

namespace {

void validate_term(const Scenario& scenario, const ProbabilityTerm& t) {
    if (t.parties.size() != t.settings.size() || t.parties.size() != t.outcomes.size())
        throw std::invalid_argument("ProbabilityTerm: parties/settings/outcomes lengths differ");
    int prev = -1;
    for (std::size_t k = 0; k < t.parties.size(); ++k) {
        const int p = t.parties[k];
        if (p <= prev || p >= scenario.n_parties)
            throw std::invalid_argument("ProbabilityTerm: parties must be strictly increasing and in range");
        if (t.settings[k] < 0 || t.settings[k] >= scenario.settings_per_party[p])
            throw std::invalid_argument("ProbabilityTerm: setting out of range");
        if (t.outcomes[k] != 0 && t.outcomes[k] != 1)
            throw std::invalid_argument("ProbabilityTerm: outcomes must be 0/1");
        prev = p;
    }
}

} // namespace

void BellExpression::add_term(ProbabilityTerm term, double coefficient) {
    validate_term(scenario_, term);
    if (term.parties.empty()) {
        constant_ += coefficient;
        return;
    }
    auto [it, inserted] = terms_.try_emplace(std::move(term), coefficient);
    if (!inserted) {
        it->second += coefficient;
        if (it->second == 0.0) terms_.erase(it);
    } else if (it->second == 0.0) {
        terms_.erase(it);
    }
}

double BellExpression::evaluate(const Behavior& b) const {
    if (!(b.scenario() == scenario_))
        throw std::invalid_argument("BellExpression::evaluate: scenario mismatch");
    double value = constant_;
    std::vector<int> settings(scenario_.n_parties, 0);
    for (const auto& [term, coeff] : terms_) {
        std::fill(settings.begin(), settings.end(), 0);
        for (std::size_t k = 0; k < term.parties.size(); ++k)
            settings[term.parties[k]] = term.settings[k];
        const std::uint64_t js = scenario_.joint_setting_index(settings);
        value += coeff * b.marginal(js, term.parties, term.outcomes);
    }
    return value;
}

double BellExpression::evaluate_deterministic(const std::vector<std::vector<int>>& outcomes) const {
    double value = constant_;
    for (const auto& [term, coeff] : terms_) {
        bool fires = true;
        for (std::size_t k = 0; k < term.parties.size(); ++k) {
            if (outcomes[term.parties[k]][term.settings[k]] != term.outcomes[k]) {
                fires = false;
                break;
            }
        }
        if (fires) value += coeff;
    }
    return value;
}

double BellExpression::lhv_maximum(std::uint64_t strategy_cap) const {
    const int n = scenario_.n_parties;
    int total_bits = 0;
    for (int p = 0; p < n; ++p) total_bits += scenario_.settings_per_party[p];
    if (total_bits >= 63 || (std::uint64_t(1) << total_bits) > strategy_cap)
        throw SizeRefusalError(total_bits < 63 ? std::uint64_t(1) << total_bits : 0,
                               strategy_cap, "lhv_maximum: strategy count exceeds cap");
    const std::uint64_t count = std::uint64_t(1) << total_bits;

    std::vector<std::vector<int>> outcomes(n);
    for (int p = 0; p < n; ++p) outcomes[p].resize(scenario_.settings_per_party[p]);
    double best = -std::numeric_limits<double>::infinity();
    for (std::uint64_t g = 0; g < count; ++g) {
        std::uint64_t bits = g;
        for (int p = n - 1; p >= 0; --p) {
            for (int s = scenario_.settings_per_party[p] - 1; s >= 0; --s) {
                outcomes[p][s] = int(bits & 1);
                bits >>= 1;
            }
        }
        best = std::max(best, evaluate_deterministic(outcomes));
    }
    return best;
}

bool BellExpression::syntactically_equal(const BellExpression& other) const {
    if (terms_.size() != other.terms_.size()) return false;
    auto it = terms_.begin();
    auto jt = other.terms_.begin();
    TermOrder less;
    for (; it != terms_.end(); ++it, ++jt) {
        if (less(it->first, jt->first) || less(jt->first, it->first)) return false;
        if (std::abs(it->second - jt->second) > 1e-12) return false;
    }
    return true;
}

CorrelatorPolynomial CorrelatorPolynomial::constant(double c) {
    CorrelatorPolynomial p;
    if (c != 0.0) p.terms_[{}] = c;
    return p;
}

CorrelatorPolynomial CorrelatorPolynomial::observable(int party, int setting) {
    CorrelatorPolynomial p;
    p.terms_[{{party, setting}}] = 1.0;
    return p;
}

CorrelatorPolynomial& CorrelatorPolynomial::operator+=(const CorrelatorPolynomial& other) {
    for (const auto& [mono, coeff] : other.terms_) {
        auto [it, inserted] = terms_.try_emplace(mono, coeff);
        if (!inserted) {
            it->second += coeff;
            if (it->second == 0.0) terms_.erase(it);
        }
    }
    return *this;
}

CorrelatorPolynomial CorrelatorPolynomial::operator*(const CorrelatorPolynomial& other) const {
    CorrelatorPolynomial out;
    for (const auto& [ma, ca] : terms_) {
        for (const auto& [mb, cb] : other.terms_) {
            // merge by party; the builders never multiply observables of the
            // same party, so a collision is a logic error
            Monomial merged;
            merged.reserve(ma.size() + mb.size());
            std::size_t i = 0, j = 0;
            while (i < ma.size() && j < mb.size()) {
                if (ma[i].first == mb[j].first)
                    throw std::logic_error("CorrelatorPolynomial: repeated party in product");
                merged.push_back(ma[i].first < mb[j].first ? ma[i++] : mb[j++]);
            }
            while (i < ma.size()) merged.push_back(ma[i++]);
            while (j < mb.size()) merged.push_back(mb[j++]);
            auto [it, inserted] = out.terms_.try_emplace(std::move(merged), ca * cb);
            if (!inserted) {
                it->second += ca * cb;
                if (it->second == 0.0) out.terms_.erase(it);
            }
        }
    }
    return out;
}

CorrelatorPolynomial CorrelatorPolynomial::operator*(double s) const {
    CorrelatorPolynomial out;
    if (s == 0.0) return out;
    for (const auto& [mono, coeff] : terms_) out.terms_[mono] = coeff * s;
    return out;
}

CorrelatorPolynomial CorrelatorPolynomial::operator+(const CorrelatorPolynomial& other) const {
    CorrelatorPolynomial out = *this;
    out += other;
    return out;
}

CorrelatorPolynomial CorrelatorPolynomial::operator-(const CorrelatorPolynomial& other) const {
    CorrelatorPolynomial out = *this;
    out += other * -1.0;
    return out;
}

BellExpression CorrelatorPolynomial::to_expression(Scenario scenario, double lhv_bound) const {
    BellExpression expr(std::move(scenario), lhv_bound);
    for (const auto& [mono, coeff] : terms_) {
        if (mono.empty()) {
            expr.add_constant(coeff);
            continue;
        }
        ProbabilityTerm base;
        for (const auto& [party, setting] : mono) {
            base.parties.push_back(party);
            base.settings.push_back(setting);
        }
        const std::size_t k = mono.size();
        base.outcomes.assign(k, 0);
        // <prod A> = sum_o (-1)^{|o|} p(o), outcome 0 carrying eigenvalue +1
        for (std::uint64_t o = 0; o < (std::uint64_t(1) << k); ++o) {
            for (std::size_t b = 0; b < k; ++b) base.outcomes[b] = int((o >> (k - 1 - b)) & 1);
            const double sign = (std::popcount(o) % 2 == 0) ? 1.0 : -1.0;
            expr.add_term(base, coeff * sign);
        }
    }
    return expr;
}

namespace {

CorrelatorPolynomial chsh_polynomial() {
    const auto a1 = CorrelatorPolynomial::observable(0, 0);
    const auto a2 = CorrelatorPolynomial::observable(0, 1);
    const auto b1 = CorrelatorPolynomial::observable(1, 0);
    const auto b2 = CorrelatorPolynomial::observable(1, 1);
    return a1 * b1 + a1 * b2 + a2 * b1 - a2 * b2;
}

CorrelatorPolynomial mermin3_polynomial() {
    const auto a1 = CorrelatorPolynomial::observable(0, 0);
    const auto a2 = CorrelatorPolynomial::observable(0, 1);
    const auto b1 = CorrelatorPolynomial::observable(1, 0);
    const auto b2 = CorrelatorPolynomial::observable(1, 1);
    const auto c1 = CorrelatorPolynomial::observable(2, 0);
    const auto c2 = CorrelatorPolynomial::observable(2, 1);
    return (a1 * b1 * c1) * -1.0 + a1 * b2 * c2 + a2 * b2 * c1 + a2 * b1 * c2;
}

Scenario cascade_scenario(int n, int leading_two_settings) {
    std::vector<int> counts(n, 1);
    for (int p = 0; p < leading_two_settings; ++p) counts[p] = 2;
    return Scenario(n, counts);
}

CorrelatorPolynomial cascade(CorrelatorPolynomial seed, int first_cascade_party, int n) {
    const auto one = CorrelatorPolynomial::constant(1.0);
    for (int p = first_cascade_party; p < n; ++p) {
        const auto a = CorrelatorPolynomial::observable(p, 0);
        seed = (one - a) * seed + a * 2.0;
    }
    return seed;
}

} // namespace

BellExpression chsh_expression() {
    return chsh_polynomial().to_expression(Scenario(2, 2), 2.0);
}

BellExpression chsh_cascade_expression(int n) {
    if (n < 2) throw std::invalid_argument("chsh_cascade_expression: n must be >= 2");
    return cascade(chsh_polynomial(), 2, n).to_expression(cascade_scenario(n, 2), 2.0);
}

BellExpression chsh_cascade_expression_expanded(int n) {
    if (n < 2) throw std::invalid_argument("chsh_cascade_expression_expanded: n must be >= 2");
    const auto one = CorrelatorPolynomial::constant(1.0);
    // prod_{i>=3}(1 - A_i) expanded over subsets with signs (-1)^{|S|}
    CorrelatorPolynomial projector = one;
    for (int p = 2; p < n; ++p) projector = projector * (one - CorrelatorPolynomial::observable(p, 0));
    const auto poly = chsh_polynomial() * projector + (one - projector) * 2.0;
    return poly.to_expression(cascade_scenario(n, 2), 2.0);
}

BellExpression mermin_cascade_expression(int n) {
    if (n < 3) throw std::invalid_argument("mermin_cascade_expression: n must be >= 3");
    return cascade(mermin3_polynomial(), 3, n).to_expression(cascade_scenario(n, 3), 2.0);
}

BellExpression symmetrized_ch_expression(int n) {
    if (n < 3) throw std::invalid_argument("symmetrized_ch_expression: n must be >= 3");
    BellExpression expr(Scenario(n, 3), 0.0);

    // CH(i,j) = p(i1 j1) + p(i1 j2) + p(i2 j1) - p(i2 j2) - p(i1) - p(j1)
    // over settings {1,2} (setting 0 is the projection round), "1" outcomes
    // throughout, multiplied by p(A^(k)_1 = 1) for every other party.
    for (int i = 0; i < n; ++i) {
        for (int j = i + 1; j < n; ++j) {
            auto lifted = [&](int si, int sj, bool with_i, bool with_j, double coeff) {
                ProbabilityTerm t;
                for (int p = 0; p < n; ++p) {
                    if (p == i) {
                        if (!with_i) continue;
                        t.parties.push_back(p);
                        t.settings.push_back(si);
                    } else if (p == j) {
                        if (!with_j) continue;
                        t.parties.push_back(p);
                        t.settings.push_back(sj);
                    } else {
                        t.parties.push_back(p);
                        t.settings.push_back(0);
                    }
                    t.outcomes.push_back(1);
                }
                expr.add_term(std::move(t), coeff);
            };
            lifted(1, 1, true, true, 1.0);
            lifted(1, 2, true, true, 1.0);
            lifted(2, 1, true, true, 1.0);
            lifted(2, 2, true, true, -1.0);
            lifted(1, 0, true, false, -1.0);
            lifted(0, 1, false, true, -1.0);
        }
    }
    return expr;
}

} // namespace bellvis
