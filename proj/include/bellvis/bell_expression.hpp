#pragma once

#include <map>
#include <vector>

#include "bellvis/behavior.hpp"

namespace bellvis {

// One probability term of a Bell functional: the joint probability that the
// listed parties, measuring the listed settings, produce the listed outcomes
// (a marginal; absent parties are summed out, their setting fixed to 0 when
// evaluating on a table).
struct ProbabilityTerm {
    std::vector<int> parties;   // strictly increasing
    std::vector<int> settings;  // same length as parties
    std::vector<int> outcomes;  // same length, entries 0/1
};

// Canonical order: subset size, then parties, settings, outcomes
// lexicographically. Expression equality is syntactic under this order.
struct TermOrder {
    bool operator()(const ProbabilityTerm& a, const ProbabilityTerm& b) const {
        if (a.parties.size() != b.parties.size()) return a.parties.size() < b.parties.size();
        if (a.parties != b.parties) return a.parties < b.parties;
        if (a.settings != b.settings) return a.settings < b.settings;
        return a.outcomes < b.outcomes;
    }
};

// Linear functional over behaviors, stored in expanded normal form as a
// canonical map of probability terms, together with its LHV bound.
class BellExpression {
public:
    using TermMap = std::map<ProbabilityTerm, double, TermOrder>;

    BellExpression(Scenario scenario, double lhv_bound)
        : scenario_(std::move(scenario)), bound_(lhv_bound) {}

    const Scenario& scenario() const { return scenario_; }
    double bound() const { return bound_; }
    double constant() const { return constant_; }
    const TermMap& terms() const { return terms_; }

    void add_constant(double c) { constant_ += c; }
    void add_term(ProbabilityTerm term, double coefficient);

    // value of the functional on a behavior of the matching scenario
    double evaluate(const Behavior& b) const;

    // value on the deterministic strategy given as per-party outcome
    // assignments outcome[party][setting]
    double evaluate_deterministic(const std::vector<std::vector<int>>& outcomes) const;

    // exact maximum over all deterministic strategies (exhaustive)
    double lhv_maximum(std::uint64_t strategy_cap = (std::uint64_t(1) << 22)) const;

    bool operator==(const BellExpression& other) const {
        return scenario_ == other.scenario_ && bound_ == other.bound_ &&
               constant_ == other.constant_ && syntactically_equal(other);
    }
    bool syntactically_equal(const BellExpression& other) const;

private:
    Scenario scenario_;
    TermMap terms_;
    double bound_ = 0.0;
    double constant_ = 0.0;
};

// Polynomial in commuting +-1-valued observables A^(party)_setting, at most
// one factor per party in each monomial. Used to build correlator-form
// expressions before expanding them into probability terms.
class CorrelatorPolynomial {
public:
    // monomial: (party, setting) pairs sorted by party
    using Monomial = std::vector<std::pair<int, int>>;

    static CorrelatorPolynomial constant(double c);
    static CorrelatorPolynomial observable(int party, int setting);

    CorrelatorPolynomial& operator+=(const CorrelatorPolynomial& other);
    CorrelatorPolynomial operator*(const CorrelatorPolynomial& other) const;
    CorrelatorPolynomial operator*(double s) const;
    CorrelatorPolynomial operator+(const CorrelatorPolynomial& other) const;
    CorrelatorPolynomial operator-(const CorrelatorPolynomial& other) const;

    const std::map<Monomial, double>& monomials() const { return terms_; }

    // expands every correlator into +-1-signed outcome probabilities
    // (<A> = p(0) - p(1) per site) and returns the probability-term form
    BellExpression to_expression(Scenario scenario, double lhv_bound) const;

private:
    std::map<Monomial, double> terms_;  // empty monomial = constant
};

// CHSH in correlator form over the (2 parties, 2 settings) scenario,
// A1B1 + A1B2 + A2B1 - A2B2, LHV bound 2; equals chsh_cascade_expression(2).
BellExpression chsh_expression();

// The two-setting CHSH expression extended by a projector cascade:
// X_2 = CHSH, X_k = (1 - A^(k)_1) X_{k-1} + 2 A^(k)_1, LHV bound 2.
// Parties 3..n carry a single setting; scenario (2,2,1,...,1).
BellExpression chsh_cascade_expression(int n);

// Same functional built from the closed-form subset expansion
// CHSH * prod_{i>=3}(1 - A_i) + 2 (1 - prod_{i>=3}(1 - A_i)) instead of the
// recursion; term maps must match chsh_cascade_expression exactly.
BellExpression chsh_cascade_expression_expanded(int n);

// Mermin three-party expression extended by the same cascade, LHV bound 2.
// Scenario (2,2,2,1,...,1); requires n >= 3.
BellExpression mermin_cascade_expression(int n);

// sum_{i<j} CH(i,j) prod_{k != i,j} p(A^(k)_1) over the (3,3,...,3) scenario,
// expanded into joint probability terms; LHV bound 0. "1" results are
// outcome label 1. Requires n >= 3.
BellExpression symmetrized_ch_expression(int n);

} // namespace bellvis
