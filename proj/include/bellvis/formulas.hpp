#pragma once

#include <vector>

#include "bellvis/behavior.hpp"

namespace bellvis {

// Closed-form critical visibility of the n-qubit GHZ state under two
// measurement settings per party: 2^{-(n-1)/2}.
double ghz_critical_visibility(int n);

// Critical visibility of the Dicke state D^e_n against the cascade
// inequality: 1 / (1 + 2^{n-1} (sqrt 2 - 1) / C(n, e)).
double dicke_critical_visibility(int n, int e);

// Critical visibility of |0...0> (x) GHZ_2 (n total qubits, n >= 3):
// 1 / (1 + (sqrt 2 - 1) 2^{n-2}).
double product_ghz2_critical_visibility(int n);

// Critical visibility of |0...0> (x) GHZ_3 (n total qubits, n >= 4):
// 8 / (8 + 2^n).
double product_ghz3_critical_visibility(int n);

// Quantum value of the chsh-cascade expression on the Dicke state D^e_n at
// visibility v with the protocol settings below: v (2 + 2^n (sqrt2-1)/C(n,e)).
double dicke_cascade_quantum_value(int n, int e, double v);

// The settings achieving dicke_cascade_quantum_value: parties 0,1 measure the
// CHSH-optimal pair for (|01>+|10>)/sqrt2 (x/y equatorial settings), and of
// the remaining n-2 single-setting parties, e-1 project onto |1> (+sigma_z)
// and the rest onto |0> (-sigma_z). Scenario matches chsh_cascade_expression.
std::vector<std::vector<MeasurementSetting>> dicke_cascade_settings(int n, int e);

// Smallest n from which the Dicke formula stays below the GHZ formula for
// every larger n (the comparison briefly dips near n = e + 1 for large e).
// Search capped at 10^4; throws std::runtime_error if no crossover is found.
int dicke_crossover_party_count(int e);

// Smallest n >= 3 at which product_ghz2_critical_visibility(n) drops below
// ghz_critical_visibility(n). Equals ceil(log2(12 + 8 sqrt 2)) = 5.
int product_ghz2_crossover_party_count();

} // namespace bellvis
