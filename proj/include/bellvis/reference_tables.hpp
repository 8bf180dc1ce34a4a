#pragma once

#include <array>

namespace bellvis {

// Published reference values this tool reproduces; the CLI table commands
// print a diff column against them and the regression tests compare against
// this dataset rather than against our own output. Mirrored verbatim in
// data/tables.json (a unit test keeps the two in sync).
inline constexpr int kReferenceTablesVersion = 1;

struct GhzWRow {
    int n;
    double ghz;
    double w;
};

// critical visibilities, two settings per party, GHZ and W columns
inline constexpr std::array<GhzWRow, 8> kReferenceTable1 = {{
    {3, 0.5000, 0.6442},
    {4, 0.3536, 0.5294},
    {5, 0.2500, 0.4018},
    {6, 0.1768, 0.2774},
    {7, 0.1250, 0.1736},
    {8, 0.0884, 0.1034},
    {9, 0.0625, 0.0578},
    {10, 0.0442, 0.0313},
}};

struct ProductRow {
    int n;      // total qubits
    int zeros;  // leading |0> qubits; the core is GHZ_{n - zeros}
    double v;
    bool bold;  // printed bold in the source table (most noise-resistant for that n)
};

// critical visibilities of |0...0> (x) GHZ_{n-k} states, two settings per party
inline constexpr std::array<ProductRow, 26> kReferenceTable2 = {{
    {2, 0, 0.707, true},
    {3, 1, 0.547, false},
    {3, 0, 0.500, true},
    {4, 1, 0.333, true},
    {4, 2, 0.377, false},
    {4, 0, 0.354, false},
    {5, 1, 0.215, false},
    {5, 2, 0.200, true},
    {5, 3, 0.232, false},
    {5, 0, 0.250, false},
    {6, 1, 0.144, false},
    {6, 2, 0.121, false},
    {6, 3, 0.111, true},
    {6, 4, 0.131, false},
    {6, 0, 0.177, false},
    {7, 1, 0.098, false},
    {7, 2, 0.078, false},
    {7, 3, 0.064, false},
    {7, 4, 0.059, false},
    {7, 5, 0.070, false},
    {7, 0, 0.125, false},
    {8, 3, 0.041, false},
    {8, 4, 0.033, false},
    {8, 5, 0.030, false},
    {8, 6, 0.036, false},
    {8, 0, 0.088, false},
}};

} // namespace bellvis
