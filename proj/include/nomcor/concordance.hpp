#pragma once

#include <cstdint>
#include <vector>

#include "nomcor/types.hpp"

namespace nomcor {

struct GammaComponents {
    double tau_hat = 0.0;
    double nu_hat = 0.0;
    double gamma_hat = 0.0;
};

// Exhaustive O(n^2) classification of all unordered pairs; the oracle every
// faster path is tested against.
PairCounts count_pairs_reference(const std::vector<double>& x,
                                 const std::vector<double>& y);

// O(k*l) pair counting on a counts table under a numbering, via the
// south-east / south-west accumulator recursions.
PairCounts count_pairs_table(const ContingencyTable& t, const Numbering& numbering);

// tau_hat = (C-D)/P, nu_hat = ties/P, gamma_hat = (C-D)/(C+D)
GammaComponents gamma_components(const PairCounts& pc);

} // namespace nomcor
