#pragma once

#include <cstdint>
#include <vector>

#include "nomcor/types.hpp"

namespace nomcor {

// H[l*k+m] = #{(i,j) : y_i < y_j, x_i = l, x_j = m}; diagonal fixed to zero,
// so T = sum(H) is the number of pairs untied in both coordinates.
struct HMatrix {
    int k = 0;
    std::vector<std::int64_t> h;

    std::int64_t at(int l, int m) const { return h[static_cast<std::size_t>(l) * k + m]; }
    std::int64_t& at(int l, int m) { return h[static_cast<std::size_t>(l) * k + m]; }
    std::int64_t total() const;
};

struct DpResult {
    std::int64_t best_concordant = 0;
    std::vector<int> order;       // categories from lowest to highest rank
    std::uint64_t argmax_count = 1;
};

struct GammaStarResult {
    double value = 0.0;
    Numbering argmax;
    std::uint64_t argmax_count = 1;
    std::int64_t concordant_at_max = 0;
    std::int64_t untied_pairs = 0;
};

HMatrix build_h_matrix(const PairedSample& s);

// Subset DP over category sets: dp[S] = max over top choices x in S of
// dp[S\{x}] + sum_{x' in S\{x}} H[x',x]. The argmax ordering is rebuilt from
// the bottom rank upward, taking the smallest category index whenever several
// choices stay optimal, so an all-tied sample yields the identity numbering.
DpResult dp_max_concordant(const HMatrix& h, int max_k = 30);

GammaStarResult gamma_star_estimate(const PairedSample& s, const Limits& limits = {});

GammaStarResult population_gamma_star(const ContingencyTable& probabilities,
                                      const Limits& limits = {});

// Population tau/nu of a probability table under a fixed numbering.
void population_tau_nu(const ContingencyTable& probabilities, const Numbering& numbering,
                       double& tau, double& nu);

} // namespace nomcor
