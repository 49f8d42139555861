#pragma once

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "nomcor/concordance.hpp"
#include "nomcor/errors.hpp"
#include "nomcor/gamma_star.hpp"
#include "nomcor/types.hpp"

namespace testutil {

// raw engine draws only, so sequences do not depend on the standard library
inline std::uint64_t randint(std::mt19937_64& g, std::uint64_t n) { return g() % n; }
inline double runif(std::mt19937_64& g) { return static_cast<double>(g() >> 11) * 0x1.0p-53; }

inline std::string cat_label(std::size_t i) {
    return std::string(1, static_cast<char>('a' + i));
}

inline bool has_untied_pair(const nomcor::PairedSample& s) {
    const std::size_t n = s.size();
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j) {
            if (s.xi[i] == s.xi[j]) continue;
            if (s.kind == nomcor::SampleKind::nominal_real) {
                if (s.y[i] != s.y[j]) return true;
            } else {
                if (s.yi[i] != s.yi[j]) return true;
            }
        }
    return false;
}

// grid > 0 draws y from {0,...,grid-1} to force ties; grid == 0 draws continuous y
inline nomcor::PairedSample random_nominal_real(std::mt19937_64& g, int n, int k, int grid = 0) {
    for (;;) {
        std::vector<std::string> x;
        std::vector<double> y;
        for (int i = 0; i < n; ++i) {
            x.push_back(cat_label(randint(g, static_cast<std::uint64_t>(k))));
            y.push_back(grid > 0 ? static_cast<double>(randint(g, static_cast<std::uint64_t>(grid)))
                                 : runif(g));
        }
        auto s = nomcor::PairedSample::nominal_real(x, y);
        if (s.k() >= 2 && has_untied_pair(s)) return s;
    }
}

inline nomcor::PairedSample random_nominal_nominal(std::mt19937_64& g, int n, int k, int l) {
    for (;;) {
        std::vector<std::string> x, y;
        for (int i = 0; i < n; ++i) {
            x.push_back(cat_label(randint(g, static_cast<std::uint64_t>(k))));
            y.push_back("y" + std::to_string(randint(g, static_cast<std::uint64_t>(l))));
        }
        auto s = nomcor::PairedSample::nominal_nominal(x, y);
        if (s.k() >= 2 && s.l() >= 2 && has_untied_pair(s)) return s;
    }
}

inline nomcor::ContingencyTable random_counts_table(std::mt19937_64& g, int k, int l,
                                                    int max_cell = 6) {
    for (;;) {
        std::vector<std::string> rows, cols;
        for (int i = 0; i < k; ++i) rows.push_back("r" + std::to_string(i));
        for (int j = 0; j < l; ++j) cols.push_back("c" + std::to_string(j));
        std::vector<double> cells;
        for (int i = 0; i < k * l; ++i)
            cells.push_back(static_cast<double>(randint(g, static_cast<std::uint64_t>(max_cell + 1))));
        if (std::accumulate(cells.begin(), cells.end(), 0.0) < 1.0) continue;
        auto t = nomcor::ContingencyTable::counts(rows, cols, cells);
        if (t.k() >= 2 && t.l() >= 2) return t;
    }
}

struct BruteForce {
    std::int64_t best_concordant = -1;
    std::int64_t untied = 0;
    std::uint64_t argmax_count = 0;
};

inline std::vector<double> ranks_under(const std::vector<int>& idx, const std::vector<int>& order) {
    std::vector<int> rank(order.size());
    for (std::size_t r = 0; r < order.size(); ++r) rank[static_cast<std::size_t>(order[r])] = static_cast<int>(r) + 1;
    std::vector<double> out(idx.size());
    for (std::size_t i = 0; i < idx.size(); ++i) out[i] = rank[static_cast<std::size_t>(idx[i])];
    return out;
}

inline BruteForce brute_case1(const nomcor::PairedSample& s) {
    BruteForce res;
    std::vector<int> order(static_cast<std::size_t>(s.k()));
    std::iota(order.begin(), order.end(), 0);
    do {
        auto xr = ranks_under(s.xi, order);
        auto pc = nomcor::count_pairs_reference(xr, s.y);
        res.untied = pc.concordant + pc.discordant;
        if (pc.concordant > res.best_concordant) {
            res.best_concordant = pc.concordant;
            res.argmax_count = 1;
        } else if (pc.concordant == res.best_concordant) {
            ++res.argmax_count;
        }
    } while (std::next_permutation(order.begin(), order.end()));
    return res;
}

inline BruteForce brute_case2(const nomcor::PairedSample& s) {
    BruteForce res;
    std::vector<int> xo(static_cast<std::size_t>(s.k())), yo(static_cast<std::size_t>(s.l()));
    std::iota(xo.begin(), xo.end(), 0);
    do {
        auto xr = ranks_under(s.xi, xo);
        std::iota(yo.begin(), yo.end(), 0);
        do {
            auto yr = ranks_under(s.yi, yo);
            auto pc = nomcor::count_pairs_reference(xr, yr);
            res.untied = pc.concordant + pc.discordant;
            if (pc.concordant > res.best_concordant) {
                res.best_concordant = pc.concordant;
                res.argmax_count = 1;
            } else if (pc.concordant == res.best_concordant) {
                ++res.argmax_count;
            }
        } while (std::next_permutation(yo.begin(), yo.end()));
    } while (std::next_permutation(xo.begin(), xo.end()));
    return res;
}

inline double brute_population(const nomcor::ContingencyTable& probs) {
    double best = -2.0;
    std::vector<int> xo(static_cast<std::size_t>(probs.k())), yo(static_cast<std::size_t>(probs.l()));
    std::iota(xo.begin(), xo.end(), 0);
    do {
        std::iota(yo.begin(), yo.end(), 0);
        do {
            auto nb = nomcor::Numbering::from_orders(xo, yo);
            double tau = 0.0, nu = 0.0;
            nomcor::population_tau_nu(probs, nb, tau, nu);
            best = std::max(best, tau / (1.0 - nu));
        } while (std::next_permutation(yo.begin(), yo.end()));
    } while (std::next_permutation(xo.begin(), xo.end()));
    return best;
}

template <class F>
inline std::optional<nomcor::ErrorKind> thrown_kind(F&& f) {
    try {
        f();
    } catch (const nomcor::Error& e) {
        return e.kind();
    }
    return std::nullopt;
}

template <class F>
inline std::string thrown_message(F&& f) {
    try {
        f();
    } catch (const nomcor::Error& e) {
        return e.what();
    }
    return {};
}

} // namespace testutil
