#include "nomcor/gamma_star.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "nomcor/concordance.hpp"
#include "nomcor/errors.hpp"

namespace nomcor {

std::int64_t HMatrix::total() const {
    return std::accumulate(h.begin(), h.end(), std::int64_t{0});
}

HMatrix build_h_matrix(const PairedSample& s) {
    if (s.kind != SampleKind::nominal_real)
        throw usage_error("build_h_matrix needs a nominal-real sample");
    const int k = s.k();
    const std::size_t n = s.size();

    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::sort(order.begin(), order.end(),
              [&](std::size_t a, std::size_t b) { return s.y[a] < s.y[b]; });

    HMatrix H;
    H.k = k;
    H.h.assign(static_cast<std::size_t>(k) * k, 0);
    std::vector<std::int64_t> below(k, 0), block(k, 0);
    std::size_t i = 0;
    while (i < n) {
        std::size_t j = i;
        std::fill(block.begin(), block.end(), 0);
        while (j < n && s.y[order[j]] == s.y[order[i]]) {
            ++block[s.xi[order[j]]];
            ++j;
        }
        for (int m = 0; m < k; ++m) {
            if (block[m] == 0) continue;
            for (int l = 0; l < k; ++l) {
                if (l == m) continue; // same category = tied in x
                H.at(l, m) += below[l] * block[m];
            }
        }
        for (int m = 0; m < k; ++m) below[m] += block[m];
        i = j;
    }
    return H;
}

DpResult dp_max_concordant(const HMatrix& H, int max_k) {
    const int k = H.k;
    if (k < 1) throw usage_error("empty H matrix");
    if (k > max_k)
        throw budget_error("dp_max_concordant: k=" + std::to_string(k) + " exceeds limit " +
                           std::to_string(max_k) + "; raise the budget explicitly if intended");
    if (k > 30) throw budget_error("dp_max_concordant: k beyond 30 is not supported");

    const std::size_t full = std::size_t{1} << k;
    // dp[S]: best concordant count ordering exactly the categories in S
    std::vector<std::int64_t> dp(full, 0);
    // number of optimal orderings of S, saturating
    std::vector<std::uint64_t> cnt(full, 1);
    constexpr std::uint64_t CNT_MAX = std::numeric_limits<std::uint64_t>::max();

    for (std::size_t S = 1; S < full; ++S) {
        std::int64_t best = -1;
        std::uint64_t c = 0;
        for (int x = 0; x < k; ++x) {
            if (!(S >> x & 1)) continue;
            const std::size_t rest = S & ~(std::size_t{1} << x);
            // x on top of S: pairs with everything below it
            std::int64_t cross = 0;
            std::size_t r = rest;
            while (r) {
                const int xp = std::countr_zero(r);
                r &= r - 1;
                cross += H.at(xp, x);
            }
            const std::int64_t cand = dp[rest] + cross;
            if (cand > best) {
                best = cand;
                c = cnt[rest];
            } else if (cand == best) {
                const std::uint64_t add = cnt[rest];
                c = (c > CNT_MAX - add) ? CNT_MAX : c + add;
            }
        }
        dp[S] = best;
        cnt[S] = c;
    }

    DpResult res;
    res.best_concordant = dp[full - 1];
    res.argmax_count = cnt[full - 1];

    // rebuild the ordering from rank 1 upward; smallest category index wins ties
    std::size_t remaining = full - 1;
    res.order.reserve(k);
    while (remaining) {
        for (int c0 = 0; c0 < k; ++c0) {
            if (!(remaining >> c0 & 1)) continue;
            const std::size_t rest = remaining & ~(std::size_t{1} << c0);
            // c0 at the bottom: its pairs with everything above
            std::int64_t cross = 0;
            std::size_t r = rest;
            while (r) {
                const int xp = std::countr_zero(r);
                r &= r - 1;
                cross += H.at(c0, xp);
            }
            if (cross + dp[rest] == dp[remaining]) {
                res.order.push_back(c0);
                remaining = rest;
                break;
            }
        }
    }
    return res;
}

namespace {

GammaStarResult gamma_star_case1(const PairedSample& s, const Limits& limits) {
    const HMatrix H = build_h_matrix(s);
    const std::int64_t T = H.total();
    if (T == 0) throw degenerate_error("gamma* undefined: all pairs tied");
    DpResult dp = dp_max_concordant(H, limits.case1_max_k);

    GammaStarResult res;
    res.concordant_at_max = dp.best_concordant;
    res.untied_pairs = T;
    res.value = static_cast<double>(2 * dp.best_concordant - T) / static_cast<double>(T);
    res.argmax = Numbering::from_orders(dp.order, {});
    res.argmax_count = dp.argmax_count;
    return res;
}

// Concordant count for every (row order, column order) pair of a counts (or
// probability) table. Walks all row permutations; per row permutation the
// column-pair weights M[j][j'] = sum_{i<i'} m[i][j] m[i'][j'] are accumulated
// once, then every column permutation costs O(l^2).
template <typename Cell, typename Visit>
void enumerate_numberings(int k, int l, const std::vector<Cell>& cells, Visit&& visit) {
    std::vector<int> row_order(k), col_order(l);
    std::iota(row_order.begin(), row_order.end(), 0);

    std::vector<Cell> suffix(l);    // column sums over rows after i (in row_order)
    std::vector<Cell> M(static_cast<std::size_t>(l) * l);
    do {
        std::fill(M.begin(), M.end(), Cell{0});
        std::fill(suffix.begin(), suffix.end(), Cell{0});
        for (int i = k - 1; i >= 0; --i) {
            const Cell* row = cells.data() + static_cast<std::size_t>(row_order[i]) * l;
            if (i < k - 1)
                for (int j = 0; j < l; ++j) {
                    if (row[j] == Cell{0}) continue;
                    Cell* Mj = M.data() + static_cast<std::size_t>(j) * l;
                    for (int jp = 0; jp < l; ++jp) Mj[jp] += row[j] * suffix[jp];
                }
            for (int j = 0; j < l; ++j) suffix[j] += row[j];
        }
        std::iota(col_order.begin(), col_order.end(), 0);
        do {
            Cell C{0};
            for (int a = 0; a < l; ++a)
                for (int b = a + 1; b < l; ++b) C += M[static_cast<std::size_t>(col_order[a]) * l + col_order[b]];
            visit(row_order, col_order, C);
        } while (std::next_permutation(col_order.begin(), col_order.end()));
    } while (std::next_permutation(row_order.begin(), row_order.end()));
}

std::uint64_t factorial_u64(int m) {
    std::uint64_t f = 1;
    for (int i = 2; i <= m; ++i) f *= static_cast<std::uint64_t>(i);
    return f;
}

GammaStarResult gamma_star_case2(const ContingencyTable& counts, const Limits& limits) {
    const int k = counts.k();
    const int l = counts.l();
    if (k > limits.case2_max_cat || l > limits.case2_max_cat)
        throw budget_error("gamma* enumeration over " + std::to_string(factorial_u64(k)) + "*" +
                           std::to_string(factorial_u64(l)) +
                           " numberings exceeds the budget (max " +
                           std::to_string(limits.case2_max_cat) + " categories per axis)");

    std::vector<std::int64_t> cells(static_cast<std::size_t>(k) * l);
    for (int i = 0; i < k; ++i)
        for (int j = 0; j < l; ++j) cells[static_cast<std::size_t>(i) * l + j] =
            static_cast<std::int64_t>(std::llround(counts.at(i, j)));

    // T = untied pairs, numbering-independent
    std::int64_t n = 0, same_row = 0, same_col = 0, same_cell = 0;
    auto choose2 = [](std::int64_t v) { return v * (v - 1) / 2; };
    for (int i = 0; i < k; ++i) {
        std::int64_t r = 0;
        for (int j = 0; j < l; ++j) r += cells[static_cast<std::size_t>(i) * l + j];
        same_row += choose2(r);
        n += r;
    }
    for (int j = 0; j < l; ++j) {
        std::int64_t c = 0;
        for (int i = 0; i < k; ++i) c += cells[static_cast<std::size_t>(i) * l + j];
        same_col += choose2(c);
    }
    for (auto v : cells) same_cell += choose2(v);
    const std::int64_t T = choose2(n) - (same_row + same_col - same_cell);
    if (T == 0) throw degenerate_error("gamma* undefined: all pairs tied");

    std::int64_t bestC = -1;
    std::uint64_t count = 0;
    std::vector<int> best_rows, best_cols;
    enumerate_numberings<std::int64_t>(k, l, cells,
        [&](const std::vector<int>& ro, const std::vector<int>& co, std::int64_t C) {
            if (C > bestC) {
                bestC = C;
                count = 1;
                best_rows = ro;
                best_cols = co;
            } else if (C == bestC) {
                ++count;
            }
        });

    GammaStarResult res;
    res.concordant_at_max = bestC;
    res.untied_pairs = T;
    res.value = static_cast<double>(2 * bestC - T) / static_cast<double>(T);
    res.argmax = Numbering::from_orders(best_rows, best_cols);
    res.argmax_count = count;
    return res;
}

} // namespace

GammaStarResult gamma_star_estimate(const PairedSample& s, const Limits& limits) {
    if (s.size() < 2) throw usage_error("gamma* estimation needs at least 2 observations");
    if (s.kind == SampleKind::nominal_real) return gamma_star_case1(s, limits);
    return gamma_star_case2(table_from_sample(s), limits);
}

void population_tau_nu(const ContingencyTable& t, const Numbering& numbering,
                       double& tau, double& nu) {
    const int k = t.k();
    const int l = t.l();
    const auto row_order = Numbering::order_of(numbering.x_ranks);
    const auto col_order = Numbering::order_of(numbering.y_ranks);

    double conc = 0.0, disc = 0.0;
    std::vector<double> below(l, 0.0), se(l), sw(l);
    for (int i = k - 1; i >= 0; --i) {
        double acc = 0.0;
        for (int j = l - 1; j >= 0; --j) {
            se[j] = acc;
            acc += below[j];
        }
        acc = 0.0;
        for (int j = 0; j < l; ++j) {
            sw[j] = acc;
            acc += below[j];
        }
        for (int j = 0; j < l; ++j) {
            const double p = t.at(row_order[i], col_order[j]);
            conc += p * se[j];
            disc += p * sw[j];
        }
        for (int j = 0; j < l; ++j) below[j] += t.at(row_order[i], col_order[j]);
    }
    tau = 2.0 * (conc - disc);

    double sum_r2 = 0.0, sum_c2 = 0.0, sum_p2 = 0.0;
    for (int i = 0; i < k; ++i) {
        const double r = t.row_sum(i);
        sum_r2 += r * r;
    }
    for (int j = 0; j < l; ++j) {
        const double c = t.col_sum(j);
        sum_c2 += c * c;
    }
    for (double p : t.cells) sum_p2 += p * p;
    nu = sum_r2 + sum_c2 - sum_p2;
}

GammaStarResult population_gamma_star(const ContingencyTable& probabilities,
                                      const Limits& limits) {
    if (probabilities.mode != TableMode::probabilities)
        throw usage_error("population_gamma_star needs a probabilities table");
    const int k = probabilities.k();
    const int l = probabilities.l();
    if (k > limits.case2_max_cat || l > limits.case2_max_cat)
        throw budget_error("population gamma* enumeration exceeds the budget (max " +
                           std::to_string(limits.case2_max_cat) + " categories per axis)");

    double nu = 0.0;
    {
        double tau_unused;
        std::vector<int> idr(k), idc(l);
        std::iota(idr.begin(), idr.end(), 1);
        std::iota(idc.begin(), idc.end(), 1);
        Numbering identity{idr, idc};
        population_tau_nu(probabilities, identity, tau_unused, nu);
    }
    if (1.0 - nu <= 1e-15)
        throw degenerate_error("gamma* undefined: all mass tied (one effective row or column)");

    // maximize the concordant mass; conc + disc = (1-nu)/2 is fixed
    double bestC = -1.0;
    std::uint64_t count = 0;
    std::vector<int> best_rows, best_cols;
    const double tie_tol = 1e-12;
    enumerate_numberings<double>(k, l, probabilities.cells,
        [&](const std::vector<int>& ro, const std::vector<int>& co, double C) {
            if (C > bestC + tie_tol) {
                bestC = C;
                count = 1;
                best_rows = ro;
                best_cols = co;
            } else if (C > bestC - tie_tol) {
                ++count;
            }
        });

    GammaStarResult res;
    // C sums one-sided products (i<i', j<j'), so concordant-or-discordant mass
    // is (1-nu)/2 on the same one-sided scale and gamma = (2C - T)/T with
    // T = (1-nu)/2.
    const double untied_pairs_prob = (1.0 - nu) / 2.0;
    res.value = std::clamp((2.0 * bestC - untied_pairs_prob) / untied_pairs_prob, 0.0, 1.0);
    res.argmax = Numbering::from_orders(best_rows, best_cols);
    res.argmax_count = count;
    res.concordant_at_max = 0;
    res.untied_pairs = 0;
    return res;
}

} // namespace nomcor
