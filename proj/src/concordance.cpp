#include "nomcor/concordance.hpp"

#include <algorithm>
#include <cmath>

#include "nomcor/errors.hpp"

namespace nomcor {

PairCounts count_pairs_reference(const std::vector<double>& x,
                                 const std::vector<double>& y) {
    if (x.size() != y.size()) throw usage_error("count_pairs_reference: length mismatch");
    const std::size_t n = x.size();
    if (n < 2) throw usage_error("count_pairs_reference: need at least 2 observations");
    PairCounts pc;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j) {
            const bool tx = x[i] == x[j];
            const bool ty = y[i] == y[j];
            if (tx && ty)
                ++pc.ties_both;
            else if (tx)
                ++pc.ties_x_only;
            else if (ty)
                ++pc.ties_y_only;
            else if ((x[i] < x[j]) == (y[i] < y[j]))
                ++pc.concordant;
            else
                ++pc.discordant;
        }
    return pc;
}

PairCounts count_pairs_table(const ContingencyTable& t, const Numbering& numbering) {
    const int k = t.k();
    const int l = t.l();
    if (static_cast<int>(numbering.x_ranks.size()) != k ||
        static_cast<int>(numbering.y_ranks.size()) != l)
        throw usage_error("count_pairs_table: numbering dimension mismatch");
    const auto row_order = Numbering::order_of(numbering.x_ranks);
    const auto col_order = Numbering::order_of(numbering.y_ranks);

    // counts arranged by rank
    std::vector<std::int64_t> m(static_cast<std::size_t>(k) * l);
    std::int64_t n = 0;
    for (int i = 0; i < k; ++i)
        for (int j = 0; j < l; ++j) {
            const double v = t.at(row_order[i], col_order[j]);
            const auto c = static_cast<std::int64_t>(std::llround(v));
            if (t.mode != TableMode::counts || std::fabs(v - static_cast<double>(c)) > 1e-9)
                throw usage_error("count_pairs_table: needs a counts table");
            m[static_cast<std::size_t>(i) * l + j] = c;
            n += c;
        }
    if (n < 2) throw usage_error("count_pairs_table: need at least 2 observations");

    // strict south-east / south-west accumulators, built bottom-up
    auto cell = [&](int i, int j) { return m[static_cast<std::size_t>(i) * l + j]; };
    std::vector<std::int64_t> below(l, 0);      // column sums of rows > i
    std::vector<std::int64_t> se(l), sw(l);
    PairCounts pc;
    for (int i = k - 1; i >= 0; --i) {
        // se[j] = sum of below[j'] for j' > j ; sw[j] = sum for j' < j
        std::int64_t acc = 0;
        for (int j = l - 1; j >= 0; --j) {
            se[j] = acc;
            acc += below[j];
        }
        acc = 0;
        for (int j = 0; j < l; ++j) {
            sw[j] = acc;
            acc += below[j];
        }
        for (int j = 0; j < l; ++j) {
            pc.concordant += cell(i, j) * se[j];
            pc.discordant += cell(i, j) * sw[j];
        }
        for (int j = 0; j < l; ++j) below[j] += cell(i, j);
    }

    auto choose2 = [](std::int64_t v) { return v * (v - 1) / 2; };
    std::int64_t same_cell = 0;
    for (auto v : m) same_cell += choose2(v);
    std::int64_t same_row = 0;
    for (int i = 0; i < k; ++i) {
        std::int64_t r = 0;
        for (int j = 0; j < l; ++j) r += cell(i, j);
        same_row += choose2(r);
    }
    std::int64_t same_col = 0;
    for (int j = 0; j < l; ++j) {
        std::int64_t c = 0;
        for (int i = 0; i < k; ++i) c += cell(i, j);
        same_col += choose2(c);
    }
    pc.ties_both = same_cell;
    pc.ties_x_only = same_row - same_cell;
    pc.ties_y_only = same_col - same_cell;
    return pc;
}

GammaComponents gamma_components(const PairCounts& pc) {
    const std::int64_t P = pc.total();
    if (P <= 0) throw usage_error("gamma_components: no pairs");
    const std::int64_t untied = pc.concordant + pc.discordant;
    if (untied == 0) throw degenerate_error("gamma undefined: all pairs tied");
    GammaComponents g;
    g.tau_hat = static_cast<double>(pc.concordant - pc.discordant) / static_cast<double>(P);
    g.nu_hat = static_cast<double>(pc.ties()) / static_cast<double>(P);
    g.gamma_hat = static_cast<double>(pc.concordant - pc.discordant) / static_cast<double>(untied);
    return g;
}

} // namespace nomcor
