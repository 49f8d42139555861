#include "nomcor/types.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>

#include "nomcor/errors.hpp"

namespace nomcor {

namespace {

// label -> index map with lexicographic index order
std::vector<int> encode_labels(const std::vector<std::string>& raw,
                               std::vector<std::string>& labels_out) {
    for (const auto& s : raw) {
        if (s.empty()) throw parse_error("empty label in sample");
    }
    std::map<std::string, int> index;
    for (const auto& s : raw) index.emplace(s, 0);
    labels_out.clear();
    labels_out.reserve(index.size());
    int next = 0;
    for (auto& [label, idx] : index) {
        idx = next++;
        labels_out.push_back(label);
    }
    std::vector<int> enc(raw.size());
    for (std::size_t i = 0; i < raw.size(); ++i) enc[i] = index[raw[i]];
    return enc;
}

} // namespace

PairedSample PairedSample::nominal_real(const std::vector<std::string>& x,
                                        const std::vector<double>& y) {
    if (x.size() != y.size()) throw usage_error("sample columns have different lengths");
    if (x.empty()) throw usage_error("empty sample");
    for (double v : y) {
        if (!std::isfinite(v)) throw parse_error("non-finite y value in sample");
    }
    PairedSample s;
    s.kind = SampleKind::nominal_real;
    s.xi = encode_labels(x, s.x_labels);
    s.y = y;
    return s;
}

PairedSample PairedSample::nominal_nominal(const std::vector<std::string>& x,
                                           const std::vector<std::string>& y) {
    if (x.size() != y.size()) throw usage_error("sample columns have different lengths");
    if (x.empty()) throw usage_error("empty sample");
    PairedSample s;
    s.kind = SampleKind::nominal_nominal;
    s.xi = encode_labels(x, s.x_labels);
    s.yi = encode_labels(y, s.y_labels);
    return s;
}

namespace {

ContingencyTable build_table(TableMode mode, std::vector<std::string> rows,
                             std::vector<std::string> cols, std::vector<double> cells) {
    const std::size_t k = rows.size();
    const std::size_t l = cols.size();
    if (k == 0 || l == 0) throw usage_error("table needs at least one row and column");
    if (cells.size() != k * l) throw usage_error("cell count does not match labels");
    for (const auto& s : rows)
        if (s.empty()) throw parse_error("empty row label");
    for (const auto& s : cols)
        if (s.empty()) throw parse_error("empty column label");

    double total = 0.0;
    for (double v : cells) {
        if (!std::isfinite(v) || v < 0.0) throw usage_error("table cells must be finite and nonnegative");
        if (mode == TableMode::counts && std::fabs(v - std::round(v)) > 1e-9)
            throw usage_error("counts-mode cells must be integers");
        total += v;
    }
    if (mode == TableMode::probabilities && std::fabs(total - 1.0) > 1e-12)
        throw usage_error("probabilities-mode cells must sum to 1");

    // drop all-zero rows/columns
    std::vector<int> keep_r, keep_c;
    for (std::size_t i = 0; i < k; ++i) {
        double s = 0.0;
        for (std::size_t j = 0; j < l; ++j) s += cells[i * l + j];
        if (s > 0.0) keep_r.push_back(static_cast<int>(i));
    }
    for (std::size_t j = 0; j < l; ++j) {
        double s = 0.0;
        for (std::size_t i = 0; i < k; ++i) s += cells[i * l + j];
        if (s > 0.0) keep_c.push_back(static_cast<int>(j));
    }
    if (keep_r.empty() || keep_c.empty()) throw usage_error("table has no mass");

    ContingencyTable t;
    t.mode = mode;
    for (int i : keep_r) t.row_labels.push_back(rows[i]);
    for (int j : keep_c) t.col_labels.push_back(cols[j]);
    t.cells.reserve(keep_r.size() * keep_c.size());
    for (int i : keep_r)
        for (int j : keep_c) t.cells.push_back(cells[static_cast<std::size_t>(i) * l + j]);
    return t;
}

} // namespace

ContingencyTable ContingencyTable::counts(std::vector<std::string> rows,
                                          std::vector<std::string> cols,
                                          std::vector<double> cells) {
    return build_table(TableMode::counts, std::move(rows), std::move(cols), std::move(cells));
}

ContingencyTable ContingencyTable::probabilities(std::vector<std::string> rows,
                                                 std::vector<std::string> cols,
                                                 std::vector<double> cells) {
    return build_table(TableMode::probabilities, std::move(rows), std::move(cols), std::move(cells));
}

double ContingencyTable::row_sum(int i) const {
    double s = 0.0;
    for (int j = 0; j < l(); ++j) s += at(i, j);
    return s;
}

double ContingencyTable::col_sum(int j) const {
    double s = 0.0;
    for (int i = 0; i < k(); ++i) s += at(i, j);
    return s;
}

double ContingencyTable::total() const {
    return std::accumulate(cells.begin(), cells.end(), 0.0);
}

std::vector<int> Numbering::order_of(const std::vector<int>& ranks) {
    std::vector<int> order(ranks.size());
    for (std::size_t c = 0; c < ranks.size(); ++c) {
        const int r = ranks[c];
        if (r < 1 || static_cast<std::size_t>(r) > ranks.size())
            throw usage_error("numbering is not a permutation of 1..k");
        order[r - 1] = static_cast<int>(c);
    }
    // bijectivity: every slot written exactly once
    std::vector<char> seen(ranks.size(), 0);
    for (int r : ranks) {
        if (seen[r - 1]) throw usage_error("numbering repeats a rank");
        seen[r - 1] = 1;
    }
    return order;
}

Numbering Numbering::from_orders(const std::vector<int>& x_order,
                                 const std::vector<int>& y_order) {
    Numbering nb;
    nb.x_ranks.resize(x_order.size());
    for (std::size_t r = 0; r < x_order.size(); ++r) nb.x_ranks[x_order[r]] = static_cast<int>(r) + 1;
    nb.y_ranks.resize(y_order.size());
    for (std::size_t r = 0; r < y_order.size(); ++r) nb.y_ranks[y_order[r]] = static_cast<int>(r) + 1;
    return nb;
}

ContingencyTable table_from_sample(const PairedSample& s) {
    if (s.kind != SampleKind::nominal_nominal)
        throw usage_error("table_from_sample needs a nominal-nominal sample");
    std::vector<double> cells(static_cast<std::size_t>(s.k()) * s.l(), 0.0);
    for (std::size_t i = 0; i < s.size(); ++i)
        cells[static_cast<std::size_t>(s.xi[i]) * s.l() + s.yi[i]] += 1.0;
    return ContingencyTable::counts(s.x_labels, s.y_labels, std::move(cells));
}

PairedSample sample_from_table(const ContingencyTable& t) {
    if (t.mode != TableMode::counts) throw usage_error("expansion needs a counts table");
    std::vector<std::string> x, y;
    for (int i = 0; i < t.k(); ++i)
        for (int j = 0; j < t.l(); ++j) {
            const auto c = static_cast<std::int64_t>(std::llround(t.at(i, j)));
            for (std::int64_t r = 0; r < c; ++r) {
                x.push_back(t.row_labels[i]);
                y.push_back(t.col_labels[j]);
            }
        }
    return PairedSample::nominal_nominal(x, y);
}

ContingencyTable normalize(const ContingencyTable& t) {
    if (t.mode == TableMode::probabilities) return t;
    const double total = t.total();
    if (total <= 0.0) throw degenerate_error("cannot normalize a zero-total table");
    ContingencyTable out = t;
    out.mode = TableMode::probabilities;
    for (double& v : out.cells) v /= total;
    // guard against rounding drift in the sum
    double s = out.total();
    if (std::fabs(s - 1.0) > 1e-12)
        for (double& v : out.cells) v /= s;
    return out;
}

ContingencyTable comonotonic_table(const std::vector<double>& px,
                                   const std::vector<double>& py) {
    auto check = [](const std::vector<double>& p, const char* side) {
        if (p.empty()) throw usage_error(std::string("empty ") + side + " marginal");
        double s = 0.0;
        for (double v : p) {
            if (!std::isfinite(v) || v < 0.0)
                throw usage_error(std::string(side) + " marginal has negative or non-finite entries");
            s += v;
        }
        if (std::fabs(s - 1.0) > 1e-12) throw usage_error(std::string(side) + " marginal does not sum to 1");
    };
    check(px, "row");
    check(py, "column");

    const int k = static_cast<int>(px.size());
    const int l = static_cast<int>(py.size());
    std::vector<double> cells(static_cast<std::size_t>(k) * l, 0.0);

    // upper Frechet-Hoeffding mass: overlap of the two cumulative intervals
    std::vector<double> Fx(k + 1, 0.0), Fy(l + 1, 0.0);
    for (int i = 0; i < k; ++i) Fx[i + 1] = Fx[i] + px[i];
    for (int j = 0; j < l; ++j) Fy[j + 1] = Fy[j] + py[j];
    Fx[k] = 1.0;
    Fy[l] = 1.0;
    for (int i = 0; i < k; ++i)
        for (int j = 0; j < l; ++j) {
            const double lo = std::max(Fx[i], Fy[j]);
            const double hi = std::min(Fx[i + 1], Fy[j + 1]);
            if (hi > lo) cells[static_cast<std::size_t>(i) * l + j] = hi - lo;
        }

    auto label_seq = [](int m, char prefix) {
        std::vector<std::string> v;
        for (int a = 1; a <= m; ++a) v.push_back(prefix + std::to_string(a));
        return v;
    };
    return ContingencyTable::probabilities(label_seq(k, 'x'), label_seq(l, 'y'), std::move(cells));
}

} // namespace nomcor
