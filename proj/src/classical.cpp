#include "nomcor/classical.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "nomcor/errors.hpp"

namespace nomcor {

namespace {

struct Margins {
    ContingencyTable p; // probabilities
    std::vector<double> row; // p_{i.}
    std::vector<double> col; // p_{.j}
};

Margins prepare(const ContingencyTable& t) {
    Margins m{normalize(t), {}, {}};
    const int k = m.p.k(), l = m.p.l();
    if (k < 2 || l < 2)
        throw usage_error("classical measures need at least 2 rows and 2 columns");
    m.row.resize(k);
    m.col.resize(l);
    for (int i = 0; i < k; ++i) m.row[i] = m.p.row_sum(i);
    for (int j = 0; j < l; ++j) m.col[j] = m.p.col_sum(j);
    for (double r : m.row)
        if (r <= 0.0) throw degenerate_error("classical measures undefined: zero row marginal");
    for (double c : m.col)
        if (c <= 0.0) throw degenerate_error("classical measures undefined: zero column marginal");
    return m;
}

double msc_of(const Margins& m) {
    double s = 0.0;
    for (int i = 0; i < m.p.k(); ++i)
        for (int j = 0; j < m.p.l(); ++j) {
            const double pij = m.p.at(i, j);
            s += pij * pij / (m.row[i] * m.col[j]);
        }
    return s - 1.0;
}

} // namespace

double msc(const ContingencyTable& t) { return msc_of(prepare(t)); }

ContingencyFamily contingency_family(const ContingencyTable& t) {
    const Margins m = prepare(t);
    const double v = msc_of(m);
    const double a = m.p.k(), b = m.p.l();
    ContingencyFamily f;
    f.cramers_v = std::sqrt(v / (std::min(a, b) - 1.0));
    f.tschuprow_t = std::sqrt(v / std::sqrt((a - 1.0) * (b - 1.0)));
    f.pearson_c = std::sqrt(v / (1.0 + v));
    f.sakoda_s = std::sqrt(v * std::min(a, b) / ((1.0 + v) * (std::min(a, b) - 1.0)));
    return f;
}

GkLambda gk_lambda(const ContingencyTable& t) {
    const Margins m = prepare(t);
    const int k = m.p.k(), l = m.p.l();
    double sum_row_max = 0.0; // sum_i max_j p_ij
    for (int i = 0; i < k; ++i) {
        double mx = 0.0;
        for (int j = 0; j < l; ++j) mx = std::max(mx, m.p.at(i, j));
        sum_row_max += mx;
    }
    double sum_col_max = 0.0; // sum_j max_i p_ij
    for (int j = 0; j < l; ++j) {
        double mx = 0.0;
        for (int i = 0; i < k; ++i) mx = std::max(mx, m.p.at(i, j));
        sum_col_max += mx;
    }
    const double max_col = *std::max_element(m.col.begin(), m.col.end());
    const double max_row = *std::max_element(m.row.begin(), m.row.end());
    if (1.0 - max_col <= 0.0 || 1.0 - max_row <= 0.0)
        throw degenerate_error("lambda undefined: a marginal concentrates all mass");

    GkLambda g;
    g.lambda_y = std::max(0.0, (sum_row_max - max_col) / (1.0 - max_col));
    g.lambda_x = std::max(0.0, (sum_col_max - max_row) / (1.0 - max_row));
    g.lambda_sym = std::max(0.0, (0.5 * (sum_row_max + sum_col_max - max_col - max_row)) /
                                     (1.0 - 0.5 * (max_col + max_row)));
    return g;
}

GkTau gk_tau(const ContingencyTable& t) {
    const Margins m = prepare(t);
    const int k = m.p.k(), l = m.p.l();
    double qy = 0.0; // sum_ij p_ij^2 / p_i.
    double qx = 0.0; // sum_ij p_ij^2 / p_.j
    for (int i = 0; i < k; ++i)
        for (int j = 0; j < l; ++j) {
            const double pij = m.p.at(i, j);
            qy += pij * pij / m.row[i];
            qx += pij * pij / m.col[j];
        }
    double sy = 0.0, sx = 0.0;
    for (double c : m.col) sy += c * c;
    for (double r : m.row) sx += r * r;
    if (1.0 - sy <= 0.0 || 1.0 - sx <= 0.0)
        throw degenerate_error("tau undefined: a marginal concentrates all mass");

    GkTau g;
    g.tau_y = std::max(0.0, (qy - sy) / (1.0 - sy));
    g.tau_x = std::max(0.0, (qx - sx) / (1.0 - sx));
    g.tau_sym = std::max(0.0, (0.5 * (qy + qx - sy - sx)) / (1.0 - 0.5 * (sy + sx)));
    return g;
}

double uncertainty(const ContingencyTable& t) {
    const Margins m = prepare(t);
    auto entropy_term = [](double p) { return p > 0.0 ? -p * std::log(p) : 0.0; };
    double hx = 0.0, hy = 0.0, hxy = 0.0;
    for (double r : m.row) hx += entropy_term(r);
    for (double c : m.col) hy += entropy_term(c);
    for (double p : m.p.cells) hxy += entropy_term(p);
    if (hx + hy <= 0.0)
        throw degenerate_error("uncertainty undefined: both marginals degenerate");
    return std::max(0.0, 2.0 * (hx + hy - hxy) / (hx + hy));
}

ClassicalReport classical_report(const ContingencyTable& t) {
    ClassicalReport r;
    r.msc = msc(t);
    const auto f = contingency_family(t);
    r.cramers_v = f.cramers_v;
    r.tschuprow_t = f.tschuprow_t;
    r.pearson_c = f.pearson_c;
    r.sakoda_s = f.sakoda_s;
    const auto lam = gk_lambda(t);
    r.lambda_x = lam.lambda_x;
    r.lambda_y = lam.lambda_y;
    r.lambda_sym = lam.lambda_sym;
    const auto gt = gk_tau(t);
    r.gk_tau_x = gt.tau_x;
    r.gk_tau_y = gt.tau_y;
    r.gk_tau_sym = gt.tau_sym;
    r.uncertainty = uncertainty(t);
    return r;
}

} // namespace nomcor
