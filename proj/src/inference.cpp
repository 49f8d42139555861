#include "nomcor/inference.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>
#include <vector>

#include "nomcor/errors.hpp"
#include "nomcor/gamma_star.hpp"

namespace nomcor {

namespace {

void check_ranks(const std::vector<int>& ranks, int k, const char* axis) {
    if (static_cast<int>(ranks.size()) != k)
        throw usage_error(std::string("numbering ") + axis + " size does not match the sample");
    std::vector<char> seen(k, 0);
    for (int r : ranks) {
        if (r < 1 || r > k || seen[r - 1])
            throw usage_error(std::string("numbering ") + axis +
                              " ranks must be a permutation of 1..k");
        seen[r - 1] = 1;
    }
}

// uncentered kernels via mid-distribution functions:
// u_i = 4 G_xy - 2(G_x + G_y) + 1 equals (1/n) sum_j sign(x_i-x_j) sign(y_i-y_j),
// unu_i = p_x(x_i) + p_y(y_i) - p_xy(x_i, y_i)
struct RawKernels {
    std::vector<double> u, unu;
};

RawKernels raw_kernels(const std::vector<int>& xi, const std::vector<int>& x_ranks,
                       const std::vector<double>& yv) {
    const int n = static_cast<int>(xi.size());
    const int k = static_cast<int>(x_ranks.size());
    const double dn = n;

    std::vector<double> px(k, 0.0);
    for (int c : xi) px[c] += 1.0 / dn;
    std::vector<double> gx(k, 0.0);
    double cum = 0.0;
    for (int c : Numbering::order_of(x_ranks)) {
        gx[c] = cum + 0.5 * px[c];
        cum += px[c];
    }

    std::vector<double> ys(yv);
    std::sort(ys.begin(), ys.end());
    std::vector<std::vector<double>> ycat(k);
    for (int i = 0; i < n; ++i) ycat[xi[i]].push_back(yv[i]);
    for (auto& v : ycat) std::sort(v.begin(), v.end());

    RawKernels rk{std::vector<double>(n), std::vector<double>(n)};
    for (int i = 0; i < n; ++i) {
        const double y = yv[i];
        const double lo =
            static_cast<double>(std::lower_bound(ys.begin(), ys.end(), y) - ys.begin());
        const double hi =
            static_cast<double>(std::upper_bound(ys.begin(), ys.end(), y) - ys.begin());
        const double gy = (lo + 0.5 * (hi - lo)) / dn;
        const double py = (hi - lo) / dn;

        const int ri = x_ranks[xi[i]];
        double fless = 0.0, fless_xeq = 0.0, feq_xless = 0.0, feq = 0.0;
        for (int c = 0; c < k; ++c) {
            const auto& yc = ycat[c];
            const double below =
                static_cast<double>(std::lower_bound(yc.begin(), yc.end(), y) - yc.begin()) / dn;
            const double eq =
                static_cast<double>(std::upper_bound(yc.begin(), yc.end(), y) - yc.begin()) / dn -
                below;
            if (x_ranks[c] < ri) {
                fless += below;
                feq_xless += eq;
            } else if (c == xi[i]) {
                fless_xeq += below;
                feq += eq;
            }
        }
        const double gxy = fless + 0.5 * fless_xeq + 0.5 * feq_xless + 0.25 * feq;
        rk.u[i] = 4.0 * gxy - 2.0 * (gx[xi[i]] + gy) + 1.0;
        rk.unu[i] = px[xi[i]] + py - feq;
    }
    return rk;
}

std::vector<double> numeric_y(const PairedSample& s, const Numbering& numbering) {
    if (s.kind == SampleKind::nominal_real) {
        if (!numbering.y_ranks.empty())
            throw usage_error("nominal-real samples take an x-only numbering");
        return s.y;
    }
    check_ranks(numbering.y_ranks, s.l(), "y");
    std::vector<double> yv(s.size());
    for (std::size_t i = 0; i < s.size(); ++i)
        yv[i] = static_cast<double>(numbering.y_ranks[s.yi[i]]);
    return yv;
}

} // namespace

KernelEstimates kernel_estimates(const PairedSample& s, const Numbering& numbering) {
    const int n = static_cast<int>(s.size());
    if (n < 2) throw degenerate_error("kernel estimation requires at least 2 observations");
    check_ranks(numbering.x_ranks, s.k(), "x");
    const RawKernels rk = raw_kernels(s.xi, numbering.x_ranks, numeric_y(s, numbering));

    double um = 0.0, unm = 0.0;
    for (int i = 0; i < n; ++i) {
        um += rk.u[i];
        unm += rk.unu[i];
    }
    um /= n;
    unm /= n;

    KernelEstimates ke;
    ke.k1_tau.resize(n);
    ke.k1_nu.resize(n);
    for (int i = 0; i < n; ++i) {
        ke.k1_tau[i] = rk.u[i] - um;
        ke.k1_nu[i] = rk.unu[i] - unm;
    }
    // de-bias the plug-in means to the U-statistic values
    ke.tau_hat = um * n / (n - 1.0);
    ke.nu_hat = (unm * n - 1.0) / (n - 1.0);
    return ke;
}

double sigma_gamma_hat(const PairedSample& s, const Numbering& numbering) {
    const KernelEstimates ke = kernel_estimates(s, numbering);
    const double om = 1.0 - ke.nu_hat;
    if (om <= 1e-12)
        throw degenerate_error("variance undefined: estimated tie probability is 1");
    const int n = static_cast<int>(ke.k1_tau.size());
    double st = 0.0, sn = 0.0, stn = 0.0;
    for (int i = 0; i < n; ++i) {
        st += ke.k1_tau[i] * ke.k1_tau[i];
        sn += ke.k1_nu[i] * ke.k1_nu[i];
        stn += ke.k1_tau[i] * ke.k1_nu[i];
    }
    st *= 4.0 / n;
    sn *= 4.0 / n;
    stn *= 4.0 / n;
    const double g = ke.tau_hat / om;
    return std::max((st + g * g * sn + 2.0 * g * stn) / (om * om), 0.0);
}

ConfidenceInterval confidence_interval(const PairedSample& s, double level,
                                       const Limits& limits) {
    if (!(level > 0.0 && level < 1.0))
        throw usage_error("confidence level must be in (0,1)");
    const GammaStarResult gs = gamma_star_estimate(s, limits);
    const double se = std::sqrt(sigma_gamma_hat(s, gs.argmax) / static_cast<double>(s.size()));
    const double z = normal_quantile(1.0 - (1.0 - level) / 2.0);

    ConfidenceInterval ci;
    ci.gamma_star = gs.value;
    ci.std_error = se;
    ci.lower = std::max(gs.value - z * se, 0.0);
    ci.upper = std::min(gs.value + z * se, 1.0);
    ci.level = level;
    ci.argmax = gs.argmax;
    ci.argmax_count = gs.argmax_count;
    return ci;
}

JointCovariance joint_covariance(const PairedSample& s, const Limits& limits) {
    const int n = static_cast<int>(s.size());
    if (n < 2) throw degenerate_error("joint covariance requires at least 2 observations");

    JointCovariance jc;
    std::vector<std::vector<double>> phi;
    auto add = [&](const Numbering& nb) {
        const KernelEstimates ke = kernel_estimates(s, nb);
        const double om = 1.0 - ke.nu_hat;
        if (om <= 1e-12)
            throw degenerate_error("joint covariance undefined: estimated tie probability is 1");
        std::vector<double> row(n);
        const double slope = ke.tau_hat / (om * om);
        for (int i = 0; i < n; ++i) row[i] = ke.k1_tau[i] / om + slope * ke.k1_nu[i];
        phi.push_back(std::move(row));
        jc.numberings.push_back(nb);
        jc.tau_hat.push_back(ke.tau_hat);
        jc.nu_hat.push_back(ke.nu_hat);
        jc.gamma_hat.push_back(ke.tau_hat / om);
    };

    if (s.kind == SampleKind::nominal_real) {
        const int k = s.k();
        if (k > limits.infer_case1_max_k)
            throw budget_error("joint covariance limited to " +
                               std::to_string(limits.infer_case1_max_k) +
                               " categories for nominal-real samples (dimension k!)");
        std::vector<int> xr(k);
        std::iota(xr.begin(), xr.end(), 1);
        do {
            add(Numbering{xr, {}});
        } while (std::next_permutation(xr.begin(), xr.end()));
    } else {
        const int k = s.k(), l = s.l();
        if (k > limits.infer_case2_max_cat || l > limits.infer_case2_max_cat)
            throw budget_error("joint covariance limited to " +
                               std::to_string(limits.infer_case2_max_cat) +
                               " categories per axis for nominal-nominal samples "
                               "(dimension k!*l!)");
        std::vector<int> xr(k);
        std::iota(xr.begin(), xr.end(), 1);
        do {
            std::vector<int> yr(l);
            std::iota(yr.begin(), yr.end(), 1);
            do {
                add(Numbering{xr, yr});
            } while (std::next_permutation(yr.begin(), yr.end()));
        } while (std::next_permutation(xr.begin(), xr.end()));
    }

    const int m = static_cast<int>(phi.size());
    jc.sigma.assign(m, std::vector<double>(m, 0.0));
    for (int a = 0; a < m; ++a)
        for (int b = a; b < m; ++b) {
            double acc = 0.0;
            for (int i = 0; i < n; ++i) acc += phi[a][i] * phi[b][i];
            jc.sigma[a][b] = jc.sigma[b][a] = 4.0 * acc / n;
        }
    return jc;
}

IndependenceTest independence_test(const PairedSample& s, const MvnConfig& mvn,
                                   const Limits& limits) {
    // budget check first so infeasible dimensions fail before any heavy work
    if (s.kind == SampleKind::nominal_real) {
        if (s.k() > limits.infer_case1_max_k)
            throw budget_error("independence test limited to " +
                               std::to_string(limits.infer_case1_max_k) +
                               " categories for nominal-real samples");
    } else if (s.k() > limits.infer_case2_max_cat || s.l() > limits.infer_case2_max_cat) {
        throw budget_error("independence test limited to " +
                           std::to_string(limits.infer_case2_max_cat) +
                           " categories per axis for nominal-nominal samples");
    }

    const GammaStarResult gs = gamma_star_estimate(s, limits);
    const JointCovariance jc = joint_covariance(s, limits);

    IndependenceTest t;
    t.gamma_star = gs.value;
    t.statistic = std::sqrt(static_cast<double>(s.size())) * gs.value;
    t.dimension = static_cast<int>(jc.sigma.size());
    t.argmax_count = gs.argmax_count;
    const MvnCdfResult res =
        mvn_cdf(std::vector<double>(t.dimension, t.statistic), jc.sigma, mvn);
    t.p_value = std::clamp(1.0 - res.probability, 0.0, 1.0);
    t.mvn_error = res.error_estimate;
    t.mvn_points = res.points_used;
    return t;
}

double f_test_baseline(const PairedSample& s) {
    if (s.kind != SampleKind::nominal_real)
        throw usage_error("f test requires a nominal-real sample");
    const int n = static_cast<int>(s.size()), k = s.k();
    if (k < 2) throw usage_error("f test requires at least 2 categories");
    if (n <= k) throw usage_error("f test design is singular: need n > k");

    std::vector<double> sum(k, 0.0);
    std::vector<int> cnt(k, 0);
    double total = 0.0, sum2 = 0.0;
    for (int i = 0; i < n; ++i) {
        sum[s.xi[i]] += s.y[i];
        cnt[s.xi[i]] += 1;
        total += s.y[i];
        sum2 += s.y[i] * s.y[i];
    }
    const double grand = total / n;
    double ssr = 0.0, sse = 0.0;
    for (int c = 0; c < k; ++c) {
        const double mc = sum[c] / cnt[c];
        ssr += cnt[c] * (mc - grand) * (mc - grand);
    }
    for (int i = 0; i < n; ++i) {
        const double d = s.y[i] - sum[s.xi[i]] / cnt[s.xi[i]];
        sse += d * d;
    }
    const double sst = ssr + sse;
    if (sst <= 1e-12 * (1.0 + sum2)) return 1.0; // constant response
    if (sse <= 1e-12 * sst) return 0.0;          // perfect group separation
    const double fstat = (ssr / (k - 1)) / (sse / (n - k));
    return f_sf(fstat, k - 1, n - k);
}

double chi2_test_baseline(const ContingencyTable& counts) {
    if (counts.mode != TableMode::counts)
        throw usage_error("chi-square test requires a counts table");
    const int a = counts.k(), b = counts.l();
    if (a < 2 || b < 2) throw usage_error("chi-square test requires at least a 2x2 table");
    const double total = counts.total();
    for (int i = 0; i < a; ++i)
        if (counts.row_sum(i) <= 0.0)
            throw degenerate_error("chi-square test requires positive marginals");
    for (int j = 0; j < b; ++j)
        if (counts.col_sum(j) <= 0.0)
            throw degenerate_error("chi-square test requires positive marginals");
    double stat = 0.0;
    for (int i = 0; i < a; ++i)
        for (int j = 0; j < b; ++j) {
            const double e = counts.row_sum(i) * counts.col_sum(j) / total;
            const double d = counts.at(i, j) - e;
            stat += d * d / e;
        }
    return chi2_sf(stat, (a - 1.0) * (b - 1.0));
}

double chi2_test_baseline(const PairedSample& s) {
    return chi2_test_baseline(table_from_sample(s));
}

} // namespace nomcor
