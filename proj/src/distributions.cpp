#include "nomcor/distributions.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>
#include <vector>

#include "nomcor/errors.hpp"
#include "nomcor/rng.hpp"

namespace nomcor {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Acklam's rational approximation, ~1e-9 absolute error, no input checks.
double quantile_raw(double p) {
    static const double a[6] = {-3.969683028665376e+01, 2.209460984245205e+02,
                                -2.759285104469687e+02, 1.383577518672690e+02,
                                -3.066479806614716e+01, 2.506628277459239e+00};
    static const double b[5] = {-5.447609879822406e+01, 1.615858368580409e+02,
                                -1.556989798598866e+02, 6.680131188771972e+01,
                                -1.328068155288572e+01};
    static const double c[6] = {-7.784894002430293e-03, -3.223964580411365e-01,
                                -2.400758277161838e+00, -2.549732539343734e+00,
                                4.374664141464968e+00,  2.938163982698783e+00};
    static const double d[4] = {7.784695709041462e-03, 3.224671290700398e-01,
                                2.445134137142996e+00, 3.754408661907416e+00};
    const double plow = 0.02425;
    if (p < plow) {
        const double q = std::sqrt(-2.0 * std::log(p));
        return (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
               ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
    }
    if (p <= 1.0 - plow) {
        const double q = p - 0.5, r = q * q;
        return (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) * q /
               (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1.0);
    }
    const double q = std::sqrt(-2.0 * std::log(1.0 - p));
    return -(((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
           ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
}

// regularized lower incomplete gamma P(a,x) by series, for x < a+1
double gamma_p_series(double a, double x) {
    if (x <= 0.0) return 0.0;
    double ap = a, sum = 1.0 / a, del = sum;
    for (int i = 0; i < 1000; ++i) {
        ap += 1.0;
        del *= x / ap;
        sum += del;
        if (std::abs(del) < std::abs(sum) * 1e-16) break;
    }
    return sum * std::exp(-x + a * std::log(x) - std::lgamma(a));
}

// regularized upper incomplete gamma Q(a,x) by Lentz continued fraction, for x >= a+1
double gamma_q_cf(double a, double x) {
    const double tiny = 1e-300;
    double b = x + 1.0 - a, c = 1.0 / tiny, d = 1.0 / b, h = d;
    for (int i = 1; i <= 1000; ++i) {
        const double an = -static_cast<double>(i) * (static_cast<double>(i) - a);
        b += 2.0;
        d = an * d + b;
        if (std::abs(d) < tiny) d = tiny;
        c = b + an / c;
        if (std::abs(c) < tiny) c = tiny;
        d = 1.0 / d;
        const double del = d * c;
        h *= del;
        if (std::abs(del - 1.0) < 1e-16) break;
    }
    return std::exp(-x + a * std::log(x) - std::lgamma(a)) * h;
}

double reg_gamma_q(double a, double x) {
    if (x <= 0.0) return 1.0;
    if (x < a + 1.0) return 1.0 - gamma_p_series(a, x);
    return gamma_q_cf(a, x);
}

// incomplete beta continued fraction (Lentz)
double betacf(double a, double b, double x) {
    const double tiny = 1e-300;
    const double qab = a + b, qap = a + 1.0, qam = a - 1.0;
    double c = 1.0, d = 1.0 - qab * x / qap;
    if (std::abs(d) < tiny) d = tiny;
    d = 1.0 / d;
    double h = d;
    for (int m = 1; m <= 1000; ++m) {
        const double m2 = 2.0 * m;
        double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
        d = 1.0 + aa * d;
        if (std::abs(d) < tiny) d = tiny;
        c = 1.0 + aa / c;
        if (std::abs(c) < tiny) c = tiny;
        d = 1.0 / d;
        h *= d * c;
        aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
        d = 1.0 + aa * d;
        if (std::abs(d) < tiny) d = tiny;
        c = 1.0 + aa / c;
        if (std::abs(c) < tiny) c = tiny;
        d = 1.0 / d;
        const double del = d * c;
        h *= del;
        if (std::abs(del - 1.0) < 1e-16) break;
    }
    return h;
}

double reg_inc_beta(double a, double b, double x) {
    if (x <= 0.0) return 0.0;
    if (x >= 1.0) return 1.0;
    const double bt = std::exp(std::lgamma(a + b) - std::lgamma(a) - std::lgamma(b) +
                               a * std::log(x) + b * std::log1p(-x));
    if (x < (a + 1.0) / (a + b + 2.0)) return bt * betacf(a, b, x) / a;
    return 1.0 - bt * betacf(b, a, 1.0 - x) / b;
}

std::vector<double> lattice_roots(int count) {
    std::vector<int> primes;
    primes.reserve(count);
    for (int cand = 2; static_cast<int>(primes.size()) < count; ++cand) {
        bool is_prime = true;
        for (int p : primes) {
            if (p * p > cand) break;
            if (cand % p == 0) {
                is_prime = false;
                break;
            }
        }
        if (is_prime) primes.push_back(cand);
    }
    std::vector<double> r(count);
    for (int i = 0; i < count; ++i) r[i] = std::sqrt(static_cast<double>(primes[i]));
    return r;
}

} // namespace

double normal_pdf(double z) {
    return std::exp(-0.5 * z * z) / std::sqrt(2.0 * std::numbers::pi);
}

double normal_cdf(double z) { return 0.5 * std::erfc(-z / std::numbers::sqrt2); }

double normal_quantile(double p) {
    if (!(p > 0.0 && p < 1.0)) throw usage_error("normal_quantile requires p in (0,1)");
    double x = quantile_raw(p);
    // one Halley refinement on top of the ~1e-9 rational approximation
    const double e = normal_cdf(x) - p;
    const double u = e / normal_pdf(x);
    return x - u / (1.0 + 0.5 * x * u);
}

double chi2_sf(double x, double df) {
    if (!(df >= 1.0)) throw usage_error("chi2_sf requires df >= 1");
    if (!(x >= 0.0)) throw usage_error("chi2_sf requires x >= 0");
    return reg_gamma_q(0.5 * df, 0.5 * x);
}

double f_sf(double x, double d1, double d2) {
    if (!(d1 >= 1.0) || !(d2 >= 1.0)) throw usage_error("f_sf requires d1, d2 >= 1");
    if (!(x >= 0.0)) throw usage_error("f_sf requires x >= 0");
    if (x == 0.0) return 1.0;
    return reg_inc_beta(0.5 * d2, 0.5 * d1, d2 / (d2 + d1 * x));
}

MvnCdfResult mvn_cdf_box(const std::vector<double>& lower, const std::vector<double>& upper,
                         const std::vector<std::vector<double>>& cov, const MvnConfig& config) {
    const int m0 = static_cast<int>(upper.size());
    if (m0 < 1) throw usage_error("mvn_cdf requires dimension >= 1");
    if (static_cast<int>(lower.size()) != m0 || static_cast<int>(cov.size()) != m0)
        throw usage_error("mvn_cdf dimension mismatch between limits and covariance");
    for (const auto& row : cov)
        if (static_cast<int>(row.size()) != m0)
            throw usage_error("mvn_cdf covariance must be square");
    if (m0 > 720)
        throw budget_error("mvn_cdf dimension " + std::to_string(m0) +
                           " exceeds the 720 limit; use a cheaper independence test");

    double scale = 1.0;
    for (int i = 0; i < m0; ++i) scale = std::max(scale, std::abs(cov[i][i]));
    for (int i = 0; i < m0; ++i)
        for (int j = i + 1; j < m0; ++j)
            if (std::abs(cov[i][j] - cov[j][i]) > 1e-8 * scale)
                throw usage_error("mvn_cdf covariance is not symmetric");
    for (int i = 0; i < m0; ++i)
        if (lower[i] > upper[i]) return {0.0, 0.0, 0};

    // drop zero-variance components after checking their box contains the mean
    std::vector<int> keep;
    for (int i = 0; i < m0; ++i) {
        const double di = cov[i][i];
        if (di < -1e-8 * scale)
            throw usage_error("mvn_cdf covariance has a negative diagonal entry");
        if (di <= 1e-14 * scale) {
            if (lower[i] > 0.0 || upper[i] < 0.0) return {0.0, 0.0, 0};
        } else {
            keep.push_back(i);
        }
    }
    if (keep.empty()) return {1.0, 0.0, 0};

    int m = static_cast<int>(keep.size());
    std::vector<double> sd(m), u(m), l(m);
    std::vector<std::vector<double>> R(m, std::vector<double>(m));
    for (int i = 0; i < m; ++i) sd[i] = std::sqrt(cov[keep[i]][keep[i]]);
    for (int i = 0; i < m; ++i) {
        u[i] = upper[keep[i]] / sd[i];
        l[i] = lower[keep[i]] / sd[i];
        for (int j = 0; j < m; ++j) R[i][j] = cov[keep[i]][keep[j]] / (sd[i] * sd[j]);
    }

    // merge groups of perfectly correlated components into one coordinate each,
    // intersecting their boxes (sign-flipped for negative correlation)
    std::vector<char> visited(m, 0);
    std::vector<double> sgn(m, 0.0);
    std::vector<int> reps;
    std::vector<double> mu_u, mu_l;
    for (int i = 0; i < m; ++i) {
        if (visited[i]) continue;
        std::vector<int> comp{i};
        visited[i] = 1;
        sgn[i] = 1.0;
        for (std::size_t qi = 0; qi < comp.size(); ++qi) {
            const int a = comp[qi];
            for (int b = 0; b < m; ++b)
                if (!visited[b] && std::abs(std::abs(R[a][b]) - 1.0) < 1e-10) {
                    visited[b] = 1;
                    sgn[b] = sgn[a] * (R[a][b] > 0.0 ? 1.0 : -1.0);
                    comp.push_back(b);
                }
        }
        double lo = -kInf, hi = kInf;
        for (int b : comp) {
            if (sgn[b] > 0.0) {
                lo = std::max(lo, l[b]);
                hi = std::min(hi, u[b]);
            } else {
                lo = std::max(lo, -u[b]);
                hi = std::min(hi, -l[b]);
            }
        }
        if (lo >= hi) return {0.0, 0.0, 0};
        reps.push_back(i);
        mu_l.push_back(lo);
        mu_u.push_back(hi);
    }
    const int mm = static_cast<int>(reps.size());
    std::vector<std::vector<double>> C(mm, std::vector<double>(mm));
    for (int i = 0; i < mm; ++i)
        for (int j = 0; j < mm; ++j)
            C[i][j] = std::clamp(R[reps[i]][reps[j]], -1.0, 1.0);
    std::vector<double> uu = mu_u, ll = mu_l;
    m = mm;

    if (m == 1) {
        const double p = std::clamp(normal_cdf(uu[0]) - normal_cdf(ll[0]), 0.0, 1.0);
        return {p, 0.0, 0};
    }

    // pivoted Cholesky, smallest conditional probability first; exact linear
    // constraints surface as zero pivots and become indicator rows
    std::vector<std::vector<double>> L(m, std::vector<double>(m, 0.0));
    std::vector<double> yexp(m, 0.0);
    for (int j = 0; j < m; ++j) {
        int bestp = -1;
        double bestval = kInf;
        for (int p = j; p < m; ++p) {
            double v = C[p][p];
            for (int t = 0; t < j; ++t) v -= L[p][t] * L[p][t];
            double cand = 0.0;
            if (v >= 1e-12) {
                double s = 0.0;
                for (int t = 0; t < j; ++t) s += L[p][t] * yexp[t];
                const double sdv = std::sqrt(v);
                cand = normal_cdf((uu[p] - s) / sdv) - normal_cdf((ll[p] - s) / sdv);
            }
            if (cand < bestval - 1e-15) {
                bestval = cand;
                bestp = p;
            }
        }
        const int p = bestp;
        if (p != j) {
            std::swap(uu[j], uu[p]);
            std::swap(ll[j], ll[p]);
            std::swap(C[j], C[p]);
            for (auto& row : C) std::swap(row[j], row[p]);
            for (int t = 0; t < j; ++t) std::swap(L[j][t], L[p][t]);
        }
        double v = C[j][j];
        for (int t = 0; t < j; ++t) v -= L[j][t] * L[j][t];
        if (v < -1e-8)
            throw usage_error("mvn_cdf covariance has a negative eigenvalue beyond tolerance");
        if (v < 1e-12) {
            L[j][j] = 0.0;
        } else {
            L[j][j] = std::sqrt(v);
            double s = 0.0;
            for (int t = 0; t < j; ++t) s += L[j][t] * yexp[t];
            const double a = (ll[j] - s) / L[j][j], b = (uu[j] - s) / L[j][j];
            const double denom = std::max(normal_cdf(b) - normal_cdf(a), 1e-300);
            yexp[j] = -(normal_pdf(b) - normal_pdf(a)) / denom;
        }
        for (int i = j + 1; i < m; ++i) {
            if (L[j][j] > 0.0) {
                double s = C[i][j];
                for (int t = 0; t < j; ++t) s -= L[i][t] * L[j][t];
                L[i][j] = s / L[j][j];
            } else {
                L[i][j] = 0.0;
            }
        }
    }

    // randomized QMC over the separated variables
    const auto roots = lattice_roots(std::max(m - 1, 1));
    const int runs = std::max(config.randomizations, 2);
    std::int64_t n_pts = std::max<std::int64_t>(config.first_points, 16);
    std::int64_t pts_used = 0;
    double est = 0.0, err = kInf;
    std::vector<double> means(runs), y(m);
    for (std::uint64_t round = 0;; ++round) {
        for (int r = 0; r < runs; ++r) {
            Rng rs = Rng::stream(config.seed, round + 1, static_cast<std::uint64_t>(r) + 1);
            std::vector<double> shift(roots.size());
            for (auto& sh : shift) sh = rs.next_double();
            double sum = 0.0;
            for (std::int64_t i = 1; i <= n_pts; ++i) {
                double f = 1.0;
                int wcol = 0;
                for (int j = 0; j < m; ++j) {
                    double s = 0.0;
                    for (int t = 0; t < j; ++t) s += L[j][t] * y[t];
                    if (L[j][j] == 0.0) {
                        if (!(ll[j] - s <= 1e-9 && s <= uu[j] + 1e-9)) {
                            f = 0.0;
                            break;
                        }
                        y[j] = 0.0;
                    } else {
                        const double a = normal_cdf((ll[j] - s) / L[j][j]);
                        const double b = normal_cdf((uu[j] - s) / L[j][j]);
                        f *= std::max(b - a, 0.0);
                        if (f <= 0.0) break;
                        if (j < m - 1) {
                            double t = static_cast<double>(i) * roots[wcol] + shift[wcol];
                            ++wcol;
                            const double w = std::abs(2.0 * (t - std::floor(t)) - 1.0);
                            const double z =
                                std::clamp(a + w * (b - a), 1e-16, 1.0 - 1e-16);
                            y[j] = quantile_raw(z);
                        }
                    }
                }
                sum += f;
            }
            means[r] = sum / static_cast<double>(n_pts);
        }
        pts_used += n_pts * runs;
        double mean = 0.0;
        for (double v : means) mean += v;
        mean /= runs;
        double var = 0.0;
        for (double v : means) var += (v - mean) * (v - mean);
        var /= (runs - 1);
        est = mean;
        err = 3.0 * std::sqrt(var / runs);
        if (err <= config.target_error || n_pts * 2 > config.max_points) break;
        n_pts *= 2;
    }
    return {std::clamp(est, 0.0, 1.0), err, pts_used};
}

MvnCdfResult mvn_cdf(const std::vector<double>& upper,
                     const std::vector<std::vector<double>>& cov, const MvnConfig& config) {
    return mvn_cdf_box(std::vector<double>(upper.size(), -kInf), upper, cov, config);
}

} // namespace nomcor
