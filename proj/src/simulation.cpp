#include "nomcor/simulation.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cmath>
#include <fmt/format.h>
#include <fstream>
#include <functional>
#include <limits>
#include <numbers>
#include <sstream>
#include <thread>

#include "nomcor/distributions.hpp"
#include "nomcor/errors.hpp"
#include "nomcor/gamma_star.hpp"
#include "nomcor/inference.hpp"

namespace nomcor {

namespace {

constexpr double kNan = std::numeric_limits<double>::quiet_NaN();

struct FamilyEntry {
    DgpFamily family;
    const char* name;
};

constexpr FamilyEntry kFamilies[] = {
    {DgpFamily::regression_normal, "regression-normal"},
    {DgpFamily::regression_cauchy, "regression-cauchy"},
    {DgpFamily::mlogit_normal, "mlogit-normal"},
    {DgpFamily::mlogit_cauchy, "mlogit-cauchy"},
    {DgpFamily::table_skew_uniform, "table-skew-uniform"},
    {DgpFamily::table_uniform_uniform, "table-uniform-uniform"},
};

// P_A = e^{-t}/Z, P_B = e^{t}/Z, P_C = 1/Z with Z = 1 + e^{-t} + e^{t},
// computed overflow-free for arbitrary t
void mlogit_probs(double t, double& pa, double& pb, double& pc) {
    const double m = std::abs(t);
    const double ea = std::exp(-t - m), eb = std::exp(t - m), ec = std::exp(-m);
    const double z = ea + eb + ec;
    pa = ea / z;
    pb = eb / z;
    pc = ec / z;
}

double simpson(const std::vector<double>& v, double h) {
    const std::size_t n = v.size(); // odd point count
    double s = v.front() + v.back();
    for (std::size_t i = 1; i + 1 < n; ++i) s += v[i] * (i % 2 == 1 ? 4.0 : 2.0);
    return s * h / 3.0;
}

// population moments of the 3-category multinomial-logit pair (Y nominal, X real):
// m[c] = P(Y=c), J[c][cp] = P(Y=c, Y'=cp, X < X') for an iid copy
struct MlogitMoments {
    double j[3][3];
    double m[3];
    double nu;
};

MlogitMoments mlogit_moments(double alpha, bool cauchy) {
    const int npts = 40001;
    std::vector<double> grid(npts);
    std::vector<std::vector<double>> pw(3, std::vector<double>(npts));
    double h;
    if (cauchy) {
        // x = tan(theta) maps the Cauchy density to 1/pi on (-pi/2, pi/2)
        const double half = std::numbers::pi / 2.0;
        h = 2.0 * half / (npts - 1);
        for (int i = 0; i < npts; ++i) {
            const double th = -half + h * i;
            const double x = std::tan(std::clamp(th, -half + 1e-9, half - 1e-9));
            double pa, pb, pc;
            mlogit_probs(alpha * x, pa, pb, pc);
            const double w = 1.0 / std::numbers::pi;
            grid[i] = th;
            pw[0][i] = pa * w;
            pw[1][i] = pb * w;
            pw[2][i] = pc * w;
        }
    } else {
        const double lim = 12.0;
        h = 2.0 * lim / (npts - 1);
        for (int i = 0; i < npts; ++i) {
            const double x = -lim + h * i;
            double pa, pb, pc;
            mlogit_probs(alpha * x, pa, pb, pc);
            const double w = normal_pdf(x);
            grid[i] = x;
            pw[0][i] = pa * w;
            pw[1][i] = pb * w;
            pw[2][i] = pc * w;
        }
    }

    MlogitMoments mm{};
    std::vector<std::vector<double>> cum(3, std::vector<double>(npts));
    for (int c = 0; c < 3; ++c) {
        mm.m[c] = simpson(pw[c], h);
        cum[c][0] = 0.0;
        for (int i = 1; i < npts; ++i)
            cum[c][i] = cum[c][i - 1] + 0.5 * h * (pw[c][i - 1] + pw[c][i]);
    }
    std::vector<double> prod(npts);
    for (int c = 0; c < 3; ++c)
        for (int cp = 0; cp < 3; ++cp) {
            for (int i = 0; i < npts; ++i) prod[i] = pw[cp][i] * cum[c][i];
            mm.j[c][cp] = simpson(prod, h);
        }
    mm.nu = mm.m[0] * mm.m[0] + mm.m[1] * mm.m[1] + mm.m[2] * mm.m[2];
    return mm;
}

double mlogit_gamma_star(double alpha, bool cauchy) {
    const MlogitMoments mm = mlogit_moments(alpha, cauchy);
    int perm[3] = {0, 1, 2};
    double best = -2.0;
    std::sort(perm, perm + 3);
    do {
        int rank[3];
        for (int r = 0; r < 3; ++r) rank[perm[r]] = r;
        double tau = 0.0;
        for (int c = 0; c < 3; ++c)
            for (int cp = 0; cp < 3; ++cp)
                if (rank[c] < rank[cp]) tau += mm.j[c][cp] - mm.j[cp][c];
        best = std::max(best, 2.0 * tau / (1.0 - mm.nu));
    } while (std::next_permutation(perm, perm + 3));
    return best;
}

double parse_double_or_throw(const std::string& text, int line) {
    const char* b = text.data();
    const char* e = b + text.size();
    double v = 0.0;
    const auto res = std::from_chars(b, e, v);
    if (res.ec != std::errc{} || res.ptr != e || !std::isfinite(v))
        throw parse_error(fmt::format("config line {}: '{}' is not a number", line, text));
    return v;
}

std::int64_t parse_int_or_throw(const std::string& text, int line) {
    const char* b = text.data();
    const char* e = b + text.size();
    std::int64_t v = 0;
    const auto res = std::from_chars(b, e, v);
    if (res.ec != std::errc{} || res.ptr != e)
        throw parse_error(fmt::format("config line {}: '{}' is not an integer", line, text));
    return v;
}

std::string trim_copy(const std::string& s) {
    std::size_t b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return "";
    std::size_t e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

std::vector<std::string> split_list(const std::string& s) {
    std::vector<std::string> out;
    std::string cur;
    std::stringstream ss(s);
    while (std::getline(ss, cur, ',')) {
        cur = trim_copy(cur);
        if (!cur.empty()) out.push_back(cur);
    }
    return out;
}

const char* kind_name(StudyKind k) {
    switch (k) {
    case StudyKind::coverage: return "coverage";
    case StudyKind::bias: return "bias";
    case StudyKind::size: return "size";
    case StudyKind::power: return "power";
    }
    return "?";
}

struct RepOut {
    double est = kNan;
    double cover = kNan;
    double p = kNan;
    double pb = kNan;
};

void parallel_for(int count, int threads, const std::function<void(int)>& work) {
    int t = threads > 0 ? threads : static_cast<int>(std::thread::hardware_concurrency());
    t = std::clamp(t, 1, count);
    if (t == 1) {
        for (int i = 0; i < count; ++i) work(i);
        return;
    }
    std::atomic<int> next{0};
    std::vector<std::thread> pool;
    pool.reserve(t);
    for (int w = 0; w < t; ++w)
        pool.emplace_back([&] {
            for (int i = next.fetch_add(1); i < count; i = next.fetch_add(1)) work(i);
        });
    for (auto& th : pool) th.join();
}

StudyRow run_row(const StudyConfig& cfg, DgpFamily fam, int n, double alpha, int row_index) {
    const double truth = true_gamma_star(fam, alpha);
    const int reps = cfg.replications;
    std::vector<RepOut> slots(reps);

    auto work = [&](int r) {
        Rng rng = Rng::stream(cfg.seed, static_cast<std::uint64_t>(row_index),
                              static_cast<std::uint64_t>(r));
        const PairedSample s = generate(DgpSpec{fam, alpha, n}, rng);
        RepOut& o = slots[r];
        switch (cfg.kind) {
        case StudyKind::bias:
            o.est = gamma_star_estimate(s).value;
            break;
        case StudyKind::coverage: {
            const ConfidenceInterval ci = confidence_interval(s, cfg.ci_level);
            o.est = ci.gamma_star;
            o.cover = (ci.lower <= truth && truth <= ci.upper) ? 1.0 : 0.0;
            break;
        }
        case StudyKind::size:
        case StudyKind::power: {
            MvnConfig mvn;
            mvn.target_error = 1.5e-3;
            mvn.max_points = 1 << 14;
            mvn.randomizations = 8;
            mvn.first_points = 512;
            mvn.seed = rng.next_u64();
            const IndependenceTest t = independence_test(s, mvn);
            o.est = t.gamma_star;
            o.p = t.p_value;
            if (cfg.baselines)
                o.pb = family_is_table(fam) ? chi2_test_baseline(s) : f_test_baseline(s);
            break;
        }
        }
    };
    parallel_for(reps, cfg.threads, work);

    StudyRow row;
    row.family = family_name(fam);
    row.n = n;
    row.alpha = alpha;
    row.true_gamma_star = truth;
    row.replications = reps;
    row.seed = cfg.seed;
    row.coverage = kNan;
    row.rejection_rate = kNan;
    row.baseline_rejection_rate = kNan;
    row.ks_statistic = kNan;

    double bias_sum = 0.0;
    for (const RepOut& o : slots) bias_sum += o.est - truth;
    row.mean_bias = bias_sum / reps;

    if (cfg.kind == StudyKind::coverage) {
        double c = 0.0;
        for (const RepOut& o : slots) c += o.cover;
        row.coverage = c / reps;
    }
    if (cfg.kind == StudyKind::size || cfg.kind == StudyKind::power) {
        std::vector<double> ps(reps);
        int rej = 0, rej_b = 0;
        row.p_hist.assign(20, 0);
        for (int r = 0; r < reps; ++r) {
            ps[r] = slots[r].p;
            if (ps[r] <= cfg.test_level) ++rej;
            if (cfg.baselines && slots[r].pb <= cfg.test_level) ++rej_b;
            const int bin = std::min(static_cast<int>(ps[r] * 20.0), 19);
            ++row.p_hist[bin];
        }
        row.rejection_rate = static_cast<double>(rej) / reps;
        if (cfg.baselines) row.baseline_rejection_rate = static_cast<double>(rej_b) / reps;
        std::sort(ps.begin(), ps.end());
        double d = 0.0;
        for (int i = 0; i < reps; ++i) {
            d = std::max(d, std::abs((i + 1.0) / reps - ps[i]));
            d = std::max(d, std::abs(ps[i] - static_cast<double>(i) / reps));
        }
        row.ks_statistic = d;
    }
    return row;
}

} // namespace

const char* family_name(DgpFamily f) {
    for (const auto& e : kFamilies)
        if (e.family == f) return e.name;
    return "?";
}

std::optional<DgpFamily> family_from_name(const std::string& name) {
    for (const auto& e : kFamilies)
        if (name == e.name) return e.family;
    return std::nullopt;
}

bool family_is_table(DgpFamily f) {
    return f == DgpFamily::table_skew_uniform || f == DgpFamily::table_uniform_uniform;
}

ContingencyTable dgp_table(DgpFamily family, double alpha) {
    std::vector<double> cells;
    if (family == DgpFamily::table_uniform_uniform) {
        if (std::abs(alpha) > 5.0 / 6.0 + 1e-12)
            throw usage_error("table-uniform-uniform requires |alpha| <= 5/6");
        const double p = 1.0 / 9.0, a = alpha / 30.0;
        cells = {p + 2 * a, p - a,     p - a,
                 p + 2 * a, p - a,     p - a,
                 p - 4 * a, p + 2 * a, p + 2 * a};
    } else if (family == DgpFamily::table_skew_uniform) {
        if (alpha < -0.6 - 1e-12 || alpha > 1.2 + 1e-12)
            throw usage_error("table-skew-uniform requires alpha in [-0.6, 1.2]");
        const double q = 76.0 / 300.0, s = 0.04, a = alpha / 30.0;
        cells = {q + 2 * a, s - a,     s - a,
                 q + 2 * a, s - a,     s - a,
                 q - 4 * a, s + 2 * a, s + 2 * a};
    } else {
        throw usage_error("dgp_table requires a table family");
    }
    for (double& c : cells) c = std::max(c, 0.0); // clear rounding dust at range edges
    return ContingencyTable::probabilities({"A", "B", "C"}, {"a", "b", "c"}, cells);
}

PairedSample generate(const DgpSpec& spec, Rng& rng) {
    if (spec.n < 1) throw usage_error("sample size must be positive");
    static const char* cats[3] = {"A", "B", "C"};

    switch (spec.family) {
    case DgpFamily::regression_normal:
    case DgpFamily::regression_cauchy: {
        const bool cauchy = spec.family == DgpFamily::regression_cauchy;
        std::vector<std::string> x;
        std::vector<double> y;
        x.reserve(spec.n);
        y.reserve(spec.n);
        for (int i = 0; i < spec.n; ++i) {
            const int c = static_cast<int>(rng.next_below(3));
            const double u = cauchy ? rng.next_cauchy() : rng.next_normal();
            const double shift = c == 1 ? spec.alpha : (c == 2 ? -spec.alpha : 0.0);
            x.emplace_back(cats[c]);
            y.push_back(shift + u);
        }
        return PairedSample::nominal_real(x, y);
    }
    case DgpFamily::mlogit_normal:
    case DgpFamily::mlogit_cauchy: {
        const bool cauchy = spec.family == DgpFamily::mlogit_cauchy;
        std::vector<std::string> x;
        std::vector<double> y;
        x.reserve(spec.n);
        y.reserve(spec.n);
        for (int i = 0; i < spec.n; ++i) {
            const double xr = cauchy ? rng.next_cauchy() : rng.next_normal();
            double pa, pb, pc;
            mlogit_probs(spec.alpha * xr, pa, pb, pc);
            const double u = rng.next_double();
            const int c = u < pa ? 0 : (u < pa + pb ? 1 : 2);
            x.emplace_back(cats[c]);
            y.push_back(xr);
        }
        return PairedSample::nominal_real(x, y);
    }
    case DgpFamily::table_skew_uniform:
    case DgpFamily::table_uniform_uniform: {
        const ContingencyTable t = dgp_table(spec.family, spec.alpha);
        std::vector<double> cum(t.cells.size());
        double acc = 0.0;
        for (std::size_t c = 0; c < t.cells.size(); ++c) {
            acc += t.cells[c];
            cum[c] = acc;
        }
        std::vector<std::string> x, y;
        x.reserve(spec.n);
        y.reserve(spec.n);
        for (int i = 0; i < spec.n; ++i) {
            const double u = rng.next_double() * acc;
            std::size_t c = 0;
            while (c + 1 < cum.size() && u >= cum[c]) ++c;
            x.push_back(t.row_labels[c / t.l()]);
            y.push_back(t.col_labels[c % t.l()]);
        }
        return PairedSample::nominal_nominal(x, y);
    }
    }
    throw usage_error("unknown DGP family");
}

double true_gamma_star(DgpFamily family, double alpha) {
    switch (family) {
    case DgpFamily::regression_normal: {
        // pairwise concordance P(Y_c < Y_c') = Phi(mean gap / sqrt(2)), x-tie mass 1/3
        const double a = std::abs(alpha);
        return (4.0 * normal_cdf(a / std::numbers::sqrt2) +
                2.0 * normal_cdf(std::numbers::sqrt2 * a) - 3.0) / 3.0;
    }
    case DgpFamily::regression_cauchy: {
        // the difference of two standard Cauchys is Cauchy with scale 2
        const double a = std::abs(alpha);
        return 2.0 / (3.0 * std::numbers::pi) * (2.0 * std::atan(a / 2.0) + std::atan(a));
    }
    case DgpFamily::mlogit_normal:
        return mlogit_gamma_star(std::abs(alpha), false);
    case DgpFamily::mlogit_cauchy:
        return mlogit_gamma_star(std::abs(alpha), true);
    case DgpFamily::table_skew_uniform:
    case DgpFamily::table_uniform_uniform:
        return population_gamma_star(dgp_table(family, alpha)).value;
    }
    throw usage_error("unknown DGP family");
}

double true_gamma_star_mc(DgpFamily family, double alpha, std::int64_t draws,
                          std::uint64_t seed) {
    if (draws < 2) throw usage_error("MC oracle needs at least 2 draws");
    Rng rng = Rng::stream(seed, 0x6f7261636c65ULL, 0);
    const PairedSample s = generate(DgpSpec{family, alpha, static_cast<int>(draws)}, rng);
    return gamma_star_estimate(s).value;
}

double calibrate_alpha(DgpFamily family, double target_gamma_star, double tol) {
    if (!(tol > 0.0)) throw usage_error("calibration tolerance must be positive");
    if (target_gamma_star < 0.0 || target_gamma_star >= 1.0)
        throw usage_error("target gamma* must be in [0,1)");
    if (target_gamma_star == 0.0) return 0.0;

    double lo = 0.0, hi;
    if (family == DgpFamily::table_uniform_uniform) {
        hi = 5.0 / 6.0;
    } else if (family == DgpFamily::table_skew_uniform) {
        hi = 1.2;
    } else {
        hi = 1.0;
        while (true_gamma_star(family, hi) < target_gamma_star) {
            hi *= 2.0;
            if (hi > 1e6)
                throw usage_error(fmt::format("target gamma* {} is unattainable for {}",
                                              target_gamma_star, family_name(family)));
        }
    }
    if (true_gamma_star(family, hi) < target_gamma_star - 1e-12)
        throw usage_error(fmt::format(
            "target gamma* {} exceeds the attainable maximum {:.6g} for {}",
            target_gamma_star, true_gamma_star(family, hi), family_name(family)));

    for (int it = 0; it < 200 && hi - lo > 1e-12 * std::max(1.0, hi); ++it) {
        const double mid = 0.5 * (lo + hi);
        if (true_gamma_star(family, mid) < target_gamma_star)
            lo = mid;
        else
            hi = mid;
    }
    const double alpha = 0.5 * (lo + hi);
    if (std::abs(true_gamma_star(family, alpha) - target_gamma_star) > tol)
        throw usage_error(fmt::format("calibration for {} did not reach gamma* {} within {}",
                                      family_name(family), target_gamma_star, tol));
    return alpha;
}

StudyResult run_study(const StudyConfig& config) {
    if (config.families.empty()) throw usage_error("study needs at least one family");
    if (config.sample_sizes.empty()) throw usage_error("study needs at least one sample size");
    for (int n : config.sample_sizes)
        if (n < 2) throw usage_error("study sample sizes must be at least 2");
    if (config.replications < 1) throw usage_error("study needs at least one replication");
    if (!(config.ci_level > 0.0 && config.ci_level < 1.0))
        throw usage_error("ci_level must be in (0,1)");
    if (!(config.test_level > 0.0 && config.test_level < 1.0))
        throw usage_error("test_level must be in (0,1)");
    if (config.alphas.empty() && !config.target_gamma_star)
        throw usage_error("study needs alpha values or target_gamma_star");
    if (!config.alphas.empty() && config.target_gamma_star)
        throw usage_error("study takes either alpha values or target_gamma_star, not both");

    StudyResult out;
    out.config = config;
    int row_index = 0;
    for (DgpFamily fam : config.families) {
        std::vector<double> alphas = config.alphas;
        if (config.target_gamma_star)
            alphas = {calibrate_alpha(fam, *config.target_gamma_star)};
        for (int n : config.sample_sizes)
            for (double alpha : alphas) {
                out.rows.push_back(run_row(config, fam, n, alpha, row_index));
                ++row_index;
            }
    }
    return out;
}

std::vector<StudyConfig> parse_study_configs(std::istream& in) {
    std::vector<StudyConfig> out;
    StudyConfig cur;
    bool open = false, kind_set = false;

    auto flush = [&] {
        if (!open) return;
        if (!kind_set)
            throw parse_error(fmt::format("study '{}' is missing 'kind'", cur.name));
        if (cur.families.empty())
            throw parse_error(fmt::format("study '{}' is missing 'families'", cur.name));
        if (cur.sample_sizes.empty())
            throw parse_error(fmt::format("study '{}' is missing 'n'", cur.name));
        out.push_back(cur);
    };

    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const std::string t = trim_copy(line);
        if (t.empty() || t[0] == '#') continue;
        if (t.front() == '[') {
            if (t.back() != ']')
                throw parse_error(fmt::format("config line {}: unterminated section header", lineno));
            std::string head = trim_copy(t.substr(1, t.size() - 2));
            if (head.rfind("study", 0) != 0)
                throw parse_error(fmt::format("config line {}: expected [study NAME]", lineno));
            std::string name = trim_copy(head.substr(5));
            if (name.empty())
                throw parse_error(fmt::format("config line {}: study section needs a name", lineno));
            flush();
            cur = StudyConfig{};
            cur.name = name;
            open = true;
            kind_set = false;
            continue;
        }
        const std::size_t eq = t.find('=');
        if (eq == std::string::npos)
            throw parse_error(fmt::format("config line {}: expected 'key = value'", lineno));
        if (!open)
            throw parse_error(fmt::format("config line {}: key outside a [study] section", lineno));
        const std::string key = trim_copy(t.substr(0, eq));
        const std::string val = trim_copy(t.substr(eq + 1));
        if (val.empty())
            throw parse_error(fmt::format("config line {}: empty value for '{}'", lineno, key));

        if (key == "kind") {
            if (val == "coverage") cur.kind = StudyKind::coverage;
            else if (val == "bias") cur.kind = StudyKind::bias;
            else if (val == "size") cur.kind = StudyKind::size;
            else if (val == "power") cur.kind = StudyKind::power;
            else
                throw parse_error(fmt::format(
                    "config line {}: kind must be coverage|bias|size|power, got '{}'", lineno, val));
            kind_set = true;
        } else if (key == "families") {
            cur.families.clear();
            for (const std::string& f : split_list(val)) {
                const auto fam = family_from_name(f);
                if (!fam)
                    throw parse_error(
                        fmt::format("config line {}: unknown family '{}'", lineno, f));
                cur.families.push_back(*fam);
            }
        } else if (key == "n") {
            cur.sample_sizes.clear();
            for (const std::string& v : split_list(val))
                cur.sample_sizes.push_back(static_cast<int>(parse_int_or_throw(v, lineno)));
        } else if (key == "alpha") {
            cur.alphas.clear();
            for (const std::string& v : split_list(val))
                cur.alphas.push_back(parse_double_or_throw(v, lineno));
        } else if (key == "target_gamma_star") {
            cur.target_gamma_star = parse_double_or_throw(val, lineno);
        } else if (key == "replications") {
            cur.replications = static_cast<int>(parse_int_or_throw(val, lineno));
        } else if (key == "ci_level") {
            cur.ci_level = parse_double_or_throw(val, lineno);
        } else if (key == "test_level") {
            cur.test_level = parse_double_or_throw(val, lineno);
        } else if (key == "baselines") {
            if (val == "true" || val == "1") cur.baselines = true;
            else if (val == "false" || val == "0") cur.baselines = false;
            else
                throw parse_error(
                    fmt::format("config line {}: baselines must be true|false", lineno));
        } else if (key == "seed") {
            cur.seed = static_cast<std::uint64_t>(parse_int_or_throw(val, lineno));
        } else if (key == "threads") {
            cur.threads = static_cast<int>(parse_int_or_throw(val, lineno));
        } else {
            throw parse_error(fmt::format("config line {}: unknown key '{}'", lineno, key));
        }
    }
    flush();
    if (out.empty()) throw parse_error("config contains no [study] sections");
    return out;
}

std::vector<StudyConfig> load_study_configs(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw parse_error("cannot open config file: " + path);
    return parse_study_configs(in);
}

std::string study_tsv(const StudyResult& result) {
    std::string out =
        "study\tkind\tfamily\tn\talpha\ttrue_gamma_star\tmean_bias\tcoverage\t"
        "rejection_rate\tbaseline_rejection_rate\tks_statistic\treplications\tseed\n";
    for (const StudyRow& r : result.rows)
        out += fmt::format("{}\t{}\t{}\t{}\t{:.10g}\t{:.10g}\t{:.10g}\t{:.10g}\t{:.10g}\t"
                           "{:.10g}\t{:.10g}\t{}\t{}\n",
                           result.config.name, kind_name(result.config.kind), r.family, r.n,
                           r.alpha, r.true_gamma_star, r.mean_bias, r.coverage,
                           r.rejection_rate, r.baseline_rejection_rate, r.ks_statistic,
                           r.replications, r.seed);
    return out;
}

} // namespace nomcor
