#pragma once

#include <cstdint>
#include <vector>

namespace nomcor {

double normal_cdf(double z);
double normal_pdf(double z);
// accurate to ~1e-9 (rational approximation plus one Halley refinement)
double normal_quantile(double p);

// survival functions via regularized incomplete gamma/beta
double chi2_sf(double x, double df);
double f_sf(double x, double d1, double d2);

struct MvnConfig {
    double target_error = 1e-4;   // 3-sigma band
    std::int64_t max_points = 1 << 17; // per randomization
    int randomizations = 12;
    int first_points = 1 << 10;
    std::uint64_t seed = 1;
};

struct MvnCdfResult {
    double probability = 0.0;
    double error_estimate = 0.0;
    std::int64_t points_used = 0;
};

// P(lower <= Z <= upper), Z ~ N(0, cov), by separation-of-variables with
// variable reordering and randomized QMC. cov may be rank-deficient:
// perfectly correlated components are merged analytically and remaining
// exact linear constraints become indicator factors. Dimension capped at 720.
MvnCdfResult mvn_cdf_box(const std::vector<double>& lower,
                         const std::vector<double>& upper,
                         const std::vector<std::vector<double>>& cov,
                         const MvnConfig& config = {});

// one-sided convenience: lower = -inf
MvnCdfResult mvn_cdf(const std::vector<double>& upper,
                     const std::vector<std::vector<double>>& cov,
                     const MvnConfig& config = {});

} // namespace nomcor
