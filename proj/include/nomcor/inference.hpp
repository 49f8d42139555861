#pragma once

#include <cstdint>
#include <vector>

#include "nomcor/distributions.hpp"
#include "nomcor/types.hpp"

namespace nomcor {

// Centered per-observation Hajek-projection kernels for one numbering,
// plus the plugged-in tau/nu estimates of that numbering.
struct KernelEstimates {
    std::vector<double> k1_tau;
    std::vector<double> k1_nu;
    double tau_hat = 0.0;
    double nu_hat = 0.0;
};

struct JointCovariance {
    std::vector<Numbering> numberings;
    std::vector<std::vector<double>> sigma; // m x m
    std::vector<double> tau_hat;            // per numbering
    std::vector<double> nu_hat;
    std::vector<double> gamma_hat;
};

struct ConfidenceInterval {
    double gamma_star = 0.0;
    double std_error = 0.0; // sigma_hat / sqrt(n)
    double lower = 0.0;
    double upper = 0.0;
    double level = 0.9;
    Numbering argmax;
    std::uint64_t argmax_count = 1;
};

struct IndependenceTest {
    double gamma_star = 0.0;
    double statistic = 0.0; // sqrt(n) * gamma_star
    double p_value = 1.0;
    int dimension = 0;
    std::uint64_t argmax_count = 1;
    double mvn_error = 0.0;
    std::int64_t mvn_points = 0;
};

KernelEstimates kernel_estimates(const PairedSample& s, const Numbering& numbering);

// variance estimate sigma^2 for sqrt(n)(gamma_hat - gamma), floored at 0
double sigma_gamma_hat(const PairedSample& s, const Numbering& numbering);

ConfidenceInterval confidence_interval(const PairedSample& s, double level = 0.9,
                                       const Limits& limits = {});

JointCovariance joint_covariance(const PairedSample& s, const Limits& limits = {});

IndependenceTest independence_test(const PairedSample& s, const MvnConfig& mvn = {},
                                   const Limits& limits = {});

// global F test of the category-indicator regression (nominal-real)
double f_test_baseline(const PairedSample& s);
// classic chi-square independence test
double chi2_test_baseline(const ContingencyTable& counts);
double chi2_test_baseline(const PairedSample& s);

} // namespace nomcor
