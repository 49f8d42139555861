#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "nomcor/rng.hpp"
#include "nomcor/types.hpp"

namespace nomcor {

enum class DgpFamily {
    regression_normal,
    regression_cauchy,
    mlogit_normal,
    mlogit_cauchy,
    table_skew_uniform,
    table_uniform_uniform,
};

const char* family_name(DgpFamily f);
std::optional<DgpFamily> family_from_name(const std::string& name);
bool family_is_table(DgpFamily f);

struct DgpSpec {
    DgpFamily family = DgpFamily::regression_normal;
    double alpha = 0.0;
    int n = 0;
};

// exact 3x3 cell probabilities of the table families
ContingencyTable dgp_table(DgpFamily family, double alpha);

PairedSample generate(const DgpSpec& spec, Rng& rng);

double true_gamma_star(DgpFamily family, double alpha);
// Monte-Carlo cross-check oracle for the continuous families
double true_gamma_star_mc(DgpFamily family, double alpha, std::int64_t draws,
                          std::uint64_t seed);

double calibrate_alpha(DgpFamily family, double target_gamma_star, double tol = 1e-3);

enum class StudyKind { coverage, bias, size, power };

struct StudyConfig {
    std::string name = "study";
    StudyKind kind = StudyKind::size;
    std::vector<DgpFamily> families;
    std::vector<int> sample_sizes;
    std::vector<double> alphas;              // one row per alpha, or
    std::optional<double> target_gamma_star; // calibrated alpha per family
    int replications = 1000;
    double ci_level = 0.9;
    double test_level = 0.10;
    bool baselines = true;
    std::uint64_t seed = 1;
    int threads = 0; // 0 = hardware concurrency
};

struct StudyRow {
    std::string family;
    int n = 0;
    double alpha = 0.0;
    double true_gamma_star = 0.0;
    double mean_bias = 0.0;
    double coverage = 0.0;         // nan unless coverage study
    double rejection_rate = 0.0;   // nan unless size/power study
    double baseline_rejection_rate = 0.0;
    double ks_statistic = 0.0;     // gamma-test p-values vs uniform
    int replications = 0;
    std::uint64_t seed = 0;
    std::vector<std::int64_t> p_hist; // 20 uniform bins of gamma-test p-values
};

struct StudyResult {
    StudyConfig config;
    std::vector<StudyRow> rows;
};

StudyResult run_study(const StudyConfig& config);

// "key = value" sections introduced by [study NAME]; returns one config per
// section. Used by the CLI and shipped experiment files.
std::vector<StudyConfig> parse_study_configs(std::istream& in);
std::vector<StudyConfig> load_study_configs(const std::string& path);

std::string study_tsv(const StudyResult& result);

} // namespace nomcor
