#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace nomcor {

enum class SampleKind { nominal_nominal, nominal_real };
enum class TableMode { counts, probabilities };

struct NominalValue {
    std::string label;
    bool operator==(const NominalValue&) const = default;
};

// Observations of (nominal X, nominal-or-real Y). Labels are deduplicated and
// sorted lexicographically; per-observation values are stored as indices into
// the label vectors (xi, and yi for the nominal-nominal kind).
struct PairedSample {
    SampleKind kind = SampleKind::nominal_real;
    std::vector<std::string> x_labels; // sorted unique
    std::vector<std::string> y_labels; // nominal-nominal only
    std::vector<int> xi;               // category index per observation
    std::vector<int> yi;               // nominal-nominal only
    std::vector<double> y;             // nominal-real only

    static PairedSample nominal_real(const std::vector<std::string>& x,
                                     const std::vector<double>& y);
    static PairedSample nominal_nominal(const std::vector<std::string>& x,
                                        const std::vector<std::string>& y);

    std::size_t size() const { return xi.size(); }
    int k() const { return static_cast<int>(x_labels.size()); }
    int l() const { return static_cast<int>(y_labels.size()); }
};

// k x l nonnegative matrix with labeled rows/columns. All-zero rows and
// columns are dropped at construction so every marginal is positive.
struct ContingencyTable {
    TableMode mode = TableMode::counts;
    std::vector<std::string> row_labels;
    std::vector<std::string> col_labels;
    std::vector<double> cells; // row-major

    static ContingencyTable counts(std::vector<std::string> rows,
                                   std::vector<std::string> cols,
                                   std::vector<double> cells);
    static ContingencyTable probabilities(std::vector<std::string> rows,
                                          std::vector<std::string> cols,
                                          std::vector<double> cells);

    int k() const { return static_cast<int>(row_labels.size()); }
    int l() const { return static_cast<int>(col_labels.size()); }
    double at(int i, int j) const { return cells[static_cast<std::size_t>(i) * l() + j]; }
    double& at(int i, int j) { return cells[static_cast<std::size_t>(i) * l() + j]; }
    double row_sum(int i) const;
    double col_sum(int j) const;
    double total() const;
};

// Ranks 1..k assigned to the categories (in lexicographic label order).
// y_ranks is empty in the nominal-real case.
struct Numbering {
    std::vector<int> x_ranks;
    std::vector<int> y_ranks;

    // categories listed from lowest to highest rank
    static std::vector<int> order_of(const std::vector<int>& ranks);
    static Numbering from_orders(const std::vector<int>& x_order,
                                 const std::vector<int>& y_order);
};

struct PairCounts {
    std::int64_t concordant = 0;
    std::int64_t discordant = 0;
    std::int64_t ties_x_only = 0;
    std::int64_t ties_y_only = 0;
    std::int64_t ties_both = 0;

    std::int64_t ties() const { return ties_x_only + ties_y_only + ties_both; }
    std::int64_t total() const { return concordant + discordant + ties(); }
};

// Enumeration/DP budgets. The estimator allows larger problems than the
// inference path, whose cost is driven by the k! (or k!*l!) joint dimension.
struct Limits {
    int case1_max_k = 30;       // subset-DP estimator
    int case2_max_cat = 8;      // permutation-enumeration estimator, per axis
    int infer_case1_max_k = 6;  // joint covariance / independence test
    int infer_case2_max_cat = 4;
};

ContingencyTable table_from_sample(const PairedSample& s);
PairedSample sample_from_table(const ContingencyTable& counts);
ContingencyTable normalize(const ContingencyTable& t);
ContingencyTable comonotonic_table(const std::vector<double>& px,
                                   const std::vector<double>& py);

} // namespace nomcor
