#include "doctest.h"

#include <cmath>
#include <string>

#include "helpers.hpp"
#include "nomcor/classical.hpp"
#include "nomcor/errors.hpp"
#include "nomcor/types.hpp"

using namespace nomcor;
using testutil::thrown_kind;

namespace {

ContingencyTable religion() {
    return ContingencyTable::counts(
        {"Germany", "Poland", "Czechia"}, {"Christians", "Jews", "Muslims"},
        {56071000, 127000, 5351000, 36782000, 3100, 39200, 3684000, 3700, 13400});
}

} // namespace

TEST_CASE("religion table reproduces the published classical values") {
    auto rep = classical_report(religion());
    CHECK(rep.cramers_v == doctest::Approx(0.13376990605355008).epsilon(1e-9));
    CHECK(rep.tschuprow_t == doctest::Approx(0.13376990605355008).epsilon(1e-9));
    CHECK(rep.pearson_c == doctest::Approx(0.18588220675412334).epsilon(1e-9));
    CHECK(rep.sakoda_s == doctest::Approx(0.22765827940506358).epsilon(1e-9));
    CHECK(rep.msc == doctest::Approx(0.03578877553115123).epsilon(1e-9));
    CHECK(rep.lambda_x == 0.0);
    CHECK(rep.lambda_y == 0.0);
    CHECK(rep.lambda_sym == 0.0);
    CHECK(rep.gk_tau_x == doctest::Approx(0.031247143787914235).epsilon(1e-9));
    CHECK(rep.gk_tau_y == doctest::Approx(0.0349556703804285).epsilon(1e-9));
    CHECK(rep.gk_tau_sym == doctest::Approx(0.03187418239983668).epsilon(1e-9));
    CHECK(rep.uncertainty == doctest::Approx(0.050665335858164094).epsilon(1e-9));

    // two-decimal figures quoted for this table
    CHECK(std::round(rep.cramers_v * 100) == 13.0);
    CHECK(std::round(rep.pearson_c * 100) == 19.0);
    CHECK(std::round(rep.gk_tau_sym * 100) == 3.0);
    CHECK(std::round(rep.uncertainty * 100) == 5.0);
}

TEST_CASE("classical measures accept counts and probabilities alike") {
    auto t = religion();
    auto a = classical_report(t);
    auto b = classical_report(normalize(t));
    CHECK(a.cramers_v == doctest::Approx(b.cramers_v).epsilon(1e-14));
    CHECK(a.uncertainty == doctest::Approx(b.uncertainty).epsilon(1e-14));
    CHECK(a.gk_tau_sym == doctest::Approx(b.gk_tau_sym).epsilon(1e-14));
}

TEST_CASE("hand-computed values on a symmetric 2x2 table") {
    auto t = ContingencyTable::counts({"A", "B"}, {"x", "y"}, {30, 10, 10, 30});
    auto rep = classical_report(t);
    CHECK(rep.msc == doctest::Approx(0.25).epsilon(1e-14));
    CHECK(rep.cramers_v == doctest::Approx(0.5).epsilon(1e-14));
    CHECK(rep.tschuprow_t == doctest::Approx(0.5).epsilon(1e-14));
    CHECK(rep.pearson_c == doctest::Approx(std::sqrt(0.2)).epsilon(1e-14));
    CHECK(rep.sakoda_s == doctest::Approx(std::sqrt(0.4)).epsilon(1e-14));
    CHECK(rep.lambda_x == doctest::Approx(0.5).epsilon(1e-14));
    CHECK(rep.lambda_y == doctest::Approx(0.5).epsilon(1e-14));
    CHECK(rep.lambda_sym == doctest::Approx(0.5).epsilon(1e-14));
    CHECK(rep.gk_tau_x == doctest::Approx(0.25).epsilon(1e-14));
    CHECK(rep.gk_tau_y == doctest::Approx(0.25).epsilon(1e-14));
    CHECK(rep.gk_tau_sym == doctest::Approx(0.25).epsilon(1e-14));
    CHECK(rep.uncertainty == doctest::Approx(0.18872187554086736).epsilon(1e-12));
}

TEST_CASE("perfect diagonal dependence maxes every measure") {
    auto t = ContingencyTable::probabilities({"A", "B"}, {"x", "y"}, {0.5, 0, 0, 0.5});
    auto rep = classical_report(t);
    CHECK(rep.msc == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(rep.cramers_v == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(rep.sakoda_s == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(rep.pearson_c == doctest::Approx(std::sqrt(0.5)).epsilon(1e-14));
    CHECK(rep.lambda_sym == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(rep.gk_tau_sym == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(rep.uncertainty == doctest::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("independent tables score zero on every measure") {
    std::vector<double> cells;
    for (double a : {0.5, 0.3, 0.2})
        for (double b : {0.6, 0.4}) cells.push_back(a * b);
    auto t = ContingencyTable::probabilities({"A", "B", "C"}, {"x", "y"}, cells);
    auto rep = classical_report(t);
    CHECK(rep.msc <= 1e-14);
    CHECK(rep.cramers_v <= 1e-7);
    CHECK(rep.lambda_sym <= 1e-13);
    CHECK(rep.gk_tau_sym >= 0.0);
    CHECK(rep.gk_tau_sym <= 1e-14);
    CHECK(rep.uncertainty >= 0.0);
    CHECK(rep.uncertainty <= 1e-13);
}

TEST_CASE("a cross-shaped perfect table separates gamma* from chi-square measures") {
    // both tables carry perfect dependence, but only the diagonal one is seen
    // as perfect by the chi-square family
    auto cross = ContingencyTable::probabilities(
        {"x1", "x2", "x3"}, {"y1", "y2", "y3"},
        {0.4, 0.2, 0.1, 0.2, 0.0, 0.0, 0.1, 0.0, 0.0});
    auto diag = ContingencyTable::probabilities({"x1", "x2", "x3"}, {"y1", "y2", "y3"},
                                                {0.7, 0, 0, 0, 0.2, 0, 0, 0, 0.1});
    auto a = classical_report(cross);
    auto b = classical_report(diag);
    CHECK(b.cramers_v == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(a.cramers_v < 0.95);
    CHECK(b.gk_tau_sym == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(a.gk_tau_sym < 0.95);
    CHECK(b.uncertainty == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(a.uncertainty < 0.95);
    CHECK(a.lambda_sym < b.lambda_sym);
}

TEST_CASE("classical measures stay within the unit interval") {
    std::mt19937_64 g(314);
    for (int rep = 0; rep < 60; ++rep) {
        auto t = testutil::random_counts_table(g, 2 + static_cast<int>(testutil::randint(g, 3)),
                                               2 + static_cast<int>(testutil::randint(g, 3)));
        auto r = classical_report(t);
        for (double v : {r.msc, r.cramers_v, r.tschuprow_t, r.pearson_c, r.sakoda_s, r.lambda_x,
                         r.lambda_y, r.lambda_sym, r.gk_tau_x, r.gk_tau_y, r.gk_tau_sym,
                         r.uncertainty}) {
            CHECK(v >= 0.0);
            CHECK(v <= 1.0 + 1e-12);
        }
    }
}

TEST_CASE("classical measures validate their input") {
    auto onerow = ContingencyTable::counts({"A"}, {"x", "y"}, {1, 2});
    CHECK(thrown_kind([&] { classical_report(onerow); }) == ErrorKind::usage);
    CHECK(thrown_kind([&] { msc(onerow); }) == ErrorKind::usage);

    ContingencyTable zerocol;
    zerocol.mode = TableMode::probabilities;
    zerocol.row_labels = {"A", "B"};
    zerocol.col_labels = {"x", "y"};
    zerocol.cells = {0.5, 0.0, 0.5, 0.0};
    CHECK(thrown_kind([&] { classical_report(zerocol); }) == ErrorKind::degenerate);
}
