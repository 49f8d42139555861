#include "doctest.h"

#include <cmath>
#include <numeric>
#include <random>
#include <vector>

#include "helpers.hpp"
#include "nomcor/concordance.hpp"
#include "nomcor/errors.hpp"
#include "nomcor/gamma_star.hpp"
#include "nomcor/simulation.hpp"
#include "nomcor/types.hpp"

using namespace nomcor;
using testutil::thrown_kind;

TEST_CASE("H matrix counts strictly increasing cross-category pairs") {
    auto s = PairedSample::nominal_real({"A", "A", "B"}, {1.0, 2.0, 3.0});
    auto h = build_h_matrix(s);
    REQUIRE(h.k == 2);
    CHECK(h.at(0, 1) == 2);
    CHECK(h.at(1, 0) == 0);
    CHECK(h.at(0, 0) == 0);
    CHECK(h.at(1, 1) == 0);
    CHECK(h.total() == 2);

    auto tied = build_h_matrix(PairedSample::nominal_real({"A", "B", "C"}, {5.0, 5.0, 5.0}));
    CHECK(tied.total() == 0);

    auto nn = PairedSample::nominal_nominal({"A", "B"}, {"x", "y"});
    CHECK(thrown_kind([&] { build_h_matrix(nn); }) == ErrorKind::usage);
}

TEST_CASE("H total counts pairs untied in both coordinates") {
    std::mt19937_64 g(41);
    for (int rep = 0; rep < 50; ++rep) {
        auto s = testutil::random_nominal_real(g, 3 + static_cast<int>(testutil::randint(g, 40)),
                                               4, 5);
        auto h = build_h_matrix(s);
        std::vector<double> xr(s.xi.begin(), s.xi.end());
        auto pc = count_pairs_reference(xr, s.y);
        CHECK(h.total() == pc.concordant + pc.discordant);
    }
}

TEST_CASE("subset DP finds the best ordering of a small H matrix") {
    HMatrix h;
    h.k = 3;
    h.h.assign(9, 0);
    h.at(0, 1) = 2;
    h.at(0, 2) = 2;
    h.at(1, 2) = 1;
    auto dp = dp_max_concordant(h);
    CHECK(dp.best_concordant == 5);
    CHECK(dp.order == std::vector<int>{0, 1, 2});
    CHECK(dp.argmax_count == 1);
}

TEST_CASE("subset DP breaks full ties toward the identity ordering") {
    HMatrix h;
    h.k = 3;
    h.h.assign(9, 0);
    auto dp = dp_max_concordant(h);
    CHECK(dp.best_concordant == 0);
    CHECK(dp.order == std::vector<int>{0, 1, 2});
    CHECK(dp.argmax_count == 6);
}

TEST_CASE("subset DP enforces its category budget") {
    HMatrix h;
    h.k = 4;
    h.h.assign(16, 1);
    for (int i = 0; i < 4; ++i) h.at(i, i) = 0;
    CHECK(thrown_kind([&] { dp_max_concordant(h, 3); }) == ErrorKind::budget);
    CHECK_NOTHROW(dp_max_concordant(h, 4));
}

TEST_CASE("subset DP equals exhaustive ordering search") {
    std::mt19937_64 g(2024);
    for (int rep = 0; rep < 300; ++rep) {
        int k = 2 + static_cast<int>(testutil::randint(g, 5));
        HMatrix h;
        h.k = k;
        h.h.assign(static_cast<std::size_t>(k) * k, 0);
        for (int a = 0; a < k; ++a)
            for (int b = 0; b < k; ++b)
                if (a != b) h.at(a, b) = static_cast<std::int64_t>(testutil::randint(g, 7));

        auto dp = dp_max_concordant(h);

        std::int64_t best = -1;
        std::uint64_t count = 0;
        std::vector<int> order(static_cast<std::size_t>(k));
        std::iota(order.begin(), order.end(), 0);
        do {
            std::int64_t c = 0;
            for (int i = 0; i < k; ++i)
                for (int j = i + 1; j < k; ++j)
                    c += h.at(order[static_cast<std::size_t>(i)], order[static_cast<std::size_t>(j)]);
            if (c > best) {
                best = c;
                count = 1;
            } else if (c == best) {
                ++count;
            }
        } while (std::next_permutation(order.begin(), order.end()));

        CHECK(dp.best_concordant == best);
        CHECK(dp.argmax_count == count);
    }
}

TEST_CASE("estimator reaches one on comonotonic data") {
    auto diag = ContingencyTable::counts({"A", "B", "C"}, {"x", "y", "z"},
                                         {70, 0, 0, 0, 20, 0, 0, 0, 10});
    auto est = gamma_star_estimate(sample_from_table(diag));
    CHECK(est.value == 1.0);
    CHECK(est.concordant_at_max == est.untied_pairs);

    auto cross = ContingencyTable::counts({"x1", "x2", "x3"}, {"y1", "y2", "y3"},
                                          {4, 2, 1, 2, 0, 0, 1, 0, 0});
    est = gamma_star_estimate(sample_from_table(cross));
    CHECK(est.value == 1.0);
}

TEST_CASE("estimator matches exhaustive search on nominal-real samples") {
    std::mt19937_64 g(90210);
    for (int rep = 0; rep < 300; ++rep) {
        int k = 2 + static_cast<int>(testutil::randint(g, 5));
        int n = 4 + static_cast<int>(testutil::randint(g, 40));
        auto s = testutil::random_nominal_real(g, n, k, rep % 2 == 0 ? 5 : 0);
        auto est = gamma_star_estimate(s);
        auto brute = testutil::brute_case1(s);
        CHECK(est.concordant_at_max == brute.best_concordant);
        CHECK(est.untied_pairs == brute.untied);
        CHECK(est.argmax_count == brute.argmax_count);
        CHECK(est.value == (2.0 * static_cast<double>(brute.best_concordant) -
                            static_cast<double>(brute.untied)) /
                               static_cast<double>(brute.untied));

        auto xr = testutil::ranks_under(s.xi, Numbering::order_of(est.argmax.x_ranks));
        auto pc = count_pairs_reference(xr, s.y);
        CHECK(pc.concordant == est.concordant_at_max);
    }
}

TEST_CASE("estimator matches exhaustive search on nominal-nominal samples") {
    std::mt19937_64 g(424242);
    for (int rep = 0; rep < 300; ++rep) {
        int k = 2 + static_cast<int>(testutil::randint(g, 3));
        int l = 2 + static_cast<int>(testutil::randint(g, 3));
        int n = 4 + static_cast<int>(testutil::randint(g, 40));
        auto s = testutil::random_nominal_nominal(g, n, k, l);
        auto est = gamma_star_estimate(s);
        auto brute = testutil::brute_case2(s);
        CHECK(est.concordant_at_max == brute.best_concordant);
        CHECK(est.untied_pairs == brute.untied);
        CHECK(est.argmax_count == brute.argmax_count);

        auto xr = testutil::ranks_under(s.xi, Numbering::order_of(est.argmax.x_ranks));
        auto yr = testutil::ranks_under(s.yi, Numbering::order_of(est.argmax.y_ranks));
        auto pc = count_pairs_reference(xr, yr);
        CHECK(pc.concordant == est.concordant_at_max);
    }
}

TEST_CASE("estimator is invariant under relabeling and axis swap") {
    std::mt19937_64 g(87);
    for (int rep = 0; rep < 30; ++rep) {
        int n = 6 + static_cast<int>(testutil::randint(g, 30));
        std::vector<std::string> x, y;
        for (int i = 0; i < n; ++i) {
            x.push_back(testutil::cat_label(testutil::randint(g, 3)));
            y.push_back("v" + std::to_string(testutil::randint(g, 3)));
        }
        auto s = PairedSample::nominal_nominal(x, y);
        if (!testutil::has_untied_pair(s)) continue;
        auto base = gamma_star_estimate(s);

        auto rename = [](const std::string& v) { return "zz" + v + "q"; };
        std::vector<std::string> x2;
        for (const auto& v : x) x2.push_back(rename(v));
        auto relabeled = gamma_star_estimate(PairedSample::nominal_nominal(x2, y));
        CHECK(relabeled.value == base.value);
        CHECK(relabeled.untied_pairs == base.untied_pairs);

        auto swapped = gamma_star_estimate(PairedSample::nominal_nominal(y, x));
        CHECK(swapped.value == base.value);
    }
}

TEST_CASE("estimator is invariant under monotone transforms of y") {
    std::mt19937_64 g(8181);
    for (int rep = 0; rep < 30; ++rep) {
        auto s = testutil::random_nominal_real(g, 20, 4, 6);
        auto base = gamma_star_estimate(s);

        auto inc = s;
        for (auto& v : inc.y) v = std::exp(v);
        auto up = gamma_star_estimate(inc);
        CHECK(up.value == base.value);
        CHECK(up.argmax.x_ranks == base.argmax.x_ranks);

        auto dec = s;
        for (auto& v : dec.y) v = -v;
        CHECK(gamma_star_estimate(dec).value == base.value);
    }
}

TEST_CASE("estimator stays within the unit interval") {
    std::mt19937_64 g(3003);
    for (int rep = 0; rep < 100; ++rep) {
        auto s = rep % 2 == 0 ? testutil::random_nominal_real(g, 15, 4, 4)
                              : testutil::random_nominal_nominal(g, 15, 3, 3);
        auto est = gamma_star_estimate(s);
        CHECK(est.value >= 0.0);
        CHECK(est.value <= 1.0);
    }
}

TEST_CASE("nominal-nominal estimate equals the best nominal-real reduction") {
    std::mt19937_64 g(606);
    for (int rep = 0; rep < 25; ++rep) {
        auto s = testutil::random_nominal_nominal(g, 25, 3, 3);
        auto est = gamma_star_estimate(s);

        double best = -2.0;
        std::vector<int> yo(static_cast<std::size_t>(s.l()));
        std::iota(yo.begin(), yo.end(), 0);
        do {
            auto yr = testutil::ranks_under(s.yi, yo);
            std::vector<std::string> x;
            for (int v : s.xi) x.push_back(s.x_labels[static_cast<std::size_t>(v)]);
            best = std::max(best, gamma_star_estimate(PairedSample::nominal_real(x, yr)).value);
        } while (std::next_permutation(yo.begin(), yo.end()));
        CHECK(est.value == best);
    }
}

TEST_CASE("estimator rejects degenerate and oversized inputs") {
    CHECK(thrown_kind([] {
              gamma_star_estimate(PairedSample::nominal_real({"a", "a"}, {1.0, 2.0}));
          }) == ErrorKind::degenerate);
    CHECK(thrown_kind([] {
              gamma_star_estimate(PairedSample::nominal_nominal({"a", "b"}, {"u", "u"}));
          }) == ErrorKind::degenerate);
    CHECK(thrown_kind([] { gamma_star_estimate(PairedSample::nominal_real({"a"}, {1.0})); }) ==
          ErrorKind::usage);

    std::mt19937_64 g(5);
    auto s = testutil::random_nominal_real(g, 40, 4);
    Limits tight;
    tight.case1_max_k = 3;
    CHECK(thrown_kind([&] { gamma_star_estimate(s, tight); }) == ErrorKind::budget);

    std::vector<std::string> x, y;
    for (int i = 0; i < 9; ++i)
        for (int j = 0; j < 9; ++j) {
            x.push_back("r" + std::to_string(i));
            y.push_back("c" + std::to_string(j));
        }
    auto big = PairedSample::nominal_nominal(x, y);
    CHECK(thrown_kind([&] { gamma_star_estimate(big); }) == ErrorKind::budget);
}

TEST_CASE("population value is one exactly for comonotonic tables") {
    auto cross = ContingencyTable::probabilities(
        {"x1", "x2", "x3"}, {"y1", "y2", "y3"},
        {0.4, 0.2, 0.1, 0.2, 0.0, 0.0, 0.1, 0.0, 0.0});
    auto res = population_gamma_star(cross);
    CHECK(res.value == doctest::Approx(1.0).epsilon(1e-13));
    CHECK(std::fabs(res.value - 1.0) <= 1e-12);
    CHECK(res.argmax_count == 8);

    auto diag = ContingencyTable::probabilities({"A", "B", "C"}, {"x", "y", "z"},
                                                {0.7, 0, 0, 0, 0.2, 0, 0, 0, 0.1});
    CHECK(std::fabs(population_gamma_star(diag).value - 1.0) <= 1e-12);
}

TEST_CASE("population value vanishes for independent tables") {
    std::mt19937_64 g(2718);
    for (int rep = 0; rep < 20; ++rep) {
        std::vector<double> px{0.2 + 0.6 * testutil::runif(g), 0.0, 0.0};
        px[1] = (1.0 - px[0]) * (0.3 + 0.4 * testutil::runif(g));
        px[2] = 1.0 - px[0] - px[1];
        std::vector<double> py{0.3, 0.3, 0.4};
        std::vector<double> cells;
        for (double a : px)
            for (double b : py) cells.push_back(a * b);
        auto t = ContingencyTable::probabilities({"A", "B", "C"}, {"x", "y", "z"}, cells);
        CHECK(std::fabs(population_gamma_star(t).value) <= 1e-12);
    }
}

TEST_CASE("population maximization equals exhaustive numbering search") {
    auto uu = dgp_table(DgpFamily::table_uniform_uniform, 5.0 / 6.0);
    auto res = population_gamma_star(uu);
    CHECK(res.value == doctest::Approx(testutil::brute_population(uu)).epsilon(1e-13));

    std::mt19937_64 g(161);
    for (int rep = 0; rep < 25; ++rep) {
        auto t = normalize(testutil::random_counts_table(g, 3, 3));
        auto got = population_gamma_star(t);
        CHECK(got.value == doctest::Approx(testutil::brute_population(t)).epsilon(1e-12));
    }
}

TEST_CASE("population maximization validates input") {
    auto counts = ContingencyTable::counts({"A", "B"}, {"x", "y"}, {1, 2, 3, 4});
    CHECK(thrown_kind([&] { population_gamma_star(counts); }) == ErrorKind::usage);

    auto onerow = ContingencyTable::probabilities({"A"}, {"x", "y"}, {0.5, 0.5});
    CHECK(thrown_kind([&] { population_gamma_star(onerow); }) == ErrorKind::degenerate);

    std::vector<std::string> labels;
    for (int i = 0; i < 9; ++i) labels.push_back("c" + std::to_string(i));
    std::vector<double> cells(81, 1.0 / 81.0);
    auto big = ContingencyTable::probabilities(labels, labels, cells);
    CHECK(thrown_kind([&] { population_gamma_star(big); }) == ErrorKind::budget);
}

TEST_CASE("comonotonic coupling attains the population maximum") {
    std::mt19937_64 g(451);
    for (int rep = 0; rep < 100; ++rep) {
        int k = 2 + static_cast<int>(testutil::randint(g, 4));
        int l = 2 + static_cast<int>(testutil::randint(g, 4));
        std::vector<double> px(static_cast<std::size_t>(k)), py(static_cast<std::size_t>(l));
        double sx = 0.0, sy = 0.0;
        for (auto& v : px) sx += (v = testutil::runif(g) + 0.02);
        for (auto& v : py) sy += (v = testutil::runif(g) + 0.02);
        for (auto& v : px) v /= sx;
        for (auto& v : py) v /= sy;
        px.back() += 1.0 - std::accumulate(px.begin(), px.end(), 0.0);
        py.back() += 1.0 - std::accumulate(py.begin(), py.end(), 0.0);
        auto best = population_gamma_star(comonotonic_table(px, py));
        CHECK(std::fabs(best.value - 1.0) <= 1e-12);
    }
}
