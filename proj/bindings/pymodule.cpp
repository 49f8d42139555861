#include <cstdint>
#include <string>
#include <vector>

#include <fmt/format.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "nomcor/classical.hpp"
#include "nomcor/csv.hpp"
#include "nomcor/distributions.hpp"
#include "nomcor/errors.hpp"
#include "nomcor/gamma_star.hpp"
#include "nomcor/inference.hpp"
#include "nomcor/rng.hpp"
#include "nomcor/simulation.hpp"
#include "nomcor/types.hpp"

namespace py = pybind11;
using namespace pybind11::literals;

namespace {

nomcor::DgpFamily parse_family(const std::string& name) {
    auto f = nomcor::family_from_name(name);
    if (!f)
        throw nomcor::usage_error(
            "unknown family '" + name +
            "' (regression-normal, regression-cauchy, mlogit-normal, mlogit-cauchy, "
            "table-skew-uniform, table-uniform-uniform)");
    return *f;
}

std::vector<double> flatten(const std::vector<std::vector<double>>& cells) {
    std::vector<double> flat;
    const std::size_t cols = cells.empty() ? 0 : cells.front().size();
    for (const auto& row : cells) {
        if (row.size() != cols) throw nomcor::usage_error("ragged cell matrix");
        flat.insert(flat.end(), row.begin(), row.end());
    }
    return flat;
}

std::vector<std::vector<double>> unflatten(const nomcor::ContingencyTable& t) {
    std::vector<std::vector<double>> out(t.k(), std::vector<double>(t.l()));
    for (int i = 0; i < t.k(); ++i)
        for (int j = 0; j < t.l(); ++j) out[i][j] = t.at(i, j);
    return out;
}

nomcor::MvnConfig mvn_config(double target_error, std::int64_t max_points,
                             int randomizations, int first_points, std::uint64_t seed) {
    nomcor::MvnConfig cfg;
    cfg.target_error = target_error;
    cfg.max_points = max_points;
    cfg.randomizations = randomizations;
    cfg.first_points = first_points;
    cfg.seed = seed;
    return cfg;
}

} // namespace

PYBIND11_MODULE(_nomcor, m) {
    m.doc() = "gamma* dependence coefficient for nominal variables";

    py::register_exception<nomcor::Error>(m, "Error");

    py::class_<nomcor::ContingencyTable>(m, "ContingencyTable")
        .def_static(
            "counts",
            [](std::vector<std::string> rows, std::vector<std::string> cols,
               const std::vector<std::vector<double>>& cells) {
                return nomcor::ContingencyTable::counts(std::move(rows), std::move(cols),
                                                        flatten(cells));
            },
            "rows"_a, "cols"_a, "cells"_a)
        .def_static(
            "probabilities",
            [](std::vector<std::string> rows, std::vector<std::string> cols,
               const std::vector<std::vector<double>>& cells) {
                return nomcor::ContingencyTable::probabilities(std::move(rows), std::move(cols),
                                                               flatten(cells));
            },
            "rows"_a, "cols"_a, "cells"_a)
        .def_property_readonly("row_labels",
                               [](const nomcor::ContingencyTable& t) { return t.row_labels; })
        .def_property_readonly("col_labels",
                               [](const nomcor::ContingencyTable& t) { return t.col_labels; })
        .def_property_readonly("cells", &unflatten)
        .def_property_readonly("mode",
                               [](const nomcor::ContingencyTable& t) {
                                   return t.mode == nomcor::TableMode::counts ? "counts"
                                                                              : "probabilities";
                               })
        .def("normalize", [](const nomcor::ContingencyTable& t) { return nomcor::normalize(t); })
        .def("__repr__", [](const nomcor::ContingencyTable& t) {
            return fmt::format("ContingencyTable({}x{}, {})", t.k(), t.l(),
                               t.mode == nomcor::TableMode::counts ? "counts" : "probabilities");
        });

    py::class_<nomcor::PairedSample>(m, "PairedSample")
        .def_static("nominal_real", &nomcor::PairedSample::nominal_real, "x"_a, "y"_a)
        .def_static("nominal_nominal", &nomcor::PairedSample::nominal_nominal, "x"_a, "y"_a)
        .def_property_readonly("n", &nomcor::PairedSample::size)
        .def_property_readonly("k", &nomcor::PairedSample::k)
        .def_property_readonly("l", &nomcor::PairedSample::l)
        .def_property_readonly("kind",
                               [](const nomcor::PairedSample& s) {
                                   return s.kind == nomcor::SampleKind::nominal_real
                                              ? "nominal-real"
                                              : "nominal-nominal";
                               })
        .def_property_readonly("x_labels",
                               [](const nomcor::PairedSample& s) { return s.x_labels; })
        .def_property_readonly("y_labels",
                               [](const nomcor::PairedSample& s) { return s.y_labels; })
        .def("__repr__", [](const nomcor::PairedSample& s) {
            return fmt::format("PairedSample({}, n={}, k={})",
                               s.kind == nomcor::SampleKind::nominal_real ? "nominal-real"
                                                                          : "nominal-nominal",
                               s.size(), s.k());
        });

    py::class_<nomcor::Numbering>(m, "Numbering")
        .def_readonly("x_ranks", &nomcor::Numbering::x_ranks)
        .def_readonly("y_ranks", &nomcor::Numbering::y_ranks)
        .def_static("order_of", &nomcor::Numbering::order_of, "ranks"_a)
        .def("__repr__", [](const nomcor::Numbering& nb) {
            return fmt::format("Numbering(x_ranks={}, y_ranks={})", fmt::join(nb.x_ranks, ","),
                               fmt::join(nb.y_ranks, ","));
        });

    py::class_<nomcor::GammaStarResult>(m, "GammaStarResult")
        .def_readonly("value", &nomcor::GammaStarResult::value)
        .def_readonly("argmax", &nomcor::GammaStarResult::argmax)
        .def_readonly("argmax_count", &nomcor::GammaStarResult::argmax_count)
        .def_readonly("concordant_at_max", &nomcor::GammaStarResult::concordant_at_max)
        .def_readonly("untied_pairs", &nomcor::GammaStarResult::untied_pairs)
        .def("__repr__", [](const nomcor::GammaStarResult& r) {
            return fmt::format("GammaStarResult(value={:.6g}, argmax_count={})", r.value,
                               r.argmax_count);
        });

    py::class_<nomcor::ConfidenceInterval>(m, "ConfidenceInterval")
        .def_readonly("gamma_star", &nomcor::ConfidenceInterval::gamma_star)
        .def_readonly("std_error", &nomcor::ConfidenceInterval::std_error)
        .def_readonly("lower", &nomcor::ConfidenceInterval::lower)
        .def_readonly("upper", &nomcor::ConfidenceInterval::upper)
        .def_readonly("level", &nomcor::ConfidenceInterval::level)
        .def_readonly("argmax", &nomcor::ConfidenceInterval::argmax)
        .def_readonly("argmax_count", &nomcor::ConfidenceInterval::argmax_count)
        .def("__repr__", [](const nomcor::ConfidenceInterval& c) {
            return fmt::format("ConfidenceInterval({:.6g} in [{:.6g}, {:.6g}] at {:g})",
                               c.gamma_star, c.lower, c.upper, c.level);
        });

    py::class_<nomcor::IndependenceTest>(m, "IndependenceTest")
        .def_readonly("gamma_star", &nomcor::IndependenceTest::gamma_star)
        .def_readonly("statistic", &nomcor::IndependenceTest::statistic)
        .def_readonly("p_value", &nomcor::IndependenceTest::p_value)
        .def_readonly("dimension", &nomcor::IndependenceTest::dimension)
        .def_readonly("argmax_count", &nomcor::IndependenceTest::argmax_count)
        .def_readonly("mvn_error", &nomcor::IndependenceTest::mvn_error)
        .def_readonly("mvn_points", &nomcor::IndependenceTest::mvn_points)
        .def("__repr__", [](const nomcor::IndependenceTest& t) {
            return fmt::format("IndependenceTest(statistic={:.6g}, p_value={:.6g})", t.statistic,
                               t.p_value);
        });

    py::class_<nomcor::ClassicalReport>(m, "ClassicalReport")
        .def_readonly("msc", &nomcor::ClassicalReport::msc)
        .def_readonly("cramers_v", &nomcor::ClassicalReport::cramers_v)
        .def_readonly("tschuprow_t", &nomcor::ClassicalReport::tschuprow_t)
        .def_readonly("pearson_c", &nomcor::ClassicalReport::pearson_c)
        .def_readonly("sakoda_s", &nomcor::ClassicalReport::sakoda_s)
        .def_readonly("lambda_x", &nomcor::ClassicalReport::lambda_x)
        .def_readonly("lambda_y", &nomcor::ClassicalReport::lambda_y)
        .def_readonly("lambda_sym", &nomcor::ClassicalReport::lambda_sym)
        .def_readonly("gk_tau_x", &nomcor::ClassicalReport::gk_tau_x)
        .def_readonly("gk_tau_y", &nomcor::ClassicalReport::gk_tau_y)
        .def_readonly("gk_tau_sym", &nomcor::ClassicalReport::gk_tau_sym)
        .def_readonly("uncertainty", &nomcor::ClassicalReport::uncertainty)
        .def("__repr__", [](const nomcor::ClassicalReport& r) {
            return fmt::format("ClassicalReport(cramers_v={:.6g}, gk_tau_sym={:.6g})", r.cramers_v,
                               r.gk_tau_sym);
        });

    py::class_<nomcor::MvnCdfResult>(m, "MvnCdfResult")
        .def_readonly("probability", &nomcor::MvnCdfResult::probability)
        .def_readonly("error_estimate", &nomcor::MvnCdfResult::error_estimate)
        .def_readonly("points_used", &nomcor::MvnCdfResult::points_used)
        .def("__repr__", [](const nomcor::MvnCdfResult& r) {
            return fmt::format("MvnCdfResult(probability={:.6g}, error_estimate={:.2g})",
                               r.probability, r.error_estimate);
        });

    m.def(
        "gamma_star",
        [](const nomcor::PairedSample& s) { return nomcor::gamma_star_estimate(s); }, "sample"_a,
        "exact gamma* estimate over all category numberings");
    m.def(
        "population_gamma_star",
        [](const nomcor::ContingencyTable& t) {
            return nomcor::population_gamma_star(
                t.mode == nomcor::TableMode::counts ? nomcor::normalize(t) : t);
        },
        "table"_a, "population gamma* of a joint distribution (counts are normalized)");
    m.def("classical_report", &nomcor::classical_report, "table"_a,
          "MSC family, lambda, tau and the uncertainty coefficient");
    m.def(
        "confidence_interval",
        [](const nomcor::PairedSample& s, double level) {
            return nomcor::confidence_interval(s, level);
        },
        "sample"_a, "level"_a = 0.9, "asymptotic confidence interval for gamma*");
    m.def(
        "independence_test",
        [](const nomcor::PairedSample& s, double target_error, std::int64_t max_points,
           int randomizations, int first_points, std::uint64_t seed) {
            return nomcor::independence_test(
                s, mvn_config(target_error, max_points, randomizations, first_points, seed));
        },
        "sample"_a, "target_error"_a = 1e-4, "max_points"_a = std::int64_t{1} << 17,
        "randomizations"_a = 12, "first_points"_a = 1 << 10, "seed"_a = 1,
        "test of independence based on sqrt(n) * gamma*");
    m.def("f_test_baseline", &nomcor::f_test_baseline, "sample"_a,
          "p-value of the one-way F test (nominal-real)");
    m.def(
        "chi2_test_baseline",
        [](const nomcor::PairedSample& s) { return nomcor::chi2_test_baseline(s); }, "sample"_a,
        "p-value of the chi-square independence test (nominal-nominal)");
    m.def("table_from_sample", &nomcor::table_from_sample, "sample"_a);
    m.def("sample_from_table", &nomcor::sample_from_table, "counts"_a);
    m.def("comonotonic_table", &nomcor::comonotonic_table, "px"_a, "py"_a,
          "perfect-dependence coupling of the given marginals");
    m.def("sample_from_csv",
          [](const std::string& path) { return nomcor::sample_from_csv(path); }, "path"_a);
    m.def("table_from_csv", &nomcor::table_from_csv, "path"_a);

    m.def(
        "mvn_cdf",
        [](const std::vector<double>& upper, const std::vector<std::vector<double>>& cov,
           double target_error, std::int64_t max_points, int randomizations, int first_points,
           std::uint64_t seed) {
            return nomcor::mvn_cdf(
                upper, cov, mvn_config(target_error, max_points, randomizations, first_points, seed));
        },
        "upper"_a, "cov"_a, "target_error"_a = 1e-4, "max_points"_a = std::int64_t{1} << 17,
        "randomizations"_a = 12, "first_points"_a = 1 << 10, "seed"_a = 1,
        "P(Z <= upper) for Z ~ N(0, cov) by randomized QMC");

    m.def("normal_quantile", &nomcor::normal_quantile, "p"_a);
    m.def("chi2_sf", &nomcor::chi2_sf, "x"_a, "df"_a);
    m.def("f_sf", &nomcor::f_sf, "x"_a, "d1"_a, "d2"_a);

    m.def(
        "calibrate_alpha",
        [](const std::string& family, double target, double tol) {
            return nomcor::calibrate_alpha(parse_family(family), target, tol);
        },
        "family"_a, "target_gamma_star"_a, "tol"_a = 1e-3,
        "dependence parameter whose true gamma* hits the target");
    m.def(
        "true_gamma_star",
        [](const std::string& family, double alpha) {
            return nomcor::true_gamma_star(parse_family(family), alpha);
        },
        "family"_a, "alpha"_a);
    m.def(
        "dgp_table",
        [](const std::string& family, double alpha) {
            return nomcor::dgp_table(parse_family(family), alpha);
        },
        "family"_a, "alpha"_a, "cell probabilities of the two table families");
    m.def(
        "sample_dgp",
        [](const std::string& family, double alpha, int n, std::uint64_t seed) {
            nomcor::Rng rng = nomcor::Rng::stream(seed, 0, 0);
            nomcor::DgpSpec spec;
            spec.family = parse_family(family);
            spec.alpha = alpha;
            spec.n = n;
            return nomcor::generate(spec, rng);
        },
        "family"_a, "alpha"_a, "n"_a, "seed"_a = 1, "draw one sample from a study family");

    m.attr("families") =
        std::vector<std::string>{"regression-normal", "regression-cauchy",  "mlogit-normal",
                                 "mlogit-cauchy",     "table-skew-uniform", "table-uniform-uniform"};
    m.attr("__version__") = "0.1.0";
}
