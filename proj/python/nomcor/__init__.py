"""gamma* dependence coefficient for nominal variables."""

from ._nomcor import (
    ClassicalReport,
    ConfidenceInterval,
    ContingencyTable,
    Error,
    GammaStarResult,
    IndependenceTest,
    MvnCdfResult,
    Numbering,
    PairedSample,
    calibrate_alpha,
    chi2_sf,
    chi2_test_baseline,
    classical_report,
    comonotonic_table,
    confidence_interval,
    dgp_table,
    f_sf,
    f_test_baseline,
    families,
    gamma_star,
    independence_test,
    mvn_cdf,
    normal_quantile,
    population_gamma_star,
    sample_dgp,
    sample_from_csv,
    sample_from_table,
    table_from_csv,
    table_from_sample,
    true_gamma_star,
    __version__,
)


def measure(x, y):
    """gamma* of paired observations; y may hold labels or real numbers."""
    ys = list(y)
    if all(isinstance(v, (int, float)) and not isinstance(v, bool) for v in ys):
        sample = PairedSample.nominal_real([str(v) for v in x], [float(v) for v in ys])
    else:
        sample = PairedSample.nominal_nominal([str(v) for v in x], [str(v) for v in ys])
    return gamma_star(sample)


__all__ = [
    "ClassicalReport",
    "ConfidenceInterval",
    "ContingencyTable",
    "Error",
    "GammaStarResult",
    "IndependenceTest",
    "MvnCdfResult",
    "Numbering",
    "PairedSample",
    "calibrate_alpha",
    "chi2_sf",
    "chi2_test_baseline",
    "classical_report",
    "comonotonic_table",
    "confidence_interval",
    "dgp_table",
    "f_sf",
    "f_test_baseline",
    "families",
    "gamma_star",
    "independence_test",
    "measure",
    "mvn_cdf",
    "normal_quantile",
    "population_gamma_star",
    "sample_dgp",
    "sample_from_csv",
    "sample_from_table",
    "table_from_csv",
    "table_from_sample",
    "true_gamma_star",
    "__version__",
]
