#pragma once

#include "nomcor/types.hpp"

namespace nomcor {

struct ContingencyFamily {
    double cramers_v = 0.0;
    double tschuprow_t = 0.0;
    double pearson_c = 0.0;
    double sakoda_s = 0.0;
};

struct GkLambda {
    double lambda_x = 0.0;   // predict row variable from column
    double lambda_y = 0.0;   // predict column variable from row
    double lambda_sym = 0.0;
};

struct GkTau {
    double tau_x = 0.0;
    double tau_y = 0.0;
    double tau_sym = 0.0;
};

struct ClassicalReport {
    double msc = 0.0;
    double cramers_v = 0.0;
    double tschuprow_t = 0.0;
    double pearson_c = 0.0;
    double sakoda_s = 0.0;
    double lambda_x = 0.0;
    double lambda_y = 0.0;
    double lambda_sym = 0.0;
    double gk_tau_x = 0.0;
    double gk_tau_y = 0.0;
    double gk_tau_sym = 0.0;
    double uncertainty = 0.0;
};

// All operations require k,l >= 2 and accept counts tables, which are
// normalized internally.
double msc(const ContingencyTable& t);
ContingencyFamily contingency_family(const ContingencyTable& t);
GkLambda gk_lambda(const ContingencyTable& t);
GkTau gk_tau(const ContingencyTable& t);
double uncertainty(const ContingencyTable& t);
ClassicalReport classical_report(const ContingencyTable& t);

} // namespace nomcor
