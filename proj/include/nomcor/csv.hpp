#pragma once

#include <iosfwd>
#include <string>

#include "nomcor/types.hpp"

namespace nomcor {

// Optional column selection for sample CSVs; by default the first two columns
// are taken as (x, y).
struct SampleSchema {
    std::string x_column; // empty = first column
    std::string y_column; // empty = second column
};

// Two-column CSV with a header row. y becomes real iff every entry parses as
// a finite number, nominal otherwise; a mix is rejected with the row number.
PairedSample sample_from_csv(const std::string& path, const SampleSchema& schema = {});
PairedSample sample_from_csv_stream(std::istream& in, const SampleSchema& schema = {});

// Matrix CSV: header row = column labels (first header cell ignored), first
// column = row labels. Integral cells are read as counts; cells summing to
// 1 (+-1e-6) as probabilities; anything else is rejected.
ContingencyTable table_from_csv(const std::string& path);
ContingencyTable table_from_csv_stream(std::istream& in);

} // namespace nomcor
