#include "nomcor/csv.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "nomcor/errors.hpp"

namespace nomcor {

namespace {

std::string trim(const std::string& s) {
    std::size_t a = 0, b = s.size();
    while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
    while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
    std::string out = s.substr(a, b - a);
    if (out.size() >= 2 && out.front() == '"' && out.back() == '"') {
        out = out.substr(1, out.size() - 2);
        for (std::size_t pos = 0; (pos = out.find("\"\"", pos)) != std::string::npos; ++pos)
            out.erase(pos, 1);
    }
    return out;
}

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> fields;
    std::string cur;
    bool quoted = false;
    for (char ch : line) {
        if (ch == '"') {
            quoted = !quoted;
            cur.push_back(ch);
        } else if (ch == ',' && !quoted) {
            fields.push_back(trim(cur));
            cur.clear();
        } else if (ch != '\r') {
            cur.push_back(ch);
        }
    }
    fields.push_back(trim(cur));
    return fields;
}

bool parse_number(const std::string& s, double& out) {
    if (s.empty()) return false;
    const char* b = s.data();
    const char* e = b + s.size();
    auto [p, ec] = std::from_chars(b, e, out);
    return ec == std::errc() && p == e && std::isfinite(out);
}

std::vector<std::vector<std::string>> read_rows(std::istream& in) {
    std::vector<std::vector<std::string>> rows;
    std::string line;
    while (std::getline(in, line)) {
        if (trim(line).empty()) continue;
        rows.push_back(split_csv_line(line));
    }
    return rows;
}

} // namespace

PairedSample sample_from_csv_stream(std::istream& in, const SampleSchema& schema) {
    auto rows = read_rows(in);
    if (rows.empty()) throw parse_error("empty sample file");
    const auto& header = rows.front();
    if (header.size() < 2) throw parse_error("sample file needs at least two columns");

    auto column_of = [&](const std::string& name, int fallback) {
        if (name.empty()) return fallback;
        for (std::size_t c = 0; c < header.size(); ++c)
            if (header[c] == name) return static_cast<int>(c);
        throw parse_error("column '" + name + "' not found in header");
    };
    const int cx = column_of(schema.x_column, 0);
    const int cy = column_of(schema.y_column, 1);

    std::vector<std::string> xs, ys_raw;
    std::vector<double> ys_num;
    bool all_numeric = true;
    int first_non_numeric_row = -1;
    for (std::size_t r = 1; r < rows.size(); ++r) {
        const auto& row = rows[r];
        if (static_cast<int>(row.size()) <= std::max(cx, cy))
            throw parse_error("ragged row " + std::to_string(r));
        const std::string x = row[cx];
        const std::string y = row[cy];
        if (x.empty() || y.empty()) throw parse_error("empty field at row " + std::to_string(r));
        xs.push_back(x);
        ys_raw.push_back(y);
        double v = 0.0;
        if (parse_number(y, v)) {
            ys_num.push_back(v);
        } else {
            all_numeric = false;
            if (first_non_numeric_row < 0) first_non_numeric_row = static_cast<int>(r);
        }
    }
    if (xs.empty()) throw parse_error("sample file has no data rows");

    if (all_numeric) return PairedSample::nominal_real(xs, ys_num);
    if (!ys_num.empty()) {
        // some rows parsed as numbers, some did not
        int bad = first_non_numeric_row;
        throw parse_error("column y mixes numeric and non-numeric at row " + std::to_string(bad));
    }
    return PairedSample::nominal_nominal(xs, ys_raw);
}

PairedSample sample_from_csv(const std::string& path, const SampleSchema& schema) {
    std::ifstream in(path);
    if (!in) throw parse_error("cannot open '" + path + "'");
    return sample_from_csv_stream(in, schema);
}

ContingencyTable table_from_csv_stream(std::istream& in) {
    auto rows = read_rows(in);
    if (rows.size() < 2) throw parse_error("table file needs a header and at least one row");
    const auto& header = rows.front();
    if (header.size() < 2) throw parse_error("table file needs at least one column");

    std::vector<std::string> col_labels(header.begin() + 1, header.end());
    std::vector<std::string> row_labels;
    std::vector<double> cells;
    bool integral = true;
    double total = 0.0;
    for (std::size_t r = 1; r < rows.size(); ++r) {
        const auto& row = rows[r];
        if (row.size() != header.size())
            throw parse_error("ragged row " + std::to_string(r));
        row_labels.push_back(row[0]);
        for (std::size_t c = 1; c < row.size(); ++c) {
            double v = 0.0;
            if (!parse_number(row[c], v))
                throw parse_error("non-numeric cell at row " + std::to_string(r));
            if (std::fabs(v - std::round(v)) > 1e-9) integral = false;
            cells.push_back(v);
            total += v;
        }
    }
    if (integral) return ContingencyTable::counts(row_labels, col_labels, cells);
    if (std::fabs(total - 1.0) < 1e-6) {
        // rescale tiny drift so the probabilities invariant holds exactly
        for (double& v : cells) v /= total;
        return ContingencyTable::probabilities(row_labels, col_labels, cells);
    }
    throw parse_error("table cells are neither integer counts nor probabilities summing to 1");
}

ContingencyTable table_from_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw parse_error("cannot open '" + path + "'");
    return table_from_csv_stream(in);
}

} // namespace nomcor
