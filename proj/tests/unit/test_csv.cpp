#include "doctest.h"

#include <sstream>
#include <string>

#include "helpers.hpp"
#include "nomcor/csv.hpp"
#include "nomcor/errors.hpp"

using namespace nomcor;
using testutil::thrown_kind;
using testutil::thrown_message;

namespace {

PairedSample parse_sample(const std::string& text, const SampleSchema& schema = {}) {
    std::istringstream in(text);
    return sample_from_csv_stream(in, schema);
}

ContingencyTable parse_table(const std::string& text) {
    std::istringstream in(text);
    return table_from_csv_stream(in);
}

} // namespace

TEST_CASE("sample csv with numeric y parses as nominal-real") {
    auto s = parse_sample("x,y\nA,1.5\nB,2.0\n");
    CHECK(s.kind == SampleKind::nominal_real);
    CHECK(s.x_labels == std::vector<std::string>{"A", "B"});
    CHECK(s.y == std::vector<double>{1.5, 2.0});
}

TEST_CASE("sample csv with non-numeric y parses as nominal-nominal") {
    auto s = parse_sample("x,y\nA,red\nB,blue\nA,red\n");
    CHECK(s.kind == SampleKind::nominal_nominal);
    CHECK(s.y_labels == std::vector<std::string>{"blue", "red"});
    CHECK(s.yi == std::vector<int>{1, 0, 1});
}

TEST_CASE("sample csv rejects a mixed y column with the data row number") {
    auto msg = thrown_message([] { parse_sample("x,y\nA,1.5\nB,blue\n"); });
    CHECK(msg == "column y mixes numeric and non-numeric at row 2");
    CHECK(thrown_kind([] { parse_sample("x,y\nA,1.5\nB,blue\n"); }) == ErrorKind::parse);

    // first non-numeric row is reported even when numbers come later
    auto msg2 = thrown_message([] { parse_sample("x,y\nA,blue\nB,1.5\n"); });
    CHECK(msg2 == "column y mixes numeric and non-numeric at row 1");
}

TEST_CASE("sample csv structural errors") {
    CHECK(thrown_message([] { parse_sample(""); }) == "empty sample file");
    CHECK(thrown_message([] { parse_sample("x,y\n"); }) == "sample file has no data rows");
    CHECK(thrown_message([] { parse_sample("x\nA\n"); }) ==
          "sample file needs at least two columns");
    CHECK(thrown_message([] { parse_sample("x,y\nA,1\nB\n"); }) == "ragged row 2");
    CHECK(thrown_message([] { parse_sample("x,y\nA,\n"); }) == "empty field at row 1");
    CHECK(thrown_kind([] { parse_sample("x,y\nA,\n"); }) == ErrorKind::parse);
}

TEST_CASE("sample csv honors quoted fields") {
    auto s = parse_sample("x,y\n\"A,1\",red\nB,\"say \"\"hi\"\"\"\n");
    CHECK(s.x_labels == std::vector<std::string>{"A,1", "B"});
    CHECK(s.y_labels == std::vector<std::string>{"red", "say \"hi\""});
}

TEST_CASE("sample csv selects columns by header name") {
    std::string text = "id,group,value\n1,A,0.5\n2,B,0.7\n";
    auto s = parse_sample(text, {.x_column = "group", .y_column = "value"});
    CHECK(s.kind == SampleKind::nominal_real);
    CHECK(s.x_labels == std::vector<std::string>{"A", "B"});
    CHECK(s.y == std::vector<double>{0.5, 0.7});

    CHECK(thrown_message([&] { parse_sample(text, {.x_column = "missing"}); }) ==
          "column 'missing' not found in header");
}

TEST_CASE("sample csv skips blank lines") {
    auto s = parse_sample("x,y\n\nA,1\n\nB,2\n\n");
    CHECK(s.size() == 2);
}

TEST_CASE("table csv with integral cells reads as counts") {
    auto t = parse_table("t,a,b\nr1,2,3\nr2,4,5\n");
    CHECK(t.mode == TableMode::counts);
    CHECK(t.row_labels == std::vector<std::string>{"r1", "r2"});
    CHECK(t.col_labels == std::vector<std::string>{"a", "b"});
    CHECK(t.cells == std::vector<double>{2, 3, 4, 5});
}

TEST_CASE("table csv summing to one reads as probabilities") {
    auto t = parse_table("t,a,b\nr1,0.25,0.25\nr2,0.25,0.25\n");
    CHECK(t.mode == TableMode::probabilities);
    CHECK(t.total() == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("table csv rejects other numeric content") {
    CHECK(thrown_message([] { parse_table("t,a,b\nr1,0.5,0.2\n"); }) ==
          "table cells are neither integer counts nor probabilities summing to 1");
    CHECK(thrown_message([] { parse_table("t,a\nr1,oops\n"); }) == "non-numeric cell at row 1");
    CHECK(thrown_message([] { parse_table("t,a\n"); }) ==
          "table file needs a header and at least one row");
    CHECK(thrown_message([] { parse_table("t,a,b\nr1,1\n"); }) == "ragged row 1");
}

TEST_CASE("file loaders report unreadable paths") {
    CHECK(thrown_message([] { sample_from_csv("/nonexistent/sample.csv"); }) ==
          "cannot open '/nonexistent/sample.csv'");
    CHECK(thrown_kind([] { table_from_csv("/nonexistent/table.csv"); }) == ErrorKind::parse);
}

TEST_CASE("shipped religion table loads as counts") {
    auto t = table_from_csv(std::string(NOMCOR_DATA_DIR) + "/religion.csv");
    CHECK(t.mode == TableMode::counts);
    CHECK(t.k() == 3);
    CHECK(t.l() == 3);
    CHECK(t.row_labels == std::vector<std::string>{"Germany", "Poland", "Czechia"});
    CHECK(t.at(0, 0) == 56071000.0);
    CHECK(t.at(2, 2) == 13400.0);
}
