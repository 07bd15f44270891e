#include <filesystem>
#include <fstream>
#include <sstream>

#include "doctest.h"
#include "mobiq/csvio.hpp"

using namespace mobiq;

namespace {

std::filesystem::path temp_dir() {
    const auto dir = std::filesystem::temp_directory_path() / "mobiq_csv_test";
    std::filesystem::create_directories(dir);
    return dir;
}

}  // namespace

TEST_CASE("csv numbers round-trip through shortest form") {
    CHECK(csv_number(0.1) == "0.1");
    CHECK(csv_number(1.0) == "1");
    CHECK(csv_number(-2.5) == "-2.5");
    CHECK(csv_number(1e300) == "1e+300");
    CHECK(csv_number(0.0) == "0");
    CHECK(csv_number(1234567LL) == "1234567");
    for (double v : {0.1, 1.0 / 3.0, 6.02e23, -7.25e-12, 11.287806701783081}) {
        CHECK(parse_csv_number(csv_number(v)) == v);
    }
    CHECK_THROWS_AS(parse_csv_number("banana"), IoError);
    CHECK_THROWS_AS(parse_csv_number(""), IoError);
    CHECK_THROWS_AS(parse_csv_number("1.5x"), IoError);
}

TEST_CASE("csv table writes and reads back") {
    CsvTable table;
    table.columns = {"metric", "value", "count"};
    table.add_row({"mean_workload", csv_number(0.25), "10"});
    table.add_row({"p99_delay_slots", csv_number(12.0), "10"});

    std::ostringstream out;
    write_csv(out, table);
    CHECK(out.str() == "metric,value,count\nmean_workload,0.25,10\np99_delay_slots,12,10\n");

    const auto path = (temp_dir() / "round.csv").string();
    write_csv_file(path, table);
    const auto back = read_csv_file(path);
    CHECK(back.columns == table.columns);
    REQUIRE(back.rows.size() == 2);
    CHECK(back.rows[0] == table.rows[0]);
    CHECK(back.rows[1] == table.rows[1]);
    CHECK(back.column("value") == 1);
    CHECK(back.column("missing") == -1);
    std::filesystem::remove(path);
}

TEST_CASE("ragged csv rows are rejected") {
    CsvTable table;
    table.columns = {"a", "b"};
    CHECK_THROWS_AS(table.add_row({"1"}), std::logic_error);

    const auto path = (temp_dir() / "ragged.csv").string();
    write_text_file(path, "a,b\n1,2\n3\n");
    CHECK_THROWS_AS(read_csv_file(path), IoError);
    std::filesystem::remove(path);
}

TEST_CASE("reading a missing file raises IoError") {
    CHECK_THROWS_AS(read_csv_file("/nonexistent/file.csv"), IoError);
}

TEST_CASE("write_text_file creates parent directories") {
    const auto dir = temp_dir() / "nested" / "deeper";
    const auto path = (dir / "note.txt").string();
    write_text_file(path, "hello\n");
    std::ifstream in(path);
    std::string line;
    std::getline(in, line);
    CHECK(line == "hello");
    std::filesystem::remove_all(temp_dir() / "nested");
}
