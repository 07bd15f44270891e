#pragma once

#include <iosfwd>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace mobiq {

// Filesystem / stream failure; the CLI maps it to its I/O exit code.
class IoError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// In-memory CSV: one header row plus rectangular string cells. Values never
// contain commas, quotes or newlines (writers emit plain numbers and tokens),
// so no quoting dialect is needed on either side.
struct CsvTable {
    std::vector<std::string> columns;
    std::vector<std::vector<std::string>> rows;

    // Index of a header name, -1 when absent.
    int column(std::string_view name) const;

    void add_row(std::vector<std::string> cells);
};

// Shortest decimal string that round-trips the value (to_chars).
std::string csv_number(double value);
std::string csv_number(long long value);

double parse_csv_number(const std::string& cell);  // IoError on junk

void write_csv(std::ostream& out, const CsvTable& table);
void write_csv_file(const std::string& path, const CsvTable& table);
CsvTable read_csv_file(const std::string& path);

// Writes text to path, creating parent directories; IoError on failure.
void write_text_file(const std::string& path, std::string_view text);

}  // namespace mobiq
