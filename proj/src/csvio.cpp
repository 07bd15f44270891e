#include "mobiq/csvio.hpp"

#include <charconv>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <system_error>

namespace mobiq {

int CsvTable::column(std::string_view name) const {
    for (std::size_t i = 0; i < columns.size(); ++i) {
        if (columns[i] == name) return static_cast<int>(i);
    }
    return -1;
}

void CsvTable::add_row(std::vector<std::string> cells) {
    if (cells.size() != columns.size()) {
        throw std::logic_error("csv row width does not match header");
    }
    rows.push_back(std::move(cells));
}

std::string csv_number(double value) {
    char buf[32];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), value);
    if (ec != std::errc{}) throw std::logic_error("csv_number: to_chars failed");
    return std::string(buf, ptr);
}

std::string csv_number(long long value) {
    char buf[24];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), value);
    if (ec != std::errc{}) throw std::logic_error("csv_number: to_chars failed");
    return std::string(buf, ptr);
}

double parse_csv_number(const std::string& cell) {
    double v = 0.0;
    const char* first = cell.data();
    const char* last = first + cell.size();
    auto [ptr, ec] = std::from_chars(first, last, v);
    if (ec != std::errc{} || ptr != last) {
        throw IoError("not a number in csv: '" + cell + "'");
    }
    return v;
}

void write_csv(std::ostream& out, const CsvTable& table) {
    for (std::size_t i = 0; i < table.columns.size(); ++i) {
        if (i) out << ',';
        out << table.columns[i];
    }
    out << '\n';
    for (const auto& row : table.rows) {
        for (std::size_t i = 0; i < row.size(); ++i) {
            if (i) out << ',';
            out << row[i];
        }
        out << '\n';
    }
}

void write_csv_file(const std::string& path, const CsvTable& table) {
    std::ostringstream buf;
    write_csv(buf, table);
    write_text_file(path, buf.str());
}

CsvTable read_csv_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot read csv file: " + path);
    CsvTable table;
    std::string line;
    auto split = [](const std::string& s) {
        std::vector<std::string> cells;
        std::size_t start = 0;
        while (true) {
            const std::size_t pos = s.find(',', start);
            if (pos == std::string::npos) {
                cells.push_back(s.substr(start));
                break;
            }
            cells.push_back(s.substr(start, pos - start));
            start = pos + 1;
        }
        return cells;
    };
    bool header = true;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        auto cells = split(line);
        if (header) {
            table.columns = std::move(cells);
            header = false;
        } else {
            if (cells.size() != table.columns.size()) {
                throw IoError("ragged csv row in " + path);
            }
            table.rows.push_back(std::move(cells));
        }
    }
    if (header) throw IoError("empty csv file: " + path);
    return table;
}

void write_text_file(const std::string& path, std::string_view text) {
    namespace fs = std::filesystem;
    const fs::path p(path);
    std::error_code ec;
    if (p.has_parent_path()) {
        fs::create_directories(p.parent_path(), ec);
        if (ec) throw IoError("cannot create directory " + p.parent_path().string() + ": " + ec.message());
    }
    std::ofstream out(p, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot open for writing: " + path);
    out.write(text.data(), static_cast<std::streamsize>(text.size()));
    out.flush();
    if (!out) throw IoError("short write: " + path);
}

}  // namespace mobiq
