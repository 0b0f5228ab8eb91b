#pragma once

#include <filesystem>
#include <ostream>
#include <string>
#include <utility>
#include <variant>
#include <vector>

namespace horse::cli {

// Shortest decimal that parses back to the same double; "nan", "inf", "-inf" otherwise.
std::string format_number(double x);

using Cell = std::variant<double, long long, std::string>;

// A CSV body preceded by "# key = value" provenance lines.
struct Table {
    std::vector<std::pair<std::string, std::string>> header;
    std::vector<std::string> columns;
    std::vector<std::vector<Cell>> rows;

    void note(std::string key, std::string value);
    void note(std::string key, double value);
    void note(std::string key, const std::vector<double>& values);
};

// LF line endings, '.' decimal point, fixed order: header, column names, rows.
void write_table(std::ostream& out, const Table& t);

// Writes the table; throws IoError when the file cannot be created or written.
void write_table(const std::filesystem::path& path, const Table& t);

std::string join_numbers(const std::vector<double>& values, const char* separator = " ");

} // namespace horse::cli
