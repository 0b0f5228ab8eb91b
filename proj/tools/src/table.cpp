#include "horse_cli/table.hpp"
#include "horse_cli/config.hpp"

#include <array>
#include <charconv>
#include <cmath>
#include <fstream>

namespace horse::cli {

std::string format_number(double x)
{
    if (std::isnan(x))
        return "nan";
    if (std::isinf(x))
        return x > 0 ? "inf" : "-inf";
    if (x == 0.0)
        x = 0.0;  // folds -0 so reruns cannot differ by the sign of zero
    std::array<char, 32> buf{};
    const auto res = std::to_chars(buf.data(), buf.data() + buf.size(), x);
    return std::string(buf.data(), res.ptr);
}

void Table::note(std::string key, std::string value)
{
    header.emplace_back(std::move(key), std::move(value));
}

void Table::note(std::string key, double value)
{
    header.emplace_back(std::move(key), format_number(value));
}

void Table::note(std::string key, const std::vector<double>& values)
{
    header.emplace_back(std::move(key), join_numbers(values));
}

std::string join_numbers(const std::vector<double>& values, const char* separator)
{
    std::string s;
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (i)
            s += separator;
        s += format_number(values[i]);
    }
    return s;
}

namespace {

std::string render(const Cell& c)
{
    if (const auto* d = std::get_if<double>(&c))
        return format_number(*d);
    if (const auto* i = std::get_if<long long>(&c))
        return std::to_string(*i);
    return std::get<std::string>(c);
}

} // namespace

void write_table(std::ostream& out, const Table& t)
{
    for (const auto& [k, v] : t.header)
        out << "# " << k << " = " << v << '\n';
    for (std::size_t i = 0; i < t.columns.size(); ++i)
        out << (i ? "," : "") << t.columns[i];
    out << '\n';
    for (const auto& row : t.rows) {
        for (std::size_t i = 0; i < row.size(); ++i)
            out << (i ? "," : "") << render(row[i]);
        out << '\n';
    }
}

void write_table(const std::filesystem::path& path, const Table& t)
{
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out)
        throw IoError("cannot open " + path.string() + " for writing");
    write_table(out, t);
    out.flush();
    if (!out)
        throw IoError("write to " + path.string() + " failed");
}

} // namespace horse::cli
