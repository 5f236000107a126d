#include "foliation/csv.hpp"

#include <fmt/format.h>

#include <cmath>
#include <stdexcept>

namespace foliation {

std::string csv_number(double v)
{
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    return fmt::format("{:.17g}", v);
}

std::string csv_field(const std::string& s)
{
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string q = "\"";
    for (char c : s) {
        if (c == '"') q += '"';
        q += c;
    }
    return q + "\"";
}

std::vector<std::string> point_header(int n, const std::string& prefix)
{
    std::vector<std::string> h;
    for (int j = 1; j <= n; ++j) {
        h.push_back(fmt::format("{}re{}", prefix, j));
        h.push_back(fmt::format("{}im{}", prefix, j));
    }
    return h;
}

std::vector<std::string> point_cells(const Point& p)
{
    std::vector<std::string> c;
    for (Eigen::Index j = 0; j < p.size(); ++j) {
        c.push_back(csv_number(p(j).real()));
        c.push_back(csv_number(p(j).imag()));
    }
    return c;
}

CsvWriter::CsvWriter(std::ostream& out, std::vector<std::string> header) : out_(out), width_(header.size())
{
    std::string line;
    for (std::size_t i = 0; i < header.size(); ++i) line += (i ? "," : "") + csv_field(header[i]);
    out_ << line << '\n';
}

void CsvWriter::row(const std::vector<std::string>& cells)
{
    if (cells.size() != width_) throw std::logic_error("csv row width does not match the header");
    std::string line;
    for (std::size_t i = 0; i < cells.size(); ++i) line += (i ? "," : "") + csv_field(cells[i]);
    out_ << line << '\n';
    ++rows_;
}

}  // namespace foliation
