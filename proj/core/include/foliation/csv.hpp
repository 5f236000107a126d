#pragma once

#include "foliation/types.hpp"

#include <ostream>
#include <string>
#include <vector>

namespace foliation {

// 17 significant digits, '.' separator, independent of the global locale.
std::string csv_number(double v);
std::string csv_field(const std::string& s);
// re1,im1,re2,im2,... header names and values
std::vector<std::string> point_header(int n, const std::string& prefix = "");
std::vector<std::string> point_cells(const Point& p);

class CsvWriter {
public:
    CsvWriter(std::ostream& out, std::vector<std::string> header);
    void row(const std::vector<std::string>& cells);
    std::size_t rows() const { return rows_; }

private:
    std::ostream& out_;
    std::size_t width_;
    std::size_t rows_ = 0;
};

}  // namespace foliation
