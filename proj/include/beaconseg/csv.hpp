#pragma once

#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

namespace beaconseg {

//! Quote a field per RFC 4180 when it contains a comma, quote, CR or LF.
std::string csv_field(std::string_view value);

//! Write one LF-terminated record.
void write_csv_row(std::ostream& out, const std::vector<std::string>& fields);

} // namespace beaconseg
