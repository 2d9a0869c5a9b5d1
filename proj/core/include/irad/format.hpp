#pragma once

#include <cstddef>
#include <string>

namespace irad {

// Shortest decimal form that parses back to the same double.
std::string format_double(double v);

// Strict double parse; rejects trailing junk and non-finite values.
// line_no is used in error messages.
double parse_double(const std::string& token, std::size_t line_no);

}  // namespace irad
