#include "irad/format.hpp"

#include <charconv>
#include <cmath>
#include <system_error>

#include "irad/errors.hpp"

namespace irad {

std::string format_double(double v) {
  char buf[40];
  const auto result = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, result.ptr);
}

double parse_double(const std::string& token, std::size_t line_no) {
  double v = 0.0;
  const char* begin = token.data();
  const char* end = begin + token.size();
  const auto result = std::from_chars(begin, end, v);
  if (result.ec != std::errc() || result.ptr != end) {
    throw ParseError("line " + std::to_string(line_no) + ": bad numeric value '" +
                     token + "'");
  }
  if (!std::isfinite(v)) {
    throw ParseError("line " + std::to_string(line_no) + ": non-finite value '" + token +
                     "'");
  }
  return v;
}

}  // namespace irad
