#include "varch/dates.hpp"

#include <charconv>
#include <cstdio>

#include "varch/errors.hpp"

namespace varch {

// Howard Hinnant's proleptic Gregorian algorithms.
std::int64_t days_from_civil(int y, int m, int d) {
  y -= m <= 2;
  const std::int64_t era = (y >= 0 ? y : y - 399) / 400;
  const unsigned yoe = static_cast<unsigned>(y - era * 400);
  const unsigned doy = (153u * (m + (m > 2 ? -3 : 9)) + 2) / 5 + d - 1;
  const unsigned doe = yoe * 365 + yoe / 4 - yoe / 100 + doy;
  return era * 146097 + static_cast<std::int64_t>(doe) - 719468;
}

void civil_from_days(std::int64_t z, int& y, int& m, int& d) {
  z += 719468;
  const std::int64_t era = (z >= 0 ? z : z - 146096) / 146097;
  const unsigned doe = static_cast<unsigned>(z - era * 146097);
  const unsigned yoe = (doe - doe / 1460 + doe / 36524 - doe / 146096) / 365;
  const std::int64_t yy = static_cast<std::int64_t>(yoe) + era * 400;
  const unsigned doy = doe - (365 * yoe + yoe / 4 - yoe / 100);
  const unsigned mp = (5 * doy + 2) / 153;
  d = static_cast<int>(doy - (153 * mp + 2) / 5 + 1);
  m = static_cast<int>(mp + (mp < 10 ? 3 : -9));
  y = static_cast<int>(yy + (m <= 2));
}

namespace {

bool parse_int(std::string_view s, int& out) {
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
  return ec == std::errc() && ptr == s.data() + s.size();
}

bool valid_civil(int y, int m, int d) {
  if (m < 1 || m > 12 || d < 1) return false;
  static const int days_in_month[] = {31, 28, 31, 30, 31, 30, 31, 31, 30, 31, 30, 31};
  int dim = days_in_month[m - 1];
  const bool leap = (y % 4 == 0 && y % 100 != 0) || y % 400 == 0;
  if (m == 2 && leap) dim = 29;
  return d <= dim;
}

}  // namespace

Date parse_date(std::string_view text) {
  int y = 0, m = 0, d = 0;
  if (text.size() != 10 || text[4] != '-' || text[7] != '-' ||
      !parse_int(text.substr(0, 4), y) || !parse_int(text.substr(5, 2), m) ||
      !parse_int(text.substr(8, 2), d) || !valid_civil(y, m, d)) {
    fail(ErrorKind::ParseError, "invalid date: '" + std::string(text) + "'");
  }
  return Date{days_from_civil(y, m, d)};
}

Timestamp parse_timestamp(std::string_view text) {
  if (text.size() < 19 || (text[10] != 'T' && text[10] != ' ')) {
    fail(ErrorKind::ParseError, "invalid timestamp: '" + std::string(text) + "'");
  }
  const Date date = parse_date(text.substr(0, 10));
  int hh = 0, mm = 0, ss = 0;
  if (text[13] != ':' || text[16] != ':' || !parse_int(text.substr(11, 2), hh) ||
      !parse_int(text.substr(14, 2), mm) || !parse_int(text.substr(17, 2), ss) ||
      hh > 23 || mm > 59 || ss > 60) {
    fail(ErrorKind::ParseError, "invalid timestamp: '" + std::string(text) + "'");
  }
  // Optional fractional seconds and trailing "Z" are accepted and ignored;
  // any other suffix (e.g. a numeric offset) is rejected so that all inputs
  // stay on one UTC clock.
  std::string_view rest = text.substr(19);
  if (!rest.empty() && rest[0] == '.') {
    std::size_t i = 1;
    while (i < rest.size() && rest[i] >= '0' && rest[i] <= '9') ++i;
    rest = rest.substr(i);
  }
  if (!(rest.empty() || rest == "Z")) {
    fail(ErrorKind::ParseError, "unsupported timestamp suffix: '" + std::string(text) + "'");
  }
  return Timestamp{date, hh * 3600 + mm * 60 + ss};
}

std::string format_date(Date dt) {
  int y, m, d;
  civil_from_days(dt.days, y, m, d);
  char buf[16];
  std::snprintf(buf, sizeof(buf), "%04d-%02d-%02d", y, m, d);
  return buf;
}

}  // namespace varch
