#pragma once

#include <cstdint>
#include <string>
#include <string_view>

namespace varch {

/// Calendar day stored as days since 1970-01-01 (UTC civil calendar).
struct Date {
  std::int64_t days = 0;

  auto operator<=>(const Date&) const = default;
  Date next() const { return Date{days + 1}; }
};

std::int64_t days_from_civil(int year, int month, int day);
void civil_from_days(std::int64_t z, int& year, int& month, int& day);

/// Parses "YYYY-MM-DD". Throws ParseError on malformed input.
Date parse_date(std::string_view text);

/// Parses an ISO-8601 timestamp ("YYYY-MM-DDTHH:MM:SS" with optional "Z" or
/// fractional seconds) and returns the UTC calendar day plus seconds of day.
struct Timestamp {
  Date date;
  int seconds_of_day = 0;

  auto operator<=>(const Timestamp&) const = default;
};
Timestamp parse_timestamp(std::string_view text);

std::string format_date(Date d);

}  // namespace varch
