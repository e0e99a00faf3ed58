#include "vof/data/csv.hpp"

#include <cctype>
#include <cinttypes>
#include <cstdio>
#include <fstream>
#include <ostream>
#include <sstream>
#include <string>

namespace vof::data {

namespace {

constexpr const char* kHeader = "timestamp,ws10,wd10,ws100,wd100,wind_kw,load_kw";

// Civil-calendar day count since 1970-01-01 (proleptic Gregorian).
std::int64_t days_from_civil(int y, int m, int d) {
  y -= m <= 2;
  const std::int64_t era = (y >= 0 ? y : y - 399) / 400;
  const unsigned yoe = static_cast<unsigned>(y - era * 400);
  const unsigned doy =
      (153u * static_cast<unsigned>(m + (m > 2 ? -3 : 9)) + 2u) / 5u +
      static_cast<unsigned>(d) - 1u;
  const unsigned doe = yoe * 365u + yoe / 4u - yoe / 100u + doy;
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

std::int64_t parse_timestamp(const std::string& field, std::size_t line) {
  int y, mo, d, h, mi, s;
  char z;
  if (std::sscanf(field.c_str(), "%4d-%2d-%2dT%2d:%2d:%2d%c", &y, &mo, &d, &h,
                  &mi, &s, &z) != 7 ||
      z != 'Z' || field.size() != 20) {
    throw ParseError("line " + std::to_string(line) + ": bad timestamp '" +
                     field + "'");
  }
  if (mo < 1 || mo > 12 || d < 1 || d > 31 || h < 0 || h > 23 || mi < 0 ||
      mi > 59 || s < 0 || s > 59) {
    throw ParseError("line " + std::to_string(line) +
                     ": timestamp field out of range");
  }
  return days_from_civil(y, mo, d) * 86400 + h * 3600 + mi * 60 + s;
}

std::string format_timestamp(std::int64_t t) {
  std::int64_t day = t / 86400;
  std::int64_t sec = t % 86400;
  if (sec < 0) {
    sec += 86400;
    --day;
  }
  int y, m, d;
  civil_from_days(day, y, m, d);
  char buf[24];
  std::snprintf(buf, sizeof(buf), "%04d-%02d-%02dT%02" PRId64 ":%02" PRId64
                                  ":%02" PRId64 "Z",
                y, m, d, sec / 3600, (sec / 60) % 60, sec % 60);
  return buf;
}

double parse_number(const std::string& field, std::size_t line,
                    const char* name) {
  char* end = nullptr;
  const double v = std::strtod(field.c_str(), &end);
  if (end == field.c_str() || *end != '\0') {
    throw ParseError("line " + std::to_string(line) + ": bad " + name + " '" +
                     field + "'");
  }
  return v;
}

}  // namespace

SampleSet load_csv(std::istream& in, double wind_cap) {
  std::string line;
  if (!std::getline(in, line)) {
    throw SchemaMismatch("csv: empty input");
  }
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != kHeader) {
    throw SchemaMismatch("csv: header is '" + line + "', expected '" +
                         kHeader + "'");
  }
  SampleSet set;
  set.wind_cap = wind_cap;
  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::vector<std::string> fields;
    std::stringstream ss(line);
    std::string field;
    while (std::getline(ss, field, ',')) fields.push_back(field);
    if (fields.size() != 7) {
      throw ParseError("line " + std::to_string(lineno) + ": expected 7 "
                       "fields, got " + std::to_string(fields.size()));
    }
    Record r;
    r.timestamp = parse_timestamp(fields[0], lineno);
    r.ws10 = parse_number(fields[1], lineno, "ws10");
    r.wd10 = parse_number(fields[2], lineno, "wd10");
    r.ws100 = parse_number(fields[3], lineno, "ws100");
    r.wd100 = parse_number(fields[4], lineno, "wd100");
    r.wind_kw = parse_number(fields[5], lineno, "wind_kw");
    r.load_kw = parse_number(fields[6], lineno, "load_kw");
    if (!(r.wind_kw >= 0.0 && r.wind_kw <= wind_cap)) {
      throw ParseError("line " + std::to_string(lineno) + ": wind_kw " +
                       fields[5] + " outside [0, " + std::to_string(wind_cap) +
                       "]");
    }
    if (!(r.load_kw > 0.0)) {
      throw ParseError("line " + std::to_string(lineno) +
                       ": load_kw must be positive");
    }
    if (!set.records.empty() &&
        r.timestamp != set.records.back().timestamp + 3600) {
      throw TimestampOrder("line " + std::to_string(lineno) +
                           ": timestamps must advance by exactly one hour");
    }
    set.records.push_back(r);
  }
  return set;
}

SampleSet load_csv_file(const std::string& path, double wind_cap) {
  std::ifstream in(path);
  if (!in) throw ParseError("csv: cannot open " + path);
  return load_csv(in, wind_cap);
}

void write_csv(const SampleSet& set, std::ostream& out) {
  out << kHeader << "\n";
  char buf[256];
  for (const Record& r : set.records) {
    std::snprintf(buf, sizeof(buf),
                  "%s,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g\n",
                  format_timestamp(r.timestamp).c_str(), r.ws10, r.wd10,
                  r.ws100, r.wd100, r.wind_kw, r.load_kw);
    out << buf;
  }
}

void write_csv_file(const SampleSet& set, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw ParseError("csv: cannot open " + path + " for writing");
  write_csv(set, out);
  if (!out) throw ParseError("csv: write to " + path + " failed");
}

}  // namespace vof::data
