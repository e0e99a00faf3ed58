#pragma once

#include <iosfwd>
#include <string>

#include "vof/data/dataset.hpp"

namespace vof::data {

// Reads a dataset from CSV with the exact header
//   timestamp,ws10,wd10,ws100,wd100,wind_kw,load_kw
// and ISO-8601 UTC timestamps (2024-01-01T00:00:00Z). Throws SchemaMismatch
// on a wrong header, ParseError with a 1-based line number on a bad field,
// and TimestampOrder when the hourly grid is broken.
SampleSet load_csv(std::istream& in, double wind_cap);
SampleSet load_csv_file(const std::string& path, double wind_cap);

// Inverse of load_csv; numbers are written with enough digits that a
// write/load round trip reproduces the records exactly.
void write_csv(const SampleSet& set, std::ostream& out);
void write_csv_file(const SampleSet& set, const std::string& path);

}  // namespace vof::data
