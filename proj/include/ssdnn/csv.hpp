#pragma once

#include <iosfwd>
#include <string>

#include "ssdnn/dataset.hpp"

namespace ssdnn {

/// Header `x1,...,xd,y[,eps]`, one observation per line, shortest decimal
/// text that round-trips every double.
void write_csv(std::ostream& out, const Dataset& data);
void write_csv(const std::string& path, const Dataset& data);

/// Parses the format written by write_csv. Errors are DataError with the
/// offending line and column.
Dataset read_csv(std::istream& in, const std::string& source = "<stream>");
Dataset read_csv(const std::string& path);

/// Shortest round-trip decimal representation.
std::string format_double(double value);

}  // namespace ssdnn
