#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace gridsched::csv {

// Splits one CSV line on commas, trimming surrounding whitespace per field.
std::vector<std::string> split(const std::string& line);

// Reads all non-empty, non-comment ('#') lines.
std::vector<std::vector<std::string>> read_rows(std::istream& in);

double to_double(const std::string& field, const std::string& context);
int to_int(const std::string& field, const std::string& context);

}  // namespace gridsched::csv
