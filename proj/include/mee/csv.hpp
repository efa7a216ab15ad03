#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace mee::csv {

/// Shortest decimal that parses back to the same double.
std::string format(double v);

/// Strict parse of a full field; throws ConfigError on garbage.
double parse_double(std::string_view field);

/// Splits one line on commas, trimming surrounding whitespace.
std::vector<std::string> split(std::string_view line);

/// Joins already-formatted fields with commas.
std::string join(const std::vector<std::string>& fields);

}  // namespace mee::csv
