#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace tcmesh::csv {

// Splits one line on `delim`. No quoting: the interchange formats use plain
// tokens only. A trailing '\r' (CRLF input) is stripped from the last field.
std::vector<std::string_view> split_fields(std::string_view line, char delim = ',');

// Locale-independent full-string numeric parsing; nullopt on any leftover
// characters, empty input, or non-finite result.
std::optional<double> parse_double(std::string_view text);
std::optional<long long> parse_int(std::string_view text);

// Shortest decimal string that parses back to exactly the same double, in
// fixed notation. This is what makes serialize/parse round trips bit-exact.
std::string format_double(double value);

}  // namespace tcmesh::csv
