#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace olap {

// Simple case folding over UTF-8: ASCII, Latin-1, Latin Extended-A, basic
// Greek and Cyrillic. Invalid sequences pass through byte-for-byte.
std::string fold_case(std::string_view utf8);

bool iequals(std::string_view a, std::string_view b);

/// Key type for case-insensitive maps.
struct FoldedLess {
  using is_transparent = void;
  bool operator()(std::string_view a, std::string_view b) const {
    return fold_case(a) < fold_case(b);
  }
};

std::string_view trim(std::string_view s);
std::vector<std::string> split(std::string_view s, char sep);

/// Strict decimal parse: whole string must be consumed.
std::optional<double> parse_number(std::string_view s);
std::optional<long long> parse_integer(std::string_view s);

/// Up to two decimals, trailing zeros trimmed ("1800", "12.5", "0.33").
std::string format_number(double v);

/// Number of code points, used for column alignment.
std::size_t display_width(std::string_view utf8);

}  // namespace olap
