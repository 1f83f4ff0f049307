#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace rbfpu {

/// Shortest decimal that reads back to the same double.
std::string format_real(double value);

/// Whole-token parse; nullopt on trailing garbage or an empty token.
std::optional<double> parse_real(std::string_view token);

/// Splits on whitespace and commas, dropping empty fields.
std::vector<std::string_view> split_fields(std::string_view line);

}  // namespace rbfpu
