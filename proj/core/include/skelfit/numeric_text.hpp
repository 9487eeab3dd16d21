/*
 *  Copyright (C) 2026 The skelfit Authors
 *
 *  SPDX-License-Identifier: Apache-2.0
 */

#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace skelfit
{

/// Shortest decimal text that parses back to the identical double.
std::string format_shortest(double value);

/// Fixed significant-digit text ("%.9g" by default) for human-facing output.
std::string format_significant(double value, int digits = 9);

/// Accepts optional surrounding blanks; rejects trailing garbage and non-finite values.
std::optional<double> parse_double(std::string_view text);
std::optional<std::size_t> parse_index(std::string_view text);

/// Splits one CSV line on commas. No quoting support; the formats here never need it.
std::vector<std::string_view> split_csv_line(std::string_view line);

/// Strips a trailing carriage return so CRLF files read like LF files.
std::string_view strip_cr(std::string_view line);

} // namespace skelfit
