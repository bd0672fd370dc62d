#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace featrank::csv {

using Row = std::vector<std::string>;

/// RFC 4180 style reader: comma separated, double-quote escaping, CRLF or LF
/// line endings. Blank lines are skipped. A leading UTF-8 BOM is dropped.
std::vector<Row> parse(std::string_view text);

/// Quotes a field when it contains a comma, quote, or line break.
std::string escape(std::string_view field);

std::string join(const Row& fields);

}  // namespace featrank::csv
