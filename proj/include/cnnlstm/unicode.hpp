#pragma once

#include <string>
#include <string_view>
#include <vector>

// Thin helpers over ICU for the few Unicode operations the pipeline needs.
namespace cnnlstm::unicode {

bool is_valid_utf8(std::string_view s);

/// NFC-normalize valid UTF-8. Throws ParseError on invalid input.
std::string nfc(std::string_view s);

/// True for code points with the Unicode White_Space property.
bool is_whitespace(char32_t cp);

/// Splits valid UTF-8 into one string per Unicode scalar value.
std::vector<std::string> scalars(std::string_view s);

/// Number of scalar values in valid UTF-8.
std::size_t length(std::string_view s);

/// Strips leading and trailing White_Space code points.
std::string trim(std::string_view s);

/// Maximal runs of non-whitespace scalars.
std::vector<std::string> split_whitespace(std::string_view s);

}  // namespace cnnlstm::unicode
