#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace phqchat {

/// Splits free text into comparison tokens.
///
/// The text is lowercased, canonically decomposed, and stripped of combining
/// marks, so accents fold away (`días` -> `dias`, `ñ` -> `n`). Every code point
/// that is not a letter or digit acts as a separator. Invalid UTF-8 sequences
/// are treated as separators. The operation is idempotent:
/// `normalize(join_tokens(normalize(x))) == normalize(x)`.
std::vector<std::string> normalize(std::string_view text);

/// Joins tokens with single spaces.
std::string join_tokens(const std::vector<std::string>& tokens);

/// Decodes UTF-8 into code points. Invalid bytes become U+FFFD.
std::u32string to_code_points(std::string_view utf8);

/// Unit-cost edit distance over code points.
std::size_t levenshtein(std::u32string_view a, std::u32string_view b);

/// `1 - levenshtein(a, b) / max(|a|, |b|)`, lengths in code points; 1.0 when both are empty.
double token_similarity(std::u32string_view a, std::u32string_view b);
double token_similarity(std::string_view a, std::string_view b);

}  // namespace phqchat
