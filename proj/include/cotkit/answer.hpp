#pragma once

// Answer extraction, normalization and matching for numeric-final-answer
// tasks. Matching is exact: numeric values compare as exact rationals,
// everything else compares as normalized text. Units and prose are never
// stripped.

#include <optional>
#include <string>
#include <string_view>

#include <boost/multiprecision/cpp_int.hpp>

namespace cotkit {

using Rational = boost::multiprecision::cpp_rational;

struct CanonicalAnswer {
  std::string surface;    // text as found
  std::string canonical;  // fixed point of normalize_answer
  std::optional<Rational> numeric;

  bool operator==(const CanonicalAnswer&) const = default;
};

/// Trims, strips trailing punctuation, thousands separators and markup
/// wrappers (\boxed, \text, $...$, ...), parses integers, decimals and
/// simple fractions as exact rationals, and lowercases whatever text
/// remains.
CanonicalAnswer normalize_answer(std::string_view raw);

/// Tries, in order: the last \boxed{...}; the last "Final Answer" phrase
/// followed by a value; the last "answer is" / "equals" pattern.
std::optional<CanonicalAnswer> extract_answer(std::string_view node_text);

/// True when the text carries a boxed expression or the literal
/// "Final Answer"; these are the nodes that can provide a final-answer proxy.
bool has_final_answer_marker(std::string_view node_text);

/// Numeric equality when both sides are numeric, canonical-text equality
/// otherwise.
bool answers_match(const CanonicalAnswer& a, const CanonicalAnswer& b);

/// "7", "-3/4" for rationals.
std::string format_rational(const Rational& r);

/// Content of the last balanced \boxed{...} (or \fbox{...}), if any.
std::optional<std::string> last_boxed(std::string_view text);

}  // namespace cotkit
